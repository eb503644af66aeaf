//! Exact verdict distributions over every shuffle outcome.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::Result;

use super::permutations;
use super::program::{Instr, Program, ProverScript, Region};
use super::state::{Lump, State, LUMPED};
use super::step::{self, Kind};

/// Probability of acceptance and of each rejecting check.
#[derive(Clone, Debug, Default)]
pub struct VerdictDistribution {
    pub accept: f64,
    pub reject: f64,
    /// Rejection probability per failed check.
    pub rejections: BTreeMap<String, f64>,
    /// Largest number of distinct states held at once.
    pub peak_states: usize,
    /// Final states of accepting leaves, merged, with probabilities.
    pub accepted: Vec<(State, f64)>,
}

impl VerdictDistribution {
    /// No leaf rejects.
    pub fn always_accepts(&self) -> bool {
        self.rejections.is_empty()
    }

    /// No leaf accepts.
    pub fn always_rejects(&self) -> bool {
        self.accepted.is_empty()
    }
}

type OrbitKey = (usize, usize, Vec<u8>);

/// Runs a program over all shuffle outcomes at once, merging identical
/// states.
///
/// Marking cards inside a double-scrambled region are not tracked: the
/// state keeps the region's sorted arrangement instead, which is exactly
/// what sorting by the marks restores. This collapses the arrangements that
/// differ only in mark order. Programs that read mark faces other than
/// through sorting must use [`VerdictEnumerator::without_lumping`].
///
/// A double scramble is skipped outright when everything up to the next
/// scramble or sort of the same region treats the region symmetrically
/// (see [`symmetric_until_resolved`]): every arrangement in its orbit then
/// gives the same verdicts and the same state once resolved.
#[derive(Debug, Default)]
pub struct VerdictEnumerator {
    orbits: HashMap<OrbitKey, Arc<HashMap<Vec<u8>, f64>>>,
    no_lumping: bool,
    no_skipping: bool,
}

impl VerdictEnumerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn without_lumping() -> Self {
        VerdictEnumerator { no_lumping: true, ..Self::default() }
    }

    /// Lump marks but expand every double scramble.
    pub fn without_skipping() -> Self {
        VerdictEnumerator { no_skipping: true, ..Self::default() }
    }

    pub fn run(&mut self, program: &Program, script: &ProverScript) -> Result<VerdictDistribution> {
        let mut belief = vec![(State::new(program.positions, program.regs), 1.0)];
        let mut out = VerdictDistribution::default();
        let skip: Vec<bool> = (0..program.instrs.len())
            .map(|i| !self.no_lumping && !self.no_skipping && symmetric_until_resolved(&program.instrs, i))
            .collect();
        for (i, instr) in program.instrs.iter().enumerate() {
            if skip[i] {
                for (s, _) in &belief {
                    step::check_face_down(instr, s)?;
                }
                continue;
            }
            match step::kind(instr) {
                Kind::Det => {
                    for (s, _) in belief.iter_mut() {
                        step::apply_det(instr, s, script)?;
                    }
                }
                Kind::Event => {
                    for (s, _) in belief.iter_mut() {
                        step::apply_event(instr, s)?;
                    }
                }
                Kind::Sim => {}
                Kind::Random => {
                    if let (Instr::DoubleScramble { region }, false) = (instr, self.no_lumping) {
                        // A rescramble forgets where in its orbit the region was.
                        let homed: Vec<_> = belief.drain(..).map(|(s, p)| (self.rehome(region, s), p)).collect();
                        belief = merge(homed);
                    }
                    let mut next: HashMap<State, f64> = HashMap::with_capacity(belief.len());
                    for (s, p) in belief.drain(..) {
                        match instr {
                            Instr::DoubleScramble { region } if !self.no_lumping => {
                                self.expand_lumped(region, instr, &s, p, &mut next)?
                            }
                            _ => step::expand(instr, &s, |s2, q| *next.entry(s2).or_default() += p * q)?,
                        }
                    }
                    belief = next.into_iter().collect();
                }
            }
            belief.retain(|(s, p)| match s.rejected {
                Some(c) => {
                    *out.rejections.entry(program.check(c).to_string()).or_default() += p;
                    out.reject += p;
                    false
                }
                None => true,
            });
            if belief.len() > 1 {
                belief = merge(belief);
            }
            out.peak_states = out.peak_states.max(belief.len());
        }
        out.accept = belief.iter().map(|(_, p)| p).sum();
        out.accepted = belief;
        Ok(out)
    }

    fn expand_lumped(
        &mut self,
        region: &Region,
        instr: &Instr,
        st: &State,
        p: f64,
        next: &mut HashMap<State, f64>,
    ) -> Result<()> {
        step::check_face_down(instr, st)?;
        let anchor = region.cells[0][0];
        let current: Vec<u8> = region.cells.iter().flatten().map(|&q| st.get(q)).collect();
        if st.rejected.is_some() || st.lump.as_ref().is_some_and(|l| l.anchor != anchor || l.home != current) {
            return step::expand(instr, st, |s2, q| *next.entry(s2).or_default() += p * q);
        }
        let lump = match &st.lump {
            Some(l) => l.clone(),
            None => {
                let mut canon = st.clone();
                step::canonical_region(region, &mut canon)?;
                let home = region.cells.iter().flatten().map(|&q| canon.get(q)).collect();
                let marks = region.row0.iter().chain(&region.col0).map(|&q| canon.get(q)).collect();
                Arc::new(Lump { anchor, home, marks })
            }
        };
        let orbit = self.orbit(region.rows(), region.cols(), &lump.home);
        let mut base = st.clone();
        for &q in region.row0.iter().chain(&region.col0) {
            base.set(q, LUMPED);
        }
        base.lump = Some(lump);
        for (cells, q) in orbit.iter() {
            let mut s = base.clone();
            for (&pos, &c) in region.cells.iter().flatten().zip(cells) {
                s.set(pos, c);
            }
            *next.entry(s).or_default() += p * q;
        }
        Ok(())
    }

    /// Put a lumped region back in its home arrangement if its current
    /// arrangement lies in the home orbit.
    fn rehome(&mut self, region: &Region, mut st: State) -> State {
        let Some(lump) = st.lump.clone().filter(|l| l.anchor == region.cells[0][0] && st.rejected.is_none()) else {
            return st;
        };
        let current: Vec<u8> = region.cells.iter().flatten().map(|&q| st.get(q)).collect();
        if self.orbit(region.rows(), region.cols(), &lump.home).contains_key(&current) {
            for (&q, &c) in region.cells.iter().flatten().zip(&lump.home) {
                st.set(q, c);
            }
        }
        st
    }

    /// Distinct arrangements reachable from `home` by a double scramble.
    fn orbit(&mut self, m: usize, k: usize, home: &[u8]) -> Arc<HashMap<Vec<u8>, f64>> {
        let key = (m, k, home.to_vec());
        if let Some(d) = self.orbits.get(&key) {
            return d.clone();
        }
        let mut by_cols: HashMap<Vec<u8>, usize> = HashMap::new();
        for perm in permutations(k) {
            let a: Vec<u8> = (0..m).flat_map(|r| perm.iter().map(move |&c| home[r * k + c as usize])).collect();
            *by_cols.entry(a).or_default() += 1;
        }
        let mut all: HashMap<Vec<u8>, usize> = HashMap::new();
        for (a, n) in by_cols {
            for perm in permutations(m - 1) {
                let mut b = a[..k].to_vec();
                for &r in perm {
                    b.extend_from_slice(&a[(r as usize + 1) * k..(r as usize + 2) * k]);
                }
                *all.entry(b).or_default() += n;
            }
        }
        let total = (permutations(k).len() * permutations(m - 1).len()) as f64;
        let d: Arc<HashMap<Vec<u8>, f64>> = Arc::new(all.into_iter().map(|(a, n)| (a, n as f64 / total)).collect());
        self.orbits.insert(key, d.clone());
        d
    }
}

/// True if `instrs[i]` is a double scramble whose outcome cannot influence
/// verdicts: until the region is scrambled again or sorted by its marks,
/// the only instructions touching it turn over or read its first row, its
/// marks, or the column at a heart located in that first row, and those
/// column registers are cleared before the region is resolved.
pub(crate) fn symmetric_until_resolved(instrs: &[Instr], i: usize) -> bool {
    use super::program::PosSet;
    let Instr::DoubleScramble { region } = &instrs[i] else {
        return false;
    };
    let cells: Vec<_> = region.cells.iter().flatten().chain(&region.row0).chain(&region.col0).copied().collect();
    let disjoint = |pos: &[super::program::Pos]| pos.iter().all(|p| !cells.contains(p));
    let mut located = Vec::new();
    let set_ok = |set: &PosSet, located: &[u8]| match set {
        PosSet::Fixed(p) => *p == region.cells[0] || *p == region.row0 || *p == region.col0 || disjoint(p),
        PosSet::Column { grid, reg, .. } => *grid == region.cells && located.contains(reg),
    };
    for instr in &instrs[i + 1..] {
        let ok = match instr {
            Instr::DoubleScramble { region: r } | Instr::SortByMarks { region: r } if r == region => {
                return located.is_empty();
            }
            Instr::TurnOver { pos, .. } | Instr::TurnDown { pos } => set_ok(pos, &located),
            Instr::CountHearts { pos, reg } => set_ok(pos, &located) && !located.contains(reg),
            Instr::LocateHeart { pos, reg, .. } if *pos == region.cells[0] => {
                located.push(*reg);
                true
            }
            Instr::LocateHeart { pos, reg, .. } => disjoint(pos) && !located.contains(reg),
            Instr::Expect { reg, .. } | Instr::ExpectAtLeast { reg, .. } => !located.contains(reg),
            Instr::ClearReg { reg } => {
                located.retain(|r| r != reg);
                true
            }
            Instr::Action { .. } | Instr::SimEmit { .. } => true,
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    false
}

pub(crate) fn merge(belief: Vec<(State, f64)>) -> Vec<(State, f64)> {
    let mut map: HashMap<State, f64> = HashMap::with_capacity(belief.len());
    for (s, p) in belief {
        *map.entry(s).or_default() += p;
    }
    map.into_iter().collect()
}
