//! Exact transcript distributions.
//!
//! A process is explored event by event. A node holds the observer's
//! belief: the distribution over table states given the events so far.
//! Advancing a node yields the distribution of the next public label and
//! the updated belief for each label. Two processes emit the same
//! transcript distribution iff their next-label distributions agree at
//! every jointly reachable pair of nodes, so nodes with equal beliefs can
//! be merged and the tree never has to be expanded leaf by leaf.

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use crate::error::{misuse, Error, Result};
use crate::par;
use crate::transcript::{Event, Transcript};

use super::enumerate::merge;
use super::program::{Instr, Program, ProverScript};
use super::state::State;
use super::step::{self, Kind, Label};

/// A program with the prover input it runs against.
#[derive(Clone, Copy, Debug)]
pub struct Process<'a> {
    pub program: &'a Program,
    pub script: &'a ProverScript,
}

#[derive(Clone, Debug)]
struct Node {
    pc: usize,
    belief: Vec<(State, f64)>,
}

fn quantize(p: f64) -> u64 {
    (p * (1u64 << 48) as f64).round() as u64
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.pc == other.pc
            && self.belief.len() == other.belief.len()
            && self.belief.iter().zip(&other.belief).all(|((a, p), (b, q))| quantize(*p) == quantize(*q) && a == b)
    }
}

impl Eq for Node {}

impl Hash for Node {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.pc.hash(h);
        for (s, p) in &self.belief {
            s.hash(h);
            quantize(*p).hash(h);
        }
    }
}

type Outcomes = Vec<(Label, f64, Option<Node>)>;

impl<'a> Process<'a> {
    pub fn new(program: &'a Program, script: &'a ProverScript) -> Self {
        Process { program, script }
    }

    fn start(&self) -> Result<Node> {
        let st = State::new(self.program.positions, self.program.regs);
        self.settle(0, vec![(st, 1.0)])
    }

    /// Run deterministic instructions up to the next random or public
    /// step, then normalize the belief into canonical order.
    fn settle(&self, mut pc: usize, mut belief: Vec<(State, f64)>) -> Result<Node> {
        let instrs = &self.program.instrs;
        while pc < instrs.len() && step::kind(&instrs[pc]) == Kind::Det {
            for (s, _) in belief.iter_mut() {
                step::apply_det(&instrs[pc], s, self.script)?;
            }
            pc += 1;
        }
        let mut belief = merge(belief);
        let total: f64 = belief.iter().map(|(_, p)| p).sum();
        for (_, p) in belief.iter_mut() {
            *p /= total;
        }
        belief.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(Node { pc, belief })
    }

    fn advance(&self, node: &Node) -> Result<Outcomes> {
        let instrs = &self.program.instrs;
        let mut pc = node.pc;
        let mut belief = node.belief.clone();
        let mut groups: HashMap<Label, (f64, Vec<(State, f64)>)> = HashMap::new();
        loop {
            belief.retain(|(s, p)| match s.rejected {
                Some(c) => {
                    groups.entry(Label::Reject(c)).or_default().0 += p;
                    false
                }
                None => true,
            });
            if belief.is_empty() {
                break;
            }
            if pc == instrs.len() {
                groups.entry(Label::End).or_default().0 += belief.iter().map(|(_, p)| p).sum::<f64>();
                break;
            }
            let instr = &instrs[pc];
            pc += 1;
            match step::kind(instr) {
                Kind::Det => {
                    for (s, _) in belief.iter_mut() {
                        step::apply_det(instr, s, self.script)?;
                    }
                }
                Kind::Random => belief = expand_belief(instr, belief)?,
                Kind::Sim => {
                    let Instr::SimEmit { tag, kind } = instr else { unreachable!() };
                    let outcomes = kind.outcomes().ok_or_else(|| Error::NotSimulatable(self.program.tag(*tag).to_string()))?;
                    let q = 1.0 / outcomes.len() as f64;
                    for o in outcomes {
                        let codes: Box<[u8]> = o.iter().map(|&s| super::state::code(s)).collect();
                        let g = groups.entry(Label::Reveal(*tag, codes)).or_default();
                        for (s, p) in &belief {
                            g.0 += p * q;
                            g.1.push((s.clone(), p * q));
                        }
                    }
                    break;
                }
                Kind::Event => {
                    let mut silent = Vec::new();
                    let mut loud = false;
                    for (mut s, p) in belief.drain(..) {
                        match step::apply_event(instr, &mut s)? {
                            _ if s.rejected.is_some() => groups.entry(Label::Reject(s.rejected.unwrap())).or_default().0 += p,
                            None => silent.push((s, p)),
                            Some(label) => {
                                loud = true;
                                let g = groups.entry(label).or_default();
                                g.0 += p;
                                g.1.push((s, p));
                            }
                        }
                    }
                    if loud && !silent.is_empty() {
                        return misuse("a reveal shows cards in some states but not in others");
                    }
                    if loud {
                        break;
                    }
                    belief = silent;
                }
            }
        }
        let mut out = Vec::with_capacity(groups.len());
        for (label, (mass, states)) in groups {
            let child = if label.is_terminal() { None } else { Some(self.settle(pc, states)?) };
            out.push((label, mass, child));
        }
        Ok(out)
    }
}

/// Expand a random instruction over a whole belief. Before a double
/// scramble, states are first reduced to their sorted arrangement: every
/// state in one orbit yields the same output distribution.
fn expand_belief(instr: &Instr, belief: Vec<(State, f64)>) -> Result<Vec<(State, f64)>> {
    let belief = match instr {
        Instr::DoubleScramble { region } => {
            let mut canon = Vec::with_capacity(belief.len());
            for (mut s, p) in belief {
                step::check_face_down(instr, &s)?;
                if s.rejected.is_none() {
                    step::canonical_region(region, &mut s)?;
                }
                canon.push((s, p));
            }
            merge(canon)
        }
        _ => belief,
    };
    let mut next: HashMap<State, f64> = HashMap::new();
    for (s, p) in belief {
        step::expand(instr, &s, |s2, q| *next.entry(s2).or_default() += p * q)?;
    }
    Ok(next.into_iter().collect())
}

/// Result of an exact comparison between two processes.
#[derive(Clone, Debug, Default)]
pub struct Comparison {
    /// Largest difference between next-label probabilities at any jointly
    /// reachable point.
    pub max_deviation: f64,
    /// Joint nodes visited.
    pub nodes: usize,
    /// Where the first difference above tolerance was seen.
    pub mismatch: Option<String>,
}

impl Comparison {
    pub fn equal(&self, tolerance: f64) -> bool {
        self.max_deviation <= tolerance
    }
}

fn describe(program: &Program, label: &Label) -> String {
    match label {
        Label::Reveal(..) | Label::Action(_) => super::run::to_event(program, label).map(|e| e.to_string()).unwrap_or_default(),
        Label::Reject(c) => format!("REJECT {}", program.check(*c)),
        Label::End => "END".to_string(),
    }
}

/// Compare the transcript distributions of two processes exactly.
///
/// With `stop_at_first`, exploration ends at the first deviation above
/// `tolerance`. `max_nodes` bounds the work.
pub fn compare_processes(a: Process<'_>, b: Process<'_>, tolerance: f64, stop_at_first: bool, max_nodes: usize) -> Result<Comparison> {
    let mut report = Comparison::default();
    let mut frontier: HashMap<(Node, Node), f64> = HashMap::new();
    frontier.insert((a.start()?, b.start()?), 1.0);
    while !frontier.is_empty() {
        report.nodes += frontier.len();
        if report.nodes > max_nodes {
            return Err(Error::Capacity(format!("exact comparison exceeded {max_nodes} joint nodes")));
        }
        let items: Vec<((Node, Node), f64)> = frontier.drain().collect();
        let advanced = par::map(items, |((na, nb), w)| -> Result<(Outcomes, Outcomes, f64)> {
            Ok((a.advance(&na)?, b.advance(&nb)?, w))
        });
        let mut next: HashMap<(Node, Node), f64> = HashMap::new();
        for item in advanced {
            let (la, lb, w) = item?;
            let mut lb: HashMap<Label, (f64, Option<Node>)> = lb.into_iter().map(|(l, p, n)| (l, (p, n))).collect();
            for (label, pa, na) in la {
                let (pb, nb) = lb.remove(&label).unwrap_or((0.0, None));
                let dev = (pa - pb).abs();
                if dev > report.max_deviation {
                    report.max_deviation = dev;
                }
                if dev > tolerance && report.mismatch.is_none() {
                    report.mismatch = Some(format!("{}: {pa:.6} vs {pb:.6}", describe(a.program, &label)));
                    if stop_at_first {
                        return Ok(report);
                    }
                }
                if let (Some(na), Some(nb)) = (na, nb) {
                    *next.entry((na, nb)).or_default() += w * pa;
                }
            }
            for (label, (pb, _)) in lb {
                if pb > report.max_deviation {
                    report.max_deviation = pb;
                }
                if pb > tolerance && report.mismatch.is_none() {
                    report.mismatch = Some(format!("{}: 0 vs {pb:.6}", describe(b.program, &label)));
                    if stop_at_first {
                        return Ok(report);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(report)
}

/// Map from complete transcript to probability. A rejected run ends with
/// an `ACTION rejected` event.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TranscriptDistribution {
    pub map: BTreeMap<Transcript, f64>,
}

impl TranscriptDistribution {
    pub fn total(&self) -> f64 {
        self.map.values().sum()
    }

    /// Largest per-transcript probability difference.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let mut dev: f64 = 0.0;
        for (t, p) in &self.map {
            dev = dev.max((p - other.map.get(t).copied().unwrap_or(0.0)).abs());
        }
        for (t, q) in &other.map {
            if !self.map.contains_key(t) {
                dev = dev.max(*q);
            }
        }
        dev
    }
}

/// Full transcript distribution of a small process. Fails with a capacity
/// error beyond `limit` distinct transcripts.
pub fn transcript_distribution(proc: Process<'_>, limit: usize) -> Result<TranscriptDistribution> {
    let mut dist = TranscriptDistribution::default();
    let mut stack = vec![(proc.start()?, Vec::<Event>::new(), 1.0)];
    while let Some((node, prefix, w)) = stack.pop() {
        for (label, p, child) in proc.advance(&node)? {
            let mut events = prefix.clone();
            match &label {
                Label::End => {}
                Label::Reject(_) => events.push(Event::action("rejected")),
                other => events.extend(super::run::to_event(proc.program, other)),
            }
            match child {
                Some(c) => stack.push((c, events, w * p)),
                None => {
                    *dist.map.entry(events.into_iter().collect()).or_default() += w * p;
                    if dist.map.len() > limit {
                        return Err(Error::Capacity(format!("more than {limit} transcripts")));
                    }
                }
            }
        }
    }
    Ok(dist)
}
