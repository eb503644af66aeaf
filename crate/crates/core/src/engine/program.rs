//! Straight-line card programs.
//!
//! A protocol is compiled into a public list of instructions over an arena
//! of table positions. Moving a pile is aliasing positions; shuffles permute
//! contents among positions, so cards are conserved by construction. The
//! only private inputs are prover placements, looked up by key in a
//! [`ProverScript`].

use std::collections::HashMap;
use std::ops::Range;

use crate::card::Symbol;
use crate::error::{Error, Result};

pub type Pos = u16;
pub type Reg = u8;
/// Rows of positions; every row has the same length.
pub type Grid = Vec<Vec<Pos>>;

/// An enhanced matrix laid out on the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub cells: Grid,
    /// Marks `1..=k` above the columns.
    pub row0: Vec<Pos>,
    /// Marks `2..=m` beside Rows 2..m.
    pub col0: Vec<Pos>,
}

impl Region {
    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cols(&self) -> usize {
        self.cells[0].len()
    }
}

/// Positions addressed by an instruction, possibly through a register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosSet {
    Fixed(Vec<Pos>),
    /// Column `regs[reg]` of `grid`, restricted to `rows`.
    Column { grid: Grid, reg: Reg, rows: Range<usize> },
}

impl PosSet {
    pub(crate) fn resolve(&self, regs: &[u8]) -> Vec<Pos> {
        match self {
            PosSet::Fixed(p) => p.clone(),
            PosSet::Column { grid, reg, rows } => {
                let j = regs[*reg as usize] as usize;
                grid[rows.clone()].iter().map(|r| r[j]).collect()
            }
        }
    }
}

/// Public description of what a reveal shows an honest run, used to derive
/// the simulator. Every kind is a uniform distribution over a finite list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RevealKind {
    /// A row of `E_k(x)` with `x` uniform.
    UniformHeart { k: usize },
    /// `rows` cards with hearts at a uniform `t`-subset.
    NeighborColumn { rows: usize, t: usize },
    /// A uniform order of the listed marks.
    MarkOrder { marks: Vec<u8> },
    /// Always the same cards.
    Known { symbols: Vec<Symbol> },
    /// `clubs` clubs among `total` cards, rest hearts, uniform positions.
    Arrangement { clubs: usize, total: usize },
    /// No public description; the reveal cannot be simulated.
    Opaque,
}

impl RevealKind {
    /// Equiprobable outcomes, or `None` for [`RevealKind::Opaque`].
    pub fn outcomes(&self) -> Option<Vec<Vec<Symbol>>> {
        use Symbol::{Club, Heart};
        let subsets = |n: usize, t: usize| -> Vec<Vec<Symbol>> {
            (0u32..1 << n)
                .filter(|mask| mask.count_ones() as usize == t)
                .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { Heart } else { Club }).collect())
                .collect()
        };
        Some(match self {
            RevealKind::UniformHeart { k } => subsets(*k, 1),
            RevealKind::NeighborColumn { rows, t } => subsets(*rows, *t),
            RevealKind::MarkOrder { marks } => crate::engine::permutations(marks.len())
                .iter()
                .map(|p| p.iter().map(|&i| Symbol::Mark(marks[i as usize])).collect())
                .collect(),
            RevealKind::Known { symbols } => vec![symbols.clone()],
            RevealKind::Arrangement { clubs, total } => subsets(*total, total - clubs),
            RevealKind::Opaque => return None,
        })
    }
}

/// What a prover placement is for. Shown to the prover strategy only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlacementKey {
    /// `B(e)` for edge `{u, v}`, `u < v`.
    Edge { u: usize, v: usize },
    /// `A_1(v)` in a verification round.
    Round { round: usize, vertex: usize },
    /// The `Z/3Z` part of a Bridges lip.
    Lip { horizontal: bool, row: usize, col: usize },
    /// Free-form keys for tests and sessions.
    Other(usize),
}

pub type TagId = u32;
pub type CheckId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instr {
    /// Public placement of known face-down cards.
    Place { pos: Vec<Pos>, symbols: Vec<Symbol> },
    /// Face-down cards chosen privately by the prover.
    ProverPlace { pos: Vec<Pos>, key: usize },
    /// Cards leave the table for the spare pool.
    Discard { pos: Vec<Pos> },
    PileShift { grid: Grid },
    DoubleScramble { region: Region },
    /// Uniform permutation of the cards at `pos`.
    ScrambleCards { pos: Vec<Pos> },
    /// Uniform permutation of equal-sized blocks (envelopes).
    ScrambleBlocks { blocks: Vec<Vec<Pos>> },
    TurnOver { pos: PosSet, tag: TagId, kind: RevealKind },
    TurnDown { pos: PosSet },
    /// Reject unless exactly one face-up heart; store its index.
    LocateHeart { pos: Vec<Pos>, reg: Reg, check: CheckId },
    /// Rotate columns left so the face-up heart of `row` is in column 0.
    RotateToHeart { grid: Grid, row: usize, check: CheckId },
    CountHearts { pos: PosSet, reg: Reg },
    Expect { reg: Reg, value: u8, check: CheckId },
    ExpectAtLeast { reg: Reg, value: u8, check: CheckId },
    /// Face-up cards must show exactly `symbols`.
    ExpectSymbols { pos: Vec<Pos>, symbols: Vec<Symbol>, check: CheckId },
    ExpectClubs { pos: Vec<Pos>, count: usize, check: CheckId },
    /// Sort columns by face-up Row-0 marks and lower rows by Column-0 marks.
    SortByMarks { region: Region },
    ReverseTail { pos: Vec<Pos> },
    /// Move column `regs[reg]` of `grid` (restricted to `rows`) to `dest`.
    TakeColumn { grid: Grid, reg: Reg, rows: Range<usize>, dest: Vec<Pos> },
    ReturnColumn { grid: Grid, reg: Reg, rows: Range<usize>, src: Vec<Pos> },
    /// The prover privately finds a club in `pair`, moves it to `pair[0]`
    /// and turns it face up. Rejects if there is none.
    ProverRevealClub { pair: [Pos; 2], tag: TagId, check: CheckId },
    /// The prover privately opens an envelope; if it holds exactly one club
    /// it is turned face up and counted, otherwise it stays closed.
    ProverOpenEnvelope { pos: Vec<Pos>, tag: TagId, counter: Reg, check: CheckId },
    ClearReg { reg: Reg },
    Action { tag: TagId },
    /// Simulator only: emit a reveal drawn from `kind`.
    SimEmit { tag: TagId, kind: RevealKind },
}

impl Instr {
    pub fn is_shuffle(&self) -> bool {
        matches!(self, Instr::PileShift { .. } | Instr::DoubleScramble { .. } | Instr::ScrambleCards { .. } | Instr::ScrambleBlocks { .. })
    }
}

/// A compiled protocol invocation. Everything here is public.
#[derive(Clone, Debug)]
pub struct Program {
    pub(crate) instrs: Vec<Instr>,
    pub(crate) positions: usize,
    pub(crate) regs: usize,
    pub(crate) tags: Vec<String>,
    pub(crate) checks: Vec<String>,
    pub(crate) keys: Vec<(PlacementKey, usize)>,
}

impl Program {
    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn tag(&self, id: TagId) -> &str {
        &self.tags[id as usize]
    }

    pub fn check(&self, id: CheckId) -> &str {
        &self.checks[id as usize]
    }

    /// Prover placements requested, with their lengths.
    pub fn placement_keys(&self) -> &[(PlacementKey, usize)] {
        &self.keys
    }

    /// Indices of shuffle instructions.
    pub fn shuffle_indices(&self) -> Vec<usize> {
        self.instrs.iter().enumerate().filter(|(_, i)| i.is_shuffle()).map(|(i, _)| i).collect()
    }

    /// Copy of the program with instruction `index` removed.
    pub fn without_instr(&self, index: usize) -> Program {
        let mut p = self.clone();
        p.instrs.remove(index);
        p
    }

    /// The simulator: the same public event skeleton, each reveal drawn
    /// from its public distribution. Uses no cards and no prover input.
    pub fn simulator(&self) -> Result<Program> {
        let mut instrs = Vec::new();
        for instr in &self.instrs {
            match instr {
                Instr::TurnOver { tag, kind, .. } => {
                    if *kind == RevealKind::Opaque {
                        return Err(Error::NotSimulatable(format!("reveal {} has no public distribution", self.tag(*tag))));
                    }
                    instrs.push(Instr::SimEmit { tag: *tag, kind: kind.clone() });
                }
                Instr::ProverRevealClub { tag, .. } => {
                    instrs.push(Instr::SimEmit { tag: *tag, kind: RevealKind::Known { symbols: vec![Symbol::Club] } })
                }
                Instr::ProverOpenEnvelope { tag, .. } => {
                    return Err(Error::NotSimulatable(format!(
                        "envelope openings at {} reveal how many envelopes hold one club",
                        self.tag(*tag)
                    )))
                }
                Instr::Action { tag } => instrs.push(Instr::Action { tag: *tag }),
                Instr::SimEmit { .. } => instrs.push(instr.clone()),
                _ => {}
            }
        }
        Ok(Program { instrs, positions: 0, regs: 0, tags: self.tags.clone(), checks: self.checks.clone(), keys: Vec::new() })
    }
}

/// The prover's private placements, indexed like [`Program::placement_keys`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProverScript {
    pub(crate) placements: Vec<Vec<Symbol>>,
}

impl ProverScript {
    /// Build a script by asking `strategy` for every placement.
    pub fn build(program: &Program, mut strategy: impl FnMut(&PlacementKey, usize) -> Vec<Symbol>) -> Result<Self> {
        let mut placements = Vec::with_capacity(program.keys.len());
        for (key, len) in &program.keys {
            let symbols = strategy(key, *len);
            if symbols.len() != *len {
                return Err(Error::Domain(format!("placement {key:?} needs {len} cards, got {}", symbols.len())));
            }
            if symbols.iter().any(|s| !s.is_encoding()) {
                return Err(Error::Domain(format!("placement {key:?} uses a marking card")));
            }
            placements.push(symbols);
        }
        Ok(ProverScript { placements })
    }

    pub fn empty() -> Self {
        ProverScript::default()
    }

    pub fn placement(&self, index: usize) -> &[Symbol] {
        &self.placements[index]
    }
}

/// Incrementally assembles a [`Program`], recycling freed positions and
/// registers so that states reached along different paths compare equal.
#[derive(Debug, Default)]
pub struct ProgramBuilder {
    instrs: Vec<Instr>,
    positions: usize,
    free_pos: Vec<Pos>,
    regs: usize,
    free_regs: Vec<Reg>,
    tags: Vec<String>,
    tag_ids: HashMap<String, TagId>,
    checks: Vec<String>,
    keys: Vec<(PlacementKey, usize)>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, instr: Instr) {
        self.instrs.push(instr);
    }

    pub fn alloc(&mut self, n: usize) -> Vec<Pos> {
        (0..n)
            .map(|_| {
                self.free_pos.pop().unwrap_or_else(|| {
                    self.positions += 1;
                    Pos::try_from(self.positions - 1).expect("position arena overflow")
                })
            })
            .collect()
    }

    /// Public face-down placement of known cards.
    pub fn place(&mut self, symbols: Vec<Symbol>) -> Vec<Pos> {
        let pos = self.alloc(symbols.len());
        self.push(Instr::Place { pos: pos.clone(), symbols });
        pos
    }

    /// Private placement of `len` cards by the prover.
    pub fn prover_place(&mut self, len: usize, key: PlacementKey) -> Vec<Pos> {
        let pos = self.alloc(len);
        self.keys.push((key, len));
        self.push(Instr::ProverPlace { pos: pos.clone(), key: self.keys.len() - 1 });
        pos
    }

    pub fn discard(&mut self, pos: &[Pos]) {
        if pos.is_empty() {
            return;
        }
        self.push(Instr::Discard { pos: pos.to_vec() });
        self.free_pos.extend(pos.iter().rev());
    }

    /// Make positions reusable without emitting anything; they must be
    /// empty at this point of every run.
    pub fn release(&mut self, pos: &[Pos]) {
        self.free_pos.extend(pos.iter().rev());
    }

    pub fn reg(&mut self) -> Reg {
        self.free_regs.pop().unwrap_or_else(|| {
            self.regs += 1;
            Reg::try_from(self.regs - 1).expect("register overflow")
        })
    }

    /// Zero a register and make it available again.
    pub fn free_reg(&mut self, reg: Reg) {
        self.push(Instr::ClearReg { reg });
        self.free_regs.push(reg);
    }

    pub fn tag(&mut self, name: &str) -> TagId {
        if let Some(&id) = self.tag_ids.get(name) {
            return id;
        }
        let id = self.tags.len() as TagId;
        self.tags.push(name.to_string());
        self.tag_ids.insert(name.to_string(), id);
        id
    }

    pub fn check(&mut self, description: impl Into<String>) -> CheckId {
        self.checks.push(description.into());
        (self.checks.len() - 1) as CheckId
    }

    pub fn turn_over(&mut self, pos: PosSet, tag: &str, kind: RevealKind) {
        let tag = self.tag(tag);
        self.push(Instr::TurnOver { pos, tag, kind });
    }

    pub fn turn_down(&mut self, pos: PosSet) {
        self.push(Instr::TurnDown { pos });
    }

    pub fn action(&mut self, tag: &str) {
        let tag = self.tag(tag);
        self.push(Instr::Action { tag });
    }

    pub fn finish(self) -> Program {
        Program {
            instrs: self.instrs,
            positions: self.positions,
            regs: self.regs,
            tags: self.tags,
            checks: self.checks,
            keys: self.keys,
        }
    }
}
