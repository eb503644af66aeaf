//! Table state: one byte per position.

use crate::card::Symbol;
use crate::error::{Error, Result};

use super::program::{CheckId, Pos};

pub(crate) const EMPTY: u8 = 0;
pub(crate) const CLUB: u8 = 1;
pub(crate) const HEART: u8 = 2;
/// Face of a marking card whose number is not tracked (verdict mode).
pub(crate) const LUMPED: u8 = 0x7F;
pub(crate) const UP: u8 = 0x80;
const FACE: u8 = 0x7F;

pub(crate) fn code(symbol: Symbol) -> u8 {
    match symbol {
        Symbol::Club => CLUB,
        Symbol::Heart => HEART,
        Symbol::Mark(i) => {
            assert!((1..120).contains(&i), "mark number out of range");
            2 + i
        }
    }
}

pub(crate) fn symbol(code: u8) -> Symbol {
    match code & FACE {
        CLUB => Symbol::Club,
        HEART => Symbol::Heart,
        c if c > HEART && c != LUMPED => Symbol::Mark(c - 2),
        c => panic!("no symbol for slot code {c}"),
    }
}

pub(crate) fn face(code: u8) -> u8 {
    code & FACE
}

pub(crate) fn is_up(code: u8) -> bool {
    code & UP != 0
}

pub(crate) fn is_mark(code: u8) -> bool {
    face(code) > HEART
}

/// Verdict-mode bookkeeping for a double-scrambled region whose marks are
/// not tracked: sorting by marks always restores `home`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Lump {
    pub anchor: Pos,
    pub home: Vec<u8>,
    pub marks: Vec<u8>,
}

/// Contents of every position plus registers and the rejection flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub(crate) slots: Vec<u8>,
    pub(crate) regs: Vec<u8>,
    pub(crate) rejected: Option<CheckId>,
    pub(crate) lump: Option<std::sync::Arc<Lump>>,
}

impl State {
    pub(crate) fn new(positions: usize, regs: usize) -> Self {
        State { slots: vec![EMPTY; positions], regs: vec![0; regs], rejected: None, lump: None }
    }

    pub(crate) fn get(&self, p: Pos) -> u8 {
        self.slots[p as usize]
    }

    pub(crate) fn set(&mut self, p: Pos, code: u8) {
        self.slots[p as usize] = code;
    }

    pub(crate) fn reject(&mut self, check: CheckId) {
        if self.rejected.is_none() {
            self.rejected = Some(check);
        }
    }

    /// True symbols at `pos`, read by oracles.
    pub fn symbols(&self, pos: &[Pos]) -> Result<Vec<Symbol>> {
        pos.iter()
            .map(|&p| match self.get(p) {
                EMPTY => Err(Error::Misuse(format!("position {p} is empty"))),
                c => Ok(symbol(c)),
            })
            .collect()
    }

    /// Value encoded at `pos`, read by oracles.
    pub fn decode(&self, pos: &[Pos]) -> Result<usize> {
        crate::card::decode_symbols(&self.symbols(pos)?)
    }

    pub fn register(&self, reg: u8) -> u8 {
        self.regs[reg as usize]
    }

    pub fn is_rejected(&self) -> bool {
        self.rejected.is_some()
    }

    /// Cards on the table: (encoding, marking).
    pub(crate) fn usage(&self) -> (usize, usize) {
        let mut enc = 0;
        let mut mark = 0;
        for &c in &self.slots {
            match face(c) {
                EMPTY => {}
                CLUB | HEART => enc += 1,
                _ => mark += 1,
            }
        }
        (enc, mark)
    }
}
