//! Building blocks compiled into card programs: sequence selection,
//! neighbor counting, copy, addition and multiplication.
//!
//! The free functions append instructions to a [`ProgramBuilder`]. The
//! [`Session`] wraps them with ownership checks for interactive use.

use std::collections::{HashMap, HashSet};

use crate::card::{encoding_pattern, Symbol};
use crate::engine::{Grid, Instr, PlacementKey, Pos, PosSet, Program, ProgramBuilder, Reg, Region, RevealKind, State};
use crate::error::{misuse, Error, Result};

fn zero(k: usize) -> Vec<Symbol> {
    encoding_pattern(0, k).expect("k >= 1")
}

/// Count rows `2..m` encoding the same value as row 1.
///
/// With `expect = Some(t)` the verifier rejects unless the count is `t` and
/// the register is released; otherwise the register holding the count is
/// returned and the caller owns it. Rows are restored in place.
pub fn neighbor_count(b: &mut ProgramBuilder, ctx: &str, rows: &[Vec<Pos>], expect: Option<usize>) -> Option<Reg> {
    let m = rows.len();
    let k = rows[0].len();
    let row0 = b.place((1..=k).map(|i| Symbol::Mark(i as u8)).collect());
    let col0 = b.place((2..=m).map(|i| Symbol::Mark(i as u8)).collect());
    let region = Region { cells: rows.to_vec(), row0: row0.clone(), col0: col0.clone() };
    b.push(Instr::DoubleScramble { region: region.clone() });

    let first = PosSet::Fixed(rows[0].clone());
    b.turn_over(first.clone(), &format!("{ctx}/row1"), RevealKind::UniformHeart { k });
    let j = b.reg();
    let check = b.check(format!("{ctx}: row 1 does not encode a value"));
    b.push(Instr::LocateHeart { pos: rows[0].clone(), reg: j, check });
    let t = b.reg();
    if m > 1 {
        let column = PosSet::Column { grid: rows.to_vec(), reg: j, rows: 1..m };
        let kind = match expect {
            Some(t) => RevealKind::NeighborColumn { rows: m - 1, t },
            None => RevealKind::Opaque,
        };
        b.turn_over(column.clone(), &format!("{ctx}/column"), kind);
        b.push(Instr::CountHearts { pos: column.clone(), reg: t });
        b.turn_down(column);
    }
    if let Some(value) = expect {
        let check = b.check(format!("{ctx}: expected {value} matching rows"));
        b.push(Instr::Expect { reg: t, value: value as u8, check });
    }
    b.turn_down(first);
    b.free_reg(j);

    b.push(Instr::DoubleScramble { region: region.clone() });
    b.turn_over(PosSet::Fixed(row0.clone()), &format!("{ctx}/row0"), RevealKind::MarkOrder { marks: (1..=k as u8).collect() });
    if m > 1 {
        b.turn_over(PosSet::Fixed(col0.clone()), &format!("{ctx}/col0"), RevealKind::MarkOrder { marks: (2..=m as u8).collect() });
    }
    b.push(Instr::SortByMarks { region });
    b.discard(&row0);
    b.discard(&col0);
    if expect.is_some() {
        b.free_reg(t);
        None
    } else {
        Some(t)
    }
}

/// An outstanding selection: the chosen sequence sits at `staged` until
/// [`restore`] puts it back.
#[derive(Clone, Debug)]
pub struct Selection {
    grid: Grid,
    reg: Reg,
    pub staged: Vec<Pos>,
    ctx: String,
}

impl Selection {
    /// Every position of the selection matrix.
    pub fn matrix_positions(&self) -> Vec<Pos> {
        self.grid.iter().flatten().copied().collect()
    }
}

/// Select `options[b]` where `key` encodes `b`, without revealing `b`.
/// `options` are `k` sequences of equal length, `key` has `k` cards.
pub fn select(b: &mut ProgramBuilder, ctx: &str, options: &[Vec<Pos>], key: &[Pos]) -> Selection {
    let k = key.len();
    let m = options[0].len();
    let mut grid = vec![b.place(zero(k)), key.to_vec()];
    grid.extend((0..m).map(|r| options.iter().map(|o| o[r]).collect()));
    b.push(Instr::PileShift { grid: grid.clone() });
    let row = PosSet::Fixed(key.to_vec());
    b.turn_over(row.clone(), &format!("{ctx}/select"), RevealKind::UniformHeart { k });
    let reg = b.reg();
    let check = b.check(format!("{ctx}: selector does not encode a value"));
    b.push(Instr::LocateHeart { pos: key.to_vec(), reg, check });
    b.turn_down(row);
    let staged = b.alloc(m);
    b.push(Instr::TakeColumn { grid: grid.clone(), reg, rows: 2..m + 2, dest: staged.clone() });
    Selection { grid, reg, staged, ctx: ctx.to_string() }
}

/// Return the selected sequence and revert the matrix.
pub fn restore(b: &mut ProgramBuilder, sel: Selection) {
    let m = sel.staged.len();
    b.push(Instr::ReturnColumn { grid: sel.grid.clone(), reg: sel.reg, rows: 2..m + 2, src: sel.staged.clone() });
    b.release(&sel.staged);
    b.free_reg(sel.reg);
    finish_rotation(b, &sel.ctx, "restore", sel.grid.clone());
    b.discard(&sel.grid[0]);
}

/// Pile-shift `grid`, reveal its first row and rotate that row's heart
/// into column 1.
fn finish_rotation(b: &mut ProgramBuilder, ctx: &str, what: &str, grid: Grid) {
    let k = grid[0].len();
    b.push(Instr::PileShift { grid: grid.clone() });
    b.turn_over(PosSet::Fixed(grid[0].clone()), &format!("{ctx}/{what}"), RevealKind::UniformHeart { k });
    let check = b.check(format!("{ctx}: revealed row does not encode a value"));
    b.push(Instr::RotateToHeart { grid, row: 0, check });
}

/// Consume `a` and return `m + 1` sequences encoding the same value.
pub fn copy(b: &mut ProgramBuilder, ctx: &str, a: Vec<Pos>, m: usize) -> Vec<Vec<Pos>> {
    let k = a.len();
    b.push(Instr::ReverseTail { pos: a.clone() });
    let fresh: Vec<Vec<Pos>> = (0..=m).map(|_| b.place(zero(k))).collect();
    let mut grid = vec![a.clone()];
    grid.extend(fresh.iter().cloned());
    finish_rotation(b, ctx, "copy", grid);
    b.discard(&a);
    fresh
}

/// Consume `a`; afterwards `target` encodes `a + target`.
pub fn add(b: &mut ProgramBuilder, ctx: &str, a: Vec<Pos>, target: Vec<Pos>) -> Vec<Pos> {
    b.push(Instr::ReverseTail { pos: a.clone() });
    finish_rotation(b, ctx, "add", vec![a.clone(), target.clone()]);
    b.discard(&a);
    target
}

/// Consume `a` and `key`; return a sequence encoding their product.
pub fn multiply(b: &mut ProgramBuilder, ctx: &str, a: Vec<Pos>, key: Vec<Pos>) -> Vec<Pos> {
    let k = a.len();
    let addends = match k {
        1 => {
            b.discard(&a);
            Vec::new()
        }
        2 => vec![a],
        _ => copy(b, &format!("{ctx}/mul"), a, k - 2),
    };
    // chain[i] encodes i * a.
    let mut chain = vec![b.place(zero(k))];
    for addend in addends {
        let last = chain.pop().unwrap();
        let mut pair = copy(b, &format!("{ctx}/mul"), last, 1);
        let next = pair.pop().unwrap();
        chain.push(pair.pop().unwrap());
        chain.push(add(b, &format!("{ctx}/mul"), addend, next));
    }
    let sel = select(b, &format!("{ctx}/mul"), &chain, &key);
    b.discard(&sel.matrix_positions());
    b.free_reg(sel.reg);
    sel.staged
}

/// A sequence handed out by a [`Session`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seq {
    pos: Vec<Pos>,
}

impl Seq {
    pub fn positions(&self) -> &[Pos] {
        &self.pos
    }

    pub fn modulus(&self) -> usize {
        self.pos.len()
    }

    /// True value in a final state; oracle use only.
    pub fn peek(&self, state: &State) -> Result<usize> {
        state.decode(&self.pos)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SelectionHandle(usize);

/// Register holding a neighbor count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountHandle(Reg);

impl CountHandle {
    pub fn read(&self, state: &State) -> usize {
        state.register(self.0) as usize
    }
}

/// Records subprotocol calls into a program, refusing misuse: touching the
/// donor matrix of an outstanding selection, restoring a selection twice,
/// or returning a sequence other than the one selected.
#[derive(Debug, Default)]
pub struct Session {
    b: ProgramBuilder,
    locked: HashSet<Pos>,
    open: HashMap<usize, Selection>,
    next: usize,
    steps: usize,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    fn ctx(&mut self, what: &str) -> String {
        self.steps += 1;
        format!("s{}/{what}", self.steps)
    }

    fn ensure_free(&self, seqs: &[&Seq]) -> Result<()> {
        if seqs.iter().flat_map(|s| &s.pos).any(|p| self.locked.contains(p)) {
            return misuse("sequence belongs to a matrix with an outstanding selection");
        }
        Ok(())
    }

    fn same_modulus(seqs: &[&Seq]) -> Result<usize> {
        let k = seqs[0].modulus();
        if seqs.iter().any(|s| s.modulus() != k) {
            return Err(Error::ShapeMismatch("sequences of different lengths".into()));
        }
        Ok(k)
    }

    /// Publicly place `E_k(x)`.
    pub fn place(&mut self, x: usize, k: usize) -> Result<Seq> {
        Ok(Seq { pos: self.b.place(encoding_pattern(x, k)?) })
    }

    /// Prover placement of `k` cards, answered by key `Other(id)`.
    pub fn place_private(&mut self, k: usize, id: usize) -> Seq {
        Seq { pos: self.b.prover_place(k, PlacementKey::Other(id)) }
    }

    pub fn select_sequence(&mut self, options: &[Seq], key: &Seq) -> Result<(Seq, SelectionHandle)> {
        if options.len() != key.modulus() || options.is_empty() {
            return Err(Error::ShapeMismatch(format!("{} options for a selector over Z/{}", options.len(), key.modulus())));
        }
        let refs: Vec<&Seq> = options.iter().collect();
        Self::same_modulus(&refs)?;
        self.ensure_free(&refs)?;
        self.ensure_free(&[key])?;
        let ctx = self.ctx("select");
        let opts: Vec<Vec<Pos>> = options.iter().map(|s| s.pos.clone()).collect();
        let sel = select(&mut self.b, &ctx, &opts, &key.pos);
        self.locked.extend(sel.matrix_positions());
        let staged = Seq { pos: sel.staged.clone() };
        self.next += 1;
        self.open.insert(self.next, sel);
        Ok((staged, SelectionHandle(self.next)))
    }

    pub fn restore_selection(&mut self, handle: SelectionHandle, returned: &Seq) -> Result<()> {
        let Some(sel) = self.open.get(&handle.0) else {
            return misuse("no outstanding selection for this handle");
        };
        if sel.staged != returned.pos {
            return misuse("the returned sequence is not the selected one");
        }
        let sel = self.open.remove(&handle.0).unwrap();
        for p in sel.matrix_positions() {
            self.locked.remove(&p);
        }
        restore(&mut self.b, sel);
        Ok(())
    }

    /// Count rows `2..m` equal to row 1. Read the result from a final state.
    pub fn neighbor_count(&mut self, rows: &[Seq]) -> Result<CountHandle> {
        let refs: Vec<&Seq> = rows.iter().collect();
        Self::same_modulus(&refs)?;
        self.ensure_free(&refs)?;
        let ctx = self.ctx("count");
        let rows: Vec<Vec<Pos>> = rows.iter().map(|s| s.pos.clone()).collect();
        Ok(CountHandle(neighbor_count(&mut self.b, &ctx, &rows, None).expect("count register")))
    }

    pub fn copy(&mut self, a: Seq, m: usize) -> Result<Vec<Seq>> {
        if m == 0 {
            return Err(Error::Domain("copy needs m >= 1".into()));
        }
        self.ensure_free(&[&a])?;
        let ctx = self.ctx("copy");
        Ok(copy(&mut self.b, &ctx, a.pos, m).into_iter().map(|pos| Seq { pos }).collect())
    }

    pub fn add(&mut self, a: Seq, target: Seq) -> Result<Seq> {
        Self::same_modulus(&[&a, &target])?;
        self.ensure_free(&[&a, &target])?;
        let ctx = self.ctx("add");
        Ok(Seq { pos: add(&mut self.b, &ctx, a.pos, target.pos) })
    }

    pub fn multiply(&mut self, a: Seq, key: Seq) -> Result<Seq> {
        Self::same_modulus(&[&a, &key])?;
        self.ensure_free(&[&a, &key])?;
        let ctx = self.ctx("mul");
        Ok(Seq { pos: multiply(&mut self.b, &ctx, a.pos, key.pos) })
    }

    pub fn finish(self) -> Result<Program> {
        if !self.open.is_empty() {
            return misuse("selection left outstanding");
        }
        Ok(self.b.finish())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, ProverScript, VerdictEnumerator};
    use crate::random::{enumerate, SeededSource};

    /// Final states of every accepting leaf, merged.
    fn finals(program: &Program) -> Vec<(State, f64)> {
        let d = VerdictEnumerator::new().run(program, &ProverScript::empty()).unwrap();
        assert!(d.always_accepts());
        assert!((d.accept - 1.0).abs() < 1e-12);
        d.accepted
    }

    #[test]
    fn select_single_option() {
        let mut s = Session::new();
        let a = s.place(2, 3).unwrap();
        let key = s.place(0, 1).unwrap();
        let (got, h) = s.select_sequence(std::slice::from_ref(&a), &key).unwrap();
        s.restore_selection(h, &got).unwrap();
        let prog = s.finish().unwrap();
        for (st, _) in finals(&prog) {
            assert_eq!(a.peek(&st).unwrap(), 2);
        }
    }

    #[test]
    fn select_picks_keyed_option_on_every_leaf() {
        // Oracle: literal enumeration of both pile-shift outcomes.
        let mut s = Session::new();
        let a0 = s.place(0, 3).unwrap();
        let a1 = s.place(1, 3).unwrap();
        let key = s.place(1, 2).unwrap();
        let (got, _h) = s.select_sequence(&[a0, a1], &key).unwrap();
        let prog = s.b.finish();
        let leaves = enumerate(|rs| run(&prog, &ProverScript::empty(), rs).unwrap());
        assert_eq!(leaves.len(), 2);
        for (o, p) in leaves {
            assert!((p - 0.5).abs() < 1e-12);
            assert_eq!(got.peek(&o.state).unwrap(), 1);
        }
    }

    #[test]
    fn select_then_restore_is_identity() {
        for k in 1..=4 {
            for m in 1..=5 {
                for b in 0..k {
                    let mut s = Session::new();
                    let opts: Vec<Seq> = (0..k).map(|i| s.place((i * 7 + 1) % m, m).unwrap()).collect();
                    let key = s.place(b, k).unwrap();
                    let (got, h) = s.select_sequence(&opts, &key).unwrap();
                    s.restore_selection(h, &got).unwrap();
                    let prog = s.finish().unwrap();
                    for (st, _) in finals(&prog) {
                        for (i, o) in opts.iter().enumerate() {
                            assert_eq!(o.peek(&st).unwrap(), (i * 7 + 1) % m);
                        }
                        assert_eq!(key.peek(&st).unwrap(), b);
                    }
                }
            }
        }
    }

    #[test]
    fn selection_misuse() {
        let mut s = Session::new();
        let a = s.place(0, 2).unwrap();
        let b = s.place(1, 2).unwrap();
        let key = s.place(1, 2).unwrap();
        let (got, h) = s.select_sequence(&[a.clone(), b.clone()], &key).unwrap();
        assert!(matches!(s.copy(a.clone(), 1), Err(Error::Misuse(_))));
        assert!(matches!(s.restore_selection(h, &a), Err(Error::Misuse(_))));
        s.restore_selection(h, &got).unwrap();
        assert!(matches!(s.restore_selection(h, &got), Err(Error::Misuse(_))));
        let (_, _) = s.select_sequence(&[a, b], &key).unwrap();
        assert!(s.finish().is_err());
    }

    #[test]
    fn select_reveal_is_uniform() {
        let mut s = Session::new();
        let opts: Vec<Seq> = (0..3).map(|i| s.place(i, 3).unwrap()).collect();
        let key = s.place(2, 3).unwrap();
        let (got, h) = s.select_sequence(&opts, &key).unwrap();
        s.restore_selection(h, &got).unwrap();
        let prog = s.finish().unwrap();
        let mut counts = [[0usize; 3]; 2];
        let mut rs = SeededSource::new(5);
        let n = 9000;
        for _ in 0..n {
            let out = run(&prog, &ProverScript::empty(), &mut rs).unwrap();
            for (e, c) in out.transcript.events().iter().zip(counts.iter_mut()) {
                let crate::Event::Reveal { symbols, .. } = e else { panic!() };
                c[symbols.iter().position(|&x| x == Symbol::Heart).unwrap()] += 1;
            }
        }
        for c in counts {
            for x in c {
                assert!((x as f64 / n as f64 - 1.0 / 3.0).abs() < 0.03);
            }
        }
    }

    fn count_program(values: &[usize], k: usize) -> (Program, CountHandle) {
        let mut s = Session::new();
        let rows: Vec<Seq> = values.iter().map(|&v| s.place(v, k).unwrap()).collect();
        let h = s.neighbor_count(&rows).unwrap();
        (s.finish().unwrap(), h)
    }

    #[test]
    fn neighbor_count_examples() {
        for (values, k, t) in [(vec![0, 0, 1], 2, 1), (vec![2, 0, 1], 3, 0), (vec![1, 1, 1, 1], 3, 3)] {
            let (prog, h) = count_program(&values, k);
            for (st, _) in finals(&prog) {
                assert_eq!(h.read(&st), t);
            }
        }
    }

    #[test]
    fn merged_enumeration_matches_literal_leaves() {
        // Literal leaf enumeration is the oracle for the state-merging
        // enumerator on matrices small enough to expand fully.
        for (values, k) in [(vec![0, 1], 2), (vec![1, 1, 0], 2), (vec![2, 0, 2], 3), (vec![0, 2, 1], 3)] {
            let (prog, h) = count_program(&values, k);
            let leaves = enumerate(|rs| run(&prog, &ProverScript::empty(), rs).unwrap());
            let total: f64 = leaves.iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
            let brute = values[1..].iter().filter(|&&v| v == values[0]).count();
            for (o, _) in &leaves {
                assert_eq!(h.read(&o.state), brute);
            }
            let merged = finals(&prog);
            assert_eq!(merged.len(), 1);
            assert_eq!(merged[0].0.slots, leaves[0].0.state.slots);
            for mode in [VerdictEnumerator::new(), VerdictEnumerator::without_lumping()] {
                let mut mode = mode;
                let d = mode.run(&prog, &ProverScript::empty()).unwrap();
                assert_eq!(d.accepted.len(), 1);
            }
        }
    }

    #[test]
    fn copy_add_multiply_examples() {
        let mut s = Session::new();
        let c = s.place(2, 3).unwrap();
        let copies = s.copy(c, 1).unwrap();
        let z = s.place(0, 2).unwrap();
        let zeros = s.copy(z, 3).unwrap();
        let a = s.place(3, 9).unwrap();
        let b = s.place(4, 9).unwrap();
        let sum = s.add(a, b).unwrap();
        let a = s.place(3, 4).unwrap();
        let b = s.place(2, 4).unwrap();
        let sum4 = s.add(a, b).unwrap();
        let a = s.place(2, 9).unwrap();
        let b = s.place(4, 9).unwrap();
        let prod = s.multiply(a, b).unwrap();
        let a = s.place(2, 3).unwrap();
        let b = s.place(2, 3).unwrap();
        let prod3 = s.multiply(a, b).unwrap();
        let prog = s.finish().unwrap();
        for seed in 0..5 {
            let o = run(&prog, &ProverScript::empty(), &mut SeededSource::new(seed)).unwrap();
            assert!(o.verdict.is_accept());
            assert_eq!(copies.len(), 2);
            assert!(copies.iter().all(|c| c.peek(&o.state).unwrap() == 2));
            assert_eq!(zeros.len(), 4);
            assert!(zeros.iter().all(|c| c.peek(&o.state).unwrap() == 0));
            assert_eq!(sum.peek(&o.state).unwrap(), 7);
            assert_eq!(sum4.peek(&o.state).unwrap(), 1);
            assert_eq!(prod.peek(&o.state).unwrap(), 8);
            assert_eq!(prod3.peek(&o.state).unwrap(), 1);
        }
    }
}
