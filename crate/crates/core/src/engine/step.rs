//! Step semantics shared by every executor.

use crate::error::{misuse, Result};
use crate::random::RandomSource;

use super::permutations;
use super::program::{Grid, Instr, Pos, ProverScript, Region, TagId};
use super::state::{self, face, is_mark, is_up, State, CLUB, EMPTY, HEART, LUMPED, UP};

/// How an executor must treat an instruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Kind {
    Det,
    Random,
    Event,
    Sim,
}

pub(crate) fn kind(instr: &Instr) -> Kind {
    match instr {
        Instr::PileShift { .. } | Instr::DoubleScramble { .. } | Instr::ScrambleCards { .. } | Instr::ScrambleBlocks { .. } => {
            Kind::Random
        }
        Instr::TurnOver { .. } | Instr::Action { .. } | Instr::ProverRevealClub { .. } | Instr::ProverOpenEnvelope { .. } => {
            Kind::Event
        }
        Instr::SimEmit { .. } => Kind::Sim,
        _ => Kind::Det,
    }
}

/// What an observer sees next.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Label {
    Reveal(TagId, Box<[u8]>),
    Action(TagId),
    Reject(u32),
    End,
}

impl Label {
    pub(crate) fn is_terminal(&self) -> bool {
        matches!(self, Label::Reject(_) | Label::End)
    }
}

fn check_empty(st: &State, pos: &[Pos]) -> Result<()> {
    match pos.iter().find(|&&p| st.get(p) != EMPTY) {
        Some(p) => misuse(format!("position {p} is already occupied")),
        None => Ok(()),
    }
}

fn rotate_left(st: &mut State, grid: &Grid, c: usize) {
    for row in grid {
        let k = row.len();
        let old: Vec<u8> = row.iter().map(|&p| st.get(p)).collect();
        for (i, &p) in row.iter().enumerate() {
            st.set(p, old[(i + c) % k]);
        }
    }
}

fn single_heart(st: &State, pos: &[Pos]) -> Option<usize> {
    let mut found = None;
    for (i, &p) in pos.iter().enumerate() {
        let c = st.get(p);
        if is_up(c) && face(c) == HEART {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

pub(crate) fn apply_det(instr: &Instr, st: &mut State, script: &ProverScript) -> Result<()> {
    if st.rejected.is_some() {
        return Ok(());
    }
    match instr {
        Instr::Place { pos, symbols } => {
            check_empty(st, pos)?;
            for (&p, &s) in pos.iter().zip(symbols) {
                st.set(p, state::code(s));
            }
        }
        Instr::ProverPlace { pos, key } => {
            check_empty(st, pos)?;
            let Some(symbols) = script.placements.get(*key) else {
                return misuse(format!("prover script has no placement {key}"));
            };
            for (&p, &s) in pos.iter().zip(symbols) {
                st.set(p, state::code(s));
            }
        }
        Instr::Discard { pos } => {
            for &p in pos {
                st.set(p, EMPTY);
            }
        }
        Instr::TurnDown { pos } => {
            for p in pos.resolve(&st.regs) {
                st.set(p, st.get(p) & !UP);
            }
        }
        Instr::LocateHeart { pos, reg, check } => match single_heart(st, pos) {
            Some(i) => st.regs[*reg as usize] = i as u8,
            None => st.reject(*check),
        },
        Instr::RotateToHeart { grid, row, check } => match single_heart(st, &grid[*row]) {
            Some(c) => rotate_left(st, grid, c),
            None => st.reject(*check),
        },
        Instr::CountHearts { pos, reg } => {
            let n = pos.resolve(&st.regs).iter().filter(|&&p| is_up(st.get(p)) && face(st.get(p)) == HEART).count();
            st.regs[*reg as usize] = n as u8;
        }
        Instr::Expect { reg, value, check } => {
            if st.regs[*reg as usize] != *value {
                st.reject(*check);
            }
        }
        Instr::ExpectAtLeast { reg, value, check } => {
            if st.regs[*reg as usize] < *value {
                st.reject(*check);
            }
        }
        Instr::ExpectSymbols { pos, symbols, check } => {
            let ok = pos.iter().zip(symbols).all(|(&p, &s)| {
                let c = st.get(p);
                is_up(c) && face(c) == state::code(s)
            });
            if !ok {
                st.reject(*check);
            }
        }
        Instr::ExpectClubs { pos, count, check } => {
            let clubs = pos.iter().filter(|&&p| is_up(st.get(p)) && face(st.get(p)) == CLUB).count();
            if clubs != *count {
                st.reject(*check);
            }
        }
        Instr::SortByMarks { region } => sort_by_marks(region, st)?,
        Instr::ReverseTail { pos } => {
            if pos.len() > 1 {
                let old: Vec<u8> = pos[1..].iter().map(|&p| st.get(p)).collect();
                for (&p, &c) in pos[1..].iter().zip(old.iter().rev()) {
                    st.set(p, c);
                }
            }
        }
        Instr::TakeColumn { grid, reg, rows, dest } => {
            check_empty(st, dest)?;
            let j = st.regs[*reg as usize] as usize;
            for (r, &d) in rows.clone().zip(dest) {
                st.set(d, st.get(grid[r][j]));
                st.set(grid[r][j], EMPTY);
            }
        }
        Instr::ReturnColumn { grid, reg, rows, src } => {
            let j = st.regs[*reg as usize] as usize;
            let slots: Vec<Pos> = rows.clone().map(|r| grid[r][j]).collect();
            check_empty(st, &slots)?;
            for (&g, &s) in slots.iter().zip(src) {
                st.set(g, st.get(s));
                st.set(s, EMPTY);
            }
        }
        Instr::ClearReg { reg } => st.regs[*reg as usize] = 0,
        other => return misuse(format!("not a deterministic instruction: {other:?}")),
    }
    Ok(())
}

/// Apply an event instruction; returns the public label, if any.
pub(crate) fn apply_event(instr: &Instr, st: &mut State) -> Result<Option<Label>> {
    if st.rejected.is_some() {
        return Ok(None);
    }
    Ok(match instr {
        Instr::TurnOver { pos, tag, .. } => {
            let mut shown = Vec::new();
            for p in pos.resolve(&st.regs) {
                let c = st.get(p);
                if c == EMPTY {
                    return misuse(format!("turning over empty position {p}"));
                }
                if !is_up(c) {
                    st.set(p, c | UP);
                    shown.push(face(c));
                }
            }
            (!shown.is_empty()).then(|| Label::Reveal(*tag, shown.into()))
        }
        Instr::Action { tag } => Some(Label::Action(*tag)),
        Instr::ProverRevealClub { pair, tag, check } => {
            match pair.iter().position(|&p| face(st.get(p)) == CLUB && !is_up(st.get(p))) {
                None => {
                    st.reject(*check);
                    None
                }
                Some(i) => {
                    let (a, b) = (st.get(pair[0]), st.get(pair[1]));
                    if i == 1 {
                        st.set(pair[0], b);
                        st.set(pair[1], a);
                    }
                    st.set(pair[0], st.get(pair[0]) | UP);
                    Some(Label::Reveal(*tag, vec![CLUB].into()))
                }
            }
        }
        Instr::ProverOpenEnvelope { pos, tag, counter, check } => {
            let clubs = pos.iter().filter(|&&p| face(st.get(p)) == CLUB).count();
            if clubs == 1 {
                let shown: Vec<u8> = pos.iter().map(|&p| face(st.get(p))).collect();
                for &p in pos {
                    st.set(p, st.get(p) | UP);
                }
                if shown.iter().filter(|&&c| c == CLUB).count() != 1 {
                    st.reject(*check);
                }
                st.regs[*counter as usize] += 1;
                Some(Label::Reveal(*tag, shown.into()))
            } else {
                Some(Label::Action(*tag))
            }
        }
        other => return misuse(format!("not an event instruction: {other:?}")),
    })
}

fn random_positions(instr: &Instr) -> Vec<Pos> {
    match instr {
        Instr::PileShift { grid } => grid.iter().flatten().copied().collect(),
        Instr::DoubleScramble { region } => {
            region.cells.iter().flatten().chain(&region.row0).chain(&region.col0).copied().collect()
        }
        Instr::ScrambleCards { pos } => pos.clone(),
        Instr::ScrambleBlocks { blocks } => blocks.iter().flatten().copied().collect(),
        _ => Vec::new(),
    }
}

pub(crate) fn check_face_down(instr: &Instr, st: &State) -> Result<()> {
    if st.rejected.is_some() {
        return Ok(());
    }
    if let Some(p) = random_positions(instr).into_iter().find(|&p| is_up(st.get(p))) {
        return misuse(format!("shuffling a face-up card at position {p}"));
    }
    Ok(())
}

pub(crate) fn apply_shift(grid: &Grid, r: usize, st: &mut State) {
    let k = grid[0].len();
    rotate_left(st, grid, (k - r % k) % k);
}

/// New column `c` is old column `cols[c]`; then new lower row `i` is old
/// lower row `rows[i]`. Marks travel with their column or row.
pub(crate) fn apply_ds(region: &Region, cols: &[u8], rows: &[u8], st: &mut State) {
    for line in region.cells.iter().chain(std::iter::once(&region.row0)) {
        let old: Vec<u8> = line.iter().map(|&p| st.get(p)).collect();
        for (c, &p) in line.iter().enumerate() {
            st.set(p, old[cols[c] as usize]);
        }
    }
    let lower: Vec<Vec<u8>> = region.cells[1..].iter().map(|r| r.iter().map(|&p| st.get(p)).collect()).collect();
    let marks: Vec<u8> = region.col0.iter().map(|&p| st.get(p)).collect();
    for (i, row) in region.cells[1..].iter().enumerate() {
        for (c, &p) in row.iter().enumerate() {
            st.set(p, lower[rows[i] as usize][c]);
        }
        st.set(region.col0[i], marks[rows[i] as usize]);
    }
}

pub(crate) fn apply_perm(pos: &[Pos], perm: &[u8], st: &mut State) {
    let old: Vec<u8> = pos.iter().map(|&p| st.get(p)).collect();
    for (i, &p) in pos.iter().enumerate() {
        st.set(p, old[perm[i] as usize]);
    }
}

pub(crate) fn apply_blocks(blocks: &[Vec<Pos>], perm: &[u8], st: &mut State) {
    let old: Vec<Vec<u8>> = blocks.iter().map(|b| b.iter().map(|&p| st.get(p)).collect()).collect();
    for (i, block) in blocks.iter().enumerate() {
        for (j, &p) in block.iter().enumerate() {
            st.set(p, old[perm[i] as usize][j]);
        }
    }
}

/// Permutation placing mark number `base + i` at index `i`.
fn mark_perm(st: &State, marks: &[Pos], base: u8, need_up: bool) -> Result<Vec<u8>> {
    let mut perm = vec![u8::MAX; marks.len()];
    for (i, &p) in marks.iter().enumerate() {
        let c = st.get(p);
        if need_up && !is_up(c) {
            return misuse("marking cards must be face up to sort");
        }
        if !is_mark(c) || face(c) == LUMPED {
            return misuse("marking card expected");
        }
        let n = face(c) - 2;
        let idx = n.checked_sub(base).map(usize::from).filter(|&x| x < marks.len());
        match idx {
            Some(x) if perm[x] == u8::MAX => perm[x] = i as u8,
            _ => return misuse("marking cards are not a permutation"),
        }
    }
    Ok(perm)
}

/// Region contents with columns and rows sorted by their true marks.
pub(crate) fn canonical_region(region: &Region, st: &mut State) -> Result<()> {
    let cols = mark_perm(st, &region.row0, 1, false)?;
    let rows = mark_perm(st, &region.col0, 2, false)?;
    apply_ds(region, &cols, &rows, st);
    Ok(())
}

fn sort_by_marks(region: &Region, st: &mut State) -> Result<()> {
    if let Some(lump) = st.lump.as_ref().filter(|l| l.anchor == region.cells[0][0]) {
        let lump = lump.clone();
        for (&p, &c) in region.cells.iter().flatten().zip(&lump.home) {
            st.set(p, c);
        }
        for (&p, &c) in region.row0.iter().chain(&region.col0).zip(&lump.marks) {
            st.set(p, c | UP);
        }
        st.lump = None;
        return Ok(());
    }
    let cols = mark_perm(st, &region.row0, 1, true)?;
    let rows = mark_perm(st, &region.col0, 2, true)?;
    apply_ds(region, &cols, &rows, st);
    Ok(())
}

/// Every outcome of a random instruction with its probability, without
/// any state reduction. Rejected states pass through unchanged.
pub(crate) fn expand(instr: &Instr, st: &State, mut f: impl FnMut(State, f64)) -> Result<()> {
    check_face_down(instr, st)?;
    if st.rejected.is_some() {
        f(st.clone(), 1.0);
        return Ok(());
    }
    match instr {
        Instr::PileShift { grid } => {
            let k = grid[0].len();
            for r in 0..k {
                let mut s = st.clone();
                apply_shift(grid, r, &mut s);
                f(s, 1.0 / k as f64);
            }
        }
        Instr::DoubleScramble { region } => {
            let cols = permutations(region.cols());
            let rows = permutations(region.rows() - 1);
            let p = 1.0 / (cols.len() * rows.len()) as f64;
            for c in cols {
                let mut sc = st.clone();
                apply_ds(region, c, &identity(region.rows() - 1), &mut sc);
                for r in rows {
                    let mut s = sc.clone();
                    apply_ds(region, &identity(region.cols()), r, &mut s);
                    f(s, p);
                }
            }
        }
        Instr::ScrambleCards { pos } => {
            let perms = permutations(pos.len());
            for perm in perms {
                let mut s = st.clone();
                apply_perm(pos, perm, &mut s);
                f(s, 1.0 / perms.len() as f64);
            }
        }
        Instr::ScrambleBlocks { blocks } => {
            let perms = permutations(blocks.len());
            for perm in perms {
                let mut s = st.clone();
                apply_blocks(blocks, perm, &mut s);
                f(s, 1.0 / perms.len() as f64);
            }
        }
        other => return misuse(format!("not a random instruction: {other:?}")),
    }
    Ok(())
}

pub(crate) fn identity(n: usize) -> Vec<u8> {
    (0..n as u8).collect()
}

/// One sampled outcome of a random instruction.
pub(crate) fn apply_random(instr: &Instr, st: &mut State, rs: &mut dyn RandomSource) -> Result<()> {
    check_face_down(instr, st)?;
    if st.rejected.is_some() {
        return Ok(());
    }
    let perm = |rs: &mut dyn RandomSource, n: usize| -> Vec<u8> { rs.draw_permutation(n).into_iter().map(|x| x as u8).collect() };
    match instr {
        Instr::PileShift { grid } => {
            let r = rs.draw(grid[0].len());
            apply_shift(grid, r, st);
        }
        Instr::DoubleScramble { region } => {
            let cols = perm(rs, region.cols());
            let rows = perm(rs, region.rows() - 1);
            apply_ds(region, &cols, &rows, st);
        }
        Instr::ScrambleCards { pos } => {
            let p = perm(rs, pos.len());
            apply_perm(pos, &p, st);
        }
        Instr::ScrambleBlocks { blocks } => {
            let p = perm(rs, blocks.len());
            apply_blocks(blocks, &p, st);
        }
        other => return misuse(format!("not a random instruction: {other:?}")),
    }
    Ok(())
}
