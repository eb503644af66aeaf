//! Physical cards, integer-encoding sequences and card matrices.
//!
//! An integer `x` in `Z/kZ` is encoded by `k` face-down cards, all clubs
//! except a single heart at position `x + 1` (1-indexed from the left).
//! Marking cards carry a positive number and are only used as the extra
//! row and column of an [`EnhancedMatrix`].

use std::fmt;

use crate::error::{Error, Result};
use crate::transcript::{Event, Transcript};

/// Front side of a card.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Club,
    Heart,
    /// Numbered marking card, numbers start at 1.
    Mark(u8),
}

impl Symbol {
    pub fn is_encoding(self) -> bool {
        matches!(self, Symbol::Club | Symbol::Heart)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Club => f.write_str("C"),
            Symbol::Heart => f.write_str("H"),
            Symbol::Mark(i) => write!(f, "{i}"),
        }
    }
}

impl std::str::FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" => Ok(Symbol::Club),
            "H" => Ok(Symbol::Heart),
            _ => match s.parse::<u8>() {
                Ok(i) if i > 0 => Ok(Symbol::Mark(i)),
                _ => Err(Error::Domain(format!("unknown card symbol {s:?}"))),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Facing {
    Up,
    Down,
}

/// A single card. Its symbol never changes; only the facing does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Card {
    symbol: Symbol,
    facing: Facing,
}

impl Card {
    /// A fresh face-down card.
    pub fn new(symbol: Symbol) -> Self {
        Card { symbol, facing: Facing::Down }
    }

    pub fn facing(&self) -> Facing {
        self.facing
    }

    pub fn is_face_up(&self) -> bool {
        self.facing == Facing::Up
    }

    /// What an observer sees: the symbol when face up, nothing otherwise.
    pub fn visible(&self) -> Option<Symbol> {
        self.is_face_up().then_some(self.symbol)
    }

    /// The true symbol regardless of facing, for oracles. Protocol code
    /// observes cards through [`Card::visible`].
    pub fn symbol(&self) -> Symbol {
        self.symbol
    }
}

/// Turn cards face up, logging one reveal event with the symbols of the
/// cards whose facing actually changed. Nothing is logged when every card
/// was already face up.
pub fn turn_over(cards: &mut [Card], tag: &str, transcript: &mut Transcript) {
    let mut revealed = Vec::new();
    for card in cards.iter_mut() {
        if card.facing == Facing::Down {
            card.facing = Facing::Up;
            revealed.push(card.symbol);
        }
    }
    if !revealed.is_empty() {
        transcript.push(Event::reveal(tag, revealed));
    }
}

/// Turn cards face down. Never logs anything.
pub fn turn_down(cards: &mut [Card]) {
    for card in cards {
        card.facing = Facing::Down;
    }
}

/// An ordered row of encoding cards, `E_k(x)` when well formed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence {
    cards: Vec<Card>,
}

impl Sequence {
    /// Build a face-down sequence from symbols. Marking cards are rejected.
    pub fn from_symbols(symbols: &[Symbol]) -> Result<Self> {
        if let Some(mark) = symbols.iter().find(|s| !s.is_encoding()) {
            return Err(Error::Domain(format!("marking card {mark} inside an encoding sequence")));
        }
        Ok(Sequence { cards: symbols.iter().map(|&s| Card::new(s)).collect() })
    }

    pub fn modulus(&self) -> usize {
        self.cards.len()
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    pub fn cards_mut(&mut self) -> &mut [Card] {
        &mut self.cards
    }

    /// True symbol pattern, for oracles and tests.
    pub fn symbols(&self) -> Vec<Symbol> {
        self.cards.iter().map(|c| c.symbol).collect()
    }

    /// Observer view: face-up symbols only.
    pub fn view(&self) -> Vec<Option<Symbol>> {
        self.cards.iter().map(Card::visible).collect()
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cards {
            write!(f, "{}", c.symbol)?;
        }
        Ok(())
    }
}

/// Symbol pattern of `E_k(x)`.
pub fn encoding_pattern(x: usize, k: usize) -> Result<Vec<Symbol>> {
    if k == 0 {
        return Err(Error::Domain("modulus must be at least 1".into()));
    }
    if x >= k {
        return Err(Error::Domain(format!("value {x} out of range for Z/{k}Z")));
    }
    Ok((0..k).map(|i| if i == x { Symbol::Heart } else { Symbol::Club }).collect())
}

/// `E_k(x)` as face-down cards.
pub fn encode(x: usize, k: usize) -> Result<Sequence> {
    Sequence::from_symbols(&encoding_pattern(x, k)?)
}

/// Read the value encoded by a symbol pattern.
pub fn decode_symbols(symbols: &[Symbol]) -> Result<usize> {
    let mut hearts = symbols.iter().enumerate().filter(|(_, s)| **s == Symbol::Heart);
    match (hearts.next(), hearts.next()) {
        (Some((i, _)), None) if symbols.iter().all(|s| s.is_encoding()) => Ok(i),
        (None, _) => Err(Error::MalformedSequence { hearts: 0 }),
        _ => Err(Error::MalformedSequence {
            hearts: symbols.iter().filter(|s| **s == Symbol::Heart).count(),
        }),
    }
}

/// Inverse of [`encode`], reading true symbols.
pub fn decode(seq: &Sequence) -> Result<usize> {
    decode_symbols(&seq.symbols())
}

/// Reverse the `k - 1` rightmost cards: turns `E_k(a)` into `E_k(-a)`.
pub fn reverse_tail(mut seq: Sequence) -> Sequence {
    if seq.cards.len() > 1 {
        seq.cards[1..].reverse();
    }
    seq
}

/// `m x k` grid of encoding cards, one sequence per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardMatrix {
    rows: Vec<Vec<Card>>,
    cols: usize,
}

impl CardMatrix {
    pub fn new(rows: Vec<Sequence>) -> Result<Self> {
        let cols = rows.first().map(Sequence::modulus).ok_or_else(|| Error::Domain("matrix needs at least one row".into()))?;
        if rows.iter().any(|r| r.modulus() != cols) {
            return Err(Error::Domain("matrix rows differ in length".into()));
        }
        Ok(CardMatrix { rows: rows.into_iter().map(|s| s.cards).collect(), cols })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Sequence {
        Sequence { cards: self.rows[i].clone() }
    }

    pub fn row_cards_mut(&mut self, i: usize) -> &mut [Card] {
        &mut self.rows[i]
    }

    pub fn into_rows(self) -> Vec<Sequence> {
        self.rows.into_iter().map(|cards| Sequence { cards }).collect()
    }

    pub fn all_face_down(&self) -> bool {
        self.rows.iter().flatten().all(|c| !c.is_face_up())
    }

    /// Column `j` read top to bottom.
    pub fn column(&self, j: usize) -> Vec<Card> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn column_cards_mut(&mut self, j: usize) -> impl Iterator<Item = &mut Card> {
        self.rows.iter_mut().map(move |r| &mut r[j])
    }

    /// Cyclic shift of all columns `r` places to the right.
    pub fn rotate_right(&mut self, r: usize) {
        if self.cols == 0 {
            return;
        }
        let r = r % self.cols;
        for row in &mut self.rows {
            row.rotate_right(r);
        }
    }

    /// New column `i` is old column `perm[i]`.
    pub fn permute_columns(&mut self, perm: &[usize]) {
        for row in &mut self.rows {
            *row = perm.iter().map(|&p| row[p]).collect();
        }
    }

    /// New row `i` is old row `perm[i]`.
    pub fn permute_rows(&mut self, perm: &[usize]) {
        let old = std::mem::take(&mut self.rows);
        self.rows = perm.iter().map(|&p| old[p].clone()).collect();
    }
}

/// A card matrix with marking cards `1..=k` above the columns (Row 0) and
/// `2..=m` beside Rows 2..m (Column 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnhancedMatrix {
    inner: CardMatrix,
    row0: Vec<Card>,
    col0: Vec<Card>,
}

impl EnhancedMatrix {
    pub fn new(inner: CardMatrix) -> Self {
        let row0 = (1..=inner.cols()).map(|i| Card::new(Symbol::Mark(i as u8))).collect();
        let col0 = (2..=inner.rows()).map(|i| Card::new(Symbol::Mark(i as u8))).collect();
        EnhancedMatrix { inner, row0, col0 }
    }

    pub fn inner(&self) -> &CardMatrix {
        &self.inner
    }

    pub fn inner_mut(&mut self) -> &mut CardMatrix {
        &mut self.inner
    }

    pub fn into_inner(self) -> CardMatrix {
        self.inner
    }

    pub fn row0(&self) -> &[Card] {
        &self.row0
    }

    pub fn col0(&self) -> &[Card] {
        &self.col0
    }

    pub fn row0_mut(&mut self) -> &mut [Card] {
        &mut self.row0
    }

    pub fn col0_mut(&mut self) -> &mut [Card] {
        &mut self.col0
    }

    pub fn all_face_down(&self) -> bool {
        self.inner.all_face_down() && self.row0.iter().chain(&self.col0).all(|c| !c.is_face_up())
    }

    /// Permute Columns 1..k together with their Row-0 marks.
    pub fn permute_columns(&mut self, perm: &[usize]) {
        self.inner.permute_columns(perm);
        self.row0 = perm.iter().map(|&p| self.row0[p]).collect();
    }

    /// Permute Rows 2..m together with their Column-0 marks; Row 1 stays.
    /// `perm` has length `m - 1` and indexes Rows 2..m.
    pub fn permute_lower_rows(&mut self, perm: &[usize]) {
        let mut full = vec![0];
        full.extend(perm.iter().map(|&p| p + 1));
        self.inner.permute_rows(&full);
        self.col0 = perm.iter().map(|&p| self.col0[p]).collect();
    }

    /// Sort columns and rows so every face-up mark sits at its own index.
    pub fn sort_by_marks(&mut self) -> Result<()> {
        let col_perm = mark_order(&self.row0, 1)?;
        let row_perm = mark_order(&self.col0, 2)?;
        self.permute_columns(&col_perm);
        self.permute_lower_rows(&row_perm);
        Ok(())
    }
}

/// Permutation that brings face-up marks `base..` into ascending order.
pub(crate) fn mark_order(marks: &[Card], base: usize) -> Result<Vec<usize>> {
    let mut perm = vec![usize::MAX; marks.len()];
    for (pos, card) in marks.iter().enumerate() {
        match card.visible() {
            Some(Symbol::Mark(i)) if (i as usize) >= base && (i as usize) - base < marks.len() => {
                perm[i as usize - base] = pos;
            }
            Some(_) => return Err(Error::Misuse("unexpected card among marking cards".into())),
            None => return Err(Error::Misuse("marking cards must be face up to sort".into())),
        }
    }
    if perm.contains(&usize::MAX) {
        return Err(Error::Misuse("duplicate marking card".into()));
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Symbol::{Club as C, Heart as H};

    #[test]
    fn printed_encodings() {
        assert_eq!(encode(0, 3).unwrap().symbols(), vec![H, C, C]);
        assert_eq!(encode(2, 4).unwrap().symbols(), vec![C, C, H, C]);
        assert_eq!(encode(0, 1).unwrap().symbols(), vec![H]);
        assert!(encode(3, 3).is_err());
        assert!(encode(0, 0).is_err());
        assert!(encode(0, 3).unwrap().cards().iter().all(|c| !c.is_face_up()));
    }

    #[test]
    fn decode_rejects_malformed() {
        assert_eq!(decode(&Sequence::from_symbols(&[C, C, H, C]).unwrap()).unwrap(), 2);
        assert_eq!(decode(&Sequence::from_symbols(&[C, C]).unwrap()), Err(Error::MalformedSequence { hearts: 0 }));
        assert_eq!(decode(&Sequence::from_symbols(&[H, H]).unwrap()), Err(Error::MalformedSequence { hearts: 2 }));
        assert!(Sequence::from_symbols(&[C, Symbol::Mark(1)]).is_err());
    }

    #[test]
    fn reverse_tail_negates() {
        // Oracle: hand-enumerated reversals for k = 3 and k = 4.
        let r = |x, k| decode(&reverse_tail(encode(x, k).unwrap())).unwrap();
        assert_eq!(r(1, 3), 2);
        assert_eq!(r(2, 3), 1);
        assert_eq!(r(0, 5), 0);
        assert_eq!(r(2, 4), 2);
        assert_eq!(r(1, 4), 3);
    }

    #[test]
    fn turning_cards() {
        let mut t = Transcript::default();
        let mut seq = Sequence::from_symbols(&[H, C]).unwrap();
        assert_eq!(seq.view(), vec![None, None]);
        turn_over(seq.cards_mut(), "x", &mut t);
        turn_over(seq.cards_mut(), "x", &mut t);
        assert_eq!(t.events(), &[Event::reveal("x", vec![H, C])]);
        assert_eq!(seq.view(), vec![Some(H), Some(C)]);
        turn_down(seq.cards_mut());
        assert_eq!(t.len(), 1);
        assert!(seq.cards().iter().all(|c| c.facing() == Facing::Down));
    }

    #[test]
    fn enhanced_matrix_marks() {
        let m = CardMatrix::new(vec![encode(0, 5).unwrap(); 4]).unwrap();
        let e = EnhancedMatrix::new(m);
        let r0: Vec<_> = e.row0().iter().map(|c| c.symbol()).collect();
        let c0: Vec<_> = e.col0().iter().map(|c| c.symbol()).collect();
        assert_eq!(r0, (1..=5).map(Symbol::Mark).collect::<Vec<_>>());
        assert_eq!(c0, (2..=4).map(Symbol::Mark).collect::<Vec<_>>());
    }

    proptest! {
        #[test]
        fn encode_decode_roundtrip(k in 1usize..=16, x in 0usize..16) {
            prop_assume!(x < k);
            prop_assert_eq!(decode(&encode(x, k).unwrap()).unwrap(), x);
        }

        #[test]
        fn reverse_tail_is_involution(k in 1usize..=16, x in 0usize..16) {
            prop_assume!(x < k);
            let s = encode(x, k).unwrap();
            let twice = reverse_tail(reverse_tail(s.clone()));
            prop_assert_eq!(twice.symbols(), s.symbols());
            let once = reverse_tail(s);
            prop_assert_eq!(decode(&once).unwrap(), (k - x) % k);
        }
    }
}
