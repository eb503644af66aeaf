//! Pile-shifting shuffle, double-scramble shuffle and rearrangement on
//! in-memory matrices. The protocol engine applies the same operations to
//! its position arena; these functions are the direct, value-level form.

use crate::card::{turn_down, turn_over, CardMatrix, EnhancedMatrix};
use crate::error::{misuse, Result};
use crate::random::RandomSource;
use crate::transcript::Transcript;

/// Cyclically shift the columns right by a hidden uniform amount.
pub fn pile_shift(m: &mut CardMatrix, rs: &mut dyn RandomSource) -> Result<()> {
    if !m.all_face_down() {
        return misuse("pile-shifting shuffle on a face-up card");
    }
    let r = rs.draw(m.cols());
    m.rotate_right(r);
    Ok(())
}

/// Pile-shifting shuffle on an enhanced matrix; Row-0 marks move with
/// their columns.
pub fn pile_shift_enhanced(e: &mut EnhancedMatrix, rs: &mut dyn RandomSource) -> Result<()> {
    if !e.all_face_down() {
        return misuse("pile-shifting shuffle on a face-up card");
    }
    let k = e.inner().cols();
    let r = rs.draw(k);
    let perm: Vec<usize> = (0..k).map(|i| (i + k - r) % k).collect();
    e.permute_columns(&perm);
    Ok(())
}

/// Uniformly permute Columns 1..k, then Rows 2..m, marks attached.
pub fn double_scramble(e: &mut EnhancedMatrix, rs: &mut dyn RandomSource) -> Result<()> {
    if !e.all_face_down() {
        return misuse("double-scramble shuffle on a face-up card");
    }
    let cols = rs.draw_permutation(e.inner().cols());
    e.permute_columns(&cols);
    let rows = rs.draw_permutation(e.inner().rows() - 1);
    e.permute_lower_rows(&rows);
    Ok(())
}

/// Shuffle, then reveal the marks and sort back to the original order.
/// Mark reveals go to `transcript` under `tag`.
pub fn rearrange(e: &mut EnhancedMatrix, rs: &mut dyn RandomSource, transcript: &mut Transcript, tag: &str) -> Result<()> {
    double_scramble(e, rs)?;
    turn_over(e.row0_mut(), &format!("{tag}/row0"), transcript);
    turn_over(e.col0_mut(), &format!("{tag}/col0"), transcript);
    e.sort_by_marks()?;
    turn_down(e.row0_mut());
    turn_down(e.col0_mut());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::{decode, encode, Symbol};
    use crate::random::{enumerate, SeededSource};
    use crate::transcript::Event;
    use proptest::prelude::*;

    fn matrix(values: &[usize], k: usize) -> CardMatrix {
        CardMatrix::new(values.iter().map(|&v| encode(v, k).unwrap()).collect()).unwrap()
    }

    fn values(m: &CardMatrix) -> Vec<usize> {
        m.clone().into_rows().iter().map(|r| decode(r).unwrap()).collect()
    }

    #[test]
    fn pile_shift_single_column_is_identity() {
        let m = matrix(&[0, 0], 1);
        for (out, _) in enumerate(|rs| {
            let mut x = m.clone();
            pile_shift(&mut x, rs).unwrap();
            x
        }) {
            assert_eq!(out, m);
        }
    }

    #[test]
    fn pile_shift_outcomes() {
        let m = matrix(&[0, 1], 3);
        let leaves = enumerate(|rs| {
            let mut x = m.clone();
            pile_shift(&mut x, rs).unwrap();
            values(&x)
        });
        // Oracle: rotating right by r adds r to every row.
        let expect: Vec<Vec<usize>> = (0..3).map(|r| vec![r, (1 + r) % 3]).collect();
        assert_eq!(leaves.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>(), expect);
        assert!(leaves.iter().all(|(_, p)| (p - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn face_up_shuffle_is_misuse() {
        let mut m = matrix(&[0, 1], 3);
        turn_over(m.row_cards_mut(0), "x", &mut Transcript::default());
        assert!(pile_shift(&mut m, &mut SeededSource::new(0)).is_err());
    }

    #[test]
    fn double_scramble_counts_outcomes() {
        let e = EnhancedMatrix::new(matrix(&[0, 1, 0], 2));
        let leaves = enumerate(|rs| {
            let mut x = e.clone();
            double_scramble(&mut x, rs).unwrap();
            x
        });
        assert_eq!(leaves.len(), 4);
        let tiny = EnhancedMatrix::new(matrix(&[0, 0], 1));
        for (out, _) in enumerate(|rs| {
            let mut x = tiny.clone();
            double_scramble(&mut x, rs).unwrap();
            x
        }) {
            assert_eq!(out, tiny);
        }
    }

    #[test]
    fn marks_stay_attached() {
        let e = EnhancedMatrix::new(matrix(&[0, 1, 2], 3));
        for (x, _) in enumerate(|rs| {
            let mut x = e.clone();
            double_scramble(&mut x, rs).unwrap();
            x
        }) {
            // Cell (r, c) holds original cell (row under its mark, column under its mark).
            let col_of = |c: usize| match x.row0()[c].symbol() {
                Symbol::Mark(i) => i as usize - 1,
                _ => panic!(),
            };
            let row_of = |r: usize| match r {
                0 => 0,
                _ => match x.col0()[r - 1].symbol() {
                    Symbol::Mark(i) => i as usize - 1,
                    _ => panic!(),
                },
            };
            for r in 0..3 {
                for c in 0..3 {
                    assert_eq!(x.inner().row(r).cards()[c], e.inner().row(row_of(r)).cards()[col_of(c)]);
                }
            }
        }
    }

    #[test]
    fn rearrange_restores() {
        let e = EnhancedMatrix::new(matrix(&[0, 3, 4, 1], 5));
        for seed in 0..100 {
            let mut x = e.clone();
            let mut t = Transcript::default();
            rearrange(&mut x, &mut SeededSource::new(seed), &mut t, "nc").unwrap();
            assert_eq!(x, e);
            assert_eq!(t.len(), 2);
        }
    }

    #[test]
    fn row0_reveal_is_uniform() {
        // Chi-square goodness of fit over the 24 orders of k = 4 marks.
        let e = EnhancedMatrix::new(matrix(&[0, 1], 4));
        let mut counts = std::collections::HashMap::new();
        let mut rs = SeededSource::new(11);
        let n = 10_000;
        for _ in 0..n {
            let mut x = e.clone();
            let mut t = Transcript::default();
            rearrange(&mut x, &mut rs, &mut t, "nc").unwrap();
            let Event::Reveal { symbols, .. } = &t.events()[0] else { panic!() };
            *counts.entry(symbols.clone()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 24);
        let expected = n as f64 / 24.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let p = crate::audit::chi_square_sf(chi2, 23.0);
        assert!(p > 0.001, "chi2 = {chi2}, p = {p}");
    }

    proptest! {
        #[test]
        fn pile_shift_preserves_equality_pattern(vals in proptest::collection::vec(0usize..4, 1..5), seed: u64) {
            let mut m = matrix(&vals, 4);
            pile_shift(&mut m, &mut SeededSource::new(seed)).unwrap();
            let out = values(&m);
            for i in 0..vals.len() {
                for j in 0..vals.len() {
                    prop_assert_eq!(vals[i] == vals[j], out[i] == out[j]);
                }
            }
        }

        #[test]
        fn double_scramble_preserves_multisets(vals in proptest::collection::vec(0usize..3, 2..5), seed: u64) {
            let e = EnhancedMatrix::new(matrix(&vals, 3));
            let mut x = e.clone();
            double_scramble(&mut x, &mut SeededSource::new(seed)).unwrap();
            // Undo the column permutation, then compare lower-row multisets.
            let perm: Vec<usize> = (1..=3u8)
                .map(|i| x.row0().iter().position(|c| c.symbol() == Symbol::Mark(i)).unwrap())
                .collect();
            let mut y = x.inner().clone();
            y.permute_columns(&perm);
            let mut a = values(e.inner())[1..].to_vec();
            let mut b = values(&y)[1..].to_vec();
            prop_assert_eq!(values(e.inner())[0], values(&y)[0]);
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
