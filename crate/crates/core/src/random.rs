//! Randomness for shuffles: seeded draws or exhaustive enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One draw: a value in `0..range`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Draw {
    pub range: usize,
    pub value: usize,
}

/// Source of uniform draws. Outcomes belong to the engine; no actor reads
/// them and they never reach a transcript.
pub trait RandomSource {
    /// Uniform value in `0..range`. `range` must be positive.
    fn draw(&mut self, range: usize) -> usize;

    /// Uniform permutation of `0..n` (Fisher-Yates over [`Self::draw`]).
    fn draw_permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.draw(i + 1);
            perm.swap(i, j);
        }
        perm
    }
}

/// Reproducible pseudo-random draws.
#[derive(Clone, Debug)]
pub struct SeededSource {
    rng: ChaCha8Rng,
    log: Vec<Draw>,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        SeededSource { rng: ChaCha8Rng::seed_from_u64(seed), log: Vec::new() }
    }

    pub fn log(&self) -> &[Draw] {
        &self.log
    }
}

impl RandomSource for SeededSource {
    fn draw(&mut self, range: usize) -> usize {
        assert!(range > 0, "draw from an empty range");
        let value = self.rng.gen_range(0..range);
        self.log.push(Draw { range, value });
        value
    }
}

/// Replays a prescribed outcome path, extending it with zeros.
/// Driven by [`enumerate`] to visit every leaf of the draw tree.
#[derive(Clone, Debug, Default)]
pub struct EnumeratedSource {
    path: Vec<usize>,
    log: Vec<Draw>,
}

impl EnumeratedSource {
    fn with_path(path: Vec<usize>) -> Self {
        EnumeratedSource { path, log: Vec::new() }
    }

    pub fn log(&self) -> &[Draw] {
        &self.log
    }

    /// Probability of the leaf reached so far.
    pub fn probability(&self) -> f64 {
        self.log.iter().map(|d| 1.0 / d.range as f64).product()
    }

    /// Path of the next leaf in depth-first order, if any.
    fn next_path(&self) -> Option<Vec<usize>> {
        let mut log = self.log.clone();
        while let Some(last) = log.pop() {
            if last.value + 1 < last.range {
                let mut path: Vec<usize> = log.iter().map(|d| d.value).collect();
                path.push(last.value + 1);
                return Some(path);
            }
        }
        None
    }
}

impl RandomSource for EnumeratedSource {
    fn draw(&mut self, range: usize) -> usize {
        assert!(range > 0, "draw from an empty range");
        let value = self.path.get(self.log.len()).copied().unwrap_or(0);
        assert!(value < range, "enumeration path inconsistent with draw ranges");
        self.log.push(Draw { range, value });
        value
    }
}

/// Run `f` once per leaf of its draw tree, returning each result with the
/// leaf probability. `f` must make the same draws given the same outcomes.
pub fn enumerate<T>(mut f: impl FnMut(&mut EnumeratedSource) -> T) -> Vec<(T, f64)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    loop {
        let mut src = EnumeratedSource::with_path(path);
        let value = f(&mut src);
        out.push((value, src.probability()));
        match src.next_path() {
            Some(next) => path = next,
            None => return out,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn seeded_is_reproducible() {
        let mut a = SeededSource::new(7);
        let mut b = SeededSource::new(7);
        let xs: Vec<_> = (0..20).map(|_| a.draw(5)).collect();
        let ys: Vec<_> = (0..20).map(|_| b.draw(5)).collect();
        assert_eq!(xs, ys);
        assert_eq!(a.log().len(), 20);
    }

    #[test]
    fn enumeration_covers_tree() {
        let leaves = enumerate(|rs| {
            let a = rs.draw(2);
            let b = if a == 0 { rs.draw(3) } else { 0 };
            (a, b)
        });
        let values: Vec<_> = leaves.iter().map(|(v, _)| *v).collect();
        assert_eq!(values, vec![(0, 0), (0, 1), (0, 2), (1, 0)]);
        let total: f64 = leaves.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((leaves[3].1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn permutations_are_uniform() {
        let leaves = enumerate(|rs| rs.draw_permutation(4));
        assert_eq!(leaves.len(), 24);
        let distinct: HashSet<_> = leaves.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(distinct.len(), 24);
        assert!(leaves.iter().all(|(_, p)| (p - 1.0 / 24.0).abs() < 1e-12));
    }
}
