//! The card engine: programs, their shared step semantics, and three
//! executors (seeded runs, exact verdict enumeration, and exact transcript
//! exploration).

mod enumerate;
mod explore;
mod program;
mod run;
mod state;
mod step;

use std::sync::OnceLock;

pub use enumerate::{VerdictDistribution, VerdictEnumerator};
pub use explore::{compare_processes, transcript_distribution, Comparison, Process, TranscriptDistribution};
pub use program::{
    CheckId, Grid, Instr, PlacementKey, Pos, PosSet, Program, ProgramBuilder, ProverScript, Reg, Region, RevealKind, TagId,
};
pub use run::{run, RunOutcome, Usage, Verdict};
pub use state::State;

const MAX_PERM: usize = 10;

/// All permutations of `0..n` in lexicographic order, cached.
pub(crate) fn permutations(n: usize) -> &'static [Vec<u8>] {
    static CACHE: [OnceLock<Vec<Vec<u8>>>; MAX_PERM + 1] = [const { OnceLock::new() }; MAX_PERM + 1];
    assert!(n <= MAX_PERM, "permutation table limited to n <= {MAX_PERM}");
    CACHE[n].get_or_init(|| {
        let mut out = Vec::new();
        let mut p: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(p.clone());
            // Next lexicographic permutation.
            let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
            let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_table() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(3), &[vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]);
        assert_eq!(permutations(6).len(), 720);
    }
}
