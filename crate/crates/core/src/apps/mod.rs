//! Applications built on the spanning protocol.

pub mod bridges;
pub mod hamiltonian;
pub mod maxleaf;

use crate::engine::{Pos, ProgramBuilder};
use crate::graph::{greedy_coloring, Coloring, Edge, Graph};
use crate::spanning::{commit_subgraph, verification_rounds};
use crate::subprotocols::copy;

/// Commit `H`, run the spanning rounds, then copy every `B(e)` once.
/// Returns the coloring and, per edge, its two copies.
pub(crate) fn spanning_with_copies(b: &mut ProgramBuilder, g: &Graph) -> (Coloring, Vec<(Edge, Vec<Vec<Pos>>)>) {
    let coloring = greedy_coloring(g);
    let commit = commit_subgraph(b, g);
    verification_rounds(b, g, &coloring, &commit);
    let copies = commit.into_iter().map(|(e, seq)| (e, copy(b, &format!("copy/{}-{}", e.0, e.1), seq, 1))).collect();
    (coloring, copies)
}

/// Leftmost card of the copy reserved for `v`: copy 0 at the smaller
/// endpoint, copy 1 at the larger. A club there means the edge is in `H`.
pub(crate) fn incident_cards(v: usize, copies: &[(Edge, Vec<Vec<Pos>>)]) -> Vec<Pos> {
    copies
        .iter()
        .filter_map(|((a, c), seqs)| match v {
            v if v == *a => Some(seqs[0][0]),
            v if v == *c => Some(seqs[1][0]),
            _ => None,
        })
        .collect()
}
