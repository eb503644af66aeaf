//! The connected spanning subgraph protocol.
//!
//! The prover commits a hidden edge set `H` as one `Z/2Z` sequence `B(e)`
//! per edge, then for every `i < n` proves a path from `v_i` to `v_n`
//! inside `H`. Each vertex keeps a public blank sequence `A_0(v)` encoding
//! `d + 2`; per round the prover places `A_1(v)`. When checking vertex `v`,
//! every neighbor row is selected by `B(e)` between the neighbor's `A_0`
//! (edge not in `H`) and `A_1` (edge in `H`).

use std::collections::{BTreeMap, HashSet};

use crate::card::{encoding_pattern, Symbol};
use crate::engine::{run, PlacementKey, Pos, Program, ProgramBuilder, ProverScript, RunOutcome};
use crate::error::Result;
use crate::graph::{edge, greedy_coloring, Coloring, Edge, Graph};
use crate::random::RandomSource;
use crate::subprotocols::{neighbor_count, restore, select};

/// Card counts from the closed-form bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CardBudget {
    pub encoding: usize,
    pub marking: usize,
}

/// `2(d+3)(2n+2) + 2d + 2m` encoding cards and `2d + 5` marking cards.
pub fn card_budget(g: &Graph) -> CardBudget {
    let (n, m, d) = (g.n(), g.m(), g.max_degree());
    CardBudget { encoding: 2 * (d + 3) * (2 * n + 2) + 2 * d + 2 * m, marking: 2 * d + 5 }
}

/// Positions of every `B(e)`.
pub type Commitment = BTreeMap<Edge, Vec<Pos>>;

/// Prover placement of `B(e)` on every edge.
pub fn commit_subgraph(b: &mut ProgramBuilder, g: &Graph) -> Commitment {
    g.edges().iter().map(|&(u, v)| ((u, v), b.prover_place(2, PlacementKey::Edge { u, v }))).collect()
}

/// Append the `n - 1` verification rounds over existing commitments.
/// Consumes nothing: every `B(e)` is back in place afterwards.
pub fn verification_rounds(b: &mut ProgramBuilder, g: &Graph, coloring: &Coloring, commit: &Commitment) {
    let n = g.n();
    let k = g.max_degree() + 3;
    let blank = encoding_pattern(k - 1, k).unwrap();
    let a0: Vec<Vec<Pos>> = (0..=n).map(|v| if v == 0 { Vec::new() } else { b.place(blank.clone()) }).collect();
    for round in 1..n {
        let terminal = |v: usize| v == round || v == n;
        let a1: Vec<Vec<Pos>> = (0..=n)
            .map(|v| match v {
                0 => Vec::new(),
                v if terminal(v) => b.place(encoding_pattern(0, k).unwrap()),
                v => b.prover_place(k, PlacementKey::Round { round, vertex: v }),
            })
            .collect();
        for v in 1..=n {
            let ctx = format!("r{round}/v{v}");
            let sels: Vec<_> = g
                .neighbors(v)
                .iter()
                .map(|&w| select(b, &format!("{ctx}/n{w}"), &[a0[w].clone(), a1[w].clone()], &commit[&edge(v, w)]))
                .collect();
            let color = coloring.color(v);
            let art: Vec<Vec<Pos>> = (0..2).map(|_| b.place(encoding_pattern(color, k).unwrap())).collect();
            let mut rows = vec![a1[v].clone()];
            rows.extend(sels.iter().map(|s| s.staged.clone()));
            rows.extend(art.iter().cloned());
            neighbor_count(b, &ctx, &rows, Some(if terminal(v) { 1 } else { 2 }));
            for a in &art {
                b.discard(a);
            }
            for sel in sels {
                restore(b, sel);
            }
        }
        for seq in &a1[1..] {
            b.discard(seq);
        }
    }
    for seq in &a0[1..] {
        b.discard(seq);
    }
}

/// The compiled spanning protocol for a public graph.
#[derive(Clone, Debug)]
pub struct SpanningProtocol {
    pub graph: Graph,
    pub coloring: Coloring,
    pub program: Program,
}

impl SpanningProtocol {
    pub fn new(g: &Graph) -> Self {
        let coloring = greedy_coloring(g);
        let mut b = ProgramBuilder::new();
        let commit = commit_subgraph(&mut b, g);
        verification_rounds(&mut b, g, &coloring, &commit);
        SpanningProtocol { graph: g.clone(), coloring, program: b.finish() }
    }

    /// Placements of an honest prover holding `h`.
    pub fn honest_script(&self, h: &[Edge]) -> Result<ProverScript> {
        let prover = HonestProver::new(&self.graph, &self.coloring, h)?;
        ProverScript::build(&self.program, |key, len| prover.place(key, len))
    }

    pub fn run(&self, script: &ProverScript, rs: &mut dyn RandomSource) -> Result<RunOutcome> {
        run(&self.program, script, rs)
    }
}

/// The honest prover's placement rule, shared by every application.
#[derive(Clone, Debug)]
pub struct HonestProver {
    graph: Graph,
    coloring: Coloring,
    h: Graph,
    in_h: HashSet<Edge>,
}

impl HonestProver {
    pub fn new(g: &Graph, coloring: &Coloring, h: &[Edge]) -> Result<Self> {
        let hg = g.subgraph(h)?;
        Ok(HonestProver {
            graph: g.clone(),
            coloring: coloring.clone(),
            in_h: hg.edges().iter().copied().collect(),
            h: hg,
        })
    }

    /// Path marked in round `round`: a shortest `v_round`-`v_n` path in
    /// `H`, or, with no such path, a shortest path from `v_round` to the
    /// furthest vertex it reaches.
    pub fn round_path(&self, round: usize) -> Vec<usize> {
        let n = self.graph.n();
        if let Some(p) = self.h.shortest_path(round, n) {
            return p;
        }
        (1..=n)
            .filter_map(|v| self.h.shortest_path(round, v))
            .max_by_key(|p| p.len())
            .unwrap_or_else(|| vec![round])
    }

    pub fn place(&self, key: &PlacementKey, len: usize) -> Vec<Symbol> {
        match key {
            PlacementKey::Edge { u, v } => encoding_pattern(self.in_h.contains(&(*u, *v)) as usize, 2).unwrap(),
            PlacementKey::Round { round, vertex } => {
                let x = if self.round_path(*round).contains(vertex) { 0 } else { self.coloring.color(*vertex) };
                encoding_pattern(x, len).unwrap()
            }
            _ => vec![Symbol::Club; len],
        }
    }
}

/// Run the protocol once with an honest prover holding `h`.
pub fn verify_connected_spanning(g: &Graph, h: &[Edge], rs: &mut dyn RandomSource) -> Result<RunOutcome> {
    let proto = SpanningProtocol::new(g);
    let script = proto.honest_script(h)?;
    proto.run(&script, rs)
}
