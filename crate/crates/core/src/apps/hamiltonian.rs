//! Hamiltonian cycle: `H` is connected spanning and every vertex has
//! degree two in `H`.

use crate::engine::{run, Instr, PosSet, Program, ProgramBuilder, ProverScript, RevealKind, RunOutcome};
use crate::error::Result;
use crate::graph::{Coloring, Edge, Graph};
use crate::random::RandomSource;
use crate::spanning::HonestProver;

use super::{incident_cards, spanning_with_copies};

#[derive(Clone, Debug)]
pub struct HamiltonianProtocol {
    pub graph: Graph,
    pub coloring: Coloring,
    pub program: Program,
}

impl HamiltonianProtocol {
    pub fn new(g: &Graph) -> Self {
        let mut b = ProgramBuilder::new();
        let (coloring, copies) = spanning_with_copies(&mut b, g);
        for v in 1..=g.n() {
            let cards = incident_cards(v, &copies);
            b.push(Instr::ScrambleCards { pos: cards.clone() });
            b.turn_over(PosSet::Fixed(cards.clone()), &format!("ham/v{v}"), RevealKind::Arrangement { clubs: 2, total: cards.len() });
            let check = b.check(format!("ham: vertex {v} does not have degree 2"));
            b.push(Instr::ExpectClubs { pos: cards, count: 2, check });
        }
        for (_, seqs) in &copies {
            for s in seqs {
                b.discard(s);
            }
        }
        HamiltonianProtocol { graph: g.clone(), coloring, program: b.finish() }
    }

    pub fn honest_script(&self, h: &[Edge]) -> Result<ProverScript> {
        let prover = HonestProver::new(&self.graph, &self.coloring, h)?;
        ProverScript::build(&self.program, |key, len| prover.place(key, len))
    }
}

/// Run once with an honest prover holding the claimed cycle `h`.
pub fn verify_hamiltonian(g: &Graph, h: &[Edge], rs: &mut dyn RandomSource) -> Result<RunOutcome> {
    let proto = HamiltonianProtocol::new(g);
    let script = proto.honest_script(h)?;
    run(&proto.program, &script, rs)
}

/// Oracle predicate: `h` is a connected spanning 2-regular subgraph.
pub fn is_hamiltonian_cycle(g: &Graph, h: &[Edge]) -> Result<bool> {
    let hg = g.subgraph(h)?;
    Ok(hg.is_connected() && (1..=g.n()).all(|v| hg.degree(v) == 2))
}
