//! Maximum-leaf spanning tree: `H` is connected spanning and at least `k`
//! vertices have degree one in `H`.

use crate::card::Symbol;
use crate::engine::{run, Instr, Program, ProgramBuilder, ProverScript, RunOutcome};
use crate::error::{Error, Result};
use crate::graph::{Coloring, Edge, Graph};
use crate::random::RandomSource;
use crate::spanning::HonestProver;

use super::{incident_cards, spanning_with_copies};

#[derive(Clone, Debug)]
pub struct MaxLeafProtocol {
    pub graph: Graph,
    pub coloring: Coloring,
    pub k: usize,
    pub program: Program,
}

impl MaxLeafProtocol {
    pub fn new(g: &Graph, k: usize) -> Result<Self> {
        if k > u8::MAX as usize {
            return Err(Error::Domain(format!("leaf threshold {k} is too large")));
        }
        let d = g.max_degree();
        let mut b = ProgramBuilder::new();
        let (coloring, copies) = spanning_with_copies(&mut b, g);
        // One envelope per vertex, padded with hearts to d cards.
        let mut envelopes = Vec::new();
        for v in 1..=g.n() {
            let mut cards = incident_cards(v, &copies);
            let padding = b.place(vec![Symbol::Heart; d - cards.len()]);
            cards.extend(padding);
            b.push(Instr::ScrambleCards { pos: cards.clone() });
            envelopes.push(cards);
        }
        b.push(Instr::ScrambleBlocks { blocks: envelopes.clone() });
        let counter = b.reg();
        for (i, env) in envelopes.iter().enumerate() {
            let tag = b.tag(&format!("leaf/envelope{}", i + 1));
            let check = b.check(format!("leaf: envelope {} opened without exactly one club", i + 1));
            b.push(Instr::ProverOpenEnvelope { pos: env.clone(), tag, counter, check });
        }
        let check = b.check(format!("leaf: fewer than {k} envelopes with one club"));
        b.push(Instr::ExpectAtLeast { reg: counter, value: k as u8, check });
        b.free_reg(counter);
        for env in &envelopes {
            b.discard(env);
        }
        for (_, seqs) in &copies {
            b.discard(&seqs[0][1..]);
            b.discard(&seqs[1][1..]);
        }
        Ok(MaxLeafProtocol { graph: g.clone(), coloring, k, program: b.finish() })
    }

    pub fn honest_script(&self, h: &[Edge]) -> Result<ProverScript> {
        let prover = HonestProver::new(&self.graph, &self.coloring, h)?;
        ProverScript::build(&self.program, |key, len| prover.place(key, len))
    }
}

/// Run once with an honest prover holding `h`.
pub fn verify_max_leaf(g: &Graph, k: usize, h: &[Edge], rs: &mut dyn RandomSource) -> Result<RunOutcome> {
    let proto = MaxLeafProtocol::new(g, k)?;
    let script = proto.honest_script(h)?;
    run(&proto.program, &script, rs)
}

/// Oracle predicate: `h` is connected spanning with at least `k` leaves.
pub fn has_leafy_spanning(g: &Graph, h: &[Edge], k: usize) -> Result<bool> {
    let hg = g.subgraph(h)?;
    Ok(hg.is_connected() && hg.leaves() >= k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::VerdictEnumerator;
    use crate::random::SeededSource;

    #[test]
    fn star_and_path() {
        let star = Graph::star(3);
        let proto = MaxLeafProtocol::new(&star, 3).unwrap();
        let script = proto.honest_script(star.edges()).unwrap();
        assert!(VerdictEnumerator::new().run(&proto.program, &script).unwrap().always_accepts());

        let p4 = Graph::path(4);
        let out = verify_max_leaf(&p4, 3, p4.edges(), &mut SeededSource::new(1)).unwrap();
        assert!(!out.verdict.is_accept());
        let out = verify_max_leaf(&p4, 2, p4.edges(), &mut SeededSource::new(1)).unwrap();
        assert!(out.verdict.is_accept());
    }

    #[test]
    fn zero_threshold_follows_spanning() {
        let g = Graph::cycle(4);
        let mut rs = SeededSource::new(5);
        assert!(verify_max_leaf(&g, 0, &g.edges()[..3], &mut rs).unwrap().verdict.is_accept());
        assert!(!verify_max_leaf(&g, 0, &g.edges()[..2], &mut rs).unwrap().verdict.is_accept());
    }

    #[test]
    fn not_simulatable() {
        let proto = MaxLeafProtocol::new(&Graph::path(2), 1).unwrap();
        assert!(matches!(proto.program.simulator(), Err(Error::NotSimulatable(_))));
    }
}
