//! The prover side: the only code that reads witness files. It turns a
//! witness into placements for a public program.

use std::path::Path;

use anyhow::{bail, Context, Result};
use cardzkp::apps::bridges::{solve_bridges, BridgesProtocol, BridgesSolution};
use cardzkp::apps::hamiltonian::HamiltonianProtocol;
use cardzkp::apps::maxleaf::MaxLeafProtocol;
use cardzkp::graph::{parse_subgraph, Edge};
use cardzkp::spanning::SpanningProtocol;
use cardzkp::ProverScript;

fn read_subgraph(path: &Path) -> Result<Vec<Edge>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_subgraph(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn spanning(proto: &SpanningProtocol, witness: Option<&Path>) -> Result<ProverScript> {
    let h = match witness {
        Some(p) => read_subgraph(p)?,
        None if proto.graph.is_connected() => proto.graph.edges().to_vec(),
        None => bail!("the graph is disconnected, so there is no witness to default to"),
    };
    Ok(proto.honest_script(&h)?)
}

pub fn hamiltonian(proto: &HamiltonianProtocol, witness: Option<&Path>) -> Result<ProverScript> {
    let Some(p) = witness else { bail!("a Hamiltonian cycle witness file is required") };
    Ok(proto.honest_script(&read_subgraph(p)?)?)
}

pub fn max_leaf(proto: &MaxLeafProtocol, witness: Option<&Path>) -> Result<ProverScript> {
    let Some(p) = witness else { bail!("a spanning subgraph witness file is required") };
    Ok(proto.honest_script(&read_subgraph(p)?)?)
}

pub fn bridges(proto: &BridgesProtocol, witness: Option<&Path>) -> Result<ProverScript> {
    let sol = match witness {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            BridgesSolution::parse(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => match solve_bridges(&proto.instance)? {
            Some(s) => s,
            None => bail!("the puzzle has no solution to default to"),
        },
    };
    Ok(proto.honest_script(&sol)?)
}
