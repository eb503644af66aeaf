use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cardzkp::apps::bridges::{BridgesInstance, BridgesProtocol};
use cardzkp::apps::hamiltonian::HamiltonianProtocol;
use cardzkp::apps::maxleaf::MaxLeafProtocol;
use cardzkp::audit::{self, Invocation};
use cardzkp::engine::{run, VerdictEnumerator};
use cardzkp::spanning::{card_budget, SpanningProtocol};
use cardzkp::{Graph, Program, ProverScript, SeededSource};

mod prover;

/// Largest graphs verified in enumerated mode.
const ENUMERATED_MAX_VERTICES: usize = 8;
const ENUMERATED_MAX_ISLANDS: usize = 16;

#[derive(Parser)]
#[command(name = "cardzkp", version, about = "Card-based zero-knowledge proofs for connected spanning subgraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove that a hidden subgraph is connected and spanning.
    VerifySpanning {
        graph: PathBuf,
        subgraph: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Prove that a hidden subgraph is a Hamiltonian cycle.
    VerifyHamiltonian {
        graph: PathBuf,
        subgraph: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Prove that a hidden connected spanning subgraph has at least k leaves.
    VerifyMaxleaf {
        graph: PathBuf,
        subgraph: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Prove knowledge of a Bridges solution.
    VerifyBridges {
        grid: PathBuf,
        solution: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare real transcripts with simulated ones.
    AuditZk {
        #[arg(value_enum)]
        protocol: Protocol,
        /// Graph file, or grid file for bridges.
        instance: PathBuf,
        /// Witness file; spanning defaults to all edges, bridges to a solved puzzle.
        witness: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = AuditMode::Exact)]
        mode: AuditMode,
        #[arg(long, default_value_t = audit::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leaf threshold for maxleaf.
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Print the card counts of the spanning protocol on a graph.
    CardBudget { graph: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = RandomMode::Seeded)]
    mode: RandomMode,
    /// Write the public transcript here (seeded mode).
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomMode {
    Seeded,
    Enumerated,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditMode {
    Exact,
    Statistical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Protocol {
    Spanning,
    Hamiltonian,
    Maxleaf,
    Bridges,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(accepted) => ExitCode::from(if accepted { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_grid(path: &Path) -> Result<BridgesInstance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    BridgesInstance::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn graph_cap(g: &Graph, args: &RunArgs) -> Result<()> {
    if matches!(args.mode, RandomMode::Enumerated) && g.n() > ENUMERATED_MAX_VERTICES {
        bail!("enumerated mode supports at most {ENUMERATED_MAX_VERTICES} vertices, the graph has {}", g.n());
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::VerifySpanning { graph, subgraph, run } => {
            let g = read_graph(&graph)?;
            graph_cap(&g, &run)?;
            let proto = SpanningProtocol::new(&g);
            let script = prover::spanning(&proto, Some(&subgraph))?;
            describe_graph("spanning", &g);
            println!("rounds: {}", g.n().saturating_sub(1));
            verify(&proto.program, &script, &run)
        }
        Command::VerifyHamiltonian { graph, subgraph, run } => {
            let g = read_graph(&graph)?;
            graph_cap(&g, &run)?;
            let proto = HamiltonianProtocol::new(&g);
            let script = prover::hamiltonian(&proto, Some(&subgraph))?;
            describe_graph("hamiltonian", &g);
            verify(&proto.program, &script, &run)
        }
        Command::VerifyMaxleaf { graph, subgraph, k, run } => {
            let g = read_graph(&graph)?;
            graph_cap(&g, &run)?;
            let proto = MaxLeafProtocol::new(&g, k)?;
            let script = prover::max_leaf(&proto, Some(&subgraph))?;
            describe_graph("maxleaf", &g);
            println!("leaf threshold: {k}");
            verify(&proto.program, &script, &run)
        }
        Command::VerifyBridges { grid, solution, run } => {
            let inst = read_grid(&grid)?;
            let islands = inst.islands().len();
            if matches!(run.mode, RandomMode::Enumerated) && islands > ENUMERATED_MAX_ISLANDS {
                bail!("enumerated mode supports at most {ENUMERATED_MAX_ISLANDS} islands, the grid has {islands}");
            }
            let proto = BridgesProtocol::new(&inst)?;
            let script = prover::bridges(&proto, Some(&solution))?;
            println!("protocol: bridges");
            println!("grid: {}x{}, {islands} islands, {} island-graph edges", inst.rows(), inst.cols(), proto.graph.m());
            verify(&proto.program, &script, &run)
        }
        Command::AuditZk { protocol, instance, witness, mode, samples, seed, k } => {
            audit_zk(protocol, &instance, witness.as_deref(), mode, samples, seed, k)
        }
        Command::CardBudget { graph } => {
            let b = card_budget(&read_graph(&graph)?);
            println!("encoding={} marking={}", b.encoding, b.marking);
            Ok(true)
        }
    }
}

fn describe_graph(protocol: &str, g: &Graph) {
    let b = card_budget(g);
    println!("protocol: {protocol}");
    println!("graph: n={} m={} max degree={}", g.n(), g.m(), g.max_degree());
    println!("card budget: encoding={} marking={}", b.encoding, b.marking);
}

fn verify(program: &Program, script: &ProverScript, args: &RunArgs) -> Result<bool> {
    match args.mode {
        RandomMode::Seeded => {
            let out = run(program, script, &mut SeededSource::new(args.seed))?;
            println!("seed: {}", args.seed);
            println!("peak cards: encoding={} marking={}", out.usage.encoding, out.usage.marking);
            println!("transcript events: {}", out.transcript.len());
            if let Some(path) = &args.transcript {
                std::fs::write(path, out.transcript.to_text()).with_context(|| format!("writing {}", path.display()))?;
                println!("transcript: {}", path.display());
            }
            match &out.verdict {
                cardzkp::Verdict::Accept => println!("verdict: accept"),
                cardzkp::Verdict::Reject { check } => println!("verdict: reject ({check})"),
            }
            Ok(out.verdict.is_accept())
        }
        RandomMode::Enumerated => {
            if args.transcript.is_some() {
                bail!("--transcript needs seeded mode");
            }
            let d = VerdictEnumerator::new().run(program, script)?;
            println!("accept probability: {}", d.accept);
            for (check, p) in &d.rejections {
                println!("reject probability {p}: {check}");
            }
            println!("peak states: {}", d.peak_states);
            let accepted = d.always_accepts() && d.accept > 0.0;
            println!("verdict: {}", if accepted { "accept on every leaf" } else { "reject" });
            Ok(accepted)
        }
    }
}

fn audit_zk(
    protocol: Protocol,
    instance: &Path,
    witness: Option<&Path>,
    mode: AuditMode,
    samples: usize,
    seed: u64,
    k: usize,
) -> Result<bool> {
    let exact = matches!(mode, AuditMode::Exact);
    let inv = match protocol {
        Protocol::Bridges => {
            let inst = read_grid(instance)?;
            let proto = BridgesProtocol::new(&inst)?;
            if exact {
                audit::check_exact_cap(&proto.graph)?;
            }
            let script = prover::bridges(&proto, witness)?;
            Invocation::new(proto.program, script)
        }
        graph_protocol => {
            let g = read_graph(instance)?;
            if exact {
                audit::check_exact_cap(&g)?;
            }
            match graph_protocol {
                Protocol::Spanning => {
                    let proto = SpanningProtocol::new(&g);
                    let script = prover::spanning(&proto, witness)?;
                    Invocation::new(proto.program, script)
                }
                Protocol::Hamiltonian => {
                    let proto = HamiltonianProtocol::new(&g);
                    let script = prover::hamiltonian(&proto, witness)?;
                    Invocation::new(proto.program, script)
                }
                _ => {
                    let proto = MaxLeafProtocol::new(&g, k)?;
                    let script = prover::max_leaf(&proto, witness)?;
                    Invocation::new(proto.program, script)
                }
            }
        }
    };
    let real = run(&inv.program, &inv.script, &mut SeededSource::new(seed))?;
    if !real.verdict.is_accept() {
        bail!("the witness does not make the verifier accept, so there is no real transcript distribution to audit");
    }
    if exact {
        let c = audit::audit_exact(&inv)?;
        println!("mode: exact");
        println!("joint nodes: {}", c.nodes);
        println!("max deviation: {:e}", c.max_deviation);
        let equal = c.equal(audit::EXACT_TOLERANCE);
        if let Some(m) = &c.mismatch {
            println!("first mismatch: {m}");
        }
        println!("result: {}", if equal { "indistinguishable" } else { "distinguishable" });
        Ok(equal)
    } else {
        let r = audit::audit_statistical(&inv, samples, seed)?;
        println!("mode: statistical");
        println!("samples per side: {}", r.samples);
        println!("event classes: {}", r.classes.len());
        println!("per-class threshold: {:e}", r.threshold);
        for c in r.classes.iter().filter(|c| c.p_value < r.threshold) {
            println!("class {}: chi2={:.2} dof={} p={:e}", c.tag, c.chi2, c.dof, c.p_value);
        }
        println!("min p-value: {:e}", r.min_p_value());
        println!("result: {}", if r.passed() { "indistinguishable" } else { "distinguishable" });
        Ok(r.passed())
    }
}
