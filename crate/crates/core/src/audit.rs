//! Zero-knowledge audits: real and simulated transcripts, exact and
//! statistical comparison of their distributions.

use std::collections::{BTreeMap, HashMap};

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::engine::{compare_processes, run, transcript_distribution, Process, Program, ProverScript};
use crate::error::{Error, Result};
use crate::par;
use crate::random::{RandomSource, SeededSource};
use crate::transcript::{Event, Transcript};

pub use crate::engine::{Comparison, TranscriptDistribution};

/// Per-transcript (or per-step) probability tolerance for exact checks.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Significance level for statistical checks, before Bonferroni correction.
pub const ALPHA: f64 = 0.001;
/// Default number of sampled runs per side.
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Work bound for exact exploration.
pub const MAX_JOINT_NODES: usize = 5_000_000;
/// Largest graphs the exact audit accepts.
pub const EXACT_MAX_VERTICES: usize = 5;
pub const EXACT_MAX_DEGREE: usize = 3;

/// Refuse exact audits of graphs beyond the size cap.
pub fn check_exact_cap(g: &crate::graph::Graph) -> Result<()> {
    if g.n() > EXACT_MAX_VERTICES || g.max_degree() > EXACT_MAX_DEGREE {
        return Err(Error::Capacity(format!(
            "exact audit supports n <= {EXACT_MAX_VERTICES} and degree <= {EXACT_MAX_DEGREE}, got n = {} and degree {}",
            g.n(),
            g.max_degree()
        )));
    }
    Ok(())
}

/// A protocol program together with an honest prover's placements.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub program: Program,
    pub script: ProverScript,
}

impl Invocation {
    pub fn new(program: Program, script: ProverScript) -> Self {
        Invocation { program, script }
    }

    fn process(&self) -> Process<'_> {
        Process::new(&self.program, &self.script)
    }
}

/// Transcript of one real run.
pub fn run_real(inv: &Invocation, rs: &mut dyn RandomSource) -> Result<Transcript> {
    Ok(run(&inv.program, &inv.script, rs)?.transcript)
}

/// Transcript produced from public information only.
pub fn run_simulator(program: &Program, rs: &mut dyn RandomSource) -> Result<Transcript> {
    let sim = program.simulator()?;
    Ok(run(&sim, &ProverScript::empty(), rs)?.transcript)
}

/// Exact comparison of the real transcript distribution against the
/// simulator's.
pub fn audit_exact(inv: &Invocation) -> Result<Comparison> {
    let sim = inv.program.simulator()?;
    let empty = ProverScript::empty();
    compare_processes(inv.process(), Process::new(&sim, &empty), EXACT_TOLERANCE, false, MAX_JOINT_NODES)
}

/// Like [`audit_exact`] but stops at the first difference.
pub fn audit_exact_fast(inv: &Invocation) -> Result<Comparison> {
    let sim = inv.program.simulator()?;
    let empty = ProverScript::empty();
    compare_processes(inv.process(), Process::new(&sim, &empty), EXACT_TOLERANCE, true, MAX_JOINT_NODES)
}

/// Exact comparison of two real invocations, e.g. the same protocol with
/// two different witnesses.
pub fn compare_real(a: &Invocation, b: &Invocation) -> Result<Comparison> {
    compare_processes(a.process(), b.process(), EXACT_TOLERANCE, false, MAX_JOINT_NODES)
}

/// Full transcript distribution of a small invocation.
pub fn real_distribution(inv: &Invocation, limit: usize) -> Result<TranscriptDistribution> {
    transcript_distribution(inv.process(), limit)
}

/// Full simulated transcript distribution.
pub fn simulated_distribution(program: &Program, limit: usize) -> Result<TranscriptDistribution> {
    let sim = program.simulator()?;
    transcript_distribution(Process::new(&sim, &ProverScript::empty()), limit)
}

/// Outcome of an exact map comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactReport {
    pub max_deviation: f64,
    pub transcripts: usize,
}

impl ExactReport {
    pub fn equal(&self) -> bool {
        self.max_deviation <= EXACT_TOLERANCE
    }
}

/// Compare two transcript maps entry by entry.
pub fn compare_distributions(real: &TranscriptDistribution, sim: &TranscriptDistribution) -> Result<ExactReport> {
    for d in [real, sim] {
        if (d.total() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("distribution sums to {}", d.total())));
        }
    }
    let skeleton = |d: &TranscriptDistribution| -> Vec<Vec<String>> {
        let mut s: Vec<Vec<String>> = d.map.keys().map(|t| t.events().iter().map(|e| e.tag().to_string()).collect()).collect();
        s.sort();
        s.dedup();
        s
    };
    if skeleton(real) != skeleton(sim) {
        return Err(Error::Domain("transcripts come from different invocations".into()));
    }
    Ok(ExactReport { max_deviation: real.max_deviation(sim), transcripts: real.map.len().max(sim.map.len()) })
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_sf(x: f64, dof: f64) -> f64 {
    ChiSquared::new(dof).map(|d| d.sf(x)).unwrap_or(1.0)
}

/// Chi-square homogeneity test of one event class.
#[derive(Clone, Debug)]
pub struct ClassResult {
    pub tag: String,
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
}

#[derive(Clone, Debug)]
pub struct StatisticalReport {
    pub samples: usize,
    pub classes: Vec<ClassResult>,
    /// Per-class threshold after Bonferroni correction.
    pub threshold: f64,
}

impl StatisticalReport {
    pub fn passed(&self) -> bool {
        self.classes.iter().all(|c| c.p_value >= self.threshold)
    }

    pub fn min_p_value(&self) -> f64 {
        self.classes.iter().map(|c| c.p_value).fold(1.0, f64::min)
    }
}

fn outcome_key(e: &Event) -> String {
    match e {
        Event::Reveal { symbols, .. } => symbols.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
        Event::Action { .. } => String::new(),
    }
}

/// Two-sample chi-square test per event class (event tag). Bins expected
/// to hold fewer than five observations on either side are pooled.
pub fn compare_samples(real: &[Transcript], sim: &[Transcript], alpha: f64) -> StatisticalReport {
    let mut table: BTreeMap<String, HashMap<String, [usize; 2]>> = BTreeMap::new();
    for (side, set) in [real, sim].into_iter().enumerate() {
        for t in set {
            for e in t.events() {
                table.entry(e.tag().to_string()).or_default().entry(outcome_key(e)).or_default()[side] += 1;
            }
        }
    }
    let mut classes = Vec::new();
    for (tag, bins) in table {
        let totals = bins.values().fold([0usize; 2], |acc, c| [acc[0] + c[0], acc[1] + c[1]]);
        let grand = (totals[0] + totals[1]) as f64;
        if totals[0] == 0 || totals[1] == 0 {
            classes.push(ClassResult { tag, chi2: f64::INFINITY, dof: 1, p_value: 0.0 });
            continue;
        }
        let expected = |c: &[usize; 2], side: usize| (c[0] + c[1]) as f64 * totals[side] as f64 / grand;
        let mut kept: Vec<[usize; 2]> = Vec::new();
        let mut pooled = [0usize; 2];
        for c in bins.values() {
            if expected(c, 0) < 5.0 || expected(c, 1) < 5.0 {
                pooled[0] += c[0];
                pooled[1] += c[1];
            } else {
                kept.push(*c);
            }
        }
        if pooled[0] + pooled[1] > 0 {
            kept.push(pooled);
        }
        if kept.len() < 2 {
            classes.push(ClassResult { tag, chi2: 0.0, dof: 0, p_value: 1.0 });
            continue;
        }
        let chi2: f64 = kept
            .iter()
            .flat_map(|c| (0..2).map(move |s| (c, s)))
            .map(|(c, s)| {
                let e = expected(c, s);
                (c[s] as f64 - e).powi(2) / e
            })
            .sum();
        let dof = kept.len() - 1;
        classes.push(ClassResult { tag, chi2, dof, p_value: chi_square_sf(chi2, dof as f64) });
    }
    let tested = classes.iter().filter(|c| c.dof > 0).count().max(1);
    StatisticalReport { samples: real.len(), threshold: alpha / tested as f64, classes }
}

/// Sample `samples` real and simulated runs and compare them per class.
/// Run `i` of the real side uses seed `seed + i`; the simulator uses an
/// independent stream.
pub fn audit_statistical(inv: &Invocation, samples: usize, seed: u64) -> Result<StatisticalReport> {
    let sim = inv.program.simulator()?;
    let empty = ProverScript::empty();
    let real: Vec<Result<Transcript>> =
        par::map_range(samples, |i| run_real(inv, &mut SeededSource::new(seed.wrapping_add(i as u64))));
    let simulated: Vec<Result<Transcript>> = par::map_range(samples, |i| {
        let mut rs = SeededSource::new(seed.wrapping_add(i as u64) ^ 0x9E37_79B9_7F4A_7C15);
        Ok(run(&sim, &empty, &mut rs)?.transcript)
    });
    let real = real.into_iter().collect::<Result<Vec<_>>>()?;
    let simulated = simulated.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(compare_samples(&real, &simulated, ALPHA))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::Symbol;
    use crate::graph::Graph;
    use crate::spanning::SpanningProtocol;

    fn k2() -> Invocation {
        let g = Graph::path(2);
        let proto = SpanningProtocol::new(&g);
        let script = proto.honest_script(g.edges()).unwrap();
        Invocation::new(proto.program, script)
    }

    #[test]
    fn chi_square_tail() {
        // Textbook critical values.
        assert!((chi_square_sf(3.841, 1.0) - 0.05).abs() < 1e-3);
        assert!((chi_square_sf(23.209, 10.0) - 0.01).abs() < 1e-4);
    }

    #[test]
    fn sample_comparison() {
        let t = |tag: &str, s: Symbol| {
            let mut t = Transcript::default();
            t.push(Event::reveal(tag, vec![s]));
            t
        };
        let mixed: Vec<Transcript> = (0..400).map(|i| t("x", if i % 2 == 0 { Symbol::Club } else { Symbol::Heart })).collect();
        assert!(compare_samples(&mixed, &mixed, ALPHA).passed());
        let clubs: Vec<Transcript> = (0..400).map(|_| t("x", Symbol::Club)).collect();
        assert!(!compare_samples(&mixed, &clubs, ALPHA).passed());
        let other: Vec<Transcript> = (0..400).map(|_| t("y", Symbol::Club)).collect();
        assert!(!compare_samples(&clubs, &other, ALPHA).passed());
    }

    #[test]
    fn k2_exact() {
        let inv = k2();
        assert!(audit_exact(&inv).unwrap().equal(EXACT_TOLERANCE));
        assert!(matches!(real_distribution(&inv, 4), Err(Error::Capacity(_))));
    }

    #[test]
    fn k2_statistical() {
        let report = audit_statistical(&k2(), 2000, 1).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
