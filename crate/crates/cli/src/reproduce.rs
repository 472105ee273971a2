//! `reproduce`: rerun a published example and compare verdicts.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use fractoda::{Equilibrium, IntegratorConfig, ParamSet, RunConfig, VerdictKind};
use serde::Deserialize;

use crate::analyze::{cmd_analyze, AnalyzeReport};
use crate::error::{CliError, Result};
use crate::simulate::{cmd_simulate, SimulateReport};

const FIXTURES: &str = include_str!("../data/examples.toml");

/// Orders checked when a fixture gives none.
pub const DEFAULT_ORDERS: [f64; 4] = [0.3, 0.5, 0.8, 0.99];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    Stable,
    Unstable,
    ZeroEigenvalue,
}

impl Claim {
    pub fn holds_for(self, kind: VerdictKind) -> bool {
        match self {
            Claim::Stable => kind == VerdictKind::AsymptoticallyStable,
            Claim::Unstable => kind.is_unstable(),
            Claim::ZeroEigenvalue => kind == VerdictKind::UnstableZeroEigenvalue,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Stable => "stable",
            Claim::Unstable => "unstable",
            Claim::ZeroEigenvalue => "zero-eigenvalue",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSpec {
    pub h: f64,
    #[serde(rename = "N")]
    pub n_steps: usize,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example {
    pub id: String,
    #[serde(default = "default_controlled")]
    pub controlled: bool,
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub samples: Vec<[f64; 2]>,
    pub claim: Claim,
    pub summary: String,
    #[serde(default)]
    pub orders: Option<Vec<f64>>,
    #[serde(default)]
    pub simulate: Option<SimulateSpec>,
}

fn default_controlled() -> bool {
    true
}

impl Example {
    pub fn orders(&self) -> &[f64] {
        self.orders.as_deref().unwrap_or(&DEFAULT_ORDERS)
    }

    pub fn params(&self, q: f64) -> Result<ParamSet> {
        Ok(ParamSet::new(self.a, self.b, self.c1, self.c2, self.c3, q)?)
    }
}

#[derive(Deserialize)]
struct FixtureFile {
    example: Vec<Example>,
}

/// The fixture table, parsed once.
pub fn examples() -> &'static [Example] {
    static TABLE: OnceLock<Vec<Example>> = OnceLock::new();
    TABLE.get_or_init(|| {
        toml::from_str::<FixtureFile>(FIXTURES)
            .expect("bundled fixture table is valid")
            .example
    })
}

pub fn example_ids() -> Vec<&'static str> {
    examples().iter().map(|e| e.id.as_str()).collect()
}

pub fn find_example(id: &str) -> Result<&'static Example> {
    examples()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CliError::UnknownExample(id.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Match,
    Mismatch,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Match => "MATCH",
            Outcome::Mismatch => "MISMATCH",
        })
    }
}

pub struct ReproduceReport {
    pub example: &'static Example,
    /// One analysis per (sample, order) pair, samples outer.
    pub analyses: Vec<AnalyzeReport>,
    pub outcome: Outcome,
    pub simulation: Option<SimulateReport>,
}

impl ReproduceReport {
    /// Analyses whose verdict contradicts the claim.
    pub fn counterexamples(&self) -> impl Iterator<Item = &AnalyzeReport> {
        self.analyses
            .iter()
            .filter(|r| !self.example.claim.holds_for(r.verdict.kind))
    }
}

/// Runs every sample of `id` through `analyze`, and through `simulate` when
/// the fixture carries a run. With `out_dir`, the run's CSV and orbit plots
/// are written there as `example_<id>.csv` and `example_<id>_x*.svg`.
pub fn cmd_reproduce(id: &str, out_dir: Option<&Path>) -> Result<ReproduceReport> {
    let example = find_example(id)?;
    let mut analyses = Vec::new();
    for [k, m] in &example.samples {
        for &q in example.orders() {
            let p = example.params(q)?;
            analyses.push(cmd_analyze(&p, &Equilibrium::new(*k, *m), example.controlled)?);
        }
    }
    let outcome = if analyses.iter().all(|r| example.claim.holds_for(r.verdict.kind)) {
        Outcome::Match
    } else {
        Outcome::Mismatch
    };

    let simulation = match &example.simulate {
        None => None,
        Some(spec) => {
            let [k, m] = example.samples[0];
            let q = example.orders()[0];
            let name = format!("example_{}", example.id);
            let stem = out_dir.map(|d| d.join(&name));
            let cfg = RunConfig {
                params: example.params(q)?,
                equilibrium: Equilibrium::new(k, m),
                integrator: IntegratorConfig::new(spec.h, spec.n_steps, spec.epsilon)?,
                controlled: example.controlled,
                out: out_dir.map(|d| d.join(format!("{name}.csv"))),
            };
            Some(cmd_simulate(&cfg, stem.as_deref())?)
        }
    };

    Ok(ReproduceReport {
        example,
        analyses,
        outcome,
        simulation,
    })
}

impl fmt::Display for ReproduceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ex = self.example;
        writeln!(
            f,
            "example {}: a = {}, b = {}, c1 = {}, c2 = {}, c3 = {}, {}",
            ex.id,
            ex.a,
            ex.b,
            ex.c1,
            ex.c2,
            ex.c3,
            if ex.controlled { "controlled" } else { "uncontrolled" }
        )?;
        writeln!(f, "claim: {} ({})", ex.claim, ex.summary)?;
        for r in &self.analyses {
            write!(
                f,
                "  (k, m) = ({}, {}), q = {}: {}",
                r.equilibrium.k, r.equilibrium.m, r.params.q, r.verdict.kind
            )?;
            if let Some(w) = r.verdict.witness {
                write!(f, " [eigenvalue {}]", w.re)?;
            }
            if let Some(cc) = &r.cross_check {
                write!(f, "; rule {}: {}", cc.rule, cc.closed_form.kind)?;
            }
            writeln!(f)?;
        }
        writeln!(f, "result: {}", self.outcome)?;
        if self.outcome == Outcome::Mismatch {
            if let Some(r) = self.counterexamples().next() {
                let detail = match r.verdict.witness {
                    Some(w) if w.im == 0.0 => format!("eigenvalue {} > 0", w.re),
                    Some(w) => format!("eigenvalue {} has |arg| = {:.6}", w, w.arg().abs()),
                    None => format!("computed {}", r.verdict.kind),
                };
                writeln!(
                    f,
                    "note: at (k, m) = ({}, {}) the spectrum contradicts the claim: {detail}",
                    r.equilibrium.k, r.equilibrium.m
                )?;
            }
        }
        if let Some(sim) = &self.simulation {
            let tr = &sim.trajectory;
            let last = tr.last().expect("trajectory has an initial state");
            writeln!(
                f,
                "simulation: {} rows, q = {}, h = {}",
                tr.len(),
                tr.params.q,
                tr.config.h()
            )?;
            writeln!(f, "  final state: {:?}", last.as_array())?;
            writeln!(
                f,
                "  final distance to target: {}",
                last.distance(&tr.target.to_state())
            )?;
            if let Some(step) = sim.diverged_at() {
                writeln!(f, "  diverged at step {step}")?;
            }
            for p in &sim.svg_paths {
                writeln!(f, "  wrote {}", p.display())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_parses_and_ids_are_unique() {
        let ids = example_ids();
        assert_eq!(ids.len(), 12);
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(cmd_reproduce("9.9", None), Err(CliError::UnknownExample(_))));
    }

    #[test]
    fn contradiction_is_reported() {
        let r = cmd_reproduce("3.2.1", None).unwrap();
        assert_eq!(r.outcome, Outcome::Mismatch);
        let bad = r.counterexamples().next().unwrap();
        assert!((bad.verdict.witness.unwrap().re - 2.01).abs() < 1e-12);
        assert!(r.to_string().contains("result: MISMATCH"));
    }
}
