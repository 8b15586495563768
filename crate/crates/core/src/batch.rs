//! Fuzz driver: generate, unfold and verify many instances.

use std::fmt::Write as _;
use std::path::Path;

use crate::gen::{instance, GenConfig};
use crate::model::Polycube;
use crate::unfolder::{unfold_with, UnfoldOptions};
use crate::verify::{oracle_suite, verify_net};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// The generator gave up on this instance.
    NoInstance(String),
    /// The unfolder returned an error.
    Failed(String),
    /// The net was built but failed verification or a checked property.
    Rejected(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct InstanceOutcome {
    pub index: u64,
    pub model: Option<Polycube>,
    pub cells: usize,
    pub verdict: Verdict,
    pub net_ok: bool,
    pub oracle_failures: usize,
    pub property_failures: usize,
}

impl InstanceOutcome {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }
}

/// Generate instance `k`, unfold it with all checks on, verify the net and run the oracles.
pub fn run_one(cfg: &GenConfig, k: u64) -> InstanceOutcome {
    let p = match instance(cfg, k) {
        Ok(p) => p,
        Err(e) => {
            return InstanceOutcome {
                index: k,
                model: None,
                cells: 0,
                verdict: Verdict::NoInstance(e.to_string()),
                net_ok: false,
                oracle_failures: 0,
                property_failures: 0,
            }
        }
    };
    let oracle = oracle_suite(&p);
    let opts = UnfoldOptions { check_properties: true, strict: false };
    let (verdict, net_ok, property_failures, cells) = match unfold_with(&p, opts) {
        Err(e) => (Verdict::Failed(e.to_string()), false, 0, 0),
        Ok(u) => {
            let report = verify_net(&p, &u.net.records(&u.surface));
            let mut problems = report.failures.clone();
            problems.extend(u.violations.iter().cloned());
            problems.extend(oracle.iter().cloned());
            let v = if report.ok() && problems.is_empty() { Verdict::Accepted } else { Verdict::Rejected(problems) };
            (v, report.ok(), u.violations.len(), u.surface.len())
        }
    };
    InstanceOutcome { index: k, model: Some(p), cells, verdict, net_ok, oracle_failures: oracle.len(), property_failures }
}

#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub seed: u64,
    pub outcomes: Vec<InstanceOutcome>,
}

impl FuzzReport {
    pub fn count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn accepted(&self) -> usize {
        self.outcomes.iter().filter(|o| o.accepted()).count()
    }

    pub fn nets_ok(&self) -> usize {
        self.outcomes.iter().filter(|o| o.net_ok).count()
    }

    pub fn oracle_failures(&self) -> usize {
        self.outcomes.iter().map(|o| o.oracle_failures).sum()
    }

    pub fn property_failures(&self) -> usize {
        self.outcomes.iter().map(|o| o.property_failures).sum()
    }

    pub fn failures(&self) -> impl Iterator<Item = &InstanceOutcome> {
        self.outcomes.iter().filter(|o| !o.accepted())
    }

    pub fn summary(&self) -> String {
        format!("{}/{} accepted", self.accepted(), self.count())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for o in self.failures() {
            let why = match &o.verdict {
                Verdict::Accepted => String::new(),
                Verdict::NoInstance(e) | Verdict::Failed(e) => e.clone(),
                Verdict::Rejected(v) => v.join("; "),
            };
            let _ = writeln!(out, "instance {} seed {}: {why}", o.index, self.seed);
        }
        let _ = writeln!(
            out,
            "nets verified {}/{}, oracle violations {}, property violations {}",
            self.nets_ok(),
            self.count(),
            self.oracle_failures(),
            self.property_failures()
        );
        let _ = writeln!(out, "{}", self.summary());
        out
    }

    /// Write each failing model and its reason into `dir` as `seed<S>-<k>.txt` / `.reason`.
    pub fn write_corpus(&self, dir: &Path) -> std::io::Result<usize> {
        let mut n = 0;
        for o in self.failures() {
            let Some(p) = &o.model else { continue };
            std::fs::create_dir_all(dir)?;
            let stem = format!("seed{}-{}", self.seed, o.index);
            std::fs::write(dir.join(format!("{stem}.txt")), p.to_text())?;
            std::fs::write(dir.join(format!("{stem}.reason")), format!("{:?}\n", o.verdict))?;
            n += 1;
        }
        Ok(n)
    }
}

pub fn fuzz_sequential(cfg: &GenConfig, count: u64) -> FuzzReport {
    FuzzReport { seed: cfg.seed, outcomes: (0..count).map(|k| run_one(cfg, k)).collect() }
}

#[cfg(feature = "parallel")]
pub fn fuzz_parallel(cfg: &GenConfig, count: u64) -> FuzzReport {
    use rayon::prelude::*;
    FuzzReport { seed: cfg.seed, outcomes: (0..count).into_par_iter().map(|k| run_one(cfg, k)).collect() }
}

/// Parallel when the `parallel` feature is on; results are in instance order either way.
pub fn fuzz(cfg: &GenConfig, count: u64) -> FuzzReport {
    #[cfg(feature = "parallel")]
    {
        fuzz_parallel(cfg, count)
    }
    #[cfg(not(feature = "parallel"))]
    {
        fuzz_sequential(cfg, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_reproducible() {
        let cfg = GenConfig { seed: 3, max_layers: 3, max_extent: 4, attempts: 1000 };
        let a = fuzz_sequential(&cfg, 8);
        let b = fuzz(&cfg, 8);
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.count(), 8);
    }
}
