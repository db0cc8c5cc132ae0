//! Seeded identity-checking suites with a JSON or table report.

mod arch;
mod cocycle;
mod hilbert;
mod lfactor;

use std::fmt::Write as _;
use std::time::Instant;

use mwb_core::arith::{ResidueField, RootOfUnity};
use mwb_core::lfactor::{Coefficient, RationalFunction, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Cocycle,
    Hilbert,
    Lfactor,
    Arch,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Hilbert => "hilbert",
            Suite::Lfactor => "lfactor",
            Suite::Arch => "arch",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub seed: u64,
    /// Overrides every check's sample count.
    pub samples: Option<usize>,
    /// Restricts the cover-dependent suites to one `(q, m)`.
    pub cover: Option<(u64, u32)>,
    /// Perturbs one side of every comparison, so every check must fail.
    pub sabotage: bool,
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub samples: usize,
    pub residual: Option<f64>,
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub sabotage: bool,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(5);
        let mut out = String::new();
        writeln!(out, "{:<6}{:<width$}  {:>8}  {:>10}", "status", "check", "samples", "residual").unwrap();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            let res = c.residual.map(|r| format!("{:.2e}", r)).unwrap_or_else(|| "exact".into());
            write!(out, "{:<6}{:<width$}  {:>8}  {:>10}", status, c.name, c.samples, res).unwrap();
            if let Some(ms) = c.runtime_ms {
                write!(out, "  {:>9.1}ms", ms).unwrap();
            }
            if let Some(w) = &c.witness {
                write!(out, "  {}", w).unwrap();
            }
            out.push('\n');
        }
        writeln!(
            out,
            "{} checks: {} pass, {} fail, {} skip (suite {}, seed {}{})",
            self.checks.len(),
            self.summary.pass,
            self.summary.fail,
            self.summary.skip,
            self.suite,
            self.seed,
            if self.sabotage { ", sabotaged" } else { "" }
        )
        .unwrap();
        out
    }
}

/// Per-check state: its own RNG stream, sample count and sabotage switch.
pub(crate) struct Ctx {
    pub rng: ChaCha8Rng,
    pub sabotage: bool,
    samples: Option<usize>,
}

impl Ctx {
    pub fn n(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    pub fn spoil_root(&self, x: RootOfUnity) -> RootOfUnity {
        if self.sabotage {
            x * RootOfUnity::new(1, x.modulus())
        } else {
            x
        }
    }

    pub fn spoil_bool(&self, ok: bool) -> bool {
        ok != self.sabotage
    }

    pub fn spoil_f64(&self, residual: f64) -> f64 {
        if self.sabotage {
            residual + 1.0
        } else {
            residual
        }
    }

    pub fn spoil_rf<C: Coefficient>(&self, f: RationalFunction<C>) -> RationalFunction<C> {
        if self.sabotage {
            f.mul(&RationalFunction::factor(f.q(), C::one(), Q::from(0), 1, 1))
        } else {
            f
        }
    }
}

/// Running verdict of one check.
#[derive(Default)]
pub(crate) struct Tally {
    samples: usize,
    residual: Option<f64>,
    witness: Option<String>,
}

impl Tally {
    pub fn exact(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub fn approx(&mut self, residual: f64, tol: f64, witness: impl FnOnce() -> String) {
        self.samples += 1;
        let worst = self.residual.unwrap_or(0.0);
        self.residual = Some(if residual.is_nan() || residual > worst { residual } else { worst });
        if !(residual <= tol) && self.witness.is_none() {
            self.witness = Some(format!("residual {:.3e} > {:.0e} at {}", residual, tol, witness()));
        }
    }
}

type CheckFn = Box<dyn Fn(&mut Ctx) -> Tally>;

pub(crate) struct Registry {
    checks: Vec<(String, CheckFn)>,
}

impl Registry {
    pub fn add(&mut self, name: impl Into<String>, f: impl Fn(&mut Ctx) -> Tally + 'static) {
        self.checks.push((name.into(), Box::new(f)));
    }
}

/// Stable 64-bit FNV-1a, used to give each check its own stream.
fn fnv(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub const DEFAULT_COVERS: [(u64, u32); 5] = [(7, 3), (13, 2), (13, 3), (31, 3), (31, 5)];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OptionError {
    #[error("{0}")]
    Cover(String),
}

fn covers(opts: &Options) -> Result<Vec<(u64, u32)>, OptionError> {
    match opts.cover {
        Some((q, m)) => {
            ResidueField::for_cover(q, m).map_err(|e| OptionError::Cover(e.to_string()))?;
            Ok(vec![(q, m)])
        }
        None => Ok(DEFAULT_COVERS.to_vec()),
    }
}

pub fn run(suite: Suite, opts: &Options) -> Result<Report, OptionError> {
    let covers = covers(opts)?;
    let mut reg = Registry { checks: Vec::new() };
    if suite.includes(Suite::Cocycle) {
        cocycle::register(&mut reg, &covers);
    }
    if suite.includes(Suite::Hilbert) {
        let (q, m) = opts.cover.unwrap_or((7, 3));
        hilbert::register(&mut reg, q, m);
    }
    if suite.includes(Suite::Lfactor) {
        lfactor::register(&mut reg);
    }
    if suite.includes(Suite::Arch) {
        arch::register(&mut reg);
    }
    reg.checks.sort_by(|a, b| a.0.cmp(&b.0));
    let mut checks = Vec::new();
    for (name, f) in &reg.checks {
        let mut ctx = Ctx {
            rng: ChaCha8Rng::seed_from_u64(opts.seed ^ fnv(name)),
            sabotage: opts.sabotage,
            samples: opts.samples,
        };
        let start = Instant::now();
        let t = f(&mut ctx);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let status = if t.samples == 0 {
            Status::Skip
        } else if t.witness.is_some() {
            Status::Fail
        } else {
            Status::Pass
        };
        checks.push(CheckResult {
            name: name.clone(),
            status,
            samples: t.samples,
            residual: t.residual,
            witness: t.witness,
            runtime_ms: opts.timings.then_some(ms),
        });
    }
    let count = |s| checks.iter().filter(|c| c.status == s).count();
    let summary = Summary {
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        skip: count(Status::Skip),
    };
    Ok(Report {
        suite: suite.name().into(),
        seed: opts.seed,
        sabotage: opts.sabotage,
        checks,
        summary,
    })
}
