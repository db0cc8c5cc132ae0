//! One PASS/FAIL line per acceptance criterion, timed against the `mwb`
//! binary built for this test target.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use mwb::codec::{parse_descriptor, write_descriptor};
use serde_json::Value;

const COVERS: [&str; 5] = ["q7m3", "q13m2", "q13m3", "q31m3", "q31m5"];

struct Run {
    code: Option<i32>,
    report: Value,
    secs: f64,
}

fn verify(suite: &str) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_mwb"))
        .args(["verify", suite, "--seed", "42", "--format", "json"])
        .env_remove("MWB_SEED")
        .output()
        .expect("mwb runs");
    let secs = start.elapsed().as_secs_f64();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run { code: out.status.code(), report, secs }
}

/// Problems found while checking one criterion.
#[derive(Default)]
struct Findings(Vec<String>);

impl Findings {
    fn need(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }
}

fn check<'a>(run: &'a Run, name: &str) -> Option<&'a Value> {
    run.report["checks"].as_array()?.iter().find(|c| c["name"] == name)
}

/// The named check exists, passed, has enough samples and, if `tol` is set,
/// a worst residual within it.
fn expect(f: &mut Findings, run: &Run, name: &str, min_samples: u64, tol: Option<f64>) {
    let Some(c) = check(run, name) else {
        f.0.push(format!("{name} missing"));
        return;
    };
    f.need(c["status"] == "pass", || format!("{name} {}", c["status"]));
    let n = c["samples"].as_u64().unwrap_or(0);
    f.need(n >= min_samples, || format!("{name} has {n} < {min_samples} samples"));
    if let Some(tol) = tol {
        let r = c["residual"].as_f64().unwrap_or(f64::INFINITY);
        f.need(r <= tol, || format!("{name} residual {r:.3e} > {tol:.0e}"));
    }
}

fn whole_run(f: &mut Findings, run: &Run, limit: f64) {
    f.need(run.code == Some(0), || format!("exit code {:?}", run.code));
    f.need(run.report["summary"]["fail"] == 0, || "some checks failed".into());
    f.need(run.secs < limit, || format!("took {:.1} s, limit {limit} s", run.secs));
}

fn cocycle() -> (Findings, f64) {
    let run = verify("cocycle");
    let mut f = Findings::default();
    whole_run(&mut f, &run, 60.0);
    for cover in COVERS {
        expect(&mut f, &run, &format!("cocycle.associativity.{cover}"), 10_000, None);
        expect(&mut f, &run, &format!("cocycle.block_compat.{cover}"), 1_000, None);
        expect(&mut f, &run, &format!("cocycle.weyl_conjugation.{cover}"), 1_000, None);
        expect(&mut f, &run, &format!("cocycle.centrality.{cover}"), 1, None);
        expect(&mut f, &run, &format!("cocycle.diag_power.{cover}"), 1, None);
        expect(&mut f, &run, &format!("cocycle.doubling_commute.{cover}"), 1, None);
    }
    (f, run.secs)
}

fn hilbert() -> (Findings, f64) {
    let run = verify("hilbert");
    let mut f = Findings::default();
    whole_run(&mut f, &run, 5.0);
    // |v| <= 2 with 6 units at q = 7: 30 elements, all pairs and triples
    expect(&mut f, &run, "hilbert.bimultiplicative.q7m3", 30 * 30 * 30, None);
    expect(&mut f, &run, "hilbert.skew_symmetric.q7m3", 30 * 30, None);
    // every a with 1 - a nonzero
    expect(&mut f, &run, "hilbert.steinberg.q7m3", 30 - 1, None);
    expect(&mut f, &run, "hilbert.units_and_kernel.q7m3", 1, None);
    (f, run.secs)
}

fn lfactor() -> (Findings, f64) {
    let run = verify("lfactor");
    let mut f = Findings::default();
    whole_run(&mut f, &run, 30.0);
    expect(&mut f, &run, "lfactor.functional_equation", 200, None);
    expect(&mut f, &run, "lfactor.multiplicativity_1", 1, None);
    expect(&mut f, &run, "lfactor.multiplicativity_2", 1, None);
    expect(&mut f, &run, "lfactor.composition", 1, None);
    expect(&mut f, &run, "lfactor.degree", 1, None);
    (f, run.secs)
}

fn arch() -> (Findings, f64) {
    let run = verify("arch");
    let mut f = Findings::default();
    whole_run(&mut f, &run, 60.0);
    expect(&mut f, &run, "arch.gamma_mult", 100, Some(1e-10));
    expect(&mut f, &run, "arch.rs_two_path", 500, Some(1e-8));
    expect(&mut f, &run, "arch.reconstruction", 1, Some(1e-8));
    expect(&mut f, &run, "arch.functional_equation", 1, Some(1e-8));
    expect(&mut f, &run, "arch.psi_dependence", 1, Some(1e-8));
    (f, run.secs)
}

fn cli_and_roundtrip() -> (Findings, f64) {
    let start = Instant::now();
    let run = verify("all");
    let mut f = Findings::default();
    f.need(run.code == Some(0), || format!("verify all exit code {:?}", run.code));
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut entries: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in entries {
        let bytes = std::fs::read(&path).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        match parse_descriptor(&text) {
            Ok(rep) => f.need(write_descriptor(&rep).as_bytes() == bytes, || format!("{name} not byte-exact")),
            Err(e) => f.0.push(format!("{name}: {e}")),
        }
        let out = Command::new(env!("CARGO_BIN_EXE_mwb")).arg("fmt").arg(&path).output().unwrap();
        f.need(out.status.success() && out.stdout == bytes, || format!("mwb fmt {name} not byte-exact"));
    }
    (f, start.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> (Findings, f64)); 5] = [
        ("cocycle suite", cocycle),
        ("hilbert suite", hilbert),
        ("lfactor exact suite", lfactor),
        ("arch suite", arch),
        ("verify all and descriptor round-trip", cli_and_roundtrip),
    ];
    let mut failed = false;
    for (i, (label, f)) in criteria.iter().enumerate() {
        let (findings, secs) = f();
        if findings.0.is_empty() {
            println!("PASS criterion {}: {} ({:.2} s)", i + 1, label, secs);
        } else {
            failed = true;
            println!("FAIL criterion {}: {} ({:.2} s): {}", i + 1, label, secs, findings.0.join("; "));
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
