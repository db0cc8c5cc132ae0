//! Argument definitions and command dispatch.
//!
//! Exit codes: 0 success, 1 a verification or self-check failed, 2 bad input.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mwb_core::archgamma::*;
use mwb_core::arith::{hilbert_symbol, LocalFieldElem, ResidueField};
use mwb_core::cover::{cocycle_diamond_torus, cocycle_gl_torus, cocycle_sp_torus, Cover};
use mwb_core::lfactor::*;
use num_complex::Complex64;
use serde_json::json;

use crate::codec::{format_rf, parse_descriptor, write_descriptor, Rep, TextCoef};
use crate::verify::{self, Suite};

#[derive(Debug, Parser)]
#[command(name = "mwb", version, about = "Metaplectic cover arithmetic, local factors and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CocycleKind {
    Gl,
    Sp,
    Diamond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LOp {
    Std,
    Pair,
    Sym2,
    Ext2,
    A,
    B,
    C,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Branch {
    Sp,
    Gl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Selector {
    Cocycle,
    Hilbert,
    Lfactor,
    Arch,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tame Hilbert symbol (a, b)_m of two elements written `valuation:unit`.
    Hilbert {
        a: String,
        b: String,
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Torus cocycle of two diagonal elements, entries `v:u` separated by commas.
    Cocycle {
        t: String,
        u: String,
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, value_enum, default_value = "gl")]
        kind: CocycleKind,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Unramified local factor of one or two descriptors (π then τ).
    Lfactor {
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum)]
        op: LOp,
        /// Shift `j` in `L(s + j, ·)`, as an integer or `a/b`.
        #[arg(long, default_value = "0")]
        shift: String,
        /// The integer `c` for the a, b and c factors.
        #[arg(long, default_value_t = 1)]
        c: u32,
        #[arg(long, value_enum, default_value = "sp")]
        branch: Branch,
        /// Evaluate at `s = re,im` as well.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Archimedean doubling factors of two complex descriptors (π then τ) at `s`.
    GammaC {
        pi: PathBuf,
        tau: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Selector,
        #[arg(long, env = "MWB_SEED", default_value_t = 0)]
        seed: u64,
        /// Sample count for every check, replacing the defaults.
        #[arg(long)]
        samples: Option<usize>,
        /// Restrict cover-dependent checks to this q (needs --m).
        #[arg(long, requires = "m")]
        q: Option<u64>,
        #[arg(long, requires = "q")]
        m: Option<u32>,
        /// Perturb every comparison so that every check fails.
        #[arg(long)]
        sabotage: bool,
        /// Add per-check runtimes (the report is then no longer reproducible).
        #[arg(long)]
        timings: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Print a descriptor in canonical form.
    Fmt { file: PathBuf },
}

/// Text to print and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.15e}{:+.15e}i", z.re, z.im)
}

fn render(format: Format, value: serde_json::Value, table: Vec<(String, String)>) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("json value");
            s.push('\n');
            s
        }
        Format::Table => {
            let w = table.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            table.iter().map(|(k, v)| format!("{:<w$}  {}\n", k, v)).collect()
        }
    }
}

fn parse_elem(text: &str, field: &ResidueField) -> Result<LocalFieldElem> {
    let (v, u) = text
        .trim()
        .split_once(':')
        .ok_or_else(|| anyhow!("expected valuation:unit, got '{}'", text))?;
    let v: i64 = v.parse().with_context(|| format!("bad valuation in '{}'", text))?;
    let u: i64 = u.parse().with_context(|| format!("bad unit in '{}'", text))?;
    let u = field.reduce(u);
    LocalFieldElem::new(v, u).map_err(|_| anyhow!("unit part of '{}' is 0 mod {}", text, field.q()))
}

fn parse_torus(text: &str, field: &ResidueField) -> Result<Vec<LocalFieldElem>> {
    text.split(',').map(|x| parse_elem(x, field)).collect()
}

fn parse_s(text: &str) -> Result<Complex64> {
    let (re, im) = text.split_once(',').unwrap_or((text, "0"));
    let re: f64 = re.trim().parse().with_context(|| format!("bad real part in '{}'", text))?;
    let im: f64 = im.trim().parse().with_context(|| format!("bad imaginary part in '{}'", text))?;
    if !re.is_finite() || !im.is_finite() {
        bail!("s must be finite");
    }
    Ok(Complex64::new(re, im))
}

fn load(path: &PathBuf) -> Result<Rep> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_descriptor(&text).with_context(|| format!("in {}", path.display()))
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Hilbert { a, b, cover, format } => hilbert(&a, &b, &cover, format),
        Command::Cocycle { t, u, cover, kind, format } => cocycle(&t, &u, &cover, kind, format),
        Command::Lfactor {
            files,
            op,
            shift,
            c,
            branch,
            s,
            format,
        } => {
            let reps = files.iter().map(load).collect::<Result<Vec<_>>>()?;
            let shift: Q = shift.parse().map_err(|_| anyhow!("bad shift '{}'", shift))?;
            let s = s.as_deref().map(parse_s).transpose()?;
            let branch = match branch {
                Branch::Sp => HBranch::Sp,
                Branch::Gl => HBranch::Gl,
            };
            let args = LArgs { op, shift, c, branch, s, format };
            if reps.iter().all(|r| matches!(r, Rep::Exact(_))) {
                let reps = reps.into_iter().map(|r| match r {
                    Rep::Exact(x) => x,
                    _ => unreachable!(),
                });
                lfactor(reps.collect(), &args)
            } else {
                let reps = reps
                    .into_iter()
                    .map(|r| match r {
                        Rep::Exact(x) => Ok(numeric(&x)),
                        Rep::Numeric(x) => Ok(x),
                        Rep::Complex(_) => bail!("lfactor needs p-adic descriptors"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                lfactor(reps, &args)
            }
        }
        Command::GammaC { pi, tau, s, format } => {
            let s = parse_s(&s)?;
            let as_complex = |r: Rep| match r {
                Rep::Complex(x) => Ok(x),
                _ => Err(anyhow!("gamma-c needs complex descriptors")),
            };
            let pi = as_complex(load(&pi)?)?;
            let tau = as_complex(load(&tau)?)?;
            gamma_c(&pi, &tau, s, format)
        }
        Command::Verify {
            suite,
            seed,
            samples,
            q,
            m,
            sabotage,
            timings,
            format,
        } => {
            let suite = match suite {
                Selector::Cocycle => Suite::Cocycle,
                Selector::Hilbert => Suite::Hilbert,
                Selector::Lfactor => Suite::Lfactor,
                Selector::Arch => Suite::Arch,
                Selector::All => Suite::All,
            };
            let opts = verify::Options {
                seed,
                samples,
                cover: q.zip(m),
                sabotage,
                timings,
            };
            let report = verify::run(suite, &opts)?;
            let stdout = match format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(),
            };
            Ok(Outcome {
                stdout,
                code: if report.failed() { 1 } else { 0 },
            })
        }
        Command::Fmt { file } => Ok(Outcome::ok(write_descriptor(&load(&file)?))),
    }
}

fn hilbert(a: &str, b: &str, cover: &CoverArgs, format: Format) -> Result<Outcome> {
    let field = ResidueField::for_cover(cover.q, cover.m)?;
    let (x, y) = (parse_elem(a, &field)?, parse_elem(b, &field)?);
    let s = hilbert_symbol(x, y, &field, cover.m);
    let value = json!({
        "a": x.to_string(), "b": y.to_string(), "q": cover.q, "m": cover.m,
        "exponent": s.exponent(), "order": s.order(),
    });
    let table = vec![
        ("symbol".into(), format!("({}, {})_{} = {}", x, y, cover.m, s)),
        ("exponent".into(), s.exponent().to_string()),
        ("order".into(), s.order().to_string()),
    ];
    Ok(Outcome::ok(render(format, value, table)))
}

fn cocycle(t: &str, u: &str, args: &CoverArgs, kind: CocycleKind, format: Format) -> Result<Outcome> {
    let cover = Cover::new(args.q, args.m)?;
    let (t, u) = (parse_torus(t, cover.field())?, parse_torus(u, cover.field())?);
    let s = match kind {
        CocycleKind::Gl => cocycle_gl_torus(&cover, &t, &u)?,
        CocycleKind::Sp => cocycle_sp_torus(&cover, &t, &u)?,
        CocycleKind::Diamond => cocycle_diamond_torus(&cover, &t, &u)?,
    };
    let value = json!({ "kind": format!("{:?}", kind).to_lowercase(), "q": args.q, "m": args.m, "exponent": s.exponent() });
    let table = vec![("cocycle".into(), s.to_string()), ("exponent".into(), s.exponent().to_string())];
    Ok(Outcome::ok(render(format, value, table)))
}

struct LArgs {
    op: LOp,
    shift: Q,
    c: u32,
    branch: HBranch,
    s: Option<Complex64>,
    format: Format,
}

fn numeric(r: &SatakeRep<ExactScalar>) -> SatakeRep<Complex64> {
    let ev = r.eigenvalues().iter().map(|e| e.to_complex()).collect();
    SatakeRep::new(r.kind(), r.m(), r.q(), ev, r.tempered()).expect("nonzero eigenvalues stay nonzero")
}

fn lfactor<C: TextCoef>(reps: Vec<SatakeRep<C>>, a: &LArgs) -> Result<Outcome> {
    let two = |name: &str| -> Result<(&SatakeRep<C>, &SatakeRep<C>)> {
        match reps.as_slice() {
            [x, y] => Ok((x, y)),
            _ => bail!("{} needs two descriptors", name),
        }
    };
    let one = |name: &str| -> Result<&SatakeRep<C>> {
        match reps.as_slice() {
            [x] => Ok(x),
            _ => bail!("{} needs one descriptor", name),
        }
    };
    let mut rows = Vec::new();
    let mut code = 0;
    let f = match a.op {
        LOp::Std => l_std(one("std")?, a.shift),
        LOp::Pair => {
            let (p, t) = two("pair")?;
            l_pair(p, t, a.shift)?
        }
        LOp::Sym2 => l_sym2(one("sym2")?, a.shift)?,
        LOp::Ext2 => l_ext2(one("ext2")?, a.shift)?,
        LOp::A => a_factor(one("a")?, a.c, a.branch)?,
        LOp::B => b_factor(one("b")?, a.c, a.branch)?,
        LOp::C => c_factor(one("c")?, a.c, a.branch)?,
        LOp::Gamma => {
            let (p, t) = two("gamma")?;
            let g = gamma_unramified_doubling(p, t)?;
            let back = gamma_unramified_doubling(&dual_rep(p), &dual_rep(t))?.reflect();
            let ok = g.mul(&back).is_one();
            if !ok {
                code = 1;
            }
            rows.push(("functional_equation", if ok { "ok" } else { "FAILED" }.to_string()));
            g
        }
    };
    let text = format_rf(&f);
    let mut value = json!({
        "op": format!("{:?}", a.op).to_lowercase(),
        "q": f.q(),
        "factor": text,
        "numerator_degree": f.numerator_degree(),
        "denominator_degree": f.denominator_degree(),
    });
    let mut table = vec![("factor".to_string(), text.clone())];
    table.push(("degrees".into(), format!("{}/{}", f.numerator_degree(), f.denominator_degree())));
    if let Some(s) = a.s {
        let v = f.evaluate(s);
        value["s"] = json!([s.re, s.im]);
        value["value"] = json!([v.re, v.im]);
        table.push((format!("value at s={}", s), fmt_c(v)));
    }
    for (k, v) in rows {
        value[k] = json!(v);
        table.push((k.to_string(), v));
    }
    Ok(Outcome {
        stdout: render(a.format, value, table),
        code,
    })
}

fn gamma_c(pi: &ComplexRep, tau: &ComplexRep, s: Complex64, format: Format) -> Result<Outcome> {
    let g = doubling_gamma_complex(pi, tau, s)?;
    let (l, eps) = l_eps_complex(pi, tau, s)?;
    let residual = reconstruction_residual(pi, tau, s)?;
    let pair = |z: Complex64| json!([z.re, z.im]);
    let mut value = json!({
        "s": pair(s), "gamma": pair(g), "L": pair(l), "epsilon": pair(eps),
        "reconstruction_residual": residual,
    });
    let mut table = vec![
        ("gamma".to_string(), fmt_c(g)),
        ("L".into(), fmt_c(l)),
        ("epsilon".into(), fmt_c(eps)),
        ("reconstruction_residual".into(), format!("{:.3e}", residual)),
    ];
    if pi.kind == ComplexKind::Gl {
        let direct = rs_gamma_direct(pi, tau, s)?;
        let via = rs_gamma_via_rho(pi, tau, s)?;
        let r = (via / direct - 1.0).norm();
        value["rs_gamma"] = pair(direct);
        value["rs_two_path_residual"] = json!(r);
        table.push(("rs_gamma".into(), fmt_c(direct)));
        table.push(("rs_two_path_residual".into(), format!("{:.3e}", r)));
    }
    Ok(Outcome::ok(render(format, value, table)))
}
