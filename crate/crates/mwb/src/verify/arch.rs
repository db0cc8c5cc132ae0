use mwb_core::archgamma::*;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Ctx, Registry, Tally};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn character(rng: &mut ChaCha8Rng) -> ComplexCharacter {
    ComplexCharacter::new(
        rng.gen_range(-4..=4),
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    )
}

fn strip_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let y = rng.gen_range(0.5..3.0);
    Complex64::new(rng.gen_range(-1.0..2.0), if rng.gen() { y } else { -y })
}

/// Cover parameter with rank `r`.
fn m_of_rank(rng: &mut ChaCha8Rng, r: u32) -> u32 {
    match r {
        1 => [1, 2][rng.gen_range(0..2)],
        2 => 4,
        _ => [3, 6][rng.gen_range(0..2)],
    }
}

fn rep(rng: &mut ChaCha8Rng, kind: ComplexKind, m: u32) -> ComplexRep {
    let n = rng.gen_range(1..=2);
    ComplexRep::new(kind, m, (0..n).map(|_| character(rng)).collect())
}

fn show(r: &ComplexRep) -> String {
    let cs: Vec<String> = r.characters.iter().map(|c| format!("({},{})", c.l, c.t)).collect();
    format!("{:?} m={} [{}]", r.kind, r.m, cs.join(" "))
}

/// Random `(π, τ, s)`, retried until no Gamma argument is near a pole.
fn sample<T>(
    ctx: &mut Ctx,
    rs_only: bool,
    f: impl Fn(&ComplexRep, &ComplexRep, Complex64) -> Result<T, ArchError>,
) -> (ComplexRep, ComplexRep, Complex64, T) {
    loop {
        let r = ctx.rng.gen_range(1..=3);
        let m = m_of_rank(&mut ctx.rng, r);
        let kind = if rs_only || ctx.rng.gen() { ComplexKind::Gl } else { ComplexKind::Sp };
        let pi = rep(&mut ctx.rng, kind, m);
        let tau = rep(&mut ctx.rng, ComplexKind::Gl, m);
        let s = strip_point(&mut ctx.rng);
        if let Ok(v) = f(&pi, &tau, s) {
            return (pi, tau, s, v);
        }
    }
}

pub(super) fn register(reg: &mut Registry) {
    reg.add("arch.gamma_mult", gamma_mult);
    reg.add("arch.rs_two_path", rs_two_path);
    reg.add("arch.reconstruction", reconstruction);
    reg.add("arch.functional_equation", functional_equation);
    reg.add("arch.psi_dependence", psi_dependence);
}

/// Gauss multiplication formula for `r ≤ 6`.
fn gamma_mult(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    let per = ctx.n(120).div_ceil(6);
    for r in 1..=6 {
        for _ in 0..per {
            let beta = Complex64::new(ctx.rng.gen_range(0.05..4.0), ctx.rng.gen_range(-4.0..4.0));
            let res = ctx.spoil_f64(gamma_mult_check(r, beta).unwrap());
            t.approx(res, 1e-10, || format!("r={} beta={}", r, beta));
        }
    }
    t
}

/// Direct Rankin-Selberg factor against the r-fold shifted Tate product.
fn rs_two_path(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for _ in 0..ctx.n(600) {
        let (pi, tau, s, (a, b)) = sample(ctx, true, |p, q, s| Ok((rs_gamma_direct(p, q, s)?, rs_gamma_via_rho(p, q, s)?)));
        let res = ctx.spoil_f64((b / a - 1.0).norm());
        t.approx(res, 1e-8, || format!("s={} pi={} tau={}", s, show(&pi), show(&tau)));
    }
    t
}

/// `γ = ε L(1-s, duals) / L(s)` for the doubling factor.
fn reconstruction(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for _ in 0..ctx.n(300) {
        let (pi, tau, s, res) = sample(ctx, false, reconstruction_residual);
        t.approx(ctx.spoil_f64(res), 1e-8, || format!("s={} pi={} tau={}", s, show(&pi), show(&tau)));
    }
    t
}

/// `γ(s, π×τ, ψ) γ(1-s, π̃×τ̃, ψ^{-1}) = 1`, for doubling and Rankin-Selberg.
fn functional_equation(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    let minus = Complex64::new(-1.0, 0.0);
    for _ in 0..ctx.n(300) {
        let (pi, tau, s, prod) = sample(ctx, false, |p, q, s| {
            let d = doubling_gamma_complex_psi(p, q, s, ONE)?
                * doubling_gamma_complex_psi(&p.dual(), &q.dual(), ONE - s, minus)?;
            let r = if p.kind == ComplexKind::Gl {
                rs_gamma_direct(p, q, s)? * rs_gamma_direct(&p.dual(), &q.dual(), ONE - s)? * rs_sign(p, q)
            } else {
                ONE
            };
            Ok((d, r))
        });
        let res = ctx.spoil_f64((prod.0 - 1.0).norm().max((prod.1 - 1.0).norm()));
        t.approx(res, 1e-8, || format!("s={} pi={} tau={}", s, show(&pi), show(&tau)));
    }
    t
}

/// `ψ ↦ ψ^{-1}` on the Rankin-Selberg side: `∏ χ_ij(-1)`.
fn rs_sign(pi: &ComplexRep, tau: &ComplexRep) -> Complex64 {
    let r = pi.r();
    let l: i64 = tau
        .characters
        .iter()
        .flat_map(|ti| pi.characters.iter().map(move |pj| r * (ti.l - pj.l)))
        .sum();
    if l.rem_euclid(2) == 0 {
        ONE
    } else {
        -ONE
    }
}

/// `γ(ψ_b)/γ(ψ)` against the central-character and `|b|` prediction.
fn psi_dependence(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for _ in 0..ctx.n(300) {
        let b = Complex64::from_polar(ctx.rng.gen_range(0.5..2.0), ctx.rng.gen_range(-3.1..3.1));
        let (pi, tau, s, res) = sample(ctx, true, |p, q, s| rs_psi_dependence_check(p, q, s, b));
        t.approx(ctx.spoil_f64(res), 1e-8, || format!("b={} s={} pi={} tau={}", b, s, show(&pi), show(&tau)));
    }
    t
}
