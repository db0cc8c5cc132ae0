use mwb_core::archgamma::{ComplexCharacter, ComplexKind, ComplexRep};
use mwb_core::lfactor::*;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Ctx, Registry, Tally};
use crate::codec::{format_rf, parse_descriptor, parse_rf, write_descriptor, Rep, TextCoef};

#[derive(Debug, Clone, Copy)]
enum Family {
    SpOdd,
    SpEven,
    Gl,
}

const FAMILIES: [Family; 3] = [Family::SpOdd, Family::SpEven, Family::Gl];

fn cover_for(rng: &mut ChaCha8Rng, fam: Family) -> (u64, u32) {
    let odd = [(7, 3), (13, 3), (31, 3), (31, 5)];
    let even = [(13, 2), (13, 6), (5, 2)];
    match fam {
        Family::SpOdd => odd[rng.gen_range(0..odd.len())],
        Family::SpEven => even[rng.gen_range(0..even.len())],
        Family::Gl => {
            let all = [odd.as_slice(), even.as_slice()].concat();
            all[rng.gen_range(0..all.len())]
        }
    }
}

/// A root of unity times small rational powers of 2, 3 and `q`.
fn scalar(rng: &mut ChaCha8Rng, q: u64) -> ExactScalar {
    ExactScalar::root_of_unity(Q::new(rng.gen_range(0..12), 12))
        .mul(&ExactScalar::prime_power(2, Q::new(rng.gen_range(-2..=2), 2)))
        .mul(&ExactScalar::prime_power(3, Q::from(rng.gen_range(-1..=1))))
        .mul(&ExactScalar::prime_power(q, Q::new(rng.gen_range(-2..=2), 2)))
}

fn eigen(rng: &mut ChaCha8Rng, q: u64, lo: usize, hi: usize) -> Vec<ExactScalar> {
    let n = rng.gen_range(lo..=hi);
    (0..n).map(|_| scalar(rng, q)).collect()
}

fn rep(kind: RepKind, m: u32, q: u64, e: Vec<ExactScalar>) -> SatakeRep<ExactScalar> {
    SatakeRep::new(kind, m, q, e, false).expect("nonzero eigenvalues")
}

/// `(π, τ)` with π of the family's kind.
fn pair(rng: &mut ChaCha8Rng, fam: Family) -> (SatakeRep<ExactScalar>, SatakeRep<ExactScalar>) {
    let (q, m) = cover_for(rng, fam);
    let kind = match fam {
        Family::Gl => RepKind::Gl,
        _ => RepKind::Sp,
    };
    let pi = rep(kind, m, q, eigen(rng, q, 1, 2));
    let tau = rep(RepKind::Gl, m, q, eigen(rng, q, 1, 2));
    (pi, tau)
}

fn show<C: TextCoef>(r: &SatakeRep<C>) -> String {
    let ev: Vec<String> = r.eigenvalues().iter().map(|e| e.write()).collect();
    format!("{:?} m={} q={} [{}]", r.kind(), r.m(), r.q(), ev.join(", "))
}

fn to_numeric(r: &SatakeRep<ExactScalar>) -> SatakeRep<Complex64> {
    let ev = r.eigenvalues().iter().map(|e| e.to_complex()).collect();
    SatakeRep::new(r.kind(), r.m(), r.q(), ev, false).expect("nonzero eigenvalues")
}

pub(super) fn register(reg: &mut Registry) {
    reg.add("lfactor.functional_equation", functional_equation);
    reg.add("lfactor.multiplicativity_1", multiplicativity_1);
    reg.add("lfactor.multiplicativity_2", multiplicativity_2);
    reg.add("lfactor.gl_factorization", gl_factorization);
    reg.add("lfactor.composition", composition);
    reg.add("lfactor.degree", degree);
    reg.add("lfactor.unramified_integral", integral);
    reg.add("lfactor.numeric_agreement", numeric_agreement);
    reg.add("lfactor.text_roundtrip", text_roundtrip);
    reg.add("lfactor.descriptor_roundtrip", descriptor_roundtrip);
}

/// `γ(s, π×τ) γ(1-s, π̃×τ̃) = 1` for doubling and, for GL, Rankin-Selberg.
fn functional_equation(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(240) {
        let (pi, tau) = pair(&mut ctx.rng, FAMILIES[i % 3]);
        let g = ctx.spoil_rf(gamma_unramified_doubling(&pi, &tau).unwrap());
        let back = gamma_unramified_doubling(&dual_rep(&pi), &dual_rep(&tau)).unwrap().reflect();
        let mut ok = g.mul(&back).is_one();
        if pi.kind() == RepKind::Gl {
            let rs = gamma_unramified_rs(&pi, &tau).unwrap();
            let rs_back = gamma_unramified_rs(&dual_rep(&pi), &dual_rep(&tau)).unwrap().reflect();
            ok &= rs.mul(&rs_back).is_one();
        }
        t.exact(ok, || format!("pi={} tau={}", show(&pi), show(&tau)));
    }
    t
}

/// π a constituent of the induced representation from `σ ⊗ π0`:
/// `γ(π×τ) = γ(π0×τ) ∏ γ(σ_i×τ)`.
fn multiplicativity_1(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(200) {
        let (pi0, tau) = pair(&mut ctx.rng, FAMILIES[i % 3]);
        let (q, m) = (pi0.q(), pi0.m());
        let sigma = rep(RepKind::Gl, m, q, eigen(&mut ctx.rng, q, 1, 2));
        let pi = rep_concat(&sigma, &pi0).unwrap();
        let lhs = ctx.spoil_rf(gamma_unramified_doubling(&pi, &tau).unwrap());
        let mut rhs = gamma_unramified_doubling(&pi0, &tau).unwrap();
        for e in sigma.eigenvalues() {
            let s1 = rep(RepKind::Gl, m, q, vec![e.clone()]);
            rhs = rhs.mul(&gamma_unramified_doubling(&s1, &tau).unwrap());
        }
        t.exact(lhs.equals(&rhs), || format!("sigma={} pi0={} tau={}", show(&sigma), show(&pi0), show(&tau)));
    }
    t
}

/// `γ(π×(τ1⊕τ2)) = γ(π×τ1) γ(π×τ2)`
fn multiplicativity_2(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(200) {
        let (pi, t1) = pair(&mut ctx.rng, FAMILIES[i % 3]);
        let t2 = rep(RepKind::Gl, pi.m(), pi.q(), eigen(&mut ctx.rng, pi.q(), 1, 2));
        let tau = rep_concat(&t1, &t2).unwrap();
        let whole = ctx.spoil_rf(gamma_unramified_doubling(&pi, &tau).unwrap());
        let parts = gamma_unramified_doubling(&pi, &t1).unwrap().mul(&gamma_unramified_doubling(&pi, &t2).unwrap());
        let mut ok = whole.equals(&parts);
        if pi.kind() == RepKind::Gl {
            let rs = gamma_unramified_rs(&pi, &tau).unwrap();
            ok &= rs.equals(&gamma_unramified_rs(&pi, &t1).unwrap().mul(&gamma_unramified_rs(&pi, &t2).unwrap()));
        }
        t.exact(ok, || format!("pi={} tau1={} tau2={}", show(&pi), show(&t1), show(&t2)));
    }
    t
}

/// For GL, the doubling factor is `γ(π×τ) γ(π̃×τ)` in Rankin-Selberg terms.
fn gl_factorization(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for _ in 0..ctx.n(200) {
        let (pi, tau) = pair(&mut ctx.rng, Family::Gl);
        let g = ctx.spoil_rf(gamma_unramified_doubling(&pi, &tau).unwrap());
        let split = gamma_unramified_rs(&pi, &tau).unwrap().mul(&gamma_unramified_rs(&dual_rep(&pi), &tau).unwrap());
        t.exact(g.equals(&split), || format!("pi={} tau={}", show(&pi), show(&tau)));
    }
    t
}

/// `C(s)·(a/b ratio)(s)·C(1-s)·(ratio)(1-s) = 1` on both branches.
fn composition(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(200) {
        let (_, tau) = pair(&mut ctx.rng, FAMILIES[i % 3]);
        let c = ctx.rng.gen_range(0..4);
        let c = if r_of(tau.m()) % 2 == 1 { 2 * c } else { c };
        for branch in [HBranch::Sp, HBranch::Gl] {
            let p = ctx.spoil_rf(composition_product(&tau, c, branch).unwrap());
            t.exact(p.is_one(), || format!("{:?} c={} tau={}", branch, c, show(&tau)));
        }
    }
    t
}

/// Denominator degrees of standard, pair, symmetric and exterior square factors.
fn degree(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(200) {
        let (pi, tau) = pair(&mut ctx.rng, FAMILIES[i % 3]);
        let vp = satake_vector(&pi).len() as u32;
        let vt = satake_vector(&tau).len() as u32;
        let d = tau.d() as u32;
        let lp = ctx.spoil_rf(l_pair(&pi, &tau, Q::from(0)).unwrap());
        let ok = lp.denominator_degree() == vp * vt
            && lp.numerator_degree() == 0
            && l_std(&pi, Q::from(0)).denominator_degree() == vp
            && l_sym2(&tau, Q::from(0)).unwrap().denominator_degree() == d * (d + 1) / 2
            && l_ext2(&tau, Q::from(0)).unwrap().denominator_degree() == d * (d - 1) / 2;
        t.exact(ok, || format!("pi={} tau={}", show(&pi), show(&tau)));
    }
    t
}

/// `γ Z = C · ratio · [γ(τ)] · Z*(1-s)` with `Z = L(π×τ)/b`.
fn integral(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(200) {
        let (pi, tau) = pair(&mut ctx.rng, FAMILIES[i % 3]);
        let (lhs, rhs) = unramified_integral_sides(&pi, &tau).unwrap();
        t.exact(ctx.spoil_rf(lhs).equals(&rhs), || format!("pi={} tau={}", show(&pi), show(&tau)));
    }
    t
}

/// Exact and floating coefficients give the same values, and the floating
/// functional equation holds within tolerance.
fn numeric_agreement(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(150) {
        let (pi, tau) = pair(&mut ctx.rng, FAMILIES[i % 3]);
        let (npi, ntau) = (to_numeric(&pi), to_numeric(&tau));
        let s = Complex64::new(ctx.rng.gen_range(-1.0..2.0), ctx.rng.gen_range(0.3..3.0));
        let exact = gamma_unramified_doubling(&pi, &tau).unwrap().evaluate(s);
        let g = gamma_unramified_doubling(&npi, &ntau).unwrap();
        let approx = g.evaluate(s);
        let back = gamma_unramified_doubling(&dual_rep(&npi), &dual_rep(&ntau)).unwrap().reflect();
        let fe = g.mul(&back).is_one();
        let res = ctx.spoil_f64((approx - exact).norm() / exact.norm().max(1e-300));
        let res = if fe { res } else { f64::INFINITY };
        t.approx(res, 1e-9, || format!("s={} pi={} tau={}", s, show(&pi), show(&tau)));
    }
    t
}

/// `parse(format(f)) = f` and formatting is stable.
fn text_roundtrip(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(200) {
        let (pi, tau) = pair(&mut ctx.rng, FAMILIES[i % 3]);
        let c = 2 * ctx.rng.gen_range(0..3);
        let fs = [
            gamma_unramified_doubling(&pi, &tau).unwrap(),
            c_factor(&tau, c, HBranch::Sp).unwrap(),
            l_sym2(&tau, Q::new(1, 2)).unwrap().reflect(),
        ];
        for f in fs {
            let text = format_rf(&f);
            let back = parse_rf::<ExactScalar>(f.q(), &text).map(|g| ctx.spoil_rf(g));
            let ok = matches!(&back, Ok(g) if g.equals(&f) && format_rf(g) == text);
            t.exact(ok, || format!("text {}", text));
        }
        let nf = gamma_unramified_doubling(&to_numeric(&pi), &to_numeric(&tau)).unwrap();
        let text = format_rf(&nf);
        let back = parse_rf::<Complex64>(nf.q(), &text);
        t.exact(matches!(&back, Ok(g) if g.equals(&nf)), || format!("text {}", text));
    }
    t
}

fn random_rep(rng: &mut ChaCha8Rng, i: usize) -> Rep {
    let (pi, _) = pair(rng, FAMILIES[i % 3]);
    match i % 3 {
        0 => Rep::Exact(pi),
        1 => {
            let ev = (0..rng.gen_range(1..4))
                .map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                .collect();
            let kind = if rng.gen() { RepKind::Sp } else { RepKind::Gl };
            Rep::Numeric(SatakeRep::new(kind, pi.m(), pi.q(), ev, false).unwrap())
        }
        _ => {
            let chars = (0..rng.gen_range(1..4))
                .map(|_| ComplexCharacter::new(rng.gen_range(-5..=5), Complex64::new(rng.gen(), rng.gen_range(-2.0..2.0))))
                .collect();
            let kind = if rng.gen() { ComplexKind::Sp } else { ComplexKind::Gl };
            Rep::Complex(ComplexRep::new(kind, rng.gen_range(1..7), chars))
        }
    }
}

/// Canonical JSON re-parses to the same descriptor and re-prints byte for byte.
fn descriptor_roundtrip(ctx: &mut Ctx) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(300) {
        let r = random_rep(&mut ctx.rng, i);
        let text = write_descriptor(&r);
        let back = parse_descriptor(&text);
        let again = back.as_ref().map(write_descriptor);
        let ok = matches!(&back, Ok(b) if *b == r) && again.as_deref() == Ok(text.as_str());
        t.exact(ctx.spoil_bool(ok), || format!("{} descriptor {}", r.label(), text.trim()));
    }
    t
}
