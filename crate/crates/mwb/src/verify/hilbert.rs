use mwb_core::arith::*;

use super::{Registry, Tally};

fn elements(q: u64, vmax: i64) -> Vec<LocalFieldElem> {
    (-vmax..=vmax)
        .flat_map(|v| (1..q).map(move |u| LocalFieldElem { valuation: v, unit: u }))
        .collect()
}

/// Exhaustive over valuations `|v| ≤ 2`.
pub(super) fn register(reg: &mut Registry, q: u64, m: u32) {
    let tag = format!("q{}m{}", q, m);
    let field = move || ResidueField::for_cover(q, m).expect("tame cover");
    reg.add(format!("hilbert.mu_embed_oracle.{}", tag), move |ctx| {
        let f = field();
        let mut t = Tally::default();
        let e = (q - 1) / m as u64;
        let base = (0..e).fold(1u64, |acc, _| acc * f.generator() % q);
        for u in 1..q {
            let target = (0..e).fold(1u64, |acc, _| acc * u % q);
            let k = (0..m as u64).find(|&k| (0..k).fold(1u64, |acc, _| acc * base % q) == target);
            let got = ctx.spoil_root(mu_embed(u, &f, m).unwrap()).exponent() as u64;
            t.exact(k == Some(got), || format!("u={}", u));
        }
        t
    });
    reg.add(format!("hilbert.bimultiplicative.{}", tag), move |ctx| {
        let f = field();
        let els = elements(q, 2);
        let hs = |a, b| hilbert_symbol(a, b, &f, m);
        let mut t = Tally::default();
        for &a in &els {
            for &b in &els {
                let ab = hs(a, b);
                for &c in &els {
                    let left = hs(local_mul(&f, a, b), c) == ctx.spoil_root(hs(a, c) * hs(b, c));
                    let right = hs(a, local_mul(&f, b, c)) == ab * hs(a, c);
                    t.exact(left && right, || format!("a={} b={} c={}", a, b, c));
                }
            }
        }
        t
    });
    reg.add(format!("hilbert.skew_symmetric.{}", tag), move |ctx| {
        let f = field();
        let els = elements(q, 2);
        let minus = LocalFieldElem::unit(q - 1);
        let mut t = Tally::default();
        for &a in &els {
            let alt = hilbert_symbol(a, a, &f, m).is_one() && hilbert_symbol(a, minus, &f, m).is_one();
            for &b in &els {
                let prod = ctx.spoil_root(hilbert_symbol(a, b, &f, m) * hilbert_symbol(b, a, &f, m));
                t.exact(alt && prod.is_one(), || format!("a={} b={}", a, b));
            }
        }
        t
    });
    reg.add(format!("hilbert.steinberg.{}", tag), move |ctx| {
        let f = field();
        let mut t = Tally::default();
        for v in -2..=2i64 {
            for u in 1..q {
                if v == 0 && u == 1 {
                    continue;
                }
                let a = LocalFieldElem { valuation: v, unit: u };
                // leading term of 1 - a
                let one_minus = match v {
                    0 => LocalFieldElem::unit(f.reduce(1 - u as i64)),
                    v if v > 0 => LocalFieldElem::one(),
                    _ => LocalFieldElem { valuation: v, unit: f.neg(u) },
                };
                let s = ctx.spoil_root(hilbert_symbol(a, one_minus, &f, m));
                t.exact(s.is_one(), || format!("a={}", a));
            }
        }
        t
    });
    reg.add(format!("hilbert.units_and_kernel.{}", tag), move |ctx| {
        let f = field();
        let mut t = Tally::default();
        let powers: Vec<u64> = (1..q).map(|x| f.pow(x, m as i64)).collect();
        let w = LocalFieldElem::uniformizer();
        for u in 1..q {
            for u2 in 1..q {
                let units = hilbert_symbol(LocalFieldElem::unit(u), LocalFieldElem::unit(u2), &f, m);
                t.exact(ctx.spoil_root(units).is_one(), || format!("u={} u'={}", u, u2));
            }
            let s = hilbert_symbol(w, LocalFieldElem::unit(u), &f, m);
            t.exact(s.is_one() == powers.contains(&u), || format!("(w,{}) against m-th powers", u));
        }
        t
    });
}
