use mwb_core::arith::*;

/// u^{(q-1)/m} by repeated multiplication, then its log relative to
/// g^{(q-1)/m} by search.
fn oracle_mu(u: u64, q: u64, g: u64, m: u32) -> u32 {
    let e = (q - 1) / m as u64;
    let pw = |x: u64, n: u64| (0..n).fold(1u64, |acc, _| acc * x % q);
    let target = pw(u, e);
    let base = pw(g, e);
    (0..m).find(|&k| pw(base, k as u64) == target).unwrap()
}

fn elements(q: u64, vmax: i64) -> Vec<LocalFieldElem> {
    (-vmax..=vmax)
        .flat_map(|v| (1..q).map(move |u| LocalFieldElem::new(v, u).unwrap()))
        .collect()
}

#[test]
fn mu_embed_matches_brute_force() {
    for (q, m) in [(7, 3), (7, 2), (13, 2), (13, 3), (13, 4), (31, 5)] {
        let f = ResidueField::new(q).unwrap();
        for u in 1..q {
            assert_eq!(mu_embed(u, &f, m).unwrap().exponent(), oracle_mu(u, q, f.generator(), m));
        }
    }
}

#[test]
fn mu_embed_examples() {
    let f = ResidueField::new(7).unwrap();
    assert!(mu_embed(1, &f, 3).unwrap().is_one());
    assert_eq!(mu_embed(f.generator(), &f, 3).unwrap().order(), 3);
    assert_eq!(mu_embed(0, &f, 3), Err(ArithError::Zero));
    assert!(matches!(mu_embed(2, &f, 4), Err(ArithError::NoRoots { .. })));
}

#[test]
fn mu_embed_kernel_is_mth_powers() {
    for (q, m) in [(7, 3), (13, 3), (31, 5)] {
        let f = ResidueField::new(q).unwrap();
        let powers: Vec<u64> = (1..q).map(|x| f.pow(x, m as i64)).collect();
        for u in 1..q {
            assert_eq!(mu_embed(u, &f, m).unwrap().is_one(), powers.contains(&u));
        }
        for a in 1..q {
            for b in 1..q {
                let lhs = mu_embed(f.mul(a, b), &f, m).unwrap();
                assert_eq!(lhs, mu_embed(a, &f, m).unwrap() * mu_embed(b, &f, m).unwrap());
            }
        }
    }
}

#[test]
fn symbol_of_uniformizer_and_three() {
    // q=7, g=3, (ϖ,3) = mu(3^{-1}) = mu(5); 5^2 = 4 = (3^2)^2
    let f = ResidueField::for_cover(7, 3).unwrap();
    let s = hilbert_symbol(LocalFieldElem::uniformizer(), LocalFieldElem::unit(3), &f, 3);
    assert_eq!(s.exponent(), 2);
    assert!(hilbert_symbol(LocalFieldElem::unit(3), LocalFieldElem::unit(5), &f, 3).is_one());
}

#[test]
fn symbol_laws_exhaustive_q7_m3() {
    let (q, m) = (7, 3);
    let f = ResidueField::for_cover(q, m).unwrap();
    let els = elements(q, 2);
    let hs = |a, b| hilbert_symbol(a, b, &f, m);
    let minus = LocalFieldElem::unit(q - 1);
    for &a in &els {
        assert!(hs(a, a).is_one());
        assert!(hs(a, minus).is_one());
        for &b in &els {
            let ab = hs(a, b);
            assert!((ab * hs(b, a)).is_one());
            for &c in &els {
                assert_eq!(hs(local_mul(&f, a, b), c), hs(a, c) * hs(b, c));
                assert_eq!(hs(a, local_mul(&f, b, c)), ab * hs(a, c));
            }
        }
    }
    // (a, 1-a) over units whose difference from 1 is a unit, at every valuation of a
    for v in -2..=2i64 {
        for u in 2..q {
            let a = LocalFieldElem::new(v, u).unwrap();
            let one_minus = match v {
                0 => LocalFieldElem::unit(f.reduce(1 - u as i64)),
                v if v > 0 => LocalFieldElem::one(),
                _ => LocalFieldElem::new(v, f.neg(u)).unwrap(),
            };
            assert!(hs(a, one_minus).is_one(), "Steinberg fails at {a}");
        }
    }
}
