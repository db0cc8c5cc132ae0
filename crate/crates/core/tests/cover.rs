use mwb_core::arith::{hilbert_symbol, LocalFieldElem, RootOfUnity};
use mwb_core::cover::*;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const COVERS: [(u64, u32); 5] = [(7, 3), (13, 2), (13, 3), (31, 3), (31, 5)];

fn le(v: i64, u: u64) -> LocalFieldElem {
    LocalFieldElem::new(v, u).unwrap()
}

fn rand_elem(rng: &mut ChaCha8Rng, q: u64) -> LocalFieldElem {
    le(rng.gen_range(-3..=3), rng.gen_range(1..q))
}

fn rand_torus(rng: &mut ChaCha8Rng, q: u64, n: usize) -> Vec<LocalFieldElem> {
    (0..n).map(|_| rand_elem(rng, q)).collect()
}

fn rand_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn rand_monomial(rng: &mut ChaCha8Rng, cover: &Cover, kind: Kind, d: usize) -> MonomialCoverElem {
    let eps = RootOfUnity::new(rng.gen_range(0..cover.m() as i64), cover.m());
    match kind {
        Kind::Gl | Kind::Diamond => {
            let signs = (0..d).map(|_| if rng.gen() { 1 } else { -1 }).collect();
            let w = SignedPermutation::new(rand_perm(rng, d), signs).unwrap();
            MonomialCoverElem::from_parts(cover, kind, rand_torus(rng, cover.q(), d), &w, eps).unwrap()
        }
        Kind::Sp => {
            let flips: Vec<bool> = (0..d).map(|_| rng.gen()).collect();
            let w = SignedPermutation::sp_weyl(&rand_perm(rng, d), &flips).unwrap();
            let t = cover.sp_torus(&rand_torus(rng, cover.q(), d));
            MonomialCoverElem::from_parts(cover, kind, t, &w, eps).unwrap()
        }
    }
}

fn mul(cover: &Cover, x: &MonomialCoverElem, y: &MonomialCoverElem) -> MonomialCoverElem {
    monomial_mul(cover, x, y).unwrap()
}

#[test]
fn gl_torus_examples() {
    let cover = Cover::new(7, 3).unwrap();
    let w = LocalFieldElem::uniformizer();
    let one = LocalFieldElem::one();
    assert!(cocycle_gl_torus(&cover, &[w, one], &[one, w]).unwrap().is_one());
    assert!(cocycle_gl_torus(&cover, &[w, le(2, 3)], &[one, one]).unwrap().is_one());
    assert_eq!(
        cocycle_gl_torus(&cover, &[w], &[w, w]),
        Err(CoverError::LengthMismatch(1, 2))
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let t = rand_torus(&mut rng, 7, 3);
        let u = rand_torus(&mut rng, 7, 3);
        let mut e = 0i64;
        for i in 0..3 {
            for j in 0..3 {
                if i < j {
                    e += hilbert_symbol(t[i], u[j], cover.field(), 3).exponent() as i64;
                }
            }
        }
        assert_eq!(cocycle_gl_torus(&cover, &t, &u).unwrap(), RootOfUnity::new(e, 3));
    }
}

#[test]
fn sp_and_diamond_torus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        let (a, b) = (rand_elem(&mut rng, q), rand_elem(&mut rng, q));
        assert_eq!(cocycle_sp_torus(&cover, &[a], &[b]).unwrap(), cover.symbol(a, b).inv());
        assert!(cocycle_sp_torus(&cover, &[a], &[LocalFieldElem::one()]).unwrap().is_one());
        for d in 1..=4 {
            let t = rand_torus(&mut rng, q, d);
            let u = rand_torus(&mut rng, q, d);
            let direct = cocycle_diamond_torus(&cover, &t, &u).unwrap();
            assert_eq!(direct, cocycle_diamond_torus_embedded(&cover, &t, &u).unwrap());
            assert_eq!(
                cocycle_sp_torus(&cover, &t, &u).unwrap(),
                cocycle_gl_torus(&cover, &cover.sp_torus(&t), &cover.sp_torus(&u)).unwrap()
            );
            // blocks of sizes 1 and d-1
            if d > 1 {
                let blocks = cocycle_diamond_torus(&cover, &t[..1], &u[..1]).unwrap()
                    * cocycle_diamond_torus(&cover, &t[1..], &u[1..]).unwrap();
                assert_eq!(direct, blocks);
            }
        }
    }
    let cover = Cover::new(7, 3).unwrap();
    let w = LocalFieldElem::uniformizer();
    assert!(cocycle_diamond_torus(&cover, &[w], &[w]).unwrap().is_one());
}

#[test]
fn gl_block_compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        for _ in 0..100 {
            let l0 = rng.gen_range(1..4);
            let l1 = rng.gen_range(1..4);
            let (a, a2) = (rand_torus(&mut rng, q, l0), rand_torus(&mut rng, q, l0));
            let (b, b2) = (rand_torus(&mut rng, q, l1), rand_torus(&mut rng, q, l1));
            let lhs = cocycle_gl_torus(&cover, &[a.clone(), b.clone()].concat(), &[a2.clone(), b2.clone()].concat()).unwrap();
            let rhs = cover.symbol(cover.det(&a), cover.det(&b2))
                * cocycle_gl_torus(&cover, &a, &a2).unwrap()
                * cocycle_gl_torus(&cover, &b, &b2).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn gl2_reflection_conjugates_torus() {
    let cover = Cover::new(13, 3).unwrap();
    let (a, b) = (le(1, 2), le(-2, 5));
    let s = MonomialCoverElem::weyl_elem(&cover, Kind::Gl, &SignedPermutation::simple_reflection(2, 0)).unwrap();
    let t = MonomialCoverElem::torus_elem(&cover, Kind::Gl, vec![a, b]).unwrap();
    let conj = mul(&cover, &mul(&cover, &s, &t), &monomial_inv(&cover, &s).unwrap());
    assert_eq!(conj.torus(), &[b, a]);
    assert_eq!(conj.perm(), &[0, 1]);
    assert_eq!(conj.eps(), cover.symbol(b, a));
    assert!(!conj.eps().is_one());
}

#[test]
fn weyl_conjugation_of_torus() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        for kind in [Kind::Gl, Kind::Sp, Kind::Diamond] {
            for _ in 0..50 {
                let d = rng.gen_range(1..=3);
                let ws = match kind {
                    Kind::Sp => {
                        let flips: Vec<bool> = (0..d).map(|_| rng.gen()).collect();
                        SignedPermutation::sp_weyl(&rand_perm(&mut rng, d), &flips).unwrap()
                    }
                    _ => SignedPermutation::unsigned(rand_perm(&mut rng, d)).unwrap(),
                };
                let w = MonomialCoverElem::weyl_elem(&cover, kind, &ws).unwrap();
                let n = w.size();
                let t_free = rand_torus(&mut rng, q, d);
                let t = if kind == Kind::Sp { cover.sp_torus(&t_free) } else { t_free };
                let te = MonomialCoverElem::torus_elem(&cover, kind, t.clone()).unwrap();
                let conj = mul(&cover, &mul(&cover, &w, &te), &monomial_inv(&cover, &w).unwrap());
                let mut moved = vec![LocalFieldElem::one(); n];
                for i in 0..n {
                    moved[w.perm()[i]] = t[i];
                }
                assert_eq!(conj.torus(), &moved[..]);
                let want = match kind {
                    Kind::Gl => gl_weyl_correction(&cover, w.perm(), &t),
                    _ => cover.one(),
                };
                assert_eq!(conj.eps(), want);
            }
        }
    }
}

#[test]
fn associativity_and_inverses() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        for kind in [Kind::Gl, Kind::Sp, Kind::Diamond] {
            for _ in 0..300 {
                let d = rng.gen_range(1..=4);
                let x = rand_monomial(&mut rng, &cover, kind, d);
                let y = rand_monomial(&mut rng, &cover, kind, d);
                let z = rand_monomial(&mut rng, &cover, kind, d);
                let lhs = mul(&cover, &mul(&cover, &x, &y), &z);
                let rhs = mul(&cover, &x, &mul(&cover, &y, &z));
                assert_eq!(lhs, rhs, "{kind:?} q={q} m={m}");
                let xi = monomial_inv(&cover, &x).unwrap();
                assert!(mul(&cover, &x, &xi).is_identity());
                assert!(mul(&cover, &xi, &x).is_identity());
            }
        }
        let id = MonomialCoverElem::identity(&cover, Kind::Gl, 3);
        assert_eq!(monomial_inv(&cover, &id).unwrap(), id);
    }
}

#[test]
fn torus_inverse_eps() {
    let cover = Cover::new(31, 5).unwrap();
    let t = vec![le(1, 3), le(2, 7), le(-1, 11)];
    let x = MonomialCoverElem::torus_elem(&cover, Kind::Gl, t.clone()).unwrap();
    let tinv: Vec<_> = t.iter().map(|&a| cover.inv(a)).collect();
    let xi = monomial_inv(&cover, &x).unwrap();
    assert_eq!(xi.torus(), &tinv[..]);
    assert_eq!(xi.eps(), cocycle_gl_torus(&cover, &t, &tinv).unwrap().inv());
}

#[test]
fn sp_product_agrees_with_gl2d_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        for _ in 0..200 {
            let d = rng.gen_range(1..=3);
            let x = rand_monomial(&mut rng, &cover, Kind::Sp, d);
            let y = rand_monomial(&mut rng, &cover, Kind::Sp, d);
            let sp = mul(&cover, &x, &y);
            let gl = mul(&cover, &x.with_kind(Kind::Gl), &y.with_kind(Kind::Gl));
            assert_eq!(sp.with_kind(Kind::Gl), gl);
        }
    }
}

#[test]
fn diamond_product_agrees_with_sp_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        for _ in 0..200 {
            let d = rng.gen_range(1..=3);
            let x = rand_monomial(&mut rng, &cover, Kind::Diamond, d);
            let y = rand_monomial(&mut rng, &cover, Kind::Diamond, d);
            let lhs = embed_in_sp(&cover, &mul(&cover, &x, &y)).unwrap();
            let rhs = mul(&cover, &embed_in_sp(&cover, &x).unwrap(), &embed_in_sp(&cover, &y).unwrap());
            assert_eq!(lhs, rhs);
            let sx = star_involution(&cover, &x).unwrap();
            assert_eq!(star_involution(&cover, &sx).unwrap(), x);
            assert_eq!(
                star_involution(&cover, &mul(&cover, &x, &y)).unwrap(),
                mul(&cover, &sx, &star_involution(&cover, &y).unwrap())
            );
        }
    }
    let cover = Cover::new(7, 3).unwrap();
    let id = MonomialCoverElem::identity(&cover, Kind::Diamond, 2);
    assert_eq!(star_involution(&cover, &id).unwrap(), id);
    assert!(star_involution(&cover, &id.with_kind(Kind::Gl)).is_err());
}

#[test]
fn pairings() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cover = Cover::new(7, 3).unwrap();
    let (a, b) = (le(1, 1), le(0, 3));
    // d = 1: σ^◇ pairing (a,b)^{-2}, det pairing (a,b)^2, σ pairing trivial
    assert_eq!(commutator_pairing(&cover, Pairing::Diamond, &[a], &[b]).unwrap(), cover.symbol(a, b).pow(-2));
    assert_eq!(commutator_pairing(&cover, Pairing::Det, &[a], &[b]).unwrap(), cover.symbol(a, b).pow(2));
    assert!(!cover.symbol(a, b).pow(2).is_one());
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        for _ in 0..200 {
            let d = rng.gen_range(1..=4);
            let t = rand_torus(&mut rng, q, d);
            let u = rand_torus(&mut rng, q, d);
            assert!(commutator_pairing(&cover, Pairing::Diamond, &t, &t).unwrap().is_one());
            assert!(pairings_cohomologous(&cover, &t, &u).unwrap());
        }
    }
}

#[test]
fn conjugating_unipotents() {
    let cover = Cover::new(13, 3).unwrap();
    let x = le(1, 5);
    let u = BlockUnipotent::elementary(vec![1, 1, 1], 0, 2, x).unwrap();
    let t = MonomialCoverElem::torus_elem(&cover, Kind::Gl, vec![le(2, 3), le(0, 1), le(-1, 4)]).unwrap();
    let (v, cert) = conj_by_monomial(&cover, &t, &u, Direction::Forward).unwrap();
    // t_0 x t_2^{-1}
    assert_eq!(v.entry(0, 2), Some(cover.mul(cover.mul(le(2, 3), x), cover.inv(le(-1, 4)))));
    assert_eq!(cert.rule, ConjRule::Torus);
    assert!(cert.eps_unchanged && cert.composition_kept);
    let (back, _) = conj_by_monomial(&cover, &t, &v, Direction::Backward).unwrap();
    assert_eq!(back, u);

    // (0 1) fixes the positive root e_0 - e_2 set {0,2} -> {1,2}
    let s = MonomialCoverElem::weyl_elem(&cover, Kind::Gl, &SignedPermutation::simple_reflection(3, 0)).unwrap();
    let (v, cert) = conj_by_monomial(&cover, &s, &u, Direction::Forward).unwrap();
    assert_eq!(v.entry(1, 2), Some(x));
    assert_eq!(cert.rule, ConjRule::Weyl);
    let u01 = BlockUnipotent::elementary(vec![1, 1, 1], 0, 1, x).unwrap();
    assert_eq!(conj_by_monomial(&cover, &s, &u01, Direction::Forward), Err(CoverError::LeavesCone));

    // block structure (2,1) is lost when an entry lands inside a block
    let ub = BlockUnipotent::elementary(vec![1, 2], 0, 2, x).unwrap();
    let w = MonomialCoverElem::weyl_elem(&cover, Kind::Gl, &SignedPermutation::unsigned(vec![0, 2, 1]).unwrap()).unwrap();
    let (v, cert) = conj_by_monomial(&cover, &w, &ub, Direction::Forward).unwrap();
    assert!(cert.composition_kept);
    assert_eq!(v.entry(0, 1), Some(x));
    let w2 = MonomialCoverElem::weyl_elem(&cover, Kind::Gl, &SignedPermutation::unsigned(vec![1, 0, 2]).unwrap()).unwrap();
    let (v, cert) = conj_by_monomial(&cover, &w2, &ub, Direction::Forward).unwrap();
    assert!(!cert.composition_kept);
    assert_eq!(v.composition(), &[1, 1, 1]);
}

#[test]
fn psi_character_on_three_blocks() {
    let cover = Cover::new(7, 3).unwrap();
    let f = cover.field();
    let c = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let n = 3 * c;
        let mut entries = vec![vec![None; n]; n];
        let mut trace = 0i64;
        for i in 0..n {
            for j in 0..n {
                if i / c < j / c && rng.gen_bool(0.7) {
                    let v = rng.gen_range(0..=2);
                    let u = rng.gen_range(1..7);
                    entries[i][j] = Some(le(v, u));
                    if v == 0 && j / c == i / c + 1 && j % c == i % c {
                        trace += u as i64;
                    }
                }
            }
        }
        let v = BlockUnipotent::new(vec![c; 3], entries).unwrap();
        let want = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (trace % 7) as f64 / 7.0);
        assert!((psi_block_character(&v, f).unwrap() - want).norm() < 1e-12);
    }
    let mut entries = vec![vec![None; 4]; 4];
    entries[0][2] = Some(le(-1, 1));
    let bad = BlockUnipotent::new(vec![2, 2], entries).unwrap();
    assert_eq!(psi_block_character(&bad, f), Err(CoverError::NotIntegral));
    let mut entries = vec![vec![None; 4]; 4];
    entries[0][2] = Some(le(0, 3));
    entries[1][3] = Some(le(0, 4));
    let zero_trace = BlockUnipotent::new(vec![2, 2], entries).unwrap();
    assert!((psi_block_character(&zero_trace, f).unwrap() - 1.0).norm() < 1e-15);
}

#[test]
fn centers() {
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        let r = cover.r() as i64;
        for d in 1..=4 {
            for a in [LocalFieldElem::uniformizer(), le(0, cover.field().generator()), le(1, 3)] {
                let ar = cover.pow(a, r);
                let x = MonomialCoverElem::torus_elem(&cover, Kind::Diamond, vec![ar; d]).unwrap();
                assert!(center_check(&cover, &x).unwrap());
            }
            let minus = MonomialCoverElem::torus_elem(&cover, Kind::Diamond, vec![cover.minus_one(); d]).unwrap();
            assert!(center_check(&cover, &minus).unwrap());
            let sp_minus = MonomialCoverElem::torus_elem(&cover, Kind::Sp, vec![cover.minus_one(); 2 * d]).unwrap();
            assert!(center_check(&cover, &sp_minus).unwrap());
            let z = MonomialCoverElem::central(&cover, Kind::Gl, d, RootOfUnity::new(1, m));
            assert!(center_check(&cover, &z).unwrap());
        }
        // ϖ I is central exactly when r | 1
        let w = MonomialCoverElem::torus_elem(&cover, Kind::Diamond, vec![LocalFieldElem::uniformizer(); 2]).unwrap();
        assert_eq!(center_check(&cover, &w).unwrap(), r == 1);
        let s = MonomialCoverElem::weyl_elem(&cover, Kind::Diamond, &SignedPermutation::simple_reflection(2, 0)).unwrap();
        assert!(!center_check(&cover, &s).unwrap());
    }
}

#[test]
fn doubling_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        for _ in 0..40 {
            let c = rng.gen_range(1..=2);
            let k = rng.gen_range(1..=2);
            let g = [0; 4].map(|_| rand_monomial(&mut rng, &cover, Kind::Diamond, c));
            let id = MonomialCoverElem::identity(&cover, Kind::Diamond, c);
            assert!(doubling_embed_gl(&cover, &id, &id, k).unwrap().is_identity());
            let e1 = doubling_embed_gl(&cover, &g[0], &id, k).unwrap();
            let e2 = doubling_embed_gl(&cover, &id, &g[1], k).unwrap();
            assert_eq!(e1.size(), 2 * cover.r() as usize * k * c);
            assert_eq!(mul(&cover, &e1, &e2), mul(&cover, &e2, &e1));
            // homomorphism for the product with cocycle σ^◇(g1,g1')^{-1} σ^◇(g2,g2')
            let lhs = doubling_embed_gl(&cover, &mul(&cover, &g[0], &g[2]), &mul(&cover, &g[1], &g[3]), k).unwrap();
            let rhs = mul(
                &cover,
                &doubling_embed_gl(&cover, &g[0], &g[1], k).unwrap(),
                &doubling_embed_gl(&cover, &g[2], &g[3], k).unwrap(),
            );
            assert_eq!(lhs, rhs);
            // torus case against the block formula
            let (t1, t2, u1, u2) = (
                rand_torus(&mut rng, q, c),
                rand_torus(&mut rng, q, c),
                rand_torus(&mut rng, q, c),
                rand_torus(&mut rng, q, c),
            );
            let mk = |t: &Vec<LocalFieldElem>| MonomialCoverElem::torus_elem(&cover, Kind::Diamond, t.clone()).unwrap();
            let a = doubling_embed_gl(&cover, &mk(&t1), &mk(&t2), k).unwrap();
            let b = doubling_embed_gl(&cover, &mk(&u1), &mk(&u2), k).unwrap();
            let sigma = cocycle_diamond_torus(&cover, a.torus(), b.torus()).unwrap();
            let want = cocycle_diamond_torus(&cover, &t1, &u1).unwrap().inv() * cocycle_diamond_torus(&cover, &t2, &u2).unwrap();
            assert_eq!(sigma, want);
        }
    }
}

#[test]
fn diagonal_power_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        let b = rand_torus(&mut rng, q, 2);
        let (x, y) = diag_embed_power(&cover, &b, &[LocalFieldElem::one(); 2], 1).unwrap();
        assert!(x.is_one() && y.is_one());
        for c in 1..=2 {
            for k in 1..=3 {
                let b = rand_torus(&mut rng, q, c);
                let b2 = rand_torus(&mut rng, q, c);
                let (x, y) = diag_embed_power(&cover, &b, &b2, k).unwrap();
                assert_eq!(x, y);
                let rk = (cover.r() as usize * k) as i64;
                let mut e = 0;
                for i in 0..c {
                    e -= cover.symbol(b[i], b2[i]).exponent() as i64 * rk;
                }
                assert_eq!(x, RootOfUnity::new(e, m));
            }
        }
    }
}

#[test]
fn dependence_commutator_is_trivial_for_even_c() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (q, m) in COVERS {
        let cover = Cover::new(q, m).unwrap();
        for _ in 0..20 {
            let (b, x) = (rand_elem(&mut rng, q), rand_elem(&mut rng, q));
            for c in [2, 4] {
                for k in 1..=2 {
                    let comm = dependence_commutator(&cover, b, x, c, k).unwrap();
                    let rk = cover.r() as i64 * k as i64;
                    assert_eq!(comm, cover.symbol(b, x).pow((rk + 1) * rk * c as i64));
                    assert!(comm.is_one());
                }
            }
        }
    }
}
