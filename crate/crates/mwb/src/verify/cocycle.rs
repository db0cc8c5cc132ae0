use mwb_core::arith::{LocalFieldElem, RootOfUnity};
use mwb_core::cover::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Ctx, Registry, Tally};

fn rand_elem(rng: &mut ChaCha8Rng, q: u64) -> LocalFieldElem {
    LocalFieldElem {
        valuation: rng.gen_range(-3..=3),
        unit: rng.gen_range(1..q),
    }
}

fn rand_torus(rng: &mut ChaCha8Rng, q: u64, n: usize) -> Vec<LocalFieldElem> {
    (0..n).map(|_| rand_elem(rng, q)).collect()
}

fn rand_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn rand_weyl(rng: &mut ChaCha8Rng, kind: Kind, d: usize) -> SignedPermutation {
    match kind {
        Kind::Sp => {
            let flips: Vec<bool> = (0..d).map(|_| rng.gen()).collect();
            SignedPermutation::sp_weyl(&rand_perm(rng, d), &flips).expect("valid Sp Weyl element")
        }
        _ => {
            let signs = (0..d).map(|_| if rng.gen() { 1 } else { -1 }).collect();
            SignedPermutation::new(rand_perm(rng, d), signs).expect("valid signed permutation")
        }
    }
}

fn rand_monomial(rng: &mut ChaCha8Rng, cover: &Cover, kind: Kind, d: usize) -> MonomialCoverElem {
    let eps = RootOfUnity::new(rng.gen_range(0..cover.m() as i64), cover.m());
    let w = rand_weyl(rng, kind, d);
    let t = rand_torus(rng, cover.q(), d);
    let t = if kind == Kind::Sp { cover.sp_torus(&t) } else { t };
    MonomialCoverElem::from_parts(cover, kind, t, &w, eps).expect("valid monomial")
}

fn mul(cover: &Cover, x: &MonomialCoverElem, y: &MonomialCoverElem) -> MonomialCoverElem {
    monomial_mul(cover, x, y).expect("same kind and size")
}

fn show(t: &[LocalFieldElem]) -> String {
    t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

const KINDS: [Kind; 3] = [Kind::Gl, Kind::Sp, Kind::Diamond];

pub(super) fn register(reg: &mut Registry, covers: &[(u64, u32)]) {
    for &(q, m) in covers {
        let tag = format!("q{}m{}", q, m);
        let cover = move || Cover::new(q, m).expect("tame cover");
        reg.add(format!("cocycle.associativity.{}", tag), move |ctx| associativity(ctx, &cover()));
        reg.add(format!("cocycle.block_compat.{}", tag), move |ctx| block_compat(ctx, &cover()));
        reg.add(format!("cocycle.weyl_conjugation.{}", tag), move |ctx| weyl_conjugation(ctx, &cover()));
        reg.add(format!("cocycle.centrality.{}", tag), move |ctx| centrality(ctx, &cover()));
        reg.add(format!("cocycle.diag_power.{}", tag), move |ctx| diag_power(ctx, &cover()));
        reg.add(format!("cocycle.doubling_commute.{}", tag), move |ctx| doubling(ctx, &cover()));
        reg.add(format!("cocycle.sp_embedding.{}", tag), move |ctx| embeddings(ctx, &cover()));
        reg.add(format!("cocycle.pairings.{}", tag), move |ctx| pairings(ctx, &cover()));
        reg.add(format!("cocycle.psi_commutator.{}", tag), move |ctx| psi_commutator(ctx, &cover()));
    }
}

/// `(xy)z = x(yz)` and two-sided inverses, cycling through the three kinds.
fn associativity(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(10_000) {
        let kind = KINDS[i % 3];
        let d = ctx.rng.gen_range(1..=4);
        let [x, y, z] = [0; 3].map(|_| rand_monomial(&mut ctx.rng, cover, kind, d));
        let lhs = mul(cover, &mul(cover, &x, &y), &z);
        let rhs = mul(cover, &x, &mul(cover, &y, &z));
        let xi = monomial_inv(cover, &x).expect("invertible");
        let eps = ctx.spoil_root(rhs.eps());
        let ok = lhs.eps() == eps
            && lhs.torus() == rhs.torus()
            && lhs.perm() == rhs.perm()
            && mul(cover, &x, &xi).is_identity()
            && mul(cover, &xi, &x).is_identity();
        t.exact(ok, || format!("{:?} x=({}) y=({}) z=({})", kind, show(x.torus()), show(y.torus()), show(z.torus())));
    }
    t
}

/// Block compatibility of the GL torus cocycle, and block multiplicativity of
/// the GL-in-Sp torus cocycle, for random block sizes.
fn block_compat(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    let q = cover.q();
    for _ in 0..ctx.n(1_000) {
        let (l0, l1) = (ctx.rng.gen_range(1..4), ctx.rng.gen_range(1..4));
        let (a, a2) = (rand_torus(&mut ctx.rng, q, l0), rand_torus(&mut ctx.rng, q, l0));
        let (b, b2) = (rand_torus(&mut ctx.rng, q, l1), rand_torus(&mut ctx.rng, q, l1));
        let (ab, ab2) = ([a.clone(), b.clone()].concat(), [a2.clone(), b2.clone()].concat());
        let lhs = cocycle_gl_torus(cover, &ab, &ab2).unwrap();
        let rhs = cover.symbol(cover.det(&a), cover.det(&b2))
            * cocycle_gl_torus(cover, &a, &a2).unwrap()
            * cocycle_gl_torus(cover, &b, &b2).unwrap();
        let dlhs = cocycle_diamond_torus(cover, &ab, &ab2).unwrap();
        let drhs = cocycle_diamond_torus(cover, &a, &a2).unwrap() * cocycle_diamond_torus(cover, &b, &b2).unwrap();
        let ok = lhs == ctx.spoil_root(rhs) && dlhs == drhs;
        t.exact(ok, || format!("a=({}) b=({}) a'=({}) b'=({})", show(&a), show(&b), show(&a2), show(&b2)));
    }
    t
}

/// `w ⟨t,1⟩ w^{-1} = ⟨^w t, corr⟩`, with `corr` trivial except for GL.
fn weyl_conjugation(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    for i in 0..ctx.n(1_000) {
        let kind = KINDS[i % 3];
        let d = ctx.rng.gen_range(1..=4);
        let ws = match kind {
            Kind::Sp => rand_weyl(&mut ctx.rng, kind, d),
            _ => SignedPermutation::unsigned(rand_perm(&mut ctx.rng, d)).unwrap(),
        };
        let w = MonomialCoverElem::weyl_elem(cover, kind, &ws).unwrap();
        let free = rand_torus(&mut ctx.rng, cover.q(), d);
        let tor = if kind == Kind::Sp { cover.sp_torus(&free) } else { free };
        let te = MonomialCoverElem::torus_elem(cover, kind, tor.clone()).unwrap();
        let conj = mul(cover, &mul(cover, &w, &te), &monomial_inv(cover, &w).unwrap());
        let mut moved = vec![LocalFieldElem::one(); w.size()];
        for (i, &x) in tor.iter().enumerate() {
            moved[w.perm()[i]] = x;
        }
        let want = match kind {
            Kind::Gl => gl_weyl_correction(cover, w.perm(), &tor),
            _ => cover.one(),
        };
        let ok = conj.torus() == &moved[..] && conj.perm().iter().enumerate().all(|(i, &p)| i == p);
        let ok = ok && conj.eps() == ctx.spoil_root(want);
        t.exact(ok, || format!("{:?} w={:?} t=({})", kind, ws.perm(), show(&tor)));
    }
    t
}

/// Central elements commute with every monomial generator; `ϖ I` does only
/// when `r = 1`; a simple reflection never does.
fn centrality(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    let r = cover.r() as i64;
    let q = cover.q();
    let check = |t: &mut Tally, x: &MonomialCoverElem, want: bool, label: &str| {
        let got = center_check(cover, x).unwrap();
        t.exact(ctx.spoil_bool(got == want), || format!("{} ({})", label, show(x.torus())));
    };
    for d in 1..=4 {
        let scalar = |a: LocalFieldElem| MonomialCoverElem::torus_elem(cover, Kind::Diamond, vec![a; d]).unwrap();
        for u in 1..q {
            for v in -1..=1 {
                let a = cover.pow(LocalFieldElem { valuation: v, unit: u }, r);
                check(&mut t, &scalar(a), true, "a^r I");
            }
        }
        check(&mut t, &scalar(cover.minus_one()), true, "-I");
        let sp_minus = MonomialCoverElem::torus_elem(cover, Kind::Sp, vec![cover.minus_one(); 2 * d]).unwrap();
        check(&mut t, &sp_minus, true, "-I in Sp");
        for e in 0..cover.m() as i64 {
            let z = MonomialCoverElem::central(cover, Kind::Gl, d, RootOfUnity::new(e, cover.m()));
            check(&mut t, &z, true, "mu_m");
        }
        if d >= 2 {
            let w = scalar(LocalFieldElem::uniformizer());
            check(&mut t, &w, r == 1, "uniformizer I");
            let s = MonomialCoverElem::weyl_elem(cover, Kind::Diamond, &SignedPermutation::simple_reflection(d, 0)).unwrap();
            check(&mut t, &s, false, "simple reflection");
        }
    }
    t
}

/// `σ(diag(b,…,b), diag(b',…,b'))` over `rk` copies against the power law.
fn diag_power(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    let q = cover.q();
    for _ in 0..ctx.n(500) {
        let c = ctx.rng.gen_range(1..=2);
        let k = ctx.rng.gen_range(1..=3);
        let b = rand_torus(&mut ctx.rng, q, c);
        let b2 = rand_torus(&mut ctx.rng, q, c);
        let (x, y) = diag_embed_power(cover, &b, &b2, k).unwrap();
        let rk = cover.r() as i64 * k as i64;
        let e: i64 = (0..c).map(|i| -(cover.symbol(b[i], b2[i]).exponent() as i64) * rk).sum();
        let want = RootOfUnity::new(e, cover.m());
        t.exact(x == y && x == ctx.spoil_root(want), || format!("b=({}) b'=({}) k={}", show(&b), show(&b2), k));
    }
    t
}

/// The two factors of the doubling embedding commute, and the embedding is a
/// homomorphism with cocycle `σ(g1,g1')^{-1} σ(g2,g2')`.
fn doubling(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    let q = cover.q();
    for _ in 0..ctx.n(300) {
        let c = ctx.rng.gen_range(1..=2);
        let k = ctx.rng.gen_range(1..=2);
        let g = [0; 4].map(|_| rand_monomial(&mut ctx.rng, cover, Kind::Diamond, c));
        let id = MonomialCoverElem::identity(cover, Kind::Diamond, c);
        let e1 = doubling_embed_gl(cover, &g[0], &id, k).unwrap();
        let e2 = doubling_embed_gl(cover, &id, &g[1], k).unwrap();
        let ab = mul(cover, &e1, &e2);
        let ba = mul(cover, &e2, &e1);
        let lhs = doubling_embed_gl(cover, &mul(cover, &g[0], &g[2]), &mul(cover, &g[1], &g[3]), k).unwrap();
        let rhs = mul(
            cover,
            &doubling_embed_gl(cover, &g[0], &g[1], k).unwrap(),
            &doubling_embed_gl(cover, &g[2], &g[3], k).unwrap(),
        );
        let (t1, t2, u1, u2) = (
            rand_torus(&mut ctx.rng, q, c),
            rand_torus(&mut ctx.rng, q, c),
            rand_torus(&mut ctx.rng, q, c),
            rand_torus(&mut ctx.rng, q, c),
        );
        let mk = |x: &Vec<LocalFieldElem>| MonomialCoverElem::torus_elem(cover, Kind::Diamond, x.clone()).unwrap();
        let a = doubling_embed_gl(cover, &mk(&t1), &mk(&t2), k).unwrap();
        let b = doubling_embed_gl(cover, &mk(&u1), &mk(&u2), k).unwrap();
        let sigma = cocycle_diamond_torus(cover, a.torus(), b.torus()).unwrap();
        let want = cocycle_diamond_torus(cover, &t1, &u1).unwrap().inv() * cocycle_diamond_torus(cover, &t2, &u2).unwrap();
        let ok = ab.eps() == ctx.spoil_root(ba.eps()) && ab.torus() == ba.torus() && ab.perm() == ba.perm();
        let ok = ok && lhs == rhs && sigma == want;
        t.exact(ok, || format!("g1=({}) g2=({}) c={} k={}", show(g[0].torus()), show(g[1].torus()), c, k));
    }
    t
}

/// Sp products agree with GL_2d products, the GL-in-Sp product agrees with
/// the Sp product after embedding, and `*` is an involutive automorphism.
fn embeddings(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    for _ in 0..ctx.n(500) {
        let d = ctx.rng.gen_range(1..=3);
        let x = rand_monomial(&mut ctx.rng, cover, Kind::Sp, d);
        let y = rand_monomial(&mut ctx.rng, cover, Kind::Sp, d);
        let sp = mul(cover, &x, &y).with_kind(Kind::Gl);
        let gl = mul(cover, &x.with_kind(Kind::Gl), &y.with_kind(Kind::Gl));
        let gx = rand_monomial(&mut ctx.rng, cover, Kind::Diamond, d);
        let gy = rand_monomial(&mut ctx.rng, cover, Kind::Diamond, d);
        let lhs = embed_in_sp(cover, &mul(cover, &gx, &gy)).unwrap();
        let rhs = mul(cover, &embed_in_sp(cover, &gx).unwrap(), &embed_in_sp(cover, &gy).unwrap());
        let sx = star_involution(cover, &gx).unwrap();
        let star_ok = star_involution(cover, &sx).unwrap() == gx
            && star_involution(cover, &mul(cover, &gx, &gy)).unwrap()
                == mul(cover, &sx, &star_involution(cover, &gy).unwrap());
        let ok = sp.eps() == ctx.spoil_root(gl.eps()) && sp.torus() == gl.torus() && sp.perm() == gl.perm();
        let ok = ok && lhs == rhs && star_ok;
        t.exact(ok, || format!("x=({}) y=({})", show(x.torus()), show(y.torus())));
    }
    t
}

/// Commutator pairings: the GL-in-Sp pairing is alternating and equals
/// `σ²·(det,det)^{-1}` pairing.
fn pairings(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    for _ in 0..ctx.n(500) {
        let d = ctx.rng.gen_range(1..=4);
        let a = rand_torus(&mut ctx.rng, cover.q(), d);
        let b = rand_torus(&mut ctx.rng, cover.q(), d);
        let diag = commutator_pairing(cover, Pairing::Diamond, &a, &a).unwrap();
        let ok = ctx.spoil_root(diag).is_one() && pairings_cohomologous(cover, &a, &b).unwrap();
        t.exact(ok, || format!("t=({}) u=({})", show(&a), show(&b)));
    }
    t
}

/// `[y_b, xI]` equals `(b,x)^{(rk+1)rkc}`, trivial for even `c`.
fn psi_commutator(ctx: &mut Ctx, cover: &Cover) -> Tally {
    let mut t = Tally::default();
    for _ in 0..ctx.n(100) {
        let b = rand_elem(&mut ctx.rng, cover.q());
        let x = rand_elem(&mut ctx.rng, cover.q());
        let c = 2 * ctx.rng.gen_range(1..=2);
        let k = ctx.rng.gen_range(1..=2);
        let comm = dependence_commutator(cover, b, x, c, k).unwrap();
        let rk = cover.r() as i64 * k as i64;
        let want = cover.symbol(b, x).pow((rk + 1) * rk * c as i64);
        t.exact(ctx.spoil_root(comm) == want && want.is_one(), || format!("b={} x={} c={} k={}", b, x, c, k));
    }
    t
}
