//! Covering-group arithmetic on the monomial subgroups of GL_d and Sp_2d.
//!
//! Elements are kept in the normal form `⟨t,1⟩⟨w,1⟩⟨I,ε⟩` where `w` is an
//! unsigned permutation matrix; signs of a signed permutation are pushed into
//! the torus, which is harmless since `(x,-1)_m = 1` when `μ_2m ⊂ F^*`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::arith::{
    hilbert_symbol, local_inv, local_mul, local_pow, ArithError, LocalFieldElem, ResidueField,
    RootOfUnity,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("elements belong to different covers")]
    Incompatible,
    #[error("not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error("monomial matrix is not symplectic")]
    NotSymplectic,
    #[error("operation requires the {0:?} kind")]
    WrongKind(Kind),
    #[error("conjugate leaves the upper unitriangular group")]
    LeavesCone,
    #[error("unipotent does not conform to its block structure")]
    BadBlocks,
    #[error("entry is not integral")]
    NotIntegral,
}

/// Which cover (and 2-cocycle) a monomial element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// GL_d with the block-compatible cocycle `∏_{i<j}(t_i,t'_j)`.
    Gl,
    /// Sp_2d; the torus vector has all 2d diagonal entries.
    Sp,
    /// GL_d inside Sp_2d via `b ↦ diag(b, b*)`.
    Diamond,
}

/// Parameters shared by all elements of one cover.
#[derive(Debug, Clone)]
pub struct Cover {
    field: ResidueField,
    m: u32,
    r: u32,
}

impl Cover {
    pub fn new(q: u64, m: u32) -> Result<Self, CoverError> {
        let field = ResidueField::for_cover(q, m)?;
        let r = if m % 2 == 1 { m } else { m / 2 };
        Ok(Cover { field, m, r })
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn one(&self) -> RootOfUnity {
        RootOfUnity::one(self.m)
    }

    pub fn symbol(&self, a: LocalFieldElem, b: LocalFieldElem) -> RootOfUnity {
        hilbert_symbol(a, b, &self.field, self.m)
    }

    pub fn mul(&self, a: LocalFieldElem, b: LocalFieldElem) -> LocalFieldElem {
        local_mul(&self.field, a, b)
    }

    pub fn inv(&self, a: LocalFieldElem) -> LocalFieldElem {
        local_inv(&self.field, a)
    }

    pub fn pow(&self, a: LocalFieldElem, n: i64) -> LocalFieldElem {
        local_pow(&self.field, a, n)
    }

    pub fn minus_one(&self) -> LocalFieldElem {
        LocalFieldElem::unit(self.field.minus_one())
    }

    pub fn det(&self, t: &[LocalFieldElem]) -> LocalFieldElem {
        t.iter().fold(LocalFieldElem::one(), |acc, &x| self.mul(acc, x))
    }

    /// `b ↦ b* = J ᵗb⁻¹ J` on a diagonal: reverse and invert.
    pub fn star_torus(&self, t: &[LocalFieldElem]) -> Vec<LocalFieldElem> {
        t.iter().rev().map(|&x| self.inv(x)).collect()
    }

    /// Full Sp_2d torus `diag(t, t*)` from its free coordinates.
    pub fn sp_torus(&self, t: &[LocalFieldElem]) -> Vec<LocalFieldElem> {
        let mut full = t.to_vec();
        full.extend(self.star_torus(t));
        full
    }

    pub fn torus_cocycle(
        &self,
        kind: Kind,
        t: &[LocalFieldElem],
        u: &[LocalFieldElem],
    ) -> Result<RootOfUnity, CoverError> {
        match kind {
            Kind::Gl => cocycle_gl_torus(self, t, u),
            Kind::Sp => {
                same_len(t, u)?;
                let d = t.len() / 2;
                cocycle_sp_torus(self, &t[..d], &u[..d])
            }
            Kind::Diamond => cocycle_diamond_torus(self, t, u),
        }
    }

    /// The μ_m part of `^w⟨t,1⟩` for a pure permutation `w`.
    pub fn weyl_correction(&self, kind: Kind, perm: &[usize], t: &[LocalFieldElem]) -> RootOfUnity {
        match kind {
            Kind::Gl => gl_weyl_correction(self, perm, t),
            Kind::Sp | Kind::Diamond => self.one(),
        }
    }
}

fn same_len<T, U>(a: &[T], b: &[U]) -> Result<(), CoverError> {
    if a.len() != b.len() {
        return Err(CoverError::LengthMismatch(a.len(), b.len()));
    }
    Ok(())
}

/// `∏_{i<j} (t_i, t'_j)_m`
pub fn cocycle_gl_torus(
    cover: &Cover,
    t: &[LocalFieldElem],
    u: &[LocalFieldElem],
) -> Result<RootOfUnity, CoverError> {
    same_len(t, u)?;
    let mut acc = cover.one();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            acc = acc * cover.symbol(t[i], u[j]);
        }
    }
    Ok(acc)
}

/// `∏_{i≤d} (t_i, t'_i)_m^{-1}` on the free coordinates of the Sp_2d torus.
pub fn cocycle_sp_torus(
    cover: &Cover,
    t: &[LocalFieldElem],
    u: &[LocalFieldElem],
) -> Result<RootOfUnity, CoverError> {
    same_len(t, u)?;
    Ok(t.iter()
        .zip(u)
        .fold(cover.one(), |acc, (&a, &b)| acc * cover.symbol(a, b).inv()))
}

pub fn cocycle_diamond_torus(
    cover: &Cover,
    t: &[LocalFieldElem],
    u: &[LocalFieldElem],
) -> Result<RootOfUnity, CoverError> {
    cocycle_sp_torus(cover, t, u)
}

/// σ^◇ evaluated as the GL_2d cocycle on `diag(t, t*)`, `diag(t', t'*)`.
pub fn cocycle_diamond_torus_embedded(
    cover: &Cover,
    t: &[LocalFieldElem],
    u: &[LocalFieldElem],
) -> Result<RootOfUnity, CoverError> {
    same_len(t, u)?;
    cocycle_gl_torus(cover, &cover.sp_torus(t), &cover.sp_torus(u))
}

/// `∏_{i<j, π(i)>π(j)} (t_j, t_i)_m`
pub fn gl_weyl_correction(cover: &Cover, perm: &[usize], t: &[LocalFieldElem]) -> RootOfUnity {
    let mut acc = cover.one();
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                acc = acc * cover.symbol(t[j], t[i]);
            }
        }
    }
    acc
}

fn check_perm(perm: &[usize]) -> Result<(), CoverError> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(CoverError::BadPermutation(perm.len()));
        }
        seen[p] = true;
    }
    Ok(())
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `(^w t)_{π(i)} = t_i`
fn permute_torus(perm: &[usize], t: &[LocalFieldElem]) -> Vec<LocalFieldElem> {
    let mut out = vec![LocalFieldElem::one(); t.len()];
    for (i, &p) in perm.iter().enumerate() {
        out[p] = t[i];
    }
    out
}

/// A signed permutation matrix: `w e_i = signs[i] e_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, CoverError> {
        check_perm(&perm)?;
        same_len(&perm, &signs)?;
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(CoverError::BadPermutation(perm.len()));
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn unsigned(perm: Vec<usize>) -> Result<Self, CoverError> {
        let n = perm.len();
        Self::new(perm, vec![1; n])
    }

    pub fn identity(d: usize) -> Self {
        SignedPermutation {
            perm: (0..d).collect(),
            signs: vec![1; d],
        }
    }

    /// Transposition of `i` and `i+1`.
    pub fn simple_reflection(d: usize, i: usize) -> Self {
        let mut perm: Vec<usize> = (0..d).collect();
        perm.swap(i, i + 1);
        SignedPermutation {
            perm,
            signs: vec![1; d],
        }
    }

    /// The Weyl element of Sp_2d acting on the first-half indices by `perm`,
    /// composed with the sign flips `e_i ↔ e_{i*}` where `flips[i]` holds.
    pub fn sp_weyl(perm: &[usize], flips: &[bool]) -> Result<Self, CoverError> {
        check_perm(perm)?;
        same_len(perm, flips)?;
        let d = perm.len();
        let star = |i: usize| 2 * d - 1 - i;
        let mut full = vec![0; 2 * d];
        let mut signs = vec![1; 2 * d];
        for i in 0..d {
            let j = perm[i];
            if flips[i] {
                full[i] = star(j);
                full[star(i)] = j;
                signs[star(i)] = -1;
            } else {
                full[i] = j;
                full[star(i)] = star(j);
            }
        }
        Ok(SignedPermutation { perm: full, signs })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let perm = compose(&self.perm, &other.perm);
        let signs = (0..other.len())
            .map(|i| other.signs[i] * self.signs[other.perm[i]])
            .collect();
        SignedPermutation { perm, signs }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let perm = invert(&self.perm);
        let signs = perm.iter().map(|&i| self.signs[i]).collect();
        SignedPermutation { perm, signs }
    }

    pub fn to_matrix(&self) -> Vec<Vec<i8>> {
        let n = self.len();
        let mut mat = vec![vec![0i8; n]; n];
        for i in 0..n {
            mat[self.perm[i]][i] = self.signs[i];
        }
        mat
    }
}

/// `⟨t,1⟩⟨w,1⟩⟨I,eps⟩` with `w` an unsigned permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialCoverElem {
    kind: Kind,
    q: u64,
    torus: Vec<LocalFieldElem>,
    perm: Vec<usize>,
    eps: RootOfUnity,
}

impl MonomialCoverElem {
    /// `⟨t w, 1⟩⟨I, eps⟩` for a signed permutation `w`; signs are absorbed into the torus.
    pub fn from_parts(
        cover: &Cover,
        kind: Kind,
        torus: Vec<LocalFieldElem>,
        w: &SignedPermutation,
        eps: RootOfUnity,
    ) -> Result<Self, CoverError> {
        same_len(&torus, &w.perm)?;
        if eps.modulus() != cover.m() {
            return Err(CoverError::Incompatible);
        }
        let mut torus = torus;
        for i in 0..w.len() {
            if w.signs[i] < 0 {
                let p = w.perm[i];
                torus[p] = cover.mul(torus[p], cover.minus_one());
            }
        }
        let elem = MonomialCoverElem {
            kind,
            q: cover.q(),
            torus,
            perm: w.perm.clone(),
            eps,
        };
        if kind == Kind::Sp {
            elem.check_symplectic(cover)?;
        }
        Ok(elem)
    }

    pub fn identity(cover: &Cover, kind: Kind, n: usize) -> Self {
        MonomialCoverElem {
            kind,
            q: cover.q(),
            torus: vec![LocalFieldElem::one(); n],
            perm: (0..n).collect(),
            eps: cover.one(),
        }
    }

    pub fn torus_elem(cover: &Cover, kind: Kind, torus: Vec<LocalFieldElem>) -> Result<Self, CoverError> {
        let n = torus.len();
        Self::from_parts(cover, kind, torus, &SignedPermutation::identity(n), cover.one())
    }

    pub fn weyl_elem(cover: &Cover, kind: Kind, w: &SignedPermutation) -> Result<Self, CoverError> {
        Self::from_parts(cover, kind, vec![LocalFieldElem::one(); w.len()], w, cover.one())
    }

    pub fn central(cover: &Cover, kind: Kind, n: usize, eps: RootOfUnity) -> Self {
        let mut x = Self::identity(cover, kind, n);
        x.eps = eps;
        x
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn torus(&self) -> &[LocalFieldElem] {
        &self.torus
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn eps(&self) -> RootOfUnity {
        self.eps
    }

    pub fn size(&self) -> usize {
        self.torus.len()
    }

    pub fn with_kind(&self, kind: Kind) -> Self {
        let mut x = self.clone();
        x.kind = kind;
        x
    }

    pub fn is_identity(&self) -> bool {
        self.eps.is_one()
            && self.torus.iter().all(|t| t.is_one())
            && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `ᵗg Ω g = Ω` for the monomial matrix `g = t·w`.
    fn check_symplectic(&self, cover: &Cover) -> Result<(), CoverError> {
        let n = self.size();
        if !n.is_multiple_of(2) {
            return Err(CoverError::NotSymplectic);
        }
        let d = n / 2;
        let star = |i: usize| n - 1 - i;
        let omega = |i: usize| if i < d { 1 } else { -1 };
        for i in 0..n {
            let p = self.perm[i];
            if self.perm[star(i)] != star(p) {
                return Err(CoverError::NotSymplectic);
            }
            let prod = cover.mul(self.torus[p], self.torus[star(p)]);
            let want = if omega(i) * omega(p) == 1 {
                LocalFieldElem::one()
            } else {
                cover.minus_one()
            };
            if prod != want {
                return Err(CoverError::NotSymplectic);
            }
        }
        Ok(())
    }
}

fn compatible(cover: &Cover, x: &MonomialCoverElem, y: &MonomialCoverElem) -> Result<(), CoverError> {
    if x.kind != y.kind || x.q != cover.q() || y.q != cover.q() || x.eps.modulus() != cover.m() {
        return Err(CoverError::Incompatible);
    }
    same_len(&x.torus, &y.torus)
}

/// `⟨t1,1⟩⟨w1,1⟩⟨t2,1⟩⟨w2,1⟩ = ⟨t1·^{w1}t2, κ⟩⟨w1w2,1⟩` with
/// `κ = σ(t1, ^{w1}t2) · corr(w1, t2)`.
pub fn monomial_mul(
    cover: &Cover,
    x: &MonomialCoverElem,
    y: &MonomialCoverElem,
) -> Result<MonomialCoverElem, CoverError> {
    compatible(cover, x, y)?;
    let moved = permute_torus(&x.perm, &y.torus);
    let kappa = cover.torus_cocycle(x.kind, &x.torus, &moved)?
        * cover.weyl_correction(x.kind, &x.perm, &y.torus);
    let torus = x
        .torus
        .iter()
        .zip(&moved)
        .map(|(&a, &b)| cover.mul(a, b))
        .collect();
    Ok(MonomialCoverElem {
        kind: x.kind,
        q: x.q,
        torus,
        perm: compose(&x.perm, &y.perm),
        eps: x.eps * y.eps * kappa,
    })
}

pub fn monomial_inv(cover: &Cover, x: &MonomialCoverElem) -> Result<MonomialCoverElem, CoverError> {
    let pinv = invert(&x.perm);
    let tinv: Vec<_> = x.torus.iter().map(|&a| cover.inv(a)).collect();
    let mut y = MonomialCoverElem {
        kind: x.kind,
        q: x.q,
        torus: permute_torus(&pinv, &tinv),
        perm: pinv,
        eps: cover.one(),
    };
    let prod = monomial_mul(cover, x, &y)?;
    y.eps = prod.eps.inv();
    Ok(y)
}

pub fn commutator(
    cover: &Cover,
    x: &MonomialCoverElem,
    y: &MonomialCoverElem,
) -> Result<MonomialCoverElem, CoverError> {
    let xy = monomial_mul(cover, x, y)?;
    let yx = monomial_mul(cover, y, x)?;
    monomial_mul(cover, &xy, &monomial_inv(cover, &yx)?)
}

/// `x ↦ ^*x`: replaces `b` by `b* = J ᵗb⁻¹ J`, keeping `ε`.
pub fn star_involution(cover: &Cover, x: &MonomialCoverElem) -> Result<MonomialCoverElem, CoverError> {
    if x.kind != Kind::Diamond {
        return Err(CoverError::WrongKind(Kind::Diamond));
    }
    let d = x.size();
    let perm = (0..d).map(|i| d - 1 - x.perm[d - 1 - i]).collect();
    Ok(MonomialCoverElem {
        kind: Kind::Diamond,
        q: x.q,
        torus: cover.star_torus(&x.torus),
        perm,
        eps: x.eps,
    })
}

/// `⟨b, ε⟩ ↦ ⟨diag(b, b*), ε⟩` from the σ^◇ cover of GL_d into Sp_2d.
pub fn embed_in_sp(cover: &Cover, x: &MonomialCoverElem) -> Result<MonomialCoverElem, CoverError> {
    let s = star_involution(cover, x)?;
    let d = x.size();
    let mut perm = x.perm.clone();
    perm.extend(s.perm.iter().map(|&p| p + d));
    let mut torus = x.torus.clone();
    torus.extend(s.torus);
    let y = MonomialCoverElem {
        kind: Kind::Sp,
        q: x.q,
        torus,
        perm,
        eps: x.eps,
    };
    y.check_symplectic(cover)?;
    Ok(y)
}

/// Block-diagonal sum of elements of the same kind, with `ε` the product of the parts.
fn block_diag(parts: &[&MonomialCoverElem], eps: RootOfUnity) -> MonomialCoverElem {
    let mut torus = Vec::new();
    let mut perm = Vec::new();
    for part in parts {
        let off = torus.len();
        torus.extend_from_slice(&part.torus);
        perm.extend(part.perm.iter().map(|&p| p + off));
    }
    MonomialCoverElem {
        kind: parts[0].kind,
        q: parts[0].q,
        torus,
        perm,
        eps,
    }
}

/// `(g1, g2) ↦ ⟨diag(g1,…,g1, g2, g1,…,g1), ε1^{-1}ε2⟩` in the σ^◇ cover of
/// GL_{2rkc}, with `rk` copies of `g1` before `g2` and `rk-1` after.
pub fn doubling_embed_gl(
    cover: &Cover,
    g1: &MonomialCoverElem,
    g2: &MonomialCoverElem,
    k: usize,
) -> Result<MonomialCoverElem, CoverError> {
    compatible(cover, g1, g2)?;
    if g1.kind != Kind::Diamond {
        return Err(CoverError::WrongKind(Kind::Diamond));
    }
    let rk = cover.r() as usize * k;
    let mut parts = vec![g1; rk];
    parts.push(g2);
    parts.extend(core::iter::repeat_n(g1, rk - 1));
    Ok(block_diag(&parts, g1.eps.inv() * g2.eps))
}

/// `(σ^◇_{rkc}(b^△, b'^△), σ^◇_c(b, b')^{rk})`, where `b^△ = diag(b,…,b)`.
pub fn diag_embed_power(
    cover: &Cover,
    b: &[LocalFieldElem],
    b2: &[LocalFieldElem],
    k: usize,
) -> Result<(RootOfUnity, RootOfUnity), CoverError> {
    let rk = cover.r() as usize * k;
    let rep = |v: &[LocalFieldElem]| -> Vec<LocalFieldElem> {
        (0..rk).flat_map(|_| v.iter().copied()).collect()
    };
    let big = cocycle_diamond_torus(cover, &rep(b), &rep(b2))?;
    let small = cocycle_diamond_torus(cover, b, b2)?.pow(rk as i64);
    Ok((big, small))
}

/// The μ_m-valued commutator of `(b^{-1}I_{rkc}) y_b` and `x I_{rkc}` in the σ^◇
/// cover of GL_{rkc}, where `y_b = diag(I_c, b^{-1}I_c, …, b^{1-rk}I_c)`.
pub fn dependence_commutator(
    cover: &Cover,
    b: LocalFieldElem,
    x: LocalFieldElem,
    c: usize,
    k: usize,
) -> Result<RootOfUnity, CoverError> {
    let rk = cover.r() as usize * k;
    let t: Vec<_> = (0..rk)
        .flat_map(|j| core::iter::repeat_n(cover.pow(b, -(j as i64) - 1), c))
        .collect();
    let u = vec![x; rk * c];
    let a = MonomialCoverElem::torus_elem(cover, Kind::Diamond, t)?;
    let z = MonomialCoverElem::torus_elem(cover, Kind::Diamond, u)?;
    let comm = commutator(cover, &a, &z)?;
    debug_assert!(comm.torus.iter().all(|t| t.is_one()));
    Ok(comm.eps)
}

/// Which commutator pairing `[t, t'] = σ(t,t')σ(t',t)^{-1}` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Gl,
    GlSquared,
    Diamond,
    /// `(det t, det t')_m (det t', det t)_m^{-1}`
    Det,
}

pub fn commutator_pairing(
    cover: &Cover,
    pairing: Pairing,
    t: &[LocalFieldElem],
    u: &[LocalFieldElem],
) -> Result<RootOfUnity, CoverError> {
    same_len(t, u)?;
    Ok(match pairing {
        Pairing::Gl => cocycle_gl_torus(cover, t, u)? * cocycle_gl_torus(cover, u, t)?.inv(),
        Pairing::GlSquared => commutator_pairing(cover, Pairing::Gl, t, u)?.pow(2),
        Pairing::Diamond => {
            cocycle_diamond_torus(cover, t, u)? * cocycle_diamond_torus(cover, u, t)?.inv()
        }
        Pairing::Det => {
            let (a, b) = (cover.det(t), cover.det(u));
            cover.symbol(a, b) * cover.symbol(b, a).inv()
        }
    })
}

/// The pairing of σ^◇_d equals that of `σ_d^2 · (det, det)_m^{-1}`.
pub fn pairings_cohomologous(
    cover: &Cover,
    t: &[LocalFieldElem],
    u: &[LocalFieldElem],
) -> Result<bool, CoverError> {
    let lhs = commutator_pairing(cover, Pairing::Diamond, t, u)?;
    let rhs = commutator_pairing(cover, Pairing::GlSquared, t, u)?
        * commutator_pairing(cover, Pairing::Det, t, u)?.inv();
    Ok(lhs == rhs)
}

/// Upper unitriangular matrix whose nonzero off-diagonal entries sit above
/// the diagonal blocks of a composition. Zero entries are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockUnipotent {
    composition: Vec<usize>,
    entries: Vec<Vec<Option<LocalFieldElem>>>,
}

impl BlockUnipotent {
    pub fn new(
        composition: Vec<usize>,
        entries: Vec<Vec<Option<LocalFieldElem>>>,
    ) -> Result<Self, CoverError> {
        let n: usize = composition.iter().sum();
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            return Err(CoverError::BadBlocks);
        }
        let u = BlockUnipotent { composition, entries };
        if !u.conforms(&u.composition) {
            return Err(CoverError::BadBlocks);
        }
        Ok(u)
    }

    pub fn identity(composition: Vec<usize>) -> Self {
        let n: usize = composition.iter().sum();
        BlockUnipotent {
            composition,
            entries: vec![vec![None; n]; n],
        }
    }

    /// Identity plus one entry at `(i, j)`.
    pub fn elementary(composition: Vec<usize>, i: usize, j: usize, x: LocalFieldElem) -> Result<Self, CoverError> {
        let mut u = Self::identity(composition);
        if i >= u.size() || j >= u.size() {
            return Err(CoverError::BadBlocks);
        }
        u.entries[i][j] = Some(x);
        Self::new(u.composition, u.entries)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn composition(&self) -> &[usize] {
        &self.composition
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<LocalFieldElem> {
        self.entries[i][j]
    }

    fn conforms(&self, composition: &[usize]) -> bool {
        let mut block = Vec::new();
        for (b, &len) in composition.iter().enumerate() {
            block.extend(core::iter::repeat_n(b, len));
        }
        if block.len() != self.size() {
            return false;
        }
        (0..self.size()).all(|i| {
            (0..self.size()).all(|j| self.entries[i][j].is_none() || block[i] < block[j])
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `x u x^{-1}`
    Forward,
    /// `x^{-1} u x`
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjRule {
    /// Torus element scaling the entries.
    Torus,
    /// Permutation keeping the unipotent upper triangular.
    Weyl,
    /// Both a nontrivial torus part and a nontrivial permutation.
    TorusWeyl,
}

/// Record that `^x⟨u,1⟩ = ⟨^x u, 1⟩`, with the rule that justified it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjCertificate {
    pub rule: ConjRule,
    pub eps_unchanged: bool,
    pub composition_kept: bool,
}

pub fn conj_by_monomial(
    cover: &Cover,
    x: &MonomialCoverElem,
    u: &BlockUnipotent,
    direction: Direction,
) -> Result<(BlockUnipotent, ConjCertificate), CoverError> {
    same_len(&x.torus, &u.entries)?;
    let x = match direction {
        Direction::Forward => x.clone(),
        Direction::Backward => monomial_inv(cover, x)?,
    };
    let n = u.size();
    let mut entries = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if let Some(v) = u.entries[i][j] {
                let (pi, pj) = (x.perm[i], x.perm[j]);
                if pi >= pj {
                    return Err(CoverError::LeavesCone);
                }
                let scaled = cover.mul(cover.mul(x.torus[pi], v), cover.inv(x.torus[pj]));
                entries[pi][pj] = Some(scaled);
            }
        }
    }
    let mut out = BlockUnipotent {
        composition: u.composition.clone(),
        entries,
    };
    let composition_kept = out.conforms(&u.composition);
    if !composition_kept {
        out.composition = vec![1; n];
    }
    let moves = x.perm.iter().enumerate().any(|(i, &p)| i != p);
    let scales = x.torus.iter().any(|t| !t.is_one());
    let rule = match (scales, moves) {
        (_, false) => ConjRule::Torus,
        (false, true) => ConjRule::Weyl,
        (true, true) => ConjRule::TorusWeyl,
    };
    Ok((
        out,
        ConjCertificate {
            rule,
            eps_unchanged: true,
            composition_kept,
        },
    ))
}

/// `ψ(Σ_i tr v_{i,i+1})` for `v` in `V_{(c^l)}`, with `ψ(x) = exp(2πi x/q)`.
pub fn psi_block_character(v: &BlockUnipotent, field: &ResidueField) -> Result<Complex64, CoverError> {
    let c = match v.composition.first() {
        Some(&c) if c > 0 && v.composition.iter().all(|&b| b == c) => c,
        _ => return Err(CoverError::BadBlocks),
    };
    let l = v.composition.len();
    let mut sum = 0u64;
    for blk in 0..l.saturating_sub(1) {
        for h in 0..c {
            if let Some(x) = v.entries[blk * c + h][(blk + 1) * c + h] {
                match x.valuation {
                    0 => sum = field.add(sum, x.unit),
                    v if v > 0 => {}
                    _ => return Err(CoverError::NotIntegral),
                }
            }
        }
    }
    let angle = 2.0 * core::f64::consts::PI * sum as f64 / field.q() as f64;
    Ok(Complex64::new(libm::cos(angle), libm::sin(angle)))
}

/// Generators of the monomial subgroup of a cover: torus elements built from
/// `ϖ` and the residue generator in each free coordinate, and simple reflections.
pub fn monomial_generators(cover: &Cover, kind: Kind, n: usize) -> Vec<MonomialCoverElem> {
    let w = LocalFieldElem::uniformizer();
    let g = LocalFieldElem::unit(cover.field().generator());
    let mut gens = Vec::new();
    match kind {
        Kind::Gl | Kind::Diamond => {
            for i in 0..n {
                for a in [w, g] {
                    let mut t = vec![LocalFieldElem::one(); n];
                    t[i] = a;
                    gens.push(MonomialCoverElem::torus_elem(cover, kind, t).unwrap());
                }
            }
            for i in 0..n.saturating_sub(1) {
                let s = SignedPermutation::simple_reflection(n, i);
                gens.push(MonomialCoverElem::weyl_elem(cover, kind, &s).unwrap());
            }
        }
        Kind::Sp => {
            let d = n / 2;
            for i in 0..d {
                for a in [w, g] {
                    let mut t = vec![LocalFieldElem::one(); d];
                    t[i] = a;
                    let full = cover.sp_torus(&t);
                    gens.push(MonomialCoverElem::torus_elem(cover, kind, full).unwrap());
                }
            }
            for i in 0..d {
                let mut perm: Vec<usize> = (0..d).collect();
                let mut flips = vec![false; d];
                if i + 1 < d {
                    perm.swap(i, i + 1);
                } else {
                    flips[i] = true;
                }
                let s = SignedPermutation::sp_weyl(&perm, &flips).unwrap();
                gens.push(MonomialCoverElem::weyl_elem(cover, kind, &s).unwrap());
            }
        }
    }
    gens
}

/// True iff `x` commutes with every generator of the monomial subgroup.
pub fn center_check(cover: &Cover, x: &MonomialCoverElem) -> Result<bool, CoverError> {
    for g in monomial_generators(cover, x.kind, x.size()) {
        if monomial_mul(cover, x, &g)? != monomial_mul(cover, &g, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}
