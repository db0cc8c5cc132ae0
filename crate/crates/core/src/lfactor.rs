//! Unramified local factors as factored rational functions in `X = q^{-s}`.
//!
//! Coefficients are either exact ([`ExactScalar`]: a root of unity times a
//! product of rational prime powers) or `Complex64` with a `1e-12` tolerance.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Q = Rational64;

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LError {
    #[error("eigenvalue must be nonzero")]
    ZeroEigenvalue,
    #[error("tempered representation has an eigenvalue off the unit circle")]
    NotTempered,
    #[error("q = {0} must be prime")]
    BadQ(u64),
    #[error("representations have different q or m")]
    Mismatch,
    #[error("operation needs a GL representation")]
    NeedGl,
    #[error("the Sp branch needs r*c even, got {0}")]
    OddRc(i64),
    #[error("substitution s -> 0*s + j is not allowed")]
    DegenerateSubstitution,
    #[error("m must be positive")]
    BadM,
}

fn q_to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn factor_u64(mut n: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn frac_part(x: Q) -> Q {
    x - x.floor()
}

/// `e^{2πi·phase} · ∏ p^{e_p}` with `phase ∈ [0,1)` and rational `e_p ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactScalar {
    phase: Q,
    primes: BTreeMap<u64, Q>,
}

impl ExactScalar {
    pub fn one() -> Self {
        ExactScalar {
            phase: Q::zero(),
            primes: BTreeMap::new(),
        }
    }

    pub fn new(phase: Q, primes: BTreeMap<u64, Q>) -> Self {
        let primes = primes.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        ExactScalar {
            phase: frac_part(phase),
            primes,
        }
    }

    pub fn root_of_unity(phase: Q) -> Self {
        Self::new(phase, BTreeMap::new())
    }

    pub fn prime_power(p: u64, e: Q) -> Self {
        let mut primes = BTreeMap::new();
        primes.insert(p, e);
        Self::new(Q::zero(), primes)
    }

    /// `num/den` for nonzero integers.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self, LError> {
        if num == 0 || den == 0 {
            return Err(LError::ZeroEigenvalue);
        }
        let mut primes = BTreeMap::new();
        for (p, e) in factor_u64(num.unsigned_abs()) {
            *primes.entry(p).or_insert_with(Q::zero) += Q::from(e);
        }
        for (p, e) in factor_u64(den.unsigned_abs()) {
            *primes.entry(p).or_insert_with(Q::zero) -= Q::from(e);
        }
        let phase = if (num < 0) != (den < 0) {
            Q::new(1, 2)
        } else {
            Q::zero()
        };
        Ok(Self::new(phase, primes))
    }

    pub fn phase(&self) -> Q {
        self.phase
    }

    pub fn primes(&self) -> &BTreeMap<u64, Q> {
        &self.primes
    }

    pub fn is_one(&self) -> bool {
        self.phase.is_zero() && self.primes.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut primes = self.primes.clone();
        for (&p, &e) in &other.primes {
            *primes.entry(p).or_insert_with(Q::zero) += e;
        }
        Self::new(self.phase + other.phase, primes)
    }

    pub fn inv(&self) -> Self {
        Self::new(-self.phase, self.primes.iter().map(|(&p, &e)| (p, -e)).collect())
    }

    pub fn pow(&self, n: Q) -> Self {
        Self::new(self.phase * n, self.primes.iter().map(|(&p, &e)| (p, e * n)).collect())
    }

    /// All `d`-th roots.
    pub fn roots(&self, d: u32) -> Vec<Self> {
        let d = d as i64;
        (0..d)
            .map(|j| {
                Self::new(
                    (self.phase + Q::from(j)) / d,
                    self.primes.iter().map(|(&p, &e)| (p, e / d)).collect(),
                )
            })
            .collect()
    }

    pub fn to_complex(&self) -> Complex64 {
        let log_abs: f64 = self
            .primes
            .iter()
            .map(|(&p, &e)| q_to_f64(e) * libm::log(p as f64))
            .sum();
        Complex64::from_polar(libm::exp(log_abs), 2.0 * core::f64::consts::PI * q_to_f64(self.phase))
    }
}

fn fmt_q(x: Q) -> alloc::string::String {
    if x.is_integer() {
        alloc::format!("{}", x.numer())
    } else {
        alloc::format!("({}/{})", x.numer(), x.denom())
    }
}

impl fmt::Display for ExactScalar {
    /// `-` for phase 1/2, `e(a/b)` for other phases, then `p`, `p^n` or `p^(a/b)`
    /// factors joined by `*`; the empty product is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<alloc::string::String> = Vec::new();
        let neg = self.phase == Q::new(1, 2);
        if !self.phase.is_zero() && !neg {
            parts.push(alloc::format!("e({}/{})", self.phase.numer(), self.phase.denom()));
        }
        for (&p, &e) in &self.primes {
            if e.is_one() {
                parts.push(alloc::format!("{}", p));
            } else {
                parts.push(alloc::format!("{}^{}", p, fmt_q(e)));
            }
        }
        if neg {
            f.write_str("-")?;
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Coefficient field for [`RationalFunction`].
pub trait Coefficient: Clone + fmt::Debug + PartialEq {
    fn one() -> Self;
    fn minus_one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unimodular(&self) -> bool;
    /// `q^e`
    fn q_power(q: u64, e: Q) -> Self;
    /// Splits off the power of `q` that can be read as an exponent.
    fn split_q(&self, q: u64) -> (Self, Q);
    /// All `d`-th roots.
    fn roots(&self, d: u32) -> Vec<Self>;
    /// Equality, exact or within tolerance.
    fn close(&self, other: &Self) -> bool;
    fn to_complex(&self) -> Complex64;
    fn order(&self, other: &Self) -> Ordering;
}

impl Coefficient for ExactScalar {
    fn one() -> Self {
        ExactScalar::one()
    }

    fn minus_one() -> Self {
        ExactScalar::root_of_unity(Q::new(1, 2))
    }

    fn mul(&self, other: &Self) -> Self {
        ExactScalar::mul(self, other)
    }

    fn inv(&self) -> Self {
        ExactScalar::inv(self)
    }

    fn is_zero(&self) -> bool {
        false
    }

    fn is_unimodular(&self) -> bool {
        self.primes.is_empty()
    }

    fn q_power(q: u64, e: Q) -> Self {
        ExactScalar::prime_power(q, e)
    }

    fn split_q(&self, q: u64) -> (Self, Q) {
        let mut rest = self.clone();
        let e = rest.primes.remove(&q).unwrap_or_else(Q::zero);
        (rest, e)
    }

    fn roots(&self, d: u32) -> Vec<Self> {
        ExactScalar::roots(self, d)
    }

    fn close(&self, other: &Self) -> bool {
        self == other
    }

    fn to_complex(&self) -> Complex64 {
        ExactScalar::to_complex(self)
    }

    fn order(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Coefficient for Complex64 {
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn minus_one() -> Self {
        Complex64::new(-1.0, 0.0)
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn inv(&self) -> Self {
        Complex64::new(1.0, 0.0) / self
    }

    fn is_zero(&self) -> bool {
        self.norm() < TOL
    }

    fn is_unimodular(&self) -> bool {
        (self.norm() - 1.0).abs() < 1e-9
    }

    fn q_power(q: u64, e: Q) -> Self {
        Complex64::new(libm::exp(q_to_f64(e) * libm::log(q as f64)), 0.0)
    }

    fn split_q(&self, _q: u64) -> (Self, Q) {
        (*self, Q::zero())
    }

    fn roots(&self, d: u32) -> Vec<Self> {
        let (rho, theta) = self.to_polar();
        let r = libm::pow(rho, 1.0 / d as f64);
        (0..d)
            .map(|j| {
                let a = (theta + 2.0 * core::f64::consts::PI * j as f64) / d as f64;
                Complex64::from_polar(r, a)
            })
            .collect()
    }

    fn close(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.norm()).max(other.norm());
        (self - other).norm() <= TOL * scale
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn order(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re).then(self.im.total_cmp(&other.im))
    }
}

/// `(1 - a q^qexp X^degree)^mult`
#[derive(Debug, Clone, PartialEq)]
pub struct Factor<C> {
    pub a: C,
    pub qexp: Q,
    pub degree: u32,
    pub mult: i32,
}

/// `scalar · q^scalar_qexp · X^xpow · ∏ (1 - a_i q^{e_i} X^{d_i})^{m_i}` with
/// `X = q^{-s}`. Keeping the power of `q` apart keeps numeric mode finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction<C> {
    q: u64,
    scalar: C,
    scalar_qexp: Q,
    xpow: i64,
    factors: Vec<Factor<C>>,
}

impl<C: Coefficient> RationalFunction<C> {
    pub fn one(q: u64) -> Self {
        RationalFunction {
            q,
            scalar: C::one(),
            scalar_qexp: Q::zero(),
            xpow: 0,
            factors: Vec::new(),
        }
    }

    pub fn from_parts(q: u64, scalar: C, xpow: i64, factors: Vec<Factor<C>>) -> Self {
        Self::from_parts_q(q, scalar, Q::zero(), xpow, factors)
    }

    pub fn from_parts_q(q: u64, scalar: C, scalar_qexp: Q, xpow: i64, factors: Vec<Factor<C>>) -> Self {
        let mut f = RationalFunction {
            q,
            scalar,
            scalar_qexp,
            xpow,
            factors,
        };
        f.normalize();
        f
    }

    /// `(1 - a q^qexp X^degree)^mult`
    pub fn factor(q: u64, a: C, qexp: Q, degree: u32, mult: i32) -> Self {
        Self::from_parts(q, C::one(), 0, vec![Factor { a, qexp, degree, mult }])
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn scalar(&self) -> &C {
        &self.scalar
    }

    pub fn scalar_qexp(&self) -> Q {
        self.scalar_qexp
    }

    pub fn xpow(&self) -> i64 {
        self.xpow
    }

    pub fn factors(&self) -> &[Factor<C>] {
        &self.factors
    }

    fn normalize(&mut self) {
        let (u, e) = self.scalar.split_q(self.q);
        self.scalar = u;
        self.scalar_qexp += e;
        let mut merged: Vec<Factor<C>> = Vec::new();
        for f in self.factors.drain(..) {
            if f.mult == 0 || f.degree == 0 {
                continue;
            }
            let (a, e) = f.a.split_q(self.q);
            let f = Factor {
                a,
                qexp: f.qexp + e,
                degree: f.degree,
                mult: f.mult,
            };
            match merged
                .iter_mut()
                .find(|g| g.degree == f.degree && g.qexp == f.qexp && g.a.close(&f.a))
            {
                Some(g) => g.mult += f.mult,
                None => merged.push(f),
            }
        }
        merged.retain(|f| f.mult != 0);
        merged.sort_by(|x, y| {
            x.degree
                .cmp(&y.degree)
                .then(x.qexp.cmp(&y.qexp))
                .then(x.a.order(&y.a))
        });
        self.factors = merged;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "rational functions over different q");
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self::from_parts_q(
            self.q,
            self.scalar.mul(&other.scalar),
            self.scalar_qexp + other.scalar_qexp,
            self.xpow + other.xpow,
            factors,
        )
    }

    pub fn inv(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .map(|f| Factor {
                mult: -f.mult,
                ..f.clone()
            })
            .collect();
        Self::from_parts_q(self.q, self.scalar.inv(), -self.scalar_qexp, -self.xpow, factors)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, n: i32) -> Self {
        let mut acc = Self::one(self.q);
        let base = if n < 0 { self.inv() } else { self.clone() };
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// The function of `s` obtained by substituting `s ↦ k·s + j`,
    /// i.e. `X ↦ q^{-j} X^k`.
    pub fn substitute(&self, k: i64, j: Q) -> Result<Self, LError> {
        if k == 0 {
            return Err(LError::DegenerateSubstitution);
        }
        let mut scalar = self.scalar.clone();
        let mut scalar_qexp = self.scalar_qexp - j * self.xpow;
        let mut xpow = k * self.xpow;
        let mut factors = Vec::new();
        for f in &self.factors {
            let qexp = f.qexp - j * f.degree as i64;
            let deg = k * f.degree as i64;
            if deg > 0 {
                factors.push(Factor {
                    a: f.a.clone(),
                    qexp,
                    degree: deg as u32,
                    mult: f.mult,
                });
            } else {
                // 1 - b X^{-n} = (-b X^{-n})(1 - b^{-1} X^n)
                let lead = C::minus_one().mul(&f.a);
                for _ in 0..f.mult.unsigned_abs() {
                    scalar = if f.mult > 0 { scalar.mul(&lead) } else { scalar.mul(&lead.inv()) };
                }
                scalar_qexp += qexp * f.mult as i64;
                xpow += deg * f.mult as i64;
                factors.push(Factor {
                    a: f.a.inv(),
                    qexp: -qexp,
                    degree: (-deg) as u32,
                    mult: f.mult,
                });
            }
        }
        Ok(Self::from_parts_q(self.q, scalar, scalar_qexp, xpow, factors))
    }

    /// `s ↦ 1 - s`
    pub fn reflect(&self) -> Self {
        self.substitute(-1, Q::one()).expect("k = -1")
    }

    /// Roots `ρ` with multiplicities of the fully split form `∏(1 - ρX)^{m}`,
    /// with equal roots merged and zero multiplicities dropped.
    pub fn linear_factors(&self) -> Vec<(C, i32)> {
        let mut out: Vec<(C, i32)> = Vec::new();
        for f in &self.factors {
            let c = f.a.mul(&C::q_power(self.q, f.qexp));
            for rho in c.roots(f.degree) {
                match out.iter_mut().find(|(x, _)| x.close(&rho)) {
                    Some((_, m)) => *m += f.mult,
                    None => out.push((rho, f.mult)),
                }
            }
        }
        out.retain(|(_, m)| *m != 0);
        out
    }

    pub fn is_one(&self) -> bool {
        self.xpow == 0
            && self.scalar.mul(&C::q_power(self.q, self.scalar_qexp)).close(&C::one())
            && self.linear_factors().is_empty()
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.q == other.q && self.div(other).is_one()
    }

    /// Degree in `X` of the reduced numerator.
    pub fn numerator_degree(&self) -> u32 {
        self.linear_factors()
            .iter()
            .filter(|(_, m)| *m > 0)
            .map(|(_, m)| *m as u32)
            .sum()
    }

    /// Degree in `X` of the reduced denominator.
    pub fn denominator_degree(&self) -> u32 {
        self.linear_factors()
            .iter()
            .filter(|(_, m)| *m < 0)
            .map(|(_, m)| m.unsigned_abs())
            .sum()
    }

    /// Value at a complex `s`.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        let lnq = libm::log(self.q as f64);
        let x = (-s * lnq).exp();
        let mut acc = self.scalar.to_complex()
            * (Complex64::new(q_to_f64(self.scalar_qexp) * lnq, 0.0) - s * lnq * self.xpow as f64).exp();
        for f in &self.factors {
            let c = f.a.to_complex() * libm::exp(q_to_f64(f.qexp) * lnq);
            let term = Complex64::new(1.0, 0.0) - c * x.powu(f.degree);
            acc *= term.powi(f.mult);
        }
        acc
    }
}

/// Which group an unramified representation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    Sp,
    Gl,
}

/// `r = m` for odd `m`, `m/2` for even `m`.
pub fn r_of(m: u32) -> u32 {
    if m % 2 == 1 {
        m
    } else {
        m / 2
    }
}

/// Unramified representation given by its Satake eigenvalues `μ_i(ϖ^r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SatakeRep<C> {
    kind: RepKind,
    m: u32,
    q: u64,
    eigenvalues: Vec<C>,
    tempered: bool,
}

impl<C: Coefficient> SatakeRep<C> {
    pub fn new(kind: RepKind, m: u32, q: u64, eigenvalues: Vec<C>, tempered: bool) -> Result<Self, LError> {
        if m == 0 {
            return Err(LError::BadM);
        }
        if !is_prime(q) {
            return Err(LError::BadQ(q));
        }
        if eigenvalues.iter().any(|e| e.is_zero()) {
            return Err(LError::ZeroEigenvalue);
        }
        if tempered && !eigenvalues.iter().all(|e| e.is_unimodular()) {
            return Err(LError::NotTempered);
        }
        Ok(SatakeRep {
            kind,
            m,
            q,
            eigenvalues,
            tempered,
        })
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        r_of(self.m)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[C] {
        &self.eigenvalues
    }

    pub fn tempered(&self) -> bool {
        self.tempered
    }
}

pub fn satake_vector<C: Coefficient>(rep: &SatakeRep<C>) -> Vec<C> {
    let mut v = rep.eigenvalues.clone();
    if rep.kind == RepKind::Sp {
        if rep.m % 2 == 1 {
            v.push(C::one());
        }
        v.extend(rep.eigenvalues.iter().rev().map(|e| e.inv()));
    }
    v
}

/// `π ↦ π̃`: inverse eigenvalues for GL, unchanged for Sp.
pub fn dual_rep<C: Coefficient>(rep: &SatakeRep<C>) -> SatakeRep<C> {
    let mut out = rep.clone();
    if rep.kind == RepKind::Gl {
        out.eigenvalues = rep.eigenvalues.iter().map(|e| e.inv()).collect();
    }
    out
}

/// Concatenation of eigenvalue lists; the result takes the kind of `rep2`.
pub fn rep_concat<C: Coefficient>(rep1: &SatakeRep<C>, rep2: &SatakeRep<C>) -> Result<SatakeRep<C>, LError> {
    if rep1.q != rep2.q || rep1.m != rep2.m {
        return Err(LError::Mismatch);
    }
    if rep1.kind != RepKind::Gl {
        return Err(LError::NeedGl);
    }
    let mut eigenvalues = rep1.eigenvalues.clone();
    eigenvalues.extend(rep2.eigenvalues.iter().cloned());
    Ok(SatakeRep {
        kind: rep2.kind,
        m: rep1.m,
        q: rep1.q,
        eigenvalues,
        tempered: rep1.tempered && rep2.tempered,
    })
}

fn l_from_values<C: Coefficient>(q: u64, values: &[C], shift: Q) -> RationalFunction<C> {
    let factors = values
        .iter()
        .map(|a| Factor {
            a: a.clone(),
            qexp: -shift,
            degree: 1,
            mult: -1,
        })
        .collect();
    RationalFunction::from_parts(q, C::one(), 0, factors)
}

/// `L(s + shift, π) = ∏ (1 - α q^{-shift} X)^{-1}` over the Satake vector.
pub fn l_std<C: Coefficient>(rep: &SatakeRep<C>, shift: Q) -> RationalFunction<C> {
    l_from_values(rep.q, &satake_vector(rep), shift)
}

fn check_pair<C>(a: &SatakeRep<C>, b: &SatakeRep<C>) -> Result<(), LError> {
    if a.q != b.q || a.m != b.m {
        return Err(LError::Mismatch);
    }
    Ok(())
}

/// `L(s + shift, π × τ)` from all products of Satake entries.
pub fn l_pair<C: Coefficient>(pi: &SatakeRep<C>, tau: &SatakeRep<C>, shift: Q) -> Result<RationalFunction<C>, LError> {
    check_pair(pi, tau)?;
    let vp = satake_vector(pi);
    let vt = satake_vector(tau);
    let values: Vec<C> = vp.iter().flat_map(|a| vt.iter().map(move |b| a.mul(b))).collect();
    Ok(l_from_values(pi.q, &values, shift))
}

fn l_square<C: Coefficient>(tau: &SatakeRep<C>, shift: Q, strict: bool) -> Result<RationalFunction<C>, LError> {
    if tau.kind != RepKind::Gl {
        return Err(LError::NeedGl);
    }
    let e = &tau.eigenvalues;
    let mut values = Vec::new();
    for i in 0..e.len() {
        for j in i..e.len() {
            if !(strict && i == j) {
                values.push(e[i].mul(&e[j]));
            }
        }
    }
    Ok(l_from_values(tau.q, &values, shift))
}

/// `L(s + shift, τ, ∨²)`
pub fn l_sym2<C: Coefficient>(tau: &SatakeRep<C>, shift: Q) -> Result<RationalFunction<C>, LError> {
    l_square(tau, shift, false)
}

/// `L(s + shift, τ, ∧²)`
pub fn l_ext2<C: Coefficient>(tau: &SatakeRep<C>, shift: Q) -> Result<RationalFunction<C>, LError> {
    l_square(tau, shift, true)
}

/// The group `H` of the doubling construction: `Sp_2rkc` or `GL_2rkc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HBranch {
    Sp,
    Gl,
}

fn rc_of<C>(tau: &SatakeRep<C>, c: u32, branch: HBranch) -> Result<i64, LError> {
    if tau.kind != RepKind::Gl {
        return Err(LError::NeedGl);
    }
    let rc = r_of(tau.m) as i64 * c as i64;
    if branch == HBranch::Sp && rc % 2 != 0 {
        return Err(LError::OddRc(rc));
    }
    Ok(rc)
}

/// `L(k s + j, ·)` from its value at `s`.
fn at<C: Coefficient>(f: RationalFunction<C>, k: i64, j: i64) -> RationalFunction<C> {
    f.substitute(k, Q::from(j)).expect("k != 0")
}

pub fn a_factor<C: Coefficient>(tau: &SatakeRep<C>, c: u32, branch: HBranch) -> Result<RationalFunction<C>, LError> {
    let rc = rc_of(tau, c, branch)?;
    let mut acc = RationalFunction::one(tau.q);
    match branch {
        HBranch::Sp => {
            if tau.m % 2 == 1 {
                acc = acc.mul(&at(l_std(tau, Q::zero()), 1, -rc / 2));
            }
            let sym = l_sym2(tau, Q::zero())?;
            let ext = l_ext2(tau, Q::zero())?;
            for j in 1..=rc / 2 {
                acc = acc.mul(&at(sym.clone(), 2, -rc + 2 * j - 1));
            }
            for j in 1..=(rc + 1) / 2 {
                acc = acc.mul(&at(ext.clone(), 2, -rc + 2 * j - 2));
            }
        }
        HBranch::Gl => {
            let pair = l_pair(tau, tau, Q::zero())?;
            for j in 1..=rc {
                acc = acc.mul(&at(pair.clone(), 2, j - rc - 1));
            }
        }
    }
    Ok(acc)
}

pub fn b_factor<C: Coefficient>(tau: &SatakeRep<C>, c: u32, branch: HBranch) -> Result<RationalFunction<C>, LError> {
    let rc = rc_of(tau, c, branch)?;
    let mut acc = RationalFunction::one(tau.q);
    match branch {
        HBranch::Sp => {
            if tau.m % 2 == 1 {
                acc = acc.mul(&at(l_std(tau, Q::zero()), 1, rc / 2));
            }
            let sym = l_sym2(tau, Q::zero())?;
            let ext = l_ext2(tau, Q::zero())?;
            for j in 1..=rc / 2 {
                acc = acc.mul(&at(sym.clone(), 2, 2 * j - 2));
                acc = acc.mul(&at(ext.clone(), 2, 2 * j - 1));
            }
        }
        HBranch::Gl => {
            let pair = l_pair(tau, tau, Q::zero())?;
            for j in 1..=rc {
                acc = acc.mul(&at(pair.clone(), 2, j - 1));
            }
        }
    }
    Ok(acc)
}

/// `a(s,c,τ) / b(s,c,τ)`
pub fn gk_ratio<C: Coefficient>(tau: &SatakeRep<C>, c: u32, branch: HBranch) -> Result<RationalFunction<C>, LError> {
    Ok(a_factor(tau, c, branch)?.div(&b_factor(tau, c, branch)?))
}

/// `b(1-s,c,τ̃) / a(s,c,τ)`, times `L(s,τ)/L(1-s,τ̃)` on the Sp branch with odd `m`.
pub fn c_factor<C: Coefficient>(tau: &SatakeRep<C>, c: u32, branch: HBranch) -> Result<RationalFunction<C>, LError> {
    let dual = dual_rep(tau);
    let mut out = b_factor(&dual, c, branch)?.reflect().div(&a_factor(tau, c, branch)?);
    if branch == HBranch::Sp && tau.m % 2 == 1 {
        out = out
            .mul(&l_std(tau, Q::zero()))
            .div(&l_std(&dual, Q::zero()).reflect());
    }
    Ok(out)
}

/// `C(s,τ)·(a/b)(s,τ) · C(1-s,τ')·(a/b)(1-s,τ')` with `τ' = τ̃`; identically 1.
pub fn composition_product<C: Coefficient>(
    tau: &SatakeRep<C>,
    c: u32,
    branch: HBranch,
) -> Result<RationalFunction<C>, LError> {
    let first = c_factor(tau, c, branch)?.mul(&gk_ratio(tau, c, branch)?);
    let dual = dual_rep(tau);
    let second = c_factor(&dual, c, branch)?.mul(&gk_ratio(&dual, c, branch)?).reflect();
    Ok(first.mul(&second))
}

/// `L(s, π × τ)` of the doubling construction; for GL `π` this is
/// `L(s, π × τ) L(s, π̃ × τ)`.
pub fn l_doubling<C: Coefficient>(pi: &SatakeRep<C>, tau: &SatakeRep<C>) -> Result<RationalFunction<C>, LError> {
    if tau.kind != RepKind::Gl {
        return Err(LError::NeedGl);
    }
    let l = l_pair(pi, tau, Q::zero())?;
    Ok(match pi.kind {
        RepKind::Sp => l,
        RepKind::Gl => l.mul(&l_pair(&dual_rep(pi), tau, Q::zero())?),
    })
}

/// `L(1-s, π̃ × τ̃) / L(s, π × τ)`
pub fn gamma_unramified_doubling<C: Coefficient>(
    pi: &SatakeRep<C>,
    tau: &SatakeRep<C>,
) -> Result<RationalFunction<C>, LError> {
    let num = l_doubling(&dual_rep(pi), &dual_rep(tau))?.reflect();
    Ok(num.div(&l_doubling(pi, tau)?))
}

/// `L(1-s, π × τ̃) / L(s, π̃ × τ)`
pub fn gamma_unramified_rs<C: Coefficient>(
    pi: &SatakeRep<C>,
    tau: &SatakeRep<C>,
) -> Result<RationalFunction<C>, LError> {
    if pi.kind != RepKind::Gl || tau.kind != RepKind::Gl {
        return Err(LError::NeedGl);
    }
    let num = l_pair(pi, &dual_rep(tau), Q::zero())?.reflect();
    Ok(num.div(&l_pair(&dual_rep(pi), tau, Q::zero())?))
}

/// `L(1-s, τ̃) / L(s, τ)`
pub fn gamma_standard<C: Coefficient>(tau: &SatakeRep<C>) -> RationalFunction<C> {
    l_std(&dual_rep(tau), Q::zero()).reflect().div(&l_std(tau, Q::zero()))
}

/// The doubling branch and `c` attached to `π`: `(Sp, 2n)` or `(GL, n)`.
pub fn doubling_branch<C>(pi: &SatakeRep<C>) -> (HBranch, u32) {
    match pi.kind {
        RepKind::Sp => (HBranch::Sp, 2 * pi.eigenvalues.len() as u32),
        RepKind::Gl => (HBranch::Gl, pi.eigenvalues.len() as u32),
    }
}

/// `Z(s) = L(s, π × τ) / b(s, c, τ)` for normalized unramified data.
pub fn unramified_integral<C: Coefficient>(
    pi: &SatakeRep<C>,
    tau: &SatakeRep<C>,
) -> Result<RationalFunction<C>, LError> {
    let (branch, c) = doubling_branch(pi);
    Ok(l_doubling(pi, tau)?.div(&b_factor(tau, c, branch)?))
}

/// The two sides of `γ(s) Z(s) = [γ(s,τ)] C(s) (a/b)(s) Z^*(1-s)`, where
/// `Z^*(1-s)` is the integral for `(π̃, τ̃)` at `1-s`.
pub fn unramified_integral_sides<C: Coefficient>(
    pi: &SatakeRep<C>,
    tau: &SatakeRep<C>,
) -> Result<(RationalFunction<C>, RationalFunction<C>), LError> {
    let (branch, c) = doubling_branch(pi);
    let lhs = gamma_unramified_doubling(pi, tau)?.mul(&unramified_integral(pi, tau)?);
    let mut rhs = c_factor(tau, c, branch)?
        .mul(&gk_ratio(tau, c, branch)?)
        .mul(&unramified_integral(&dual_rep(pi), &dual_rep(tau))?.reflect());
    if branch == HBranch::Sp && pi.m % 2 == 1 {
        rhs = rhs.mul(&gamma_standard(tau));
    }
    Ok((lhs, rhs))
}
