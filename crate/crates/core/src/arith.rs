//! Residue fields, roots of unity, leading-term local field elements and the
//! tame Hilbert symbol of order `m`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("q = {0} is not an odd prime greater than 3")]
    BadModulus(u64),
    #[error("2m = {} does not divide q - 1 = {}", 2 * .m, .q - 1)]
    NotTame { q: u64, m: u32 },
    #[error("m = {m} does not divide q - 1 = {}", .q - 1)]
    NoRoots { q: u64, m: u32 },
    #[error("zero is not a unit")]
    Zero,
    #[error("m must be positive")]
    ZeroOrder,
}

/// An element of the cyclic group of `m`-th roots of unity, written additively
/// as an exponent class mod `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    exponent: u32,
    modulus: u32,
}

impl RootOfUnity {
    pub fn new(exponent: i64, modulus: u32) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let e = exponent.rem_euclid(modulus as i64) as u32;
        RootOfUnity { exponent: e, modulus }
    }

    pub fn one(modulus: u32) -> Self {
        Self::new(0, modulus)
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_one(self) -> bool {
        self.exponent == 0
    }

    pub fn inv(self) -> Self {
        Self::new(-(self.exponent as i64), self.modulus)
    }

    pub fn pow(self, n: i64) -> Self {
        let m = self.modulus as i64;
        Self::new((self.exponent as i64 * n.rem_euclid(m)) % m, self.modulus)
    }

    pub fn order(self) -> u32 {
        self.modulus / gcd(self.exponent as u64, self.modulus as u64) as u32
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        assert_eq!(self.modulus, rhs.modulus, "roots of unity of different orders");
        Self::new(self.exponent as i64 + rhs.exponent as i64, self.modulus)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta_{}^{}", self.modulus, self.exponent)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_q together with a fixed primitive root and its
/// discrete logarithm table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    q: u64,
    generator: u64,
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl ResidueField {
    /// Builds F_q for an odd prime `q > 3`, using the smallest primitive root.
    pub fn new(q: u64) -> Result<Self, ArithError> {
        if q <= 3 || q > 1 << 20 || !is_prime(q) {
            return Err(ArithError::BadModulus(q));
        }
        let n = q - 1;
        let mut factors = Vec::new();
        let mut rest = n;
        let mut p = 2;
        while p * p <= rest {
            if rest.is_multiple_of(p) {
                factors.push(p);
                while rest.is_multiple_of(p) {
                    rest /= p;
                }
            }
            p += 1;
        }
        if rest > 1 {
            factors.push(rest);
        }
        let generator = (2..q)
            .find(|&g| factors.iter().all(|&f| pow_mod(g, n / f, q) != 1))
            .ok_or(ArithError::BadModulus(q))?;
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for k in 0..n {
            exp[k as usize] = x as u32;
            log[x as usize] = k as u32;
            x = x * generator % q;
        }
        Ok(ResidueField { q, generator, log, exp })
    }

    /// Builds F_q and checks the tameness hypothesis `2m | q - 1`.
    pub fn for_cover(q: u64, m: u32) -> Result<Self, ArithError> {
        let f = Self::new(q)?;
        f.check_tame(m)?;
        Ok(f)
    }

    pub fn check_tame(&self, m: u32) -> Result<(), ArithError> {
        if m == 0 {
            return Err(ArithError::ZeroOrder);
        }
        if !(self.q - 1).is_multiple_of(2 * m as u64) {
            return Err(ArithError::NotTame { q: self.q, m });
        }
        Ok(())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        self.gen_pow(-(self.dlog(a) as i64))
    }

    pub fn pow(&self, a: u64, n: i64) -> u64 {
        if a.is_multiple_of(self.q) {
            assert!(n > 0, "zero to a nonpositive power");
            return 0;
        }
        self.gen_pow(self.dlog(a) as i64 * n.rem_euclid(self.q as i64 - 1))
    }

    /// Discrete logarithm base the fixed generator, in `[0, q-1)`.
    pub fn dlog(&self, a: u64) -> u32 {
        let a = a % self.q;
        assert!(a != 0, "discrete log of zero");
        self.log[a as usize]
    }

    pub fn gen_pow(&self, k: i64) -> u64 {
        self.exp[k.rem_euclid(self.q as i64 - 1) as usize] as u64
    }

    pub fn minus_one(&self) -> u64 {
        self.q - 1
    }
}

/// Leading-term model of an element of a p-adic field: `ϖ^valuation · [unit]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalFieldElem {
    pub valuation: i64,
    pub unit: u64,
}

impl LocalFieldElem {
    pub fn new(valuation: i64, unit: u64) -> Result<Self, ArithError> {
        if unit == 0 {
            return Err(ArithError::Zero);
        }
        Ok(LocalFieldElem { valuation, unit })
    }

    pub fn one() -> Self {
        LocalFieldElem { valuation: 0, unit: 1 }
    }

    pub fn uniformizer() -> Self {
        LocalFieldElem { valuation: 1, unit: 1 }
    }

    pub fn unit(u: u64) -> Self {
        assert!(u != 0);
        LocalFieldElem { valuation: 0, unit: u }
    }

    pub fn is_one(&self) -> bool {
        self.valuation == 0 && self.unit == 1
    }
}

impl fmt::Display for LocalFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.valuation, self.unit)
    }
}

pub fn local_mul(field: &ResidueField, a: LocalFieldElem, b: LocalFieldElem) -> LocalFieldElem {
    LocalFieldElem {
        valuation: a.valuation + b.valuation,
        unit: field.mul(a.unit, b.unit),
    }
}

pub fn local_inv(field: &ResidueField, a: LocalFieldElem) -> LocalFieldElem {
    LocalFieldElem {
        valuation: -a.valuation,
        unit: field.inv(a.unit),
    }
}

pub fn local_pow(field: &ResidueField, a: LocalFieldElem, n: i64) -> LocalFieldElem {
    LocalFieldElem {
        valuation: a.valuation * n,
        unit: field.pow(a.unit, n),
    }
}

/// `u ↦ u^{(q-1)/m}`, read off as an exponent of `g^{(q-1)/m}`.
pub fn mu_embed(u: u64, field: &ResidueField, m: u32) -> Result<RootOfUnity, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroOrder);
    }
    if u.is_multiple_of(field.q()) {
        return Err(ArithError::Zero);
    }
    if !(field.q() - 1).is_multiple_of(m as u64) {
        return Err(ArithError::NoRoots { q: field.q(), m });
    }
    Ok(RootOfUnity::new(field.dlog(u) as i64, m))
}

/// Tame Hilbert symbol: `mu_embed` of the unit part of
/// `(-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)}`.
pub fn hilbert_symbol(
    a: LocalFieldElem,
    b: LocalFieldElem,
    field: &ResidueField,
    m: u32,
) -> RootOfUnity {
    let n = field.q() as i64 - 1;
    let (va, vb) = (a.valuation.rem_euclid(n), b.valuation.rem_euclid(n));
    let sign = (field.dlog(field.minus_one()) as i64 * (va * vb % n)) % n;
    let la = field.dlog(a.unit) as i64 * vb % n;
    let lb = field.dlog(b.unit) as i64 * va % n;
    RootOfUnity::new((sign + la - lb).rem_euclid(n), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_unity_group_laws() {
        let z = RootOfUnity::new(-4, 3);
        assert_eq!(z.exponent(), 2);
        assert!((z * z.inv()).is_one());
        assert_eq!(z.pow(2).exponent(), 1);
        assert_eq!(RootOfUnity::new(2, 6).order(), 3);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(ResidueField::new(7).unwrap().generator(), 3);
        assert_eq!(ResidueField::new(13).unwrap().generator(), 2);
        assert_eq!(ResidueField::new(31).unwrap().generator(), 3);
        assert!(ResidueField::new(9).is_err());
        assert!(ResidueField::new(3).is_err());
        assert!(ResidueField::for_cover(7, 2).is_err());
    }

    #[test]
    fn local_laws() {
        let f = ResidueField::new(7).unwrap();
        let w = LocalFieldElem::uniformizer();
        assert!(local_mul(&f, w, local_inv(&f, w)).is_one());
        let x = LocalFieldElem::new(1, 3).unwrap();
        assert_eq!(local_pow(&f, x, 4), LocalFieldElem { valuation: 4, unit: 4 });
        assert_eq!(local_inv(&f, LocalFieldElem { valuation: 2, unit: 3 }).unit, 5);
    }
}
