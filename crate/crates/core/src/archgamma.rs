//! Complex-place gamma factors built from Tate factors of characters of `C^*`.
//!
//! A character is `χ(z) = (z/|z|_R)^l |z|^t` with `|z| = |z|_R^2`, and the
//! additive character is `ψ(z) = e^{2πi(z + z̄)}`. Products of Gamma values
//! are accumulated in log space and exponentiated once.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ArchError {
    #[error("Gamma argument {re}{im:+}i is within 1e-6 of a pole")]
    NearPole { re: f64, im: f64 },
    #[error("b must be nonzero")]
    ZeroB,
    #[error("representations have different r")]
    Mismatch,
    #[error("{0} must be a GL descriptor")]
    NotGl(&'static str),
}

const POLE_TOL: f64 = 1e-6;

// B_{2k} / (2k (2k-1)) for k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn near_pole(z: Complex64) -> bool {
    z.re < 0.5 && {
        let n = libm::round(z.re);
        n <= 0.0 && (z - c(n, 0.0)).norm() < POLE_TOL
    }
}

/// `Σ_{k<n} log(z+k)`, principal logs.
fn shift_sum(z: Complex64, n: usize) -> Complex64 {
    (0..n).map(|k| (z + k as f64).ln()).sum()
}

fn stirling(z: Complex64) -> Complex64 {
    let mut acc = (z - 0.5) * z.ln() - z + 0.5 * libm::log(2.0 * PI);
    let zinv = z.inv();
    let z2 = zinv * zinv;
    let mut pow = zinv;
    for coef in STIRLING {
        acc += pow * coef;
        pow *= z2;
    }
    acc
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    let n = if z.norm() >= 16.0 && z.re > 0.0 {
        0
    } else {
        libm::ceil((16.0 - z.re).max(0.0)) as usize
    };
    stirling(z + n as f64) - shift_sum(z, n)
}

/// Principal branch of `log Γ(z)`; reflection is used for `Re z < 1/2`.
pub fn log_gamma(z: Complex64) -> Result<Complex64, ArchError> {
    if near_pole(z) {
        return Err(ArchError::NearPole { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    let refl = c(libm::log(PI), 0.0) - (z * PI).sin().ln() - log_gamma_right(c(1.0, 0.0) - z);
    // The principal branch is continuous off (-∞, 0]; fix the 2πi ambiguity
    // against the recurrence from the right half-plane.
    let n = libm::ceil(0.5 - z.re) as usize;
    let rough = log_gamma_right(z + n as f64) - shift_sum(z, n);
    let k = libm::round((rough.im - refl.im) / (2.0 * PI));
    Ok(refl + c(0.0, 2.0 * PI * k))
}

pub fn gamma(z: Complex64) -> Result<Complex64, ArchError> {
    Ok(log_gamma(z)?.exp())
}

/// `χ(z) = (z/|z|_R)^l |z|^t` with `|z| = |z|_R^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexCharacter {
    pub l: i64,
    pub t: Complex64,
}

impl ComplexCharacter {
    pub fn new(l: i64, t: Complex64) -> Self {
        ComplexCharacter { l, t }
    }

    pub fn trivial() -> Self {
        Self::new(0, c(0.0, 0.0))
    }

    pub fn inv(self) -> Self {
        Self::new(-self.l, -self.t)
    }

    pub fn pow(self, r: i64) -> Self {
        Self::new(self.l * r, self.t * r as f64)
    }

    pub fn mul(self, other: Self) -> Self {
        Self::new(self.l + other.l, self.t + other.t)
    }

    /// `log χ(b)`
    pub fn log_at(self, b: Complex64) -> Result<Complex64, ArchError> {
        if b.norm() == 0.0 {
            return Err(ArchError::ZeroB);
        }
        Ok(c(0.0, self.l as f64 * b.arg()) + self.t * (2.0 * libm::log(b.norm())))
    }

    pub fn at(self, b: Complex64) -> Result<Complex64, ArchError> {
        Ok(self.log_at(b)?.exp())
    }
}

/// `log L(s, χ) = log 2 - w log 2π + log Γ(w)`, `w = s + t + |l|/2`.
pub fn tate_log_l(s: Complex64, chi: ComplexCharacter) -> Result<Complex64, ArchError> {
    let w = s + chi.t + chi.l.unsigned_abs() as f64 / 2.0;
    Ok(c(libm::log(2.0), 0.0) - w * libm::log(2.0 * PI) + log_gamma(w)?)
}

/// `L(s, χ) = 2(2π)^{-(s+t+|l|/2)} Γ(s+t+|l|/2)`
pub fn tate_l(s: Complex64, chi: ComplexCharacter) -> Result<Complex64, ArchError> {
    Ok(tate_log_l(s, chi)?.exp())
}

/// `i^{|l|}`
pub fn tate_eps(chi: ComplexCharacter) -> Complex64 {
    match chi.l.unsigned_abs() % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

/// `log ε + log L(1-s, χ^{-1}) - log L(s, χ)`, with `log ε = iπ|l|/2`.
pub fn tate_log_gamma(s: Complex64, chi: ComplexCharacter) -> Result<Complex64, ArchError> {
    let log_eps = c(0.0, PI / 2.0 * (chi.l.unsigned_abs() % 4) as f64);
    Ok(log_eps + tate_log_l(c(1.0, 0.0) - s, chi.inv())? - tate_log_l(s, chi)?)
}

pub fn tate_gamma(s: Complex64, chi: ComplexCharacter) -> Result<Complex64, ArchError> {
    Ok(tate_log_gamma(s, chi)?.exp())
}

/// `γ(s, χ, ψ_b) = χ(b) |b|^{s-1/2} γ(s, χ, ψ)` where `ψ_b(z) = ψ(bz)`.
pub fn tate_log_gamma_psi(s: Complex64, chi: ComplexCharacter, b: Complex64) -> Result<Complex64, ArchError> {
    let twist = chi.log_at(b)? + (s - 0.5) * (2.0 * libm::log(b.norm()));
    Ok(twist + tate_log_gamma(s, chi)?)
}

/// `|r^{rβ-1/2} ∏_{i<r} Γ(β+i/r) / ((2π)^{(r-1)/2} Γ(rβ)) - 1|`
pub fn gamma_mult_check(r: u32, beta: Complex64) -> Result<f64, ArchError> {
    let rf = r as f64;
    let mut lhs = (beta * rf - 0.5) * libm::log(rf);
    for i in 0..r {
        lhs += log_gamma(beta + i as f64 / rf)?;
    }
    let rhs = (rf - 1.0) / 2.0 * libm::log(2.0 * PI) + log_gamma(beta * rf)?;
    Ok(((lhs - rhs).exp() - 1.0).norm())
}

/// Group type of a principal-series representation over `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexKind {
    Gl,
    Sp,
}

/// A representation induced from characters, with the cover parameter `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRep {
    pub kind: ComplexKind,
    pub m: u32,
    pub characters: Vec<ComplexCharacter>,
}

impl ComplexRep {
    pub fn new(kind: ComplexKind, m: u32, characters: Vec<ComplexCharacter>) -> Self {
        ComplexRep { kind, m, characters }
    }

    pub fn r(&self) -> i64 {
        if self.m % 2 == 1 {
            self.m as i64
        } else {
            self.m as i64 / 2
        }
    }

    /// GL: inverse characters; Sp: unchanged.
    pub fn dual(&self) -> Self {
        let mut out = self.clone();
        if self.kind == ComplexKind::Gl {
            out.characters = self.characters.iter().map(|x| x.inv()).collect();
        }
        out
    }
}

fn check_r(pi: &ComplexRep, tau: &ComplexRep) -> Result<i64, ArchError> {
    if tau.kind != ComplexKind::Gl {
        return Err(ArchError::NotGl("tau"));
    }
    if pi.r() != tau.r() {
        return Err(ArchError::Mismatch);
    }
    Ok(pi.r())
}

fn check_rs(pi: &ComplexRep, tau: &ComplexRep) -> Result<i64, ArchError> {
    if pi.kind != ComplexKind::Gl {
        return Err(ArchError::NotGl("pi"));
    }
    check_r(pi, tau)
}

fn rs_characters(pi: &ComplexRep, tau: &ComplexRep) -> Result<Vec<ComplexCharacter>, ArchError> {
    let r = check_rs(pi, tau)?;
    Ok(tau
        .characters
        .iter()
        .flat_map(|ti| pi.characters.iter().map(move |pj| ti.pow(r).mul(pj.pow(-r))))
        .collect())
}

fn sum_log_gamma(chars: &[ComplexCharacter], s: Complex64, b: Complex64) -> Result<Complex64, ArchError> {
    chars.iter().map(|&x| tate_log_gamma_psi(s, x, b)).sum()
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `γ(s, π̃ × τ, ψ) = ∏_{i,j} γ^Tate(s, τ_i^r π_j^{-r}, ψ)`
pub fn rs_gamma_direct(pi: &ComplexRep, tau: &ComplexRep, s: Complex64) -> Result<Complex64, ArchError> {
    Ok(sum_log_gamma(&rs_characters(pi, tau)?, s, ONE)?.exp())
}

/// The same factor through the r-fold shifted Tate product at
/// `s' = (s - 1/2)/r + 1/2`, with the prefactor `(π_j τ_i^{-1})(r^r) |r|^{-(s-1/2)}`.
pub fn rs_gamma_via_rho(pi: &ComplexRep, tau: &ComplexRep, s: Complex64) -> Result<Complex64, ArchError> {
    let r = check_rs(pi, tau)?;
    let rf = r as f64;
    let lnr = libm::log(rf);
    let sp = (s - 0.5) / rf + 0.5;
    let mut acc = c(0.0, 0.0);
    for ti in &tau.characters {
        for pj in &pi.characters {
            let chi = ti.mul(pj.inv());
            // (π_j τ_i^{-1})(r^r) = r^{-2r t}, |r|^{-(s-1/2)} = r^{-2(s-1/2)}
            acc += -chi.t * (2.0 * rf * lnr) - (s - 0.5) * (2.0 * lnr);
            for h in 1..=r {
                let shift = (rf - 2.0 * h as f64 + 1.0) / (2.0 * rf);
                acc += tate_log_gamma(sp + shift, chi)?;
            }
        }
    }
    Ok(acc.exp())
}

/// Residual of `γ(s, π̃×τ, ψ_b) / γ(s, π̃×τ, ψ)` against
/// `π̃(b^r I)^k η_τ(b)^c |b|^{kc(s-1/2)}` with `η_τ = ∏ τ_i^r`.
pub fn rs_psi_dependence_check(
    pi: &ComplexRep,
    tau: &ComplexRep,
    s: Complex64,
    b: Complex64,
) -> Result<f64, ArchError> {
    let r = check_rs(pi, tau)?;
    let chars = rs_characters(pi, tau)?;
    let ratio = sum_log_gamma(&chars, s, b)? - sum_log_gamma(&chars, s, ONE)?;
    let k = tau.characters.len() as f64;
    let cc = pi.characters.len() as f64;
    let mut expected = (s - 0.5) * (k * cc * 2.0 * libm::log(b.norm()));
    for pj in &pi.characters {
        expected += pj.pow(-r).log_at(b)? * k;
    }
    for ti in &tau.characters {
        expected += ti.pow(r).log_at(b)? * cc;
    }
    Ok(((ratio - expected).exp() - 1.0).norm())
}

/// Characters whose Tate factors make up the doubling factor: `τ_i^r π_j^{±r}`,
/// plus `τ_i^r` for Sp with odd `m`.
pub fn doubling_characters(pi: &ComplexRep, tau: &ComplexRep) -> Result<Vec<ComplexCharacter>, ArchError> {
    let r = check_r(pi, tau)?;
    let mut out = Vec::new();
    for ti in &tau.characters {
        for pj in &pi.characters {
            out.push(ti.pow(r).mul(pj.pow(r)));
            out.push(ti.pow(r).mul(pj.pow(-r)));
        }
    }
    if pi.kind == ComplexKind::Sp && pi.m % 2 == 1 {
        out.extend(tau.characters.iter().map(|ti| ti.pow(r)));
    }
    Ok(out)
}

/// `γ(s, π × τ, ψ_b)`
pub fn doubling_gamma_complex_psi(
    pi: &ComplexRep,
    tau: &ComplexRep,
    s: Complex64,
    b: Complex64,
) -> Result<Complex64, ArchError> {
    Ok(sum_log_gamma(&doubling_characters(pi, tau)?, s, b)?.exp())
}

/// `γ(s, π × τ, ψ)`
pub fn doubling_gamma_complex(pi: &ComplexRep, tau: &ComplexRep, s: Complex64) -> Result<Complex64, ArchError> {
    doubling_gamma_complex_psi(pi, tau, s, ONE)
}

/// `(L(s, π × τ), ε(s, π × τ, ψ))` as products over the doubling characters.
pub fn l_eps_complex(pi: &ComplexRep, tau: &ComplexRep, s: Complex64) -> Result<(Complex64, Complex64), ArchError> {
    let chars = doubling_characters(pi, tau)?;
    let mut log_l = c(0.0, 0.0);
    let mut eps = ONE;
    for &x in &chars {
        log_l += tate_log_l(s, x)?;
        eps *= tate_eps(x);
    }
    Ok((log_l.exp(), eps))
}

/// `|ε L(1-s, dual) / L(s) / γ - 1|` for the doubling factor.
pub fn reconstruction_residual(pi: &ComplexRep, tau: &ComplexRep, s: Complex64) -> Result<f64, ArchError> {
    let (l, eps) = l_eps_complex(pi, tau, s)?;
    let (l_dual, _) = l_eps_complex(&pi.dual(), &tau.dual(), ONE - s)?;
    let g = doubling_gamma_complex(pi, tau, s)?;
    Ok((eps * l_dual / l / g - 1.0).norm())
}
