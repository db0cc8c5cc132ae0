use std::f64::consts::PI;

use mwb_core::archgamma::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

// principal log Gamma, 30-digit reference values
const ORACLE: [(f64, f64, f64, f64); 6] = [
    (0.5, 0.0, 0.572_364_942_924_700_1, 0.0),
    (3.7, 2.1, 0.785_346_958_073_822_4, 2.583_012_925_115_262_3),
    (-2.5, 0.3, -0.432_088_892_613_201_94, -9.093_345_421_289_742),
    (0.2, -1.3, -1.196_438_634_633_15, 1.432_982_754_664_515_7),
    (-7.3, -4.1, -19.146_838_884_439_436, 15.905_387_270_574_618),
    (12.5, 30.0, -5.085_350_339_355_305, 88.546_898_270_819_31),
];

#[test]
fn log_gamma_matches_reference() {
    for (re, im, lre, lim) in ORACLE {
        let got = log_gamma(c(re, im)).unwrap();
        assert!(rel(got, c(lre, lim)) < 1e-13, "z = {re}+{im}i: {got} vs {lre}+{lim}i");
    }
}

#[test]
fn log_gamma_trivial_points() {
    assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
    let half = log_gamma(c(0.5, 0.0)).unwrap();
    assert!((half.re - PI.sqrt().ln()).abs() < 1e-14);
    for n in [0.0, -1.0, -5.0] {
        assert!(matches!(log_gamma(c(n, 0.0)), Err(ArchError::NearPole { .. })));
        assert!(matches!(log_gamma(c(n + 5e-7, 0.0)), Err(ArchError::NearPole { .. })));
    }
    assert!(log_gamma(c(-1.0 + 1e-5, 0.0)).is_ok());
}

#[test]
fn tate_l_at_one_is_one_over_pi() {
    let v = tate_l(c(1.0, 0.0), ComplexCharacter::trivial()).unwrap();
    assert!(rel(v, c(1.0 / PI, 0.0)) < 1e-14);
    let a = tate_l(c(0.3, 0.2), ComplexCharacter::new(3, c(0.1, -0.4))).unwrap();
    let b = tate_l(c(0.3, 0.2), ComplexCharacter::new(-3, c(0.1, -0.4))).unwrap();
    assert_eq!(a, b);
    assert!(tate_l(c(-1.0, 0.0), ComplexCharacter::trivial()).is_err());
}

#[test]
fn tate_gamma_at_center_and_duplicated_formula() {
    let g = tate_gamma(c(0.5, 0.0), ComplexCharacter::trivial()).unwrap();
    assert!(rel(g, c(1.0, 0.0)) < 1e-14);
    // γ(s,χ) = i^{|l|} (2π)^{2w-1} Γ(1-w')/Γ(w) with w = s+t+|l|/2, w' = s+t-|l|/2
    for (l, t, s) in [(0, c(0.2, 0.1), c(0.3, 1.1)), (3, c(-0.4, 0.0), c(0.7, -0.5)), (-2, c(0.0, 0.3), c(2.2, 0.4))] {
        let chi = ComplexCharacter::new(l, t);
        let a = l.unsigned_abs() as f64 / 2.0;
        let w = s + t + a;
        let wp = c(1.0, 0.0) - s - t + a;
        let i_pow = c(0.0, 1.0).powu(l.unsigned_abs() as u32);
        let oracle = i_pow * (c(2.0 * PI, 0.0)).powc(w - wp) * gamma(wp).unwrap() / gamma(w).unwrap();
        assert!(rel(tate_gamma(s, chi).unwrap(), oracle) < 1e-12);
    }
}

#[test]
fn gamma_mult_examples() {
    assert_eq!(gamma_mult_check(1, c(0.37, 0.2)).unwrap(), 0.0);
    assert!(gamma_mult_check(2, c(0.5, 0.0)).unwrap() < 1e-14);
    assert!(gamma_mult_check(3, c(0.3, 0.2)).unwrap() < 1e-13);
}

/// Γ(1-s)/Γ(s) changes sign exactly at the integers.
#[test]
fn sign_changes_of_tate_gamma_along_real_axis() {
    let chi = ComplexCharacter::trivial();
    let h = 0.01;
    let mut prev: Option<(f64, f64)> = None;
    let mut flips = Vec::new();
    let mut x = -3.495;
    while x < 3.5 {
        let v = tate_gamma(c(x, 0.0), chi).unwrap();
        assert!(v.im.abs() <= 1e-9 * v.norm());
        if let Some((px, pv)) = prev {
            if pv.signum() != v.re.signum() {
                flips.push(libm::round((px + x) / 2.0) as i64);
            }
        }
        prev = Some((x, v.re));
        x += h;
    }
    assert_eq!(flips, vec![-3, -2, -1, 0, 1, 2, 3]);
}

#[test]
fn rs_single_character_reduces_to_tate() {
    let pi = ComplexRep::new(ComplexKind::Gl, 1, vec![ComplexCharacter::new(1, c(0.2, 0.0))]);
    let tau = ComplexRep::new(ComplexKind::Gl, 1, vec![ComplexCharacter::new(3, c(-0.1, 0.3))]);
    let s = c(0.4, 0.9);
    let want = tate_gamma(s, ComplexCharacter::new(2, c(-0.3, 0.3))).unwrap();
    assert!(rel(rs_gamma_direct(&pi, &tau, s).unwrap(), want) < 1e-14);
    assert!(rel(rs_gamma_via_rho(&pi, &tau, s).unwrap(), want) < 1e-14);
}

#[test]
fn doubling_without_pi_characters_is_standard_gamma() {
    let pi = ComplexRep::new(ComplexKind::Sp, 3, vec![]);
    let tau = ComplexRep::new(ComplexKind::Gl, 3, vec![ComplexCharacter::new(1, c(0.05, 0.1))]);
    let s = c(0.3, 0.4);
    let want = tate_gamma(s, ComplexCharacter::new(3, c(0.15, 0.3))).unwrap();
    assert!(rel(doubling_gamma_complex(&pi, &tau, s).unwrap(), want) < 1e-13);
}

#[test]
fn kinds_are_checked() {
    let sp = ComplexRep::new(ComplexKind::Sp, 3, vec![ComplexCharacter::trivial()]);
    let gl = ComplexRep::new(ComplexKind::Gl, 3, vec![ComplexCharacter::trivial()]);
    let s = c(0.3, 0.1);
    assert_eq!(doubling_gamma_complex(&gl, &sp, s), Err(ArchError::NotGl("tau")));
    assert_eq!(rs_gamma_direct(&sp, &gl, s), Err(ArchError::NotGl("pi")));
    assert_eq!(rs_gamma_via_rho(&sp, &gl, s), Err(ArchError::NotGl("pi")));
    assert!(doubling_gamma_complex(&sp, &gl, s).is_ok());
}

#[test]
fn psi_dependence_trivial_cases() {
    let pi = ComplexRep::new(ComplexKind::Gl, 2, vec![ComplexCharacter::trivial()]);
    let tau = ComplexRep::new(ComplexKind::Gl, 2, vec![ComplexCharacter::trivial(); 2]);
    assert!(rs_psi_dependence_check(&pi, &tau, c(0.3, 0.1), c(1.0, 0.0)).unwrap() < 1e-15);
    assert!(rs_psi_dependence_check(&pi, &tau, c(0.3, 0.1), c(0.0, 0.0)).is_err());
}

fn character() -> impl Strategy<Value = ComplexCharacter> {
    (-4i64..=4, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(l, a, b)| ComplexCharacter::new(l, c(a, b)))
}

fn strip_point() -> impl Strategy<Value = Complex64> {
    (-1.0f64..2.0, 0.5f64..3.0, prop::bool::ANY).prop_map(|(x, y, up)| c(x, if up { y } else { -y }))
}

proptest! {
    #[test]
    fn two_paths_agree(r in 1u32..=3, p in prop::collection::vec(character(), 1..3),
                       t in prop::collection::vec(character(), 1..3), s in strip_point()) {
        // m with rank r: 1, 4, 3
        let m = if r == 2 { 4 } else { r };
        let pi = ComplexRep::new(ComplexKind::Gl, m, p);
        let tau = ComplexRep::new(ComplexKind::Gl, m, t);
        prop_assert_eq!(pi.r(), r as i64);
        let a = rs_gamma_direct(&pi, &tau, s);
        let b = rs_gamma_via_rho(&pi, &tau, s);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!(rel(b, a) < 1e-8 * a.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn gamma_multiplication_formula(r in 1u32..=6, re in 0.05f64..3.0, im in -3.0f64..3.0) {
        prop_assert!(gamma_mult_check(r, c(re, im)).unwrap() <= 1e-10);
    }

    #[test]
    fn tate_functional_equation(chi in character(), s in strip_point()) {
        let b = c(-1.0, 0.0);
        let lhs = tate_log_gamma_psi(s, chi, c(1.0, 0.0)).unwrap()
            + tate_log_gamma_psi(c(1.0, 0.0) - s, chi.inv(), b).unwrap();
        prop_assert!((lhs.exp() - 1.0).norm() < 1e-10);
    }
}
