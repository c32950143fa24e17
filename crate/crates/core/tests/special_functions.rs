//! Gamma and zeta against high precision reference values, plus
//! reflection and functional-equation residuals.

mod common;

use common::{close, functional_equation_residual, grid, reflection_residual, strip_grid, GAMMA_POINTS, ZETA_POINTS};
use meinardus::special::{gamma, zeta};
use meinardus::C64;

#[test]
fn gamma_golden_points() {
    for &(re, im, vr, vi) in GAMMA_POINTS.iter() {
        let got = gamma(C64::new(re, im)).unwrap();
        assert!(close(got, C64::new(vr, vi), 12.0), "Gamma({re}+{im}i) = {got}, want {vr}+{vi}i");
    }
}

#[test]
fn zeta_golden_points() {
    for &(re, im, vr, vi) in ZETA_POINTS.iter() {
        let got = zeta(C64::new(re, im)).unwrap();
        assert!(close(got, C64::new(vr, vi), 12.0), "zeta({re}+{im}i) = {got}, want {vr}+{vi}i");
    }
}

#[test]
fn gamma_reflection_residual() {
    for s in grid() {
        let res = reflection_residual(s);
        assert!(res <= 1e-11, "reflection residual {res:e} at {s}");
    }
}

#[test]
fn zeta_functional_equation_residual() {
    for s in strip_grid() {
        let res = functional_equation_residual(s);
        assert!(res <= 1e-11, "functional equation residual {res:e} at {s}");
    }
}

#[test]
fn gamma_recurrence_and_conjugation() {
    for s in grid() {
        let a = gamma(s + 1.0).unwrap();
        let b = s * gamma(s).unwrap();
        assert!((a - b).norm() <= 1e-12 * a.norm());
        let c = gamma(s.conj()).unwrap().conj();
        assert!((c - gamma(s).unwrap()).norm() <= 1e-13 * c.norm());
    }
}
