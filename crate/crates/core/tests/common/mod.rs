//! Reference values and residual grids for the special functions, shared
//! with the acceptance harness of the command-line crate.
#![allow(clippy::excessive_precision, dead_code)]

use std::f64::consts::PI;

use meinardus::special::{gamma, ln_gamma, zeta_euler_maclaurin};
use meinardus::C64;

pub const GAMMA_POINTS: [(f64, f64, f64, f64); 20] = [
    (0.1, 0.0, 9.513507698668731836292, 0.0),
    (0.5, 0.0, 1.772453850905516027298, 0.0),
    (1.5, 0.0, 0.8862269254527580136491, 0.0),
    (2.75, 0.0, 1.608359421985545659232, 0.0),
    (7.3, 0.0, 1271.423633663909273058, 0.0),
    (25.5, 0.0, 3.086770540528696782771e+24, 0.0),
    (-0.5, 0.0, -3.544907701811032054596, 0.0),
    (-2.3, 0.0, -1.447107394255917263859, 0.0),
    (-7.7, 0.0, 0.0001820741668415261742726, 0.0),
    (1.0, 1.0, 0.4980156681183560427137, -0.154949828301810685125),
    (0.5, 10.0, 3.37872437623423579703e-7, 1.689369839038918911205e-7),
    (3.0, -4.0, 0.005225538471369214194732, 0.1725470792943001877191),
    (-2.5, 0.75, -0.1307096380865729467051, -0.1443199840556442643913),
    (0.25, 50.0, 5.625842259204914072412e-35, 4.694489115340814038042e-35),
    (10.0, 30.0, -8.542931506169931878644e-7, -6.58600258410920044398e-7),
    (-5.5, -3.0, 0.000002550933178593486431779, 0.000002566992553290306554079),
    (1.0, 150.0, 9.986583564155901910831e-102, -1.039955317373461651462e-101),
    (0.5, -199.0, 4.355520086013626628567e-136, 6.374922364265811880297e-137),
    (20.0, 1.0, -116845778530165356.1581, 20133283732238090.55672),
    (-9.25, 0.5, -6.317268981794637668165e-7, 0.000001968836797978186157522),
];

pub const ZETA_POINTS: [(f64, f64, f64, f64); 20] = [
    (2.0, 0.0, 1.644934066848226436472, 0.0),
    (3.0, 0.0, 1.2020569031595942854, 0.0),
    (0.5, 0.0, -1.460354508809586812889, 0.0),
    (1.5, 0.0, 2.612375348685488343349, 0.0),
    (-1.5, 0.0, -0.02548520188983303594954, 0.0),
    (-7.5, 0.0, 0.003269039572600220021717, 0.0),
    (0.25, 0.0, -0.8132784052618916565214, 0.0),
    (1.0001, 0.0, 10000.57722294643762907, 0.0),
    (12.5, 0.0, 1.000173751733643178193, 0.0),
    (0.5, 14.13472514173469463117, -1.048365080558823738759e-16, 6.585259277605157810303e-16),
    (0.5, 20.0, 0.4299138604378433721577, -1.064291443080589112727),
    (2.0, 3.0, 0.7980219851462757206223, -0.1137443080529385002159),
    (-3.0, 5.0, -0.09939511318285369604047, 0.5388200489854870819093),
    (0.75, 100.0, 2.002991995255395825136, -0.0543920711900925869232),
    (1.5, -60.0, 0.6049105845322786619759, -0.0945103281593237531484),
    (-9.5, 2.0, -0.08833499814584679172292, 0.01418067496169807190287),
    (0.2999999999999999889, 199.0, 1.697510610026411890189, 6.389701610001498762958),
    (4.0, -150.0, 0.9433604914888473007183, -0.003957678855359691567929),
    (1.1999999999999999556, 0.6999999999999999555911, 0.971426234556669710226, -1.271076320703208686743),
    (-0.5, -0.5, -0.140757460624279463156, 0.1580763818474465573529),
];

pub fn close(got: C64, want: C64, digits: f64) -> bool {
    let tol = 10f64.powf(-digits);
    let scale = if want.norm() < 1e-10 { 1.0 } else { want.norm() };
    (got - want).norm() <= tol * scale
}

/// Points for the reflection check, away from the integers.
pub fn grid() -> Vec<C64> {
    let mut v = Vec::new();
    for i in 0..9 {
        for j in 0..9 {
            let re = -9.8 + 2.4 * i as f64 + 0.013;
            let im = -180.0 + 45.0 * j as f64 + 0.37;
            v.push(C64::new(re, im));
        }
    }
    v
}

/// Points in the critical strip for the functional equation.
pub fn strip_grid() -> Vec<C64> {
    let mut v = Vec::new();
    for i in 0..7 {
        for j in 0..9 {
            v.push(C64::new(0.05 + 0.15 * i as f64, -160.0 + 40.0 * j as f64 + 0.21));
        }
    }
    v
}

/// `|Gamma(s) Gamma(1-s) sin(pi s) / pi - 1|`.
pub fn reflection_residual(s: C64) -> f64 {
    let lhs = gamma(s).unwrap() * gamma(1.0 - s).unwrap() * (s * PI).sin();
    (lhs - PI).norm() / PI
}

/// Relative mismatch of `zeta(s) = chi(s) zeta(1-s)`, both sides through the
/// Euler-Maclaurin evaluator.
pub fn functional_equation_residual(s: C64) -> f64 {
    let lhs = zeta_euler_maclaurin(s).unwrap();
    let ln_chi = s * 2f64.ln() + (s - 1.0) * PI.ln() + ((s * PI * 0.5).sin()).ln() + ln_gamma(1.0 - s).unwrap();
    let rhs = ln_chi.exp() * zeta_euler_maclaurin(1.0 - s).unwrap();
    (lhs - rhs).norm() / lhs.norm().max(1e-300)
}
