use meinardus::exact::coeffs;
use meinardus::model::{preset_lspec, LSpec, Pole, WeightFunction};
use meinardus::saddle::{cauchy_count, rho_asymptotic, solve_saddle};
use meinardus::special::{gamma, zeta};
use meinardus::C64;
use num_rational::Rational64;

#[test]
fn circle_count_is_exact_at_sampled_n() {
    let cases: &[(&str, &[usize])] = &[
        ("ones", &[137, 211, 300]),
        ("polygonal:3", &[137, 211, 300]),
        ("polygonal:5", &[173, 300]),
        ("su3", &[137, 211, 300]),
        ("so5", &[137, 211, 300]),
        // 30 to 40 digits: past double-double
        ("plane", &[211, 300]),
    ];
    for (preset, ns) in cases {
        let w = WeightFunction::from_preset(preset).unwrap();
        let table = coeffs(&w, 300).unwrap();
        for &n in *ns {
            let c = cauchy_count(&w, n).unwrap();
            assert_eq!(c.nearest, table.values[n], "{preset} n = {n}");
            assert!(c.frac < 0.01, "{preset} n = {n}: frac {}", c.frac);
        }
    }
}

fn so5_spec_without_derivative() -> LSpec {
    let pi = std::f64::consts::PI;
    let g14 = gamma(C64::new(0.25, 0.0)).unwrap().re;
    let z13 = zeta(C64::new(1.0 / 3.0, 0.0)).unwrap().re;
    let half = 3f64.sqrt() * g14 * g14 / (8.0 * pi.sqrt());
    let third = (2f64.powf(1.0 / 3.0) + 1.0) * 3f64.powf(-2.0 / 3.0) * z13;
    let r = |a, b| Rational64::new(a, b);
    LSpec::new(
        vec![Pole { at: r(1, 2), residue: half }, Pole { at: r(1, 3), residue: third }],
        vec![r(1, 2), r(1, 3), r(0, 1), r(-1, 3)],
        3.0 / 8.0,
        // the saddle expansion does not use L'(0)
        0.0,
        r(1, 1),
    )
    .unwrap()
}

#[test]
fn so5_saddle_matches_expansion() {
    let spec = so5_spec_without_derivative();
    let w = WeightFunction::So5;
    let n = 1e4;
    let exact = solve_saddle(&w, Some(&spec), n).unwrap().rho;
    let approx = rho_asymptotic(&spec, n).unwrap();
    assert!((exact - approx).abs() / exact < 1e-2, "{exact} vs {approx}");
}

#[test]
fn ones_saddle_error_shrinks_faster_than_root_n() {
    let spec = preset_lspec(&WeightFunction::Ones).unwrap();
    let scaled: Vec<f64> = [1e3, 1e4, 1e5]
        .iter()
        .map(|&n| {
            let rho = solve_saddle(&WeightFunction::Ones, Some(&spec), n).unwrap().rho;
            (rho - rho_asymptotic(&spec, n).unwrap()).abs() * n.sqrt()
        })
        .collect();
    assert!(scaled.windows(2).all(|p| p[1] < p[0]), "{scaled:?}");
}
