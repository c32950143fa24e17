use meinardus::asym::{build_model, evaluate, one_pole_model, two_pole_model};
use meinardus::model::{exponent_sets, preset_lspec, ratio, LSpec, Pole, WeightFunction};
use meinardus::saddle::{phi, solve_saddle};
use meinardus::special::zeta;
use meinardus::witten::{zeta_mt2_direct, zeta_pk_direct, zeta_so5_direct};
use meinardus::C64;
use num_rational::Rational64;
use proptest::prelude::*;

fn so5_like(res_half: f64, res_third: f64, lstar: Vec<Rational64>) -> LSpec {
    LSpec::new(
        vec![Pole { at: ratio(1, 2), residue: res_half }, Pole { at: ratio(1, 3), residue: res_third }],
        lstar,
        0.375,
        3.25,
        ratio(1, 1),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exponent_sets_ignore_pole_order(seed in any::<u64>()) {
        let mut poles = vec![ratio(1, 2), ratio(1, 3), ratio(0, 1), ratio(-1, 3)];
        let base = exponent_sets(&so5_like(1.6, -1.0, poles.clone()));
        // Fisher-Yates driven by the seed.
        let mut x = seed;
        for i in (1..poles.len()).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            poles.swap(i, (x >> 33) as usize % (i + 1));
        }
        let shuffled = exponent_sets(&so5_like(1.6, -1.0, poles));
        prop_assert_eq!(&base, &shuffled);
        prop_assert_eq!(&exponent_sets(&so5_like(1.6, -1.0, vec![ratio(1, 2), ratio(1, 3), ratio(0, 1), ratio(-1, 3)])), &base);
    }

    #[test]
    fn estimate_is_monotone_in_each_coefficient(j in 0usize..4, bump in 1e-3f64..1.0, n in 10u64..100_000) {
        let model = two_pole_model("so5-like", &so5_like(1.6, -1.0, vec![ratio(1, 2), ratio(1, 3), ratio(0, 1), ratio(-1, 3)])).unwrap();
        let mut up = model.clone();
        up.exp_terms[j].0 += bump;
        prop_assert!(evaluate(&up, n).log_value > evaluate(&model, n).log_value);
    }

    #[test]
    fn second_pole_fades_continuously(c2 in -1.0f64..1.0) {
        let lstar = vec![ratio(1, 2), ratio(1, 3), ratio(0, 1), ratio(-1, 3)];
        let tiny = 1e-9 * c2;
        let two = two_pole_model("t", &so5_like(1.6, tiny, lstar.clone())).unwrap();
        let one = one_pole_model("o", &LSpec::new(vec![Pole { at: ratio(1, 2), residue: 1.6 }], lstar, 0.375, 3.25, ratio(1, 1)).unwrap()).unwrap();
        prop_assert!((two.exp_terms[0].0 - one.exp_terms[0].0).abs() < 1e-12);
        for (a, _) in &two.exp_terms[1..] {
            prop_assert!(a.abs() < 1e-7);
        }
        prop_assert!((two.c - one.c).abs() < 1e-12 * one.c);
        prop_assert!((two.b - one.b).abs() < 1e-12);
    }

    #[test]
    fn saddle_decreases_in_n(preset in 0usize..3, n in 50.0f64..5000.0, step in 1.0f64..500.0) {
        let w = [WeightFunction::Ones, WeightFunction::PlanePartition, WeightFunction::Polygonal(3)][preset].clone();
        let a = solve_saddle(&w, None, n).unwrap();
        let b = solve_saddle(&w, None, n + step).unwrap();
        prop_assert!(b.rho < a.rho);
        prop_assert!(a.residual <= 1e-9 * n);
        prop_assert!(b.residual <= 1e-9 * (n + step));
    }

    #[test]
    fn tornheim_sum_is_symmetric(a in 1.2f64..3.0, b in 1.2f64..3.0, cc in 0.5f64..2.0, im in -2.0f64..2.0) {
        let x = zeta_mt2_direct(C64::new(a, im), C64::new(b, 0.0), C64::new(cc, 0.0), 1e-10).unwrap();
        let y = zeta_mt2_direct(C64::new(b, 0.0), C64::new(a, im), C64::new(cc, 0.0), 1e-10).unwrap();
        prop_assert!((x.value - y.value).norm() <= x.err_estimate + y.err_estimate + 1e-12);
    }

    #[test]
    fn square_zeta_is_riemann_at_double(re in 0.6f64..3.0, im in -5.0f64..5.0) {
        let s = C64::new(re, im);
        let z = zeta_pk_direct(s, 4, 1e-12).unwrap();
        let want = zeta(s * 2.0).unwrap();
        prop_assert!((z.value - want).norm() <= 1e-10 * want.norm().max(1.0), "{} vs {}", z.value, want);
    }

    #[test]
    fn so5_sum_is_real_on_the_axis(x in 0.52f64..2.5) {
        let v = zeta_so5_direct(C64::new(x, 0.0), 1e-10).unwrap();
        prop_assert!(v.value.im.abs() <= 1e-8);
        prop_assert!(v.err_estimate >= 0.0);
    }
}

#[test]
fn so5_exponential_part() {
    let e = exponent_sets(&so5_like(1.6, -1.0, vec![ratio(1, 2), ratio(1, 3), ratio(0, 1), ratio(-1, 3)]));
    assert_eq!(e.exponential_exponents(), vec![ratio(1, 3), ratio(2, 9), ratio(1, 9), ratio(0, 1)]);
}

#[test]
fn phi_derivative_matches_finite_difference() {
    let h = 1e-5;
    for w in [WeightFunction::Ones, WeightFunction::PlanePartition, WeightFunction::Polygonal(5)] {
        for z in [0.1, 0.5, 1.0] {
            let plus = phi(&w, C64::new(z + h, 0.0), 0).unwrap().value.re;
            let minus = phi(&w, C64::new(z - h, 0.0), 0).unwrap().value.re;
            let fd = (plus - minus) / (2.0 * h);
            let exact = phi(&w, C64::new(z, 0.0), 1).unwrap().value.re;
            assert!((fd - exact).abs() <= 1e-6 * exact.abs(), "{w} z={z}: {fd} vs {exact}");
        }
    }
}

#[test]
fn classical_models_build() {
    for p in ["ones", "plane", "polygonal:3", "polygonal:4", "polygonal:5"] {
        let w = WeightFunction::from_preset(p).unwrap();
        let m = build_model(p, &preset_lspec(&w).unwrap()).unwrap();
        assert!(m.exp_terms[0].0 > 0.0, "{p}");
    }
}
