use meinardus::witten::{
    geometric_grid, residue_extract, so5_params_for, zeta_so5_continued, zeta_so5_direct, MbParams,
};
use meinardus::C64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn so5_at_zero() {
    let v = zeta_so5_continued(c(0.0), &MbParams::default()).unwrap();
    assert!((v.value.re - 0.375).abs() < 1e-6, "{:?}", v);
    assert!(v.value.im.abs() < 1e-8);
}

#[test]
fn settings_do_not_move_the_value() {
    let s = C64::new(0.7, 0.4);
    let base = zeta_so5_continued(s, &MbParams::default()).unwrap();
    for p in [MbParams { k: 4, ..MbParams::default() }, MbParams { m: 2, eps: 0.3, ..MbParams::default() }] {
        let other = zeta_so5_continued(s, &p).unwrap();
        assert!((other.value - base.value).norm() <= other.err_estimate + base.err_estimate, "{p:?}");
    }
    let direct = zeta_so5_direct(s, 1e-10).unwrap();
    assert!((direct.value - base.value).norm() <= direct.err_estimate + base.err_estimate);
}

#[test]
fn even_point_below_zero_is_not_a_pole() {
    let target = -2.0 / 3.0;
    let p = so5_params_for(c(target), &MbParams::default());
    let r = residue_extract(|x| zeta_so5_continued(c(x), &p).map(|v| v.value.re), target, &geometric_grid(0.02, 3))
        .unwrap();
    assert!(r.value.abs() < 1e-3, "{r:?}");
}
