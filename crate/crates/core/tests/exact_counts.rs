use meinardus::exact::{coeffs_conv, coeffs_oracle, coeffs_pentagonal, divisor_weights};
use meinardus::model::{polygonal_number, WeightFunction};
use num_bigint::BigUint;
use proptest::prelude::*;

fn presets() -> Vec<WeightFunction> {
    ["ones", "plane", "polygonal:3", "polygonal:5", "su3", "so5"]
        .iter()
        .map(|p| WeightFunction::from_preset(p).unwrap())
        .collect()
}

#[test]
fn recurrence_agrees_with_product_expansion() {
    for w in presets() {
        let a = coeffs_conv(&w, 200).unwrap();
        let b = coeffs_oracle(&w, 200).unwrap();
        assert_eq!(a.values, b.values, "{w}");
    }
}

#[test]
fn pentagonal_agrees_with_recurrence() {
    let a = coeffs_conv(&WeightFunction::Ones, 2000).unwrap();
    let b = coeffs_pentagonal(2000);
    assert_eq!(a.values, b.values);
}

// Partitions of n into distinct-or-repeated squares by direct recursion.
fn brute_squares(n: u64, largest: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut total = 0;
    let mut r = 1;
    while r <= largest && r * r <= n {
        total += brute_squares(n - r * r, r);
        r += 1;
    }
    total
}

#[test]
fn square_parts_match_brute_force() {
    let t = coeffs_conv(&WeightFunction::Polygonal(4), 50).unwrap();
    for n in 0..=50u64 {
        assert_eq!(t.get(n as usize).unwrap(), &BigUint::from(brute_squares(n, n)), "n = {n}");
    }
    assert_eq!(polygonal_number(4, 7), 49);
}

fn divisor_power_sum(k: u64, power: u32) -> u128 {
    (1..=k).filter(|d| k % d == 0).map(|d| (d as u128).pow(power)).sum()
}

#[test]
fn divisor_weights_for_classical_presets() {
    let ones = divisor_weights(&WeightFunction::Ones.table(300));
    let plane = divisor_weights(&WeightFunction::PlanePartition.table(300));
    for k in 1..=300u64 {
        assert_eq!(ones[k as usize], divisor_power_sum(k, 1));
        assert_eq!(plane[k as usize], divisor_power_sum(k, 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tables_are_prefix_stable(preset in 0usize..6, short in 1usize..60, extra in 1usize..60) {
        let w = &presets()[preset];
        let a = coeffs_conv(w, short).unwrap();
        let b = coeffs_conv(w, short + extra).unwrap();
        prop_assert_eq!(&a.values[..], &b.values[..=short]);
    }

    #[test]
    fn explicit_table_matches_preset(n in 1usize..80) {
        let text: String = (1..=n).map(|m| format!("{m} {}\n", m)).collect();
        let w = WeightFunction::parse_table("plane-copy", &text).unwrap();
        let a = coeffs_conv(&w, n).unwrap();
        let b = coeffs_conv(&WeightFunction::PlanePartition, n).unwrap();
        prop_assert_eq!(a.values, b.values);
    }
}
