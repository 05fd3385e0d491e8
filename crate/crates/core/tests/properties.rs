//! Property tests over randomly generated inputs.

use num_complex::Complex64;
use proptest::prelude::*;

use goldbach_core::arithmetic::gcd_u64;
use goldbach_core::circle::dirichlet_approx;
use goldbach_core::expsum::{eval_point, unit_phase, SumLabel, WeightedSupport};
use goldbach_core::families::digit_member_k;

proptest! {
    #[test]
    fn dirichlet_postcondition(theta in 1e-9..1.0f64, n in 1u64..100_000) {
        let (c, q) = dirichlet_approx(theta, n);
        prop_assert!(q >= 1 && q <= n);
        prop_assert_eq!(gcd_u64(c, q), 1);
        let err = (theta - c as f64 / q as f64).abs();
        prop_assert!(err * q as f64 * n as f64 <= 1.0 + 1e-9);
    }

    #[test]
    fn digit_membership_matches_string_scan(n in 0u64..10_000_000, a0 in 0u8..=9) {
        let s = format!("{n:07}");
        let by_string = !s.contains(char::from(b'0' + a0));
        prop_assert_eq!(digit_member_k(n, 7, a0).unwrap(), by_string);
    }

    #[test]
    fn support_merge_preserves_mass(entries in proptest::collection::vec((0u64..5_000, -8i32..8), 0..200)) {
        let entries: Vec<(u64, f64)> = entries.into_iter().map(|(n, w)| (n, w as f64)).collect();
        let direct: f64 = entries.iter().map(|&(_, w)| w).sum();
        let support = WeightedSupport::from_entries(entries, SumLabel::Custom);
        // sorted, unique, no zero weights
        prop_assert!(support.entries().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(support.entries().iter().all(|&(_, w)| w != 0.0));
        prop_assert!((support.total_weight() - direct).abs() < 1e-9);
    }

    #[test]
    fn evaluation_conjugate_symmetry(
        entries in proptest::collection::vec((0u64..3_000, -5i32..=5), 1..60),
        theta in 0.01..0.99f64,
    ) {
        let entries: Vec<(u64, f64)> = entries.into_iter().map(|(n, w)| (n, w as f64)).collect();
        let support = WeightedSupport::from_entries(entries, SumLabel::Custom);
        let forward = eval_point(&support, theta);
        let backward = eval_point(&support, 1.0 - theta);
        prop_assert!((forward - backward.conj()).norm() <= 1e-9 * (1.0 + forward.norm()));
    }

    #[test]
    fn phase_reduction_matches_integer_arithmetic(n in 0u64..10_000_000_000, a in 0u64..1_000_000) {
        // at rational angles a/x the FMA-compensated reduction agrees with
        // exact modular arithmetic up to the rounding of a/x itself, which is
        // amplified by n
        let x = 1_000_000u64;
        let theta = a as f64 / x as f64;
        let exact = ((n as u128 * a as u128) % x as u128) as f64 / x as f64;
        let reduced = unit_phase(n, theta);
        let d = (reduced - exact).abs();
        let wrapped = d.min(1.0 - d);
        let budget = 4.0 * f64::EPSILON * n as f64 * theta.max(1e-6) + 1e-12;
        prop_assert!(wrapped <= budget, "n = {n}, a = {a}: {reduced} vs {exact} (budget {budget:.2e})");
    }
}

#[test]
fn unit_sum_magnitude_bound() {
    // |Σ e(nθ)| never exceeds the entry count; deterministic sweep kept beside
    // the random properties
    let support = WeightedSupport::from_entries(
        (0..500u64).map(|n| (n * 3, 1.0)).collect(),
        SumLabel::Custom,
    );
    for i in 0..500 {
        let theta = i as f64 / 500.0;
        let v: Complex64 = eval_point(&support, theta);
        assert!(v.norm() <= 500.0 + 1e-9);
    }
}
