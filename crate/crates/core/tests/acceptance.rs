//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its measured numbers. Run with `--nocapture` to see them.

use std::time::Instant;

use goldbach_core::arithmetic::{divisor_chi_sum_from_factors, r_two_squares_brute};
use goldbach_core::buchstab::buchstab_omega;
use goldbach_core::circle::{
    build_circle_stack, convolve, dirichlet_approx_rational, major_arc_floor_power,
    major_arc_small_divisor, max_denominator, max_half_width, mean_value, negligibility_ratio, Arc,
};
use goldbach_core::expsum::{
    build_digit_prime_sum, build_divisor_split_sums, build_floor_power_sum, build_type2_depth_one,
    grid_eval, split_buckets_for_shift,
};
use goldbach_core::families::{construct_window, FamilyConfig};
use goldbach_core::goldbach::{MixedScanner, PairConvolution};
use goldbach_core::primes::{sieve_primes, Factorizer, PrimeTable};
use goldbach_core::sieve::{
    build_lambda, fundamental_lemma_check, sandwich_violations, SieveVariant,
};

fn standard_cfg(k: u32) -> FamilyConfig {
    let x = 10u64.pow(k);
    FamilyConfig::new(7, 21, 20, k, 4 * x + 1, 1.0, 0.04, 3).unwrap()
}

fn budget(name: &str, start: Instant, seconds: u64) {
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < seconds,
        "{name} exceeded its {seconds}s budget: {elapsed:?}"
    );
}

/// Divisor-split partition: for every prime in the summand interval the
/// three buckets sum to the full character-divisor sum, exactly in integers
/// and to 1e-12 relative in the weighted supports.
#[test]
fn criterion_01_divisor_split_partition() {
    let start = Instant::now();
    let cfg = standard_cfg(4);
    let table = sieve_primes(2, 40_000).unwrap();
    let factorizer = Factorizer::new(1_000);
    let split = build_divisor_split_sums(&cfg, &table, &factorizer).unwrap();
    let total = split.total();
    let weight_at = |w: &goldbach_core::expsum::WeightedSupport, p: u64| {
        w.entries()
            .iter()
            .find(|&&(n, _)| n == p)
            .map(|&(_, v)| v)
            .unwrap_or(0.0)
    };
    let interval = cfg.interval();
    let d_cut = cfg.divisor_split();
    let upper_cut = cfg.x() as f64 / d_cut;
    let mut checked = 0u64;
    for p in table.primes_in(interval.first(), interval.last() + 1) {
        let factors = factorizer.factor(p - 1).unwrap();
        let chi_sum = divisor_chi_sum_from_factors(&factors);
        let (s, m, l) = split_buckets_for_shift(&factors, d_cut, upper_cut);
        assert_eq!(s + m + l, chi_sum, "integer partition broken at p = {p}");
        let expect = chi_sum as f64 * (p as f64).ln();
        let got = weight_at(&total, p);
        assert!(
            (got - expect).abs() <= 1e-12 * expect.abs().max(1.0),
            "float partition at p = {p}: {got} vs {expect}"
        );
        checked += 1;
    }
    assert!(
        checked > 100,
        "interval unexpectedly thin: {checked} primes"
    );
    budget("criterion 01", start, 10);
    println!(
        "[criterion 01] PASS divisor-split partition exact over {checked} primes ({:?})",
        start.elapsed()
    );
}

/// Orthogonality: grid convolutions against the direct triple count at two
/// scales with the full family supports, residual below 1e-6.
#[test]
fn criterion_02_orthogonality_identity() {
    let start = Instant::now();
    for k in [3u32, 4] {
        let cfg = standard_cfg(k);
        let table = sieve_primes(2, 4 * cfg.x()).unwrap();
        let factorizer = Factorizer::new(1_000);
        let e = build_digit_prime_sum(&cfg, None, &table);
        let s = build_floor_power_sum(&cfg, &table);
        let split = build_divisor_split_sums(&cfg, &table, &factorizer).unwrap();
        let report =
            goldbach_core::circle::orthogonality_check(&e, &s, &split, cfg.n0, cfg.x()).unwrap();
        assert!(
            report.residual < 1e-6,
            "k = {k}: residual {} with mean {}",
            report.residual,
            report.mean
        );
        assert!(report.mean.abs() > 0.0, "k = {k}: degenerate zero mean");
    }
    budget("criterion 02", start, 60);
    println!(
        "[criterion 02] PASS orthogonality residual < 1e-6 at k = 3, 4 ({:?})",
        start.elapsed()
    );
}

/// Two-squares suite: factorization route equals the lattice count and the
/// 4x character-divisor sum for every n up to 1e5.
#[test]
fn criterion_03_two_squares_suite() {
    let start = Instant::now();
    let factorizer = Factorizer::new(400);
    let limit = 100_000u64;
    let windows = factorizer.factor_window(1, limit + 1).unwrap();
    for n in 1..=limit {
        let factors = &windows[(n - 1) as usize];
        let chi_sum = divisor_chi_sum_from_factors(factors);
        let from_factors = 4 * chi_sum;
        let brute = r_two_squares_brute(n);
        assert_eq!(from_factors as u64, brute, "n = {n}");
    }
    budget("criterion 03", start, 60);
    println!(
        "[criterion 03] PASS two-squares identities exact for n <= 1e5 ({:?})",
        start.elapsed()
    );
}

/// Buchstab solver accuracy on the closed-form branch and at the flat limit.
#[test]
fn criterion_04_buchstab_solver() {
    let start = Instant::now();
    let step = 1e-4;
    let table = buchstab_omega(20.0, step).unwrap();
    let mut max_err = 0.0f64;
    let mut u = 2.0f64;
    while u <= 3.0 {
        let exact = (1.0 + (u - 1.0).ln()) / u;
        max_err = max_err.max((table.eval(u) - exact).abs());
        u += 1e-3;
    }
    assert!(max_err < 10.0 * step, "closed-form error {max_err}");
    let limit = 0.56146f64;
    let at_20 = table.eval(20.0);
    assert!(
        (at_20 - limit).abs() < 2e-4,
        "omega(20) = {at_20}, expected within 2e-4 of {limit}"
    );
    budget("criterion 04", start, 5);
    println!(
        "[criterion 04] PASS closed-form error {max_err:.2e}, omega(20) = {at_20:.6} ({:?})",
        start.elapsed()
    );
}

/// Sieve sandwich with zero exceptions up to 1e5, and the fundamental-lemma
/// deviation shrinking as the support deepens.
#[test]
fn criterion_05_sieve_sandwich() {
    let start = Instant::now();
    let lower = build_lambda(1e3, 10.0, SieveVariant::Lower).unwrap();
    let upper = build_lambda(1e3, 10.0, SieveVariant::Upper).unwrap();
    let violations = sandwich_violations(100_000, &lower, &upper);
    assert_eq!(violations, 0, "{violations} sandwich violations");

    let z = 30.0f64;
    let g = |p: u64| 1.0 / p as f64;
    let shallow = fundamental_lemma_check(g, z.powi(2), z, &[2, 5]).unwrap();
    let deep = fundamental_lemma_check(g, z.powi(4), z, &[2, 5]).unwrap();
    assert!(
        deep.max_deviation() < shallow.max_deviation(),
        "deviation did not shrink: s=2 gives {}, s=4 gives {}",
        shallow.max_deviation(),
        deep.max_deviation()
    );
    budget("criterion 05", start, 120);
    println!(
        "[criterion 05] PASS sandwich exact to 1e5; lemma deviation {:.4} -> {:.4} ({:?})",
        shallow.max_deviation(),
        deep.max_deviation(),
        start.elapsed()
    );
}

/// Arc covering at the maximal parameter ranges: every grid point of X=1e3
/// lies in the arc of its best rational approximation.
#[test]
fn criterion_06_arc_covering() {
    let start = Instant::now();
    let x = 1_000u64;
    let q0 = max_denominator(x);
    let l0 = max_half_width(x);
    for a in 1..=x {
        let (c, q) = dirichlet_approx_rational(a as u128, x as u128, q0);
        let arc = Arc { c, q, l: l0 };
        assert!(
            arc.contains_grid_point(a, x),
            "a = {a} uncovered by ({c}/{q})"
        );
    }
    budget("criterion 06", start, 10);
    println!(
        "[criterion 06] PASS all {x} grid points covered at (q0, L0) = ({q0}, {l0}) ({:?})",
        start.elapsed()
    );
}

/// Classical three-prime count against its singular-series main term over a
/// 20-target sample above 1e6.
#[test]
fn criterion_07_vinogradov_ratio() {
    let start = Instant::now();
    let table = sieve_primes(2, 1_001_100).unwrap();
    let conv = PairConvolution::build(1_001_000, &table).unwrap();
    let mut worst: (f64, u64) = (1.0, 0);
    for i in 0..20u64 {
        let n0 = 1_000_001 + 2 * (i * 25);
        let report = conv.classical_report(n0).unwrap();
        assert!(
            (0.90..=1.10).contains(&report.ratio),
            "excursion at n0 = {n0}: ratio {}",
            report.ratio
        );
        if (report.ratio - 1.0).abs() > (worst.0 - 1.0).abs() {
            worst = (report.ratio, n0);
        }
    }
    budget("criterion 07", start, 300);
    println!(
        "[criterion 07] PASS 20 targets in [0.90, 1.10]; worst ratio {:.5} at n0 = {} ({:?})",
        worst.0,
        worst.1,
        start.elapsed()
    );
}

/// Mixed-representation desk campaign over a 2000-wide odd band: nonzero
/// representation rate at least 99%, failures listed.
#[test]
fn criterion_08_mixed_campaign() {
    let start = Instant::now();
    let x = 100_000u64;
    let cfg = FamilyConfig::new(7, 21, 20, 5, 2 * x + 1, 1.0, 0.04, 3).unwrap();
    let table = sieve_primes(2, 500_000).unwrap();
    let factorizer = Factorizer::new(2_000);
    let scan = MixedScanner::new(&cfg, 2 * x + 1, 2 * x + 2_001, &table, &factorizer).unwrap();
    let mut flagged = Vec::new();
    let mut total = 0u64;
    for n0 in (2 * x + 1..=2 * x + 2_001).step_by(2) {
        let report = scan.report(n0).unwrap();
        total += 1;
        if report.raw_count == 0 {
            flagged.push(n0);
        }
    }
    let rate = 1.0 - flagged.len() as f64 / total as f64;
    assert!(
        rate >= 0.99,
        "nonzero-representation rate {rate:.4} below 0.99; flagged {flagged:?}"
    );
    budget("criterion 08", start, 600);
    println!(
        "[criterion 08] PASS {total} targets, rate {rate:.4}, flagged for inspection: {flagged:?} ({:?})",
        start.elapsed()
    );
}

struct ScaleData {
    cfg: FamilyConfig,
    table: PrimeTable,
    stack: goldbach_core::circle::CircleStack,
}

fn scale_data(k: u32) -> ScaleData {
    let cfg = standard_cfg(k);
    let table = sieve_primes(2, 2 * cfg.n0).unwrap();
    let factorizer = Factorizer::new(100_000);
    let stack = build_circle_stack(&cfg, &table, &factorizer).unwrap();
    ScaleData { cfg, table, stack }
}

/// Negligibility trend: the decay statistic of the depth-one type-II family
/// and of the windowed digit-prime mid-divisor convolution both strictly
/// decrease from k=4 to k=5.
#[test]
fn criterion_09_negligibility_trend() {
    let start = Instant::now();

    let type2_ratio = |data: &ScaleData| {
        let x = data.cfg.x();
        let family = build_type2_depth_one(&data.cfg, None, 0.01, &data.table);
        assert!(
            !family.is_empty(),
            "k = {}: empty type-II family",
            data.cfg.k
        );
        let grid = grid_eval(&family, x).unwrap();
        let j1 = convolve(
            &grid,
            &data.stack.floor_power_grid,
            &data.stack.small_grid,
            data.cfg.n0,
            None,
        )
        .unwrap();
        let j3 = convolve(
            &grid,
            &data.stack.floor_power_grid,
            &data.stack.large_grid,
            data.cfg.n0,
            None,
        )
        .unwrap();
        negligibility_ratio((j1 + j3).norm(), data.cfg.digit_set_size(), x)
    };

    // first odd target at or above 4X+1 whose windowed mid-divisor triple
    // count is nonzero, located by the exact direct sum
    let windowed_ratio = |k: u32| {
        let base = standard_cfg(k);
        let x = base.x();
        let table = sieve_primes(2, 2 * base.n0 + 128).unwrap();
        let factorizer = Factorizer::new(100_000);
        let window = construct_window(&base).unwrap();
        let anchors = build_digit_prime_sum(&base, Some(&window), &table);
        assert!(!anchors.is_empty(), "k = {k}: empty windowed prime set");
        let mut n0 = 4 * x + 1;
        loop {
            let mut cfg = base.clone();
            cfg.n0 = n0;
            let split = build_divisor_split_sums(&cfg, &table, &factorizer).unwrap();
            let floor_power = build_floor_power_sum(&cfg, &table);
            let direct = mean_value(&anchors, &floor_power, &split.mid, n0);
            if direct.abs() > 1e-9 {
                let j2 = convolve(
                    &grid_eval(&anchors, x).unwrap(),
                    &grid_eval(&floor_power, x).unwrap(),
                    &grid_eval(&split.mid, x).unwrap(),
                    n0,
                    None,
                )
                .unwrap();
                return (n0, negligibility_ratio(j2.norm(), window.member_count(), x));
            }
            n0 += 2;
            assert!(n0 < 4 * x + 4_000, "k = {k}: no nonzero target found");
        }
    };

    let four = scale_data(4);
    let five = scale_data(5);
    let t2_small = type2_ratio(&four);
    let t2_large = type2_ratio(&five);
    assert!(
        t2_large < t2_small,
        "type-II ratio did not decrease: {t2_small:.3e} -> {t2_large:.3e}"
    );

    let (n0_small, j2_small) = windowed_ratio(4);
    let (n0_large, j2_large) = windowed_ratio(5);
    assert!(
        j2_large < j2_small,
        "windowed mid-divisor ratio did not decrease: {j2_small:.3e} (n0 {n0_small}) -> {j2_large:.3e} (n0 {n0_large})"
    );

    println!(
        "[criterion 09] PASS type-II {t2_small:.3e} -> {t2_large:.3e}; windowed {j2_small:.3e} (n0 {n0_small}) -> {j2_large:.3e} (n0 {n0_large}) ({:?})",
        start.elapsed()
    );
}

/// Major-arc approximants sharpen with scale: worst normalized error over
/// q <= 5, |xi| <= 8/(qX) decreases from X=1e4 to X=1e5 for both the
/// floor-power and the small-divisor sums.
#[test]
fn criterion_10_major_arc_approximants() {
    let start = Instant::now();
    let worst_errors = |data: &ScaleData| {
        let x = data.cfg.x();
        let interval = data.cfg.interval();
        let mut floor_power = 0.0f64;
        let mut small_divisor = 0.0f64;
        for q in 1..=5u64 {
            for c in 0..=q {
                if goldbach_core::arithmetic::gcd_u64(c, q) != 1 {
                    continue;
                }
                for step in [-8i64, -4, -1, 0, 1, 4, 8] {
                    let xi = step as f64 / (q as f64 * x as f64);
                    let fp = major_arc_floor_power(&data.stack.floor_power, &interval, x, c, q, xi);
                    floor_power = floor_power.max(fp.normalized_error);
                    let sd = major_arc_small_divisor(
                        &data.stack.split.small,
                        &interval,
                        &data.cfg,
                        c,
                        q,
                        xi,
                    );
                    small_divisor = small_divisor.max(sd.normalized_error);
                }
            }
        }
        (floor_power, small_divisor)
    };
    let four = scale_data(4);
    let five = scale_data(5);
    let (fp_small, sd_small) = worst_errors(&four);
    let (fp_large, sd_large) = worst_errors(&five);
    assert!(
        fp_large < fp_small,
        "floor-power approximant error grew: {fp_small:.3e} -> {fp_large:.3e}"
    );
    assert!(
        sd_large < sd_small,
        "small-divisor approximant error grew: {sd_small:.3e} -> {sd_large:.3e}"
    );
    println!(
        "[criterion 10] PASS floor-power {fp_small:.3e} -> {fp_large:.3e}; small-divisor {sd_small:.3e} -> {sd_large:.3e} ({:?})",
        start.elapsed()
    );
}
