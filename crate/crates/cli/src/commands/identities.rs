//! `identities`: run the exact-identity suite at the configured scale and
//! exit nonzero if anything is off.

use goldbach_core::arithmetic::divisor_chi_sum_from_factors;
use goldbach_core::circle::orthogonality_check;
use goldbach_core::expsum::{
    build_digit_prime_sum, build_divisor_split_sums, build_floor_power_sum, split_buckets_for_shift,
};
use goldbach_core::primes::{sieve_primes, Factorizer};
use goldbach_core::sieve::{buchstab_step, build_lambda, sandwich_violations, SieveVariant};

use crate::config::RunConfig;
use crate::CliError;

struct Suite {
    failures: u64,
}

impl Suite {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("identity {name}: ok ({detail})");
        } else {
            println!("identity {name}: FAIL ({detail})");
            self.failures += 1;
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let family = cfg.family()?;
    let x = family.x();
    let table = sieve_primes(2, 4 * x)?;
    let factorizer = Factorizer::new(cfg.factor_bound.min(4 * x));
    let mut suite = Suite { failures: 0 };

    // divisor-split partition, exact in integers and at 1e-12 in floats
    let split = build_divisor_split_sums(&family, &table, &factorizer)?;
    let total = split.total();
    let interval = family.interval();
    let d_cut = family.divisor_split();
    let upper_cut = x as f64 / d_cut;
    let mut worst = 0.0f64;
    let mut int_breaks = 0u64;
    for p in table.primes_in(interval.first(), interval.last() + 1) {
        let factors = factorizer.factor(p - 1)?;
        let chi_sum = divisor_chi_sum_from_factors(&factors);
        let (s, m, l) = split_buckets_for_shift(&factors, d_cut, upper_cut);
        if s + m + l != chi_sum {
            int_breaks += 1;
        }
        let expect = chi_sum as f64 * (p as f64).ln();
        let got = total
            .entries()
            .iter()
            .find(|&&(n, _)| n == p)
            .map(|&(_, w)| w)
            .unwrap_or(0.0);
        worst = worst.max((got - expect).abs() / expect.abs().max(1.0));
    }
    suite.check(
        "divisor-split-partition",
        int_breaks == 0 && worst < 1e-12,
        format!("integer breaks {int_breaks}, worst float discrepancy {worst:.2e}"),
    );

    // orthogonality of the grid convolutions against the direct count
    let digit_primes = build_digit_prime_sum(&family, None, &table);
    let floor_power = build_floor_power_sum(&family, &table);
    let report = orthogonality_check(&digit_primes, &floor_power, &split, family.n0, x)?;
    suite.check(
        "orthogonality",
        report.residual < 1e-6,
        format!("residual {:.2e}, mean {:.4e}", report.residual, report.mean),
    );

    // Buchstab recursion at an interior phase
    let block: Vec<u64> = (1..=1_000).collect();
    let step = buchstab_step(&block, 3.0, 30.0, 0.37);
    let buchstab_tol = 1e-12 * block.len() as f64;
    suite.check(
        "buchstab-recursion",
        step.residual() < buchstab_tol,
        format!("residual {:.2e}", step.residual()),
    );

    // sieve-weight sandwich, optionally with a deliberately broken unit
    let lower = build_lambda(1e3, 10.0, SieveVariant::Lower)?;
    let mut upper = build_lambda(1e3, 10.0, SieveVariant::Upper)?;
    if cfg.corrupt_lambda {
        println!("note: corrupting the unit weight per config request");
        upper.corrupt_unit();
    }
    let violations = sandwich_violations(100_000, &lower, &upper);
    suite.check(
        "sieve-sandwich",
        violations == 0,
        format!("{violations} violations over 1e5"),
    );

    if suite.failures > 0 {
        return Err(CliError::Failure(format!(
            "{} identity check(s) failed",
            suite.failures
        )));
    }
    println!("identity suite passed at k = {}", family.k);
    Ok(())
}
