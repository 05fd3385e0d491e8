//! `expsum`: export one exponential-sum grid as (a, Re, Im) rows.

use goldbach_core::expsum::{
    build_digit_prime_sum, build_digit_sum, build_divisor_split_sums, build_floor_power_sum,
    grid_eval,
};
use goldbach_core::primes::{sieve_primes, Factorizer};

use crate::config::RunConfig;
use crate::output::{csv_writer, out_path};
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let family = cfg.family()?;
    let x = family.x();
    let table = sieve_primes(2, 4 * x)?;
    let factorizer = Factorizer::new(cfg.factor_bound.min(4 * x));

    let support = match cfg.expsum_grid.as_str() {
        "digit" => build_digit_sum(&family, None),
        "digit_primes" => build_digit_prime_sum(&family, None, &table),
        "floor_power" => build_floor_power_sum(&family, &table),
        "quad_small" => build_divisor_split_sums(&family, &table, &factorizer)?.small,
        "quad_mid" => build_divisor_split_sums(&family, &table, &factorizer)?.mid,
        "quad_large" => build_divisor_split_sums(&family, &table, &factorizer)?.large,
        other => {
            return Err(CliError::Config(format!(
                "unknown grid {other:?}; expected digit, digit_primes, floor_power, quad_small, quad_mid or quad_large"
            )))
        }
    };
    let grid = grid_eval(&support, x)?;

    let name = format!("expsum_{}.csv", cfg.expsum_grid);
    let path = out_path(&cfg.out_dir, &name);
    let mut writer = csv_writer(&path)?;
    writer.write_record(["a", "re", "im"])?;
    for a in 1..=x {
        let v = grid.at(a);
        writer.write_record([
            a.to_string(),
            format!("{:.9e}", v.re),
            format!("{:.9e}", v.im),
        ])?;
    }
    writer
        .flush()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    println!(
        "expsum: {} grid over {} points (support {}) -> {}",
        cfg.expsum_grid,
        x,
        support.len(),
        path.display()
    );
    Ok(())
}
