//! `primes`: sieve the configured range into the bit-packed cache.
//!
//! An existing cache is validated instead of overwritten, so repeated runs are
//! idempotent and a corrupted file surfaces as an error rather than being
//! silently replaced.

use goldbach_core::primes::sieve_primes;

use crate::cache::{load_cache, write_cache};
use crate::config::RunConfig;
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let path = cfg.out_dir.join(&cfg.cache_path);
    if path.exists() {
        let table = load_cache(&path)?;
        if (table.lo, table.hi) != (cfg.primes_lo, cfg.primes_hi) {
            return Err(CliError::Failure(format!(
                "cache {} covers [{}, {}), config wants [{}, {})",
                path.display(),
                table.lo,
                table.hi,
                cfg.primes_lo,
                cfg.primes_hi
            )));
        }
        println!(
            "cache {} valid: [{}, {}) holds {} primes",
            path.display(),
            table.lo,
            table.hi,
            table.count()
        );
        return Ok(());
    }

    let table = sieve_primes(cfg.primes_lo, cfg.primes_hi)?;
    write_cache(&path, &table)?;
    let reloaded = load_cache(&path)?;
    if reloaded.count() != table.count() {
        return Err(CliError::Failure(
            "cache round-trip altered the bitmap".into(),
        ));
    }
    println!(
        "cache {} written: [{}, {}) holds {} primes",
        path.display(),
        table.lo,
        table.hi,
        table.count()
    );
    Ok(())
}
