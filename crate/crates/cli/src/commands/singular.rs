//! `singular`: singular series and its character-twisted refinement for each
//! configured target.

use goldbach_core::arithmetic::{singular_series, singular_series_star};

use crate::config::RunConfig;
use crate::output::{csv_writer, out_path};
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let path = out_path(&cfg.out_dir, "singular.csv");
    let mut writer = csv_writer(&path)?;
    writer.write_record([
        "n0",
        "series",
        "series_bound",
        "star",
        "star_bound",
        "error",
    ])?;
    for &n0 in &cfg.singular_targets {
        match (
            singular_series(n0, cfg.singular_cutoff),
            singular_series_star(n0, cfg.singular_cutoff),
        ) {
            (Ok(series), Ok(star)) => writer.write_record([
                n0.to_string(),
                format!("{:.12}", series.value),
                format!("{:.3e}", series.truncation_bound),
                format!("{:.12}", star.value),
                format!("{:.3e}", star.truncation_bound),
                String::new(),
            ])?,
            (Err(e), _) | (_, Err(e)) => writer.write_record([
                n0.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                e.to_string(),
            ])?,
        }
    }
    writer
        .flush()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    println!(
        "singular: {} targets at cutoff {} -> {}",
        cfg.singular_targets.len(),
        cfg.singular_cutoff,
        path.display()
    );
    Ok(())
}
