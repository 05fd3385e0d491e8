//! `buchstab`: tabulate the Buchstab function on [1, u_max].

use goldbach_core::buchstab::buchstab_omega;

use crate::config::RunConfig;
use crate::output::{csv_writer, out_path};
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let table = buchstab_omega(cfg.u_max, cfg.step)?;
    let path = out_path(&cfg.out_dir, "buchstab.csv");
    let mut writer = csv_writer(&path)?;
    writer.write_record(["u", "omega"])?;
    // sample the table at a plot-friendly stride
    let stride = ((cfg.u_max - 1.0) / 2_000.0).max(cfg.step);
    let mut u = 1.0f64;
    while u <= cfg.u_max + 1e-12 {
        writer.write_record([
            format!("{u:.6}"),
            format!("{:.12}", table.eval(u.min(table.u_max))),
        ])?;
        u += stride;
    }
    writer
        .flush()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    println!(
        "buchstab: omega on [1, {}] at step {} -> {} (omega({}) = {:.6})",
        cfg.u_max,
        cfg.step,
        path.display(),
        cfg.u_max,
        table.eval(table.u_max)
    );
    Ok(())
}
