//! `scaling`: negligibility statistics and bound diagnostics at each
//! configured scale, one CSV row per (diagnostic, k).

use goldbach_core::circle::{
    bound_diagnostics, build_circle_stack, classify_grid, convolve, negligibility_ratio,
    DiagnosticsConfig,
};
use goldbach_core::expsum::{build_type2_depth_one, grid_eval};
use goldbach_core::primes::{sieve_primes, Factorizer};

use crate::config::RunConfig;
use crate::output::{csv_writer, out_path, write_json};
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.k_values.len() < 2 {
        return Err(CliError::Config(
            "scaling needs at least two k values".into(),
        ));
    }
    let path = out_path(&cfg.out_dir, "scaling.csv");
    let mut writer = csv_writer(&path)?;
    writer.write_record(["diagnostic", "k", "x", "lhs", "scale", "ratio"])?;
    let mut ratios_by_diag: std::collections::BTreeMap<String, Vec<(u32, f64)>> =
        Default::default();
    let record = |writer: &mut csv::Writer<std::fs::File>,
                  ratios: &mut std::collections::BTreeMap<String, Vec<(u32, f64)>>,
                  id: String,
                  k: u32,
                  x: u64,
                  lhs: f64,
                  scale: f64,
                  ratio: f64|
     -> Result<(), CliError> {
        writer.write_record([
            id.clone(),
            k.to_string(),
            x.to_string(),
            format!("{lhs:.6e}"),
            format!("{scale:.6e}"),
            format!("{ratio:.6e}"),
        ])?;
        ratios.entry(id).or_default().push((k, ratio));
        Ok(())
    };

    for &k in &cfg.k_values {
        let family = cfg.family_at(k)?;
        let x = family.x();
        let table = sieve_primes(2, 2 * family.n0)?;
        let factorizer = Factorizer::new(cfg.factor_bound.min(2 * family.n0));
        let stack = build_circle_stack(&family, &table, &factorizer)?;
        let mut diag = DiagnosticsConfig::for_x(x);
        if cfg.q0 != 0 {
            diag.q0 = cfg.q0;
        }
        if cfg.l0 != 0 {
            diag.l0 = cfg.l0;
        }
        diag.c1 = cfg.c1;
        diag.epsilon = cfg.epsilon;
        diag.a_power = cfg.a_power;
        diag.b_power = cfg.b_power;

        for row in bound_diagnostics(&stack, &diag)? {
            record(
                &mut writer,
                &mut ratios_by_diag,
                row.id.to_string(),
                k,
                x,
                row.lhs,
                row.scale,
                row.ratio,
            )?;
        }

        // decay statistic of the depth-one type-II family
        let family_sum = build_type2_depth_one(&family, None, diag.epsilon, &table);
        let grid = grid_eval(&family_sum, x)?;
        let j1 = convolve(
            &grid,
            &stack.floor_power_grid,
            &stack.small_grid,
            family.n0,
            None,
        )?;
        let j3 = convolve(
            &grid,
            &stack.floor_power_grid,
            &stack.large_grid,
            family.n0,
            None,
        )?;
        let j_abs = (j1 + j3).norm();
        let scale = family.digit_set_size() as f64 * x as f64 / (x as f64).ln();
        record(
            &mut writer,
            &mut ratios_by_diag,
            "type2-negligibility".into(),
            k,
            x,
            j_abs,
            scale,
            negligibility_ratio(j_abs, family.digit_set_size(), x),
        )?;

        // fraction of the grid inside the small-sum set
        let classification = classify_grid(
            &stack.floor_power_grid,
            diag.q0,
            diag.l0,
            family.minor_delta,
        );
        let fraction = classification.minor_fraction();
        record(
            &mut writer,
            &mut ratios_by_diag,
            "small-sum-fraction".into(),
            k,
            x,
            fraction,
            1.0,
            fraction,
        )?;
    }
    writer
        .flush()
        .map_err(|e| CliError::Failure(e.to_string()))?;

    // per-diagnostic trend across the configured scales
    let trends: serde_json::Map<String, serde_json::Value> = ratios_by_diag
        .iter()
        .map(|(id, points)| {
            let ratios: Vec<f64> = points.iter().map(|&(_, r)| r).collect();
            let first = ratios.first().copied().unwrap_or(0.0);
            let last = ratios.last().copied().unwrap_or(0.0);
            let direction = if last < first * (1.0 - 1e-9) {
                "down"
            } else if last > first * (1.0 + 1e-9) {
                "up"
            } else {
                "flat"
            };
            (
                id.clone(),
                serde_json::json!({
                    "k": points.iter().map(|&(k, _)| k).collect::<Vec<_>>(),
                    "ratio": ratios,
                    "direction": direction,
                }),
            )
        })
        .collect();
    let summary_path = out_path(&cfg.out_dir, "scaling_summary.json");
    write_json(&summary_path, &serde_json::Value::Object(trends))?;
    println!(
        "scaling: diagnostics for k = {:?} at {} (trends at {})",
        cfg.k_values,
        path.display(),
        summary_path.display()
    );
    Ok(())
}
