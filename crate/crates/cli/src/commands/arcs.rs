//! `arcs`: arc geometry for the configured scale plus a grid-coverage
//! summary at the maximal parameter ranges.

use goldbach_core::circle::{
    build_arcs, dirichlet_approx_rational, max_denominator, max_half_width, Arc, DiagnosticsConfig,
};

use crate::config::RunConfig;
use crate::output::{csv_writer, out_path, write_json};
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let family = cfg.family()?;
    let x = family.x();
    let defaults = DiagnosticsConfig::for_x(x);
    let q0 = if cfg.arcs_q0 != 0 {
        cfg.arcs_q0
    } else {
        defaults.q0.min(max_denominator(x))
    };
    let l0 = if cfg.arcs_l0 != 0 {
        cfg.arcs_l0
    } else {
        defaults.l0.min(max_half_width(x))
    };
    let arcs = build_arcs(x, q0, l0)?;

    let path = out_path(&cfg.out_dir, "arcs.csv");
    let mut writer = csv_writer(&path)?;
    writer.write_record(["c", "q", "l", "lo_num", "hi_num", "denom"])?;
    for arc in &arcs {
        let (lo, den) = arc.lo(x);
        let (hi, _) = arc.hi(x);
        writer.write_record([
            arc.c.to_string(),
            arc.q.to_string(),
            arc.l.to_string(),
            lo.to_string(),
            hi.to_string(),
            den.to_string(),
        ])?;
    }
    writer
        .flush()
        .map_err(|e| CliError::Failure(e.to_string()))?;

    // coverage at the maximal ranges, checked point by point
    let q_max = max_denominator(x);
    let l_max = max_half_width(x);
    let mut covered = 0u64;
    for a in 1..=x {
        let (c, q) = dirichlet_approx_rational(a as u128, x as u128, q_max);
        if (Arc { c, q, l: l_max }).contains_grid_point(a, x) {
            covered += 1;
        }
    }
    let summary = serde_json::json!({
        "x": x,
        "q0": q0,
        "l0": l0,
        "arc_count": arcs.len(),
        "max_q": q_max,
        "max_l": l_max,
        "covered_at_max": covered,
        "grid_points": x,
    });
    let summary_path = out_path(&cfg.out_dir, "arcs_summary.json");
    write_json(&summary_path, &summary)?;
    println!(
        "arcs: {} arcs at (q0, l0) = ({q0}, {l0}); coverage {covered}/{x} -> {}",
        arcs.len(),
        path.display()
    );
    Ok(())
}
