//! The four fixed parameter sweeps behind the standard plots.
//!
//! Parameter sets are the conventional ones for this problem family:
//! a draw-count sweep of the rate threshold at `n = 20, p = 0.3`, an
//! address-length sweep of the rate threshold at `N = 2, p = 0.2`, an
//! address-length sweep of the draw threshold at `p = 0.3`, and an erasure
//! sweep of the pruned-to-naive budget ratio at `n = 30`.  The failure
//! budgets come from the configuration (defaults 0.01).

use std::path::Path;

use strand_id_core::analysis;

use crate::config::SweepConfig;
use crate::csv::{float_field, write_table};
use crate::CliError;

/// Draw counts plotted in the budget-ratio sweep.
pub const RATIO_DRAW_GRID: [u32; 4] = [2, 5, 10, 20];

fn emit(out_dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let path = out_dir.join(name);
    write_table(&path, header, rows).map_err(|source| CliError::Io { path, source })
}

/// Writes the four figure tables.
pub fn run_figures(cfg: &SweepConfig, out_dir: &Path) -> Result<(), CliError> {
    let eps1 = cfg.eps1;
    let eps2 = cfg.eps2;

    // Rate threshold versus draw count; the curve dips to its minimum near
    // ln(2^n / eps1) draws and climbs back up.
    let rows: Vec<Vec<String>> = (2..=60u32)
        .map(|draws| {
            vec![
                "20".to_string(),
                float_field(0.3),
                float_field(eps1),
                draws.to_string(),
                float_field(analysis::beta_th(20, draws, 0.3, eps1)),
            ]
        })
        .collect();
    emit(out_dir, "beta_th_vs_draws.csv", &["n", "p", "eps1", "N", "beta_th"], &rows)?;

    // Rate threshold versus address length, with its length-free upper bound.
    let bound = analysis::beta_th_upper_bound(2, 0.2, eps1);
    let rows: Vec<Vec<String>> = (2..=40u32)
        .map(|n| {
            vec![
                n.to_string(),
                "2".to_string(),
                float_field(0.2),
                float_field(eps1),
                float_field(analysis::beta_th(n, 2, 0.2, eps1)),
                float_field(bound),
            ]
        })
        .collect();
    emit(out_dir, "beta_th_vs_n.csv", &["n", "N", "p", "eps1", "beta_th", "beta_th_bound"], &rows)?;

    // Draw threshold versus address length, with its closed-form sandwich.
    let rows: Vec<Vec<String>> = (4..=30u32)
        .map(|n| {
            let (lo, hi) = analysis::n_th_sandwich(n, 0.3, eps2);
            vec![
                n.to_string(),
                float_field(0.3),
                float_field(eps2),
                float_field(analysis::n_th(n, 0.3, eps2)),
                float_field(lo),
                float_field(hi),
            ]
        })
        .collect();
    emit(
        out_dir,
        "n_th_vs_n.csv",
        &["n", "p", "eps2", "n_th", "sandwich_lo", "sandwich_hi"],
        &rows,
    )?;

    // Pruned-to-naive comparison-budget ratio versus erasure probability.
    let mut rows = Vec::new();
    for &draws in &RATIO_DRAW_GRID {
        for k in 1..=19u32 {
            let p = f64::from(k) * 0.05;
            let u0 = analysis::u0(30, draws, p);
            let u1 = analysis::u1(30, draws, p);
            rows.push(vec![
                "30".to_string(),
                draws.to_string(),
                float_field(p),
                float_field(u0),
                float_field(u1),
                float_field(f64::from(draws) * u1 / u0),
            ]);
        }
    }
    emit(out_dir, "u1_ratio_vs_p.csv", &["n", "N", "p", "u0", "u1", "ratio"], &rows)?;

    Ok(())
}
