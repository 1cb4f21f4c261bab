//! Grid sweeps: closed-form threshold tables and the seeded Monte Carlo
//! harness.
//!
//! Both modes walk the cartesian product of the configured `n`, `N`, `p`,
//! and `beta` lists in that nesting order, so grid-point indices — and with
//! them every derived seed — are a pure function of the configuration.
//! Trials within a grid point run concurrently; aggregation is a
//! deterministic fold by trial index, so reruns with the same configuration
//! and seed produce byte-identical CSV output regardless of thread count.

use std::path::Path;

use rayon::prelude::*;

use strand_id_core::analysis::{self, Region};
use strand_id_core::graph::{confusability_graph, IdentGraph};
use strand_id_core::model::{
    assignment_matches_truth, generate_instance_with_payload_len, payload_len_for_rate, MatchStatus,
};
use strand_id_core::oracle::{find_faulty_reads, order_histogram};
use strand_id_core::pruner::PruneState;
use strand_id_core::rng::{derive_seed, TAG_TRIAL};

use crate::config::{validate_for_simulate, validate_for_thresholds, BetaSpec, SweepConfig};
use crate::csv::{float_field, write_table};
use crate::CliError;

/// Instances with more reads than this skip the quadratic faulty-read scan;
/// the `faulty_rate` column is then empty.
pub const FAULTY_SCAN_MAX_READS: usize = 2048;

/// Half-width multiplier for the normal-approximation confidence interval.
const CI_Z: f64 = 1.96;

/// Trial counts below this are flagged in the `low_n` column: the normal
/// approximation behind `comparison_ci` is unreliable there.
pub const LOW_TRIALS: u64 = 100;

/// One point of the sweep grid, with the payload rate already resolved.
#[derive(Debug, Clone)]
pub struct GridPoint {
    /// Position in the cartesian product (stable across reruns).
    pub index: u64,
    pub n: u32,
    pub draws: u32,
    pub p: f64,
    /// Resolved payload rate (keywords evaluated at this point).
    pub beta: f64,
    /// Payload length `ceil(beta * n)`, clamped to at least one bit.
    pub payload_len: u32,
    pub eps1: f64,
    pub eps2: f64,
}

/// Expands a configuration into its grid, resolving `beta_th` / `beta_0`
/// keywords per point.
pub fn grid_points(cfg: &SweepConfig) -> Vec<GridPoint> {
    let mut points = Vec::new();
    for &n in &cfg.n {
        for &draws in &cfg.draws {
            for &p in &cfg.p {
                for &spec in &cfg.beta {
                    let beta = match spec {
                        BetaSpec::Value(v) => v,
                        BetaSpec::Threshold => analysis::beta_th(n, draws, p, cfg.eps1),
                        BetaSpec::Pruning => analysis::beta_0(n, draws, p, cfg.eps1),
                    };
                    // A keyword can resolve to a tiny or negative rate when
                    // the threshold is trivial; the model still needs one
                    // payload bit.
                    let payload_len = payload_len_for_rate(beta.max(0.0), n as usize).max(1);
                    points.push(GridPoint {
                        index: points.len() as u64,
                        n,
                        draws,
                        p,
                        beta,
                        payload_len: payload_len as u32,
                        eps1: cfg.eps1,
                        eps2: cfg.eps2,
                    });
                }
            }
        }
    }
    points
}

/// Every closed-form quantity the tables report for one grid point.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub beta_th: f64,
    pub beta_0: f64,
    pub n_th: f64,
    pub n_0: f64,
    pub n_0_ln: f64,
    pub u_cycle: f64,
    pub cycle_lb: Option<f64>,
    pub p_faulty: f64,
    pub e_two_hop: f64,
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    pub kappa_pruned: f64,
    pub kappa_naive: f64,
    pub region: Region,
}

/// Evaluates the closed forms at a grid point.
pub fn analyze_point(pt: &GridPoint) -> PointAnalysis {
    let (kappa_pruned, kappa_naive) = analysis::kappa_bounds(pt.n, pt.p);
    PointAnalysis {
        beta_th: analysis::beta_th(pt.n, pt.draws, pt.p, pt.eps1),
        beta_0: analysis::beta_0(pt.n, pt.draws, pt.p, pt.eps1),
        n_th: analysis::n_th(pt.n, pt.p, pt.eps2),
        n_0: analysis::n_0(pt.n, pt.p),
        n_0_ln: analysis::n_0_ln(pt.n, pt.p),
        u_cycle: analysis::u_cycle(pt.n, pt.draws, pt.p),
        cycle_lb: analysis::cycle_prob_lower_bound(pt.n, pt.draws, pt.p),
        p_faulty: analysis::p_read_faulty(pt.n, pt.payload_len, pt.draws, pt.p),
        e_two_hop: analysis::expected_two_hop(pt.n, pt.draws, pt.p),
        u0: analysis::u0(pt.n, pt.draws, pt.p),
        u1: analysis::u1(pt.n, pt.draws, pt.p),
        u2: analysis::u2(pt.n, pt.draws, pt.p),
        kappa_pruned,
        kappa_naive,
        region: analysis::region_membership(pt.n, pt.draws as f64, pt.p, pt.beta, pt.eps1, pt.eps2),
    }
}

/// Raw measurements from one Monte Carlo trial.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    /// Complete matching found *and* equal to ground truth.
    pub success: bool,
    /// Payload comparisons the pruner performed.
    pub comparisons: u64,
    /// Identification graph had a cycle before any pruning (peeling alone
    /// would fail).
    pub cycle: bool,
    /// `(faulty reads, total reads)`, when the quadratic scan ran.
    pub faulty: Option<(u64, u64)>,
    /// Address-order histogram (bucket `l` = sources of order `2^l`).
    pub orders: Vec<u64>,
    /// Confusability graph connected (worst case for list repair).
    pub t_connected: bool,
}

/// Runs one seeded trial at a grid point.
pub fn run_trial(pt: &GridPoint, seed: u64) -> TrialOutcome {
    let instance = generate_instance_with_payload_len(
        pt.n as usize,
        pt.payload_len as usize,
        pt.draws as usize,
        pt.p,
        seed,
    )
    .expect("grid point validated");
    let mut graph = IdentGraph::build(&instance);
    let cycle = graph.has_cycle();
    let orders = order_histogram(&instance);
    let t_connected = confusability_graph(&instance).connected;
    let faulty = (instance.num_reads() <= FAULTY_SCAN_MAX_READS).then(|| {
        let sets = find_faulty_reads(&instance);
        (sets.reads.len() as u64, instance.num_reads() as u64)
    });
    let result = PruneState::new(&mut graph, &instance).run();
    let success = result.status == MatchStatus::Success
        && result.assignment.as_ref().is_some_and(|a| assignment_matches_truth(&instance, a));
    TrialOutcome {
        success,
        comparisons: result.comparisons_used,
        cycle,
        faulty,
        orders,
        t_connected,
    }
}

/// Aggregated statistics for one grid point.
#[derive(Debug, Clone)]
pub struct PointSummary {
    pub point: GridPoint,
    pub analysis: PointAnalysis,
    pub trials: u64,
    pub success_rate: f64,
    pub mean_comparisons: f64,
    /// Normal-approximation CI half-width for the mean; `NaN` for one trial.
    pub comparison_ci: f64,
    pub cycle_rate: f64,
    /// Fraction of reads faulty; `NaN` when the scan was skipped.
    pub faulty_rate: f64,
    /// Order histogram summed over trials.
    pub orders: Vec<u64>,
    pub t_connected_rate: f64,
    /// `mean_comparisons / (N 2^n)^2` (read-count convention).
    pub kappa_empirical: f64,
    /// `mean_comparisons / (2^n)^2` (address-count convention).
    pub kappa_addresses: f64,
    /// Trial count below [`LOW_TRIALS`].
    pub low_n: bool,
    /// Every applicable comparison budget held (`U_0` everywhere, `U_2`
    /// additionally inside `R''`).
    pub bounds_ok: bool,
}

/// Runs all trials at one grid point (concurrently) and folds the outcomes
/// in trial order.
pub fn summarize_point(pt: &GridPoint, trials: u64, base_seed: u64) -> PointSummary {
    let analysis = analyze_point(pt);
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(pt, derive_seed(&[base_seed, TAG_TRIAL, pt.index, t])))
        .collect();

    let t = trials as f64;
    let successes = outcomes.iter().filter(|o| o.success).count() as f64;
    let cycles = outcomes.iter().filter(|o| o.cycle).count() as f64;
    let connected = outcomes.iter().filter(|o| o.t_connected).count() as f64;
    let mean = outcomes.iter().map(|o| o.comparisons as f64).sum::<f64>() / t;
    let ci = if trials >= 2 {
        let var = outcomes
            .iter()
            .map(|o| {
                let d = o.comparisons as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / (t - 1.0);
        CI_Z * (var / t).sqrt()
    } else {
        f64::NAN
    };
    let (faulty_sum, read_sum) = outcomes
        .iter()
        .filter_map(|o| o.faulty)
        .fold((0u64, 0u64), |(f, r), (df, dr)| (f + df, r + dr));
    let faulty_rate = if read_sum > 0 { faulty_sum as f64 / read_sum as f64 } else { f64::NAN };
    let mut orders = vec![0u64; pt.n as usize + 1];
    for o in &outcomes {
        for (bucket, &c) in o.orders.iter().enumerate() {
            orders[bucket] += c;
        }
    }
    let scans = (pt.draws as f64) * (pt.n as f64).exp2();
    let kappa_empirical = mean / (scans * scans);
    let kappa_addresses = mean / ((pt.n as f64).exp2() * (pt.n as f64).exp2());

    let mut bounds_ok = mean <= analysis.u0;
    if analysis.region == Region::RDoublePrime {
        bounds_ok &= mean <= analysis.u2;
    }

    PointSummary {
        point: pt.clone(),
        analysis,
        trials,
        success_rate: successes / t,
        mean_comparisons: mean,
        comparison_ci: ci,
        cycle_rate: cycles / t,
        faulty_rate,
        orders,
        t_connected_rate: connected / t,
        kappa_empirical,
        kappa_addresses,
        low_n: trials < LOW_TRIALS,
        bounds_ok,
    }
}

/// Column order of `thresholds.csv`.
pub const THRESHOLDS_HEADER: [&str; 16] = [
    "n", "N", "p", "eps1", "eps2", "L", "beta_th", "beta_0", "n_th", "n_0", "u_cycle", "u0", "u1",
    "u2", "region", "n_0_ln",
];

/// Column order of `simulate.csv`.
pub const SIMULATE_HEADER: [&str; 34] = [
    "n",
    "N",
    "p",
    "beta",
    "L",
    "eps1",
    "eps2",
    "trials",
    "region",
    "beta_th",
    "beta_0",
    "n_th",
    "n_0",
    "n_0_ln",
    "u_cycle",
    "cycle_lb",
    "p_faulty",
    "e_two_hop",
    "u0",
    "u1",
    "u2",
    "kappa_pruned",
    "kappa_naive",
    "success_rate",
    "mean_comparisons",
    "comparison_ci",
    "cycle_rate",
    "faulty_rate",
    "order_histogram",
    "t_connected_rate",
    "kappa_empirical",
    "kappa_addresses",
    "low_n",
    "bounds_ok",
];

/// Writes `thresholds.csv` for the configured grid.
pub fn run_thresholds(cfg: &SweepConfig, out_dir: &Path) -> Result<(), CliError> {
    validate_for_thresholds(cfg)?;
    let rows: Vec<Vec<String>> = grid_points(cfg)
        .iter()
        .map(|pt| {
            let a = analyze_point(pt);
            vec![
                pt.n.to_string(),
                pt.draws.to_string(),
                float_field(pt.p),
                float_field(pt.eps1),
                float_field(pt.eps2),
                pt.payload_len.to_string(),
                float_field(a.beta_th),
                float_field(a.beta_0),
                float_field(a.n_th),
                float_field(a.n_0),
                float_field(a.u_cycle),
                float_field(a.u0),
                float_field(a.u1),
                float_field(a.u2),
                a.region.as_str().to_string(),
                float_field(a.n_0_ln),
            ]
        })
        .collect();
    let path = out_dir.join("thresholds.csv");
    write_table(&path, &THRESHOLDS_HEADER, &rows)
        .map_err(|source| CliError::Io { path, source })?;
    Ok(())
}

/// Runs the Monte Carlo sweep, writes `simulate.csv`, and reports whether
/// every applicable comparison budget held.
pub fn run_simulate(cfg: &SweepConfig, out_dir: &Path) -> Result<bool, CliError> {
    validate_for_simulate(cfg)?;
    let summaries: Vec<PointSummary> =
        grid_points(cfg).iter().map(|pt| summarize_point(pt, cfg.trials, cfg.base_seed)).collect();
    let rows: Vec<Vec<String>> = summaries.iter().map(summary_row).collect();
    let path = out_dir.join("simulate.csv");
    write_table(&path, &SIMULATE_HEADER, &rows).map_err(|source| CliError::Io { path, source })?;
    Ok(summaries.iter().all(|s| s.bounds_ok))
}

fn summary_row(s: &PointSummary) -> Vec<String> {
    let pt = &s.point;
    let a = &s.analysis;
    vec![
        pt.n.to_string(),
        pt.draws.to_string(),
        float_field(pt.p),
        float_field(pt.beta),
        pt.payload_len.to_string(),
        float_field(pt.eps1),
        float_field(pt.eps2),
        s.trials.to_string(),
        a.region.as_str().to_string(),
        float_field(a.beta_th),
        float_field(a.beta_0),
        float_field(a.n_th),
        float_field(a.n_0),
        float_field(a.n_0_ln),
        float_field(a.u_cycle),
        a.cycle_lb.map_or_else(String::new, float_field),
        float_field(a.p_faulty),
        float_field(a.e_two_hop),
        float_field(a.u0),
        float_field(a.u1),
        float_field(a.u2),
        float_field(a.kappa_pruned),
        float_field(a.kappa_naive),
        float_field(s.success_rate),
        float_field(s.mean_comparisons),
        float_field(s.comparison_ci),
        float_field(s.cycle_rate),
        float_field(s.faulty_rate),
        s.orders.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        float_field(s.t_connected_rate),
        float_field(s.kappa_empirical),
        float_field(s.kappa_addresses),
        if s.low_n { "1" } else { "0" }.to_string(),
        if s.bounds_ok { "1" } else { "0" }.to_string(),
    ]
}
