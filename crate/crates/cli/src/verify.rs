//! Exhaustive oracle-scale self-checks (the `verify` subcommand).
//!
//! Each suite sweeps every pattern of a tiny instance family — or a
//! deterministic slice where the full family is covered by the slower
//! acceptance suite — and checks an exact equivalence between a fast
//! algorithm and a brute-force definition.  One `PASS`/`FAIL` line prints
//! per suite; the summary is also written to `verify.csv`.

use std::path::Path;

use rayon::prelude::*;

use strand_id_core::graph::{labelling_digraph_has_cycle, IdentGraph};
use strand_id_core::model::{assignment_matches_truth, Instance, MatchStatus};
use strand_id_core::oracle::{enumerate_labellings, enumerate_partitionings, true_partitioning};
use strand_id_core::pma::run_pma;
use strand_id_core::pruner::run_pruning;

use crate::csv::write_table;
use crate::exhaustive::{
    brute_force_partitionings, decode_joint, joint_cardinality, patterned_instance,
    payload_mask_families, payload_value_families,
};
use crate::CliError;

/// `(n, draws)` shapes whose address-pattern space is fully enumerable.
pub const SHAPES: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

/// Result of one self-check suite.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Builds the instance for one packed address pattern, with clean payloads
/// as distinct as `payload_len` allows.
fn address_pattern_instance(n: usize, draws: usize, joint: u64) -> Instance {
    let reads = (1usize << n) * draws;
    let masks = decode_joint(joint, reads, n);
    let values: Vec<u32> = (0..1u32 << n).collect();
    patterned_instance(n, n, draws, &masks, &values, &vec![0; reads])
}

/// An acyclic identification graph guarantees peeling success, and any
/// successful assignment is the truth.  All address patterns of every shape.
///
/// Only these two directions are sound.  The converse — success only without
/// cycles — fails on full-address-space multi-draw instances: an address
/// adjacent to exactly `N` reads is forced as a block, which unwinds cycles
/// running through parallel near-duplicate reads (e.g. two reads of one
/// source erasing the same bit).  The acceptance suite enumerates those
/// counterexamples.
pub fn suite_peeling_implications() -> SuiteOutcome {
    let mut cases = 0;
    let mut failures = 0;
    for &(n, draws) in &SHAPES {
        let reads = (1usize << n) * draws;
        let total = joint_cardinality(reads, n);
        cases += total;
        failures += (0..total)
            .into_par_iter()
            .map(|joint| {
                let instance = address_pattern_instance(n, draws, joint);
                let mut graph = IdentGraph::build(&instance);
                let cyclic = graph.has_cycle();
                let result = run_pma(&mut graph);
                let succeeded = result.status == MatchStatus::Success;
                let ok = (cyclic || succeeded)
                    && (!succeeded
                        || result
                            .assignment
                            .as_ref()
                            .is_some_and(|a| assignment_matches_truth(&instance, a)));
                u64::from(!ok)
            })
            .sum::<u64>();
    }
    SuiteOutcome { name: "acyclic_implies_peeling_success_and_truth", cases, failures }
}

/// The true partitioning admits exactly one labelling exactly when the
/// labelling digraph is acyclic.  All address patterns of every shape
/// (labellings do not read payloads).
pub fn suite_labelling_unique_iff_digraph_acyclic() -> SuiteOutcome {
    let mut cases = 0;
    let mut failures = 0;
    for &(n, draws) in &SHAPES {
        let reads = (1usize << n) * draws;
        let total = joint_cardinality(reads, n);
        cases += total;
        failures += (0..total)
            .into_par_iter()
            .map(|joint| {
                let instance = address_pattern_instance(n, draws, joint);
                let p_star = true_partitioning(&instance);
                let labellings =
                    enumerate_labellings(&instance, &p_star).expect("oracle-scale instance");
                let unique = labellings.len() == 1;
                u64::from(unique != !labelling_digraph_has_cycle(&instance))
            })
            .sum::<u64>();
    }
    SuiteOutcome { name: "labelling_unique_iff_digraph_acyclic", cases, failures }
}

/// The partitioning oracle equals an independent brute-force enumeration.
/// Full joint for the two-draw single-bit shape; for the largest shape a
/// deterministic slice of address patterns (the acceptance suite covers the
/// rest) crossed with every canonical payload family.
pub fn suite_partitionings_match_brute_force() -> SuiteOutcome {
    let mut cases = 0;
    let mut failures = 0;
    for &(n, draws) in &[(1usize, 2usize), (2, 2)] {
        let reads = (1usize << n) * draws;
        let total = joint_cardinality(reads, n);
        let slice: Vec<u64> = if total <= 1 << 8 {
            (0..total).collect()
        } else {
            // all patterns with few erasures, the fully erased pattern, and
            // a fixed-stride sample across the rest
            let bits = (reads * n) as u32;
            (0..total)
                .filter(|&j| j.count_ones() <= 2 || j == total - 1 || j % 97 == 0)
                .take(1 << bits.min(12))
                .collect()
        };
        let value_families = payload_value_families(n, n);
        let mask_families = payload_mask_families(n, n, draws);
        let (nv, nm) = (value_families.len(), mask_families.len());
        let combos: Vec<(u64, usize, usize)> = slice
            .iter()
            .flat_map(|&j| (0..nv).flat_map(move |v| (0..nm).map(move |m| (j, v, m))))
            .collect();
        cases += combos.len() as u64;
        failures += combos
            .par_iter()
            .map(|&(joint, v, m)| {
                let masks = decode_joint(joint, reads, n);
                let instance =
                    patterned_instance(n, n, draws, &masks, &value_families[v], &mask_families[m]);
                let mut oracle = enumerate_partitionings(&instance)
                    .expect("oracle-scale instance")
                    .partitionings;
                let mut brute = brute_force_partitionings(&instance);
                oracle.sort();
                brute.sort();
                u64::from(oracle != brute)
            })
            .sum::<u64>();
    }
    SuiteOutcome { name: "partitionings_match_brute_force", cases, failures }
}

/// When an instance admits exactly one partitioning and one labelling, the
/// pruning pipeline recovers the ground truth.  All address patterns of the
/// largest shape with clean distinct payloads.
pub fn suite_unique_explanations_force_pruning_truth() -> SuiteOutcome {
    let (n, draws) = (2usize, 2usize);
    let reads = (1usize << n) * draws;
    let total = joint_cardinality(reads, n);
    let failures = (0..total)
        .into_par_iter()
        .map(|joint| {
            let instance = address_pattern_instance(n, draws, joint);
            let partitionings = enumerate_partitionings(&instance).expect("oracle-scale");
            let p_star = true_partitioning(&instance);
            let labellings = enumerate_labellings(&instance, &p_star).expect("oracle-scale");
            if partitionings.count() != 1 || labellings.len() != 1 {
                return 0;
            }
            let result = run_pruning(&instance);
            let ok = result.status == MatchStatus::Success
                && result
                    .assignment
                    .as_ref()
                    .is_some_and(|a| assignment_matches_truth(&instance, a));
            u64::from(!ok)
        })
        .sum::<u64>();
    SuiteOutcome { name: "unique_explanations_force_pruning_truth", cases: total, failures }
}

/// Runs every suite, prints one line each, writes `verify.csv`, and returns
/// whether everything passed.
pub fn run_verify(out_dir: &Path) -> Result<bool, CliError> {
    let suites = [
        suite_peeling_implications(),
        suite_labelling_unique_iff_digraph_acyclic(),
        suite_partitionings_match_brute_force(),
        suite_unique_explanations_force_pruning_truth(),
    ];
    let mut rows = Vec::new();
    for s in &suites {
        if s.passed() {
            println!("PASS {} ({} cases)", s.name, s.cases);
        } else {
            println!("FAIL {} ({} of {} cases)", s.name, s.failures, s.cases);
        }
        rows.push(vec![
            s.name.to_string(),
            s.cases.to_string(),
            s.failures.to_string(),
            if s.passed() { "pass" } else { "fail" }.to_string(),
        ]);
    }
    let path = out_dir.join("verify.csv");
    write_table(&path, &["suite", "cases", "failures", "status"], &rows)
        .map_err(|source| CliError::Io { path, source })?;
    Ok(suites.iter().all(SuiteOutcome::passed))
}
