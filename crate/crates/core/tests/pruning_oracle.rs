//! Pruner correctness against the exhaustive oracles.

use strand_id_core::model::{
    assignment_matches_truth, generate_instance_with_payload_len, Instance, MatchStatus, Read,
};
use strand_id_core::oracle::{
    enumerate_labellings, enumerate_partitionings, find_faulty_reads, true_partitioning,
};
use strand_id_core::pruner::{run_pruning, PruneState};
use strand_id_core::word::NoisyWord;
use strand_id_core::{labelling_digraph_has_cycle, IdentGraph};

/// Builds every read combination for 2 sources, `draws` reads each, from
/// per-read (address, payload) word lists.
fn build(n: usize, l: usize, draws: usize, rows: &[(&str, &str)]) -> Instance {
    assert_eq!(rows.len(), (1 << n) * draws);
    let reads = rows
        .iter()
        .enumerate()
        .map(|(i, (a, p))| {
            Read::new(
                i as u32,
                a.parse::<NoisyWord>().unwrap(),
                p.parse::<NoisyWord>().unwrap(),
                (i / draws) as u32,
            )
        })
        .collect();
    Instance::from_parts(n, l, draws, 0.5, 0, reads).unwrap()
}

#[test]
fn no_faulty_reads_and_unique_labelling_mean_pruning_recovers_the_truth() {
    // Both halves of the uniqueness story are required. Without faulty
    // reads every payload comparison separates sources perfectly, so the
    // partitioning is forced; the labelling is forced iff the auxiliary
    // digraph is acyclic. Together they leave exactly one explanation and
    // the pruner must find it. (Dropping the acyclicity condition admits
    // counterexamples: two strands erasing the same address bit in every
    // read can swap addresses.)
    let mut checked = 0;
    for seed in 0..200 {
        let inst = generate_instance_with_payload_len(2, 8, 2, 0.15, seed).unwrap();
        if !find_faulty_reads(&inst).is_empty() || labelling_digraph_has_cycle(&inst) {
            continue;
        }
        checked += 1;
        let result = run_pruning(&inst);
        assert_eq!(result.status, MatchStatus::Success, "seed {seed}");
        assert!(
            assignment_matches_truth(&inst, result.assignment.as_ref().unwrap()),
            "seed {seed}"
        );
    }
    assert!(checked >= 40, "only {checked} eligible instances; tune parameters");
}

#[test]
fn resolved_groups_come_from_the_true_partitioning_when_no_read_is_faulty() {
    for seed in 0..120 {
        let inst = generate_instance_with_payload_len(3, 4, 3, 0.3, 500 + seed).unwrap();
        let faulty = find_faulty_reads(&inst);
        if !faulty.is_empty() {
            continue;
        }
        let truth = true_partitioning(&inst);
        let mut graph = IdentGraph::build(&inst);
        let mut state = PruneState::new(&mut graph, &inst);
        while let Some(read) = state.select_next() {
            state.prune(read);
        }
        for group in state.resolved_groups() {
            assert!(
                truth.contains(group),
                "seed {seed}: resolved group {group:?} is not a true group"
            );
        }
    }
}

#[test]
fn comparisons_never_exceed_the_initial_two_hop_total() {
    for seed in 0..60 {
        let inst = generate_instance_with_payload_len(3, 2, 2, 0.45, 900 + seed).unwrap();
        let graph = IdentGraph::build(&inst);
        let budget: u64 = (0..inst.num_reads() as u32).map(|r| graph.two_hop(r).len() as u64).sum();
        let result = run_pruning(&inst);
        assert!(
            result.comparisons_used <= budget,
            "seed {seed}: {} comparisons > budget {budget}",
            result.comparisons_used
        );
    }
}

#[test]
fn unique_partitioning_and_labelling_force_success_on_crafted_cases() {
    // a case with erasures but a unique explanation: pruning must find it
    let inst = build(1, 1, 2, &[("*", "0"), ("0", "0"), ("1", "1"), ("*", "1")]);
    let parts = enumerate_partitionings(&inst).unwrap();
    assert_eq!(parts.count(), 1);
    let labels = enumerate_labellings(&inst, &parts.partitionings[0]).unwrap();
    assert_eq!(labels.len(), 1);
    let result = run_pruning(&inst);
    assert_eq!(result.status, MatchStatus::Success);
    assert!(assignment_matches_truth(&inst, result.assignment.as_ref().unwrap()));

    // by contrast, indistinguishable reads leave several partitionings and
    // pruning cannot settle on one
    let stuck = build(1, 1, 2, &[("*", "0"), ("*", "0"), ("*", "0"), ("*", "0")]);
    assert!(enumerate_partitionings(&stuck).unwrap().count() > 1);
    assert_eq!(run_pruning(&stuck).status, MatchStatus::Failure);
}

#[test]
fn pruning_handles_single_draw_instances() {
    // N = 1: groups are singletons, resolved when a read has no unresolved
    // two-hop neighbors left
    for seed in 0..50 {
        let inst = generate_instance_with_payload_len(2, 4, 1, 0.3, 2000 + seed).unwrap();
        let result = run_pruning(&inst);
        if result.status == MatchStatus::Success {
            assert!(assignment_matches_truth(&inst, result.assignment.as_ref().unwrap()));
        }
    }
}
