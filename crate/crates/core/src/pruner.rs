//! Data-driven pruning: payload comparisons thin the graph before peeling.
//!
//! The pruner repeatedly selects the unpruned read with the smallest two-hop
//! neighborhood (ties broken toward the lowest read id) and compares its
//! payload against every candidate in that neighborhood — each test counts
//! as one comparison. When exactly `N - 1` candidates agree, the selected
//! read and its matches form a group from one strand: every member's
//! candidate set is restricted to the intersection of all members' sets.
//! Once every read has been pruned, the peeling matcher finishes the job on
//! the thinned graph.
//!
//! A selection that fails to resolve (too few or too many agreeing
//! candidates, e.g. due to look-alike reads from other strands) still marks
//! the read as pruned; it is never re-selected, but it stays comparable so a
//! sibling's later selection can sweep it into the right group.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::channel::reads_compatible;
use crate::graph::{CandidateSet, IdentGraph};
use crate::model::{Instance, MatchResult};
use crate::pma;

/// In-progress pruning run.
pub struct PruneState<'a> {
    graph: &'a mut IdentGraph,
    instance: &'a Instance,
    pruned: Vec<bool>,
    resolved: Vec<bool>,
    pruned_count: usize,
    /// Exact current two-hop sizes, kept in lockstep with the graph.
    sizes: Vec<u32>,
    /// Lazy min-heap of (size, read). Every size change pushes a fresh
    /// entry, so the entry carrying a read's current size is always present
    /// and stale entries can simply be skipped: the pop is an exact argmin.
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    comparisons: u64,
    prune_rounds: u64,
    resolved_groups: Vec<Vec<u32>>,
}

impl<'a> PruneState<'a> {
    /// Prepares a run: computes all two-hop sizes (one pass over read
    /// pairs; the address-compatibility tests here are free prefilters, not
    /// data comparisons).
    pub fn new(graph: &'a mut IdentGraph, instance: &'a Instance) -> Self {
        let num_reads = graph.num_reads();
        assert_eq!(num_reads, instance.num_reads(), "graph and instance disagree");
        let mut sizes = vec![0u32; num_reads];
        for a in 0..num_reads {
            for b in (a + 1)..num_reads {
                if graph.candidate_set(a as u32).intersects(graph.candidate_set(b as u32)) {
                    sizes[a] += 1;
                    sizes[b] += 1;
                }
            }
        }
        let heap = (0..num_reads as u32).map(|r| Reverse((sizes[r as usize], r))).collect();
        PruneState {
            graph,
            instance,
            pruned: vec![false; num_reads],
            resolved: vec![false; num_reads],
            pruned_count: 0,
            sizes,
            heap,
            comparisons: 0,
            prune_rounds: 0,
            resolved_groups: Vec::new(),
        }
    }

    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    pub fn pruned_count(&self) -> usize {
        self.pruned_count
    }

    pub fn is_pruned(&self, read: u32) -> bool {
        self.pruned[read as usize]
    }

    pub fn is_resolved(&self, read: u32) -> bool {
        self.resolved[read as usize]
    }

    pub fn graph(&self) -> &IdentGraph {
        self.graph
    }

    /// Groups resolved so far, each sorted by read id.
    pub fn resolved_groups(&self) -> &[Vec<u32>] {
        &self.resolved_groups
    }

    /// Current two-hop size of a read (exact).
    pub fn two_hop_size(&self, read: u32) -> usize {
        self.sizes[read as usize] as usize
    }

    /// The unpruned read with minimum two-hop size (lowest id on ties), or
    /// `None` when everything has been pruned.
    pub fn select_next(&mut self) -> Option<u32> {
        while let Some(&Reverse((size, read))) = self.heap.peek() {
            if self.pruned[read as usize] || size != self.sizes[read as usize] {
                self.heap.pop(); // stale entry
                continue;
            }
            return Some(read);
        }
        debug_assert_eq!(self.pruned_count, self.graph.num_reads());
        None
    }

    /// Prunes one read (which must not have been pruned before): compares
    /// its payload against every unresolved read sharing a candidate
    /// address, and on exactly `N - 1` agreements resolves the group.
    pub fn prune(&mut self, read: u32) {
        assert!(!self.pruned[read as usize], "read {read} was already pruned");
        self.prune_rounds += 1;
        self.pruned[read as usize] = true;
        self.pruned_count += 1;

        let me = self.graph.candidate_set(read);
        let reads = self.instance.reads();
        let mut group = vec![read];
        for other in 0..self.graph.num_reads() as u32 {
            if other == read
                || self.resolved[other as usize]
                || !me.intersects(self.graph.candidate_set(other))
            {
                continue;
            }
            // one payload comparison per candidate, hit or miss
            self.comparisons += 1;
            if reads_compatible(&reads[read as usize], &reads[other as usize]) {
                group.push(other);
            }
        }
        if group.len() == self.graph.draws() {
            self.resolve_group(&group);
        }
    }

    /// Restricts every group member to the intersection of the members'
    /// candidate sets and updates the affected two-hop sizes.
    fn resolve_group(&mut self, group: &[u32]) {
        let old: Vec<CandidateSet> =
            group.iter().map(|&m| self.graph.candidate_set(m).clone()).collect();
        let mut common = old[0].clone();
        for set in &old[1..] {
            common = common.intersect(set);
        }
        for &m in group {
            self.graph.restrict_read(m, common.clone());
            if !self.pruned[m as usize] {
                self.pruned[m as usize] = true;
                self.pruned_count += 1;
            }
            self.resolved[m as usize] = true;
        }
        let mut sorted = group.to_vec();
        sorted.sort_unstable();
        self.resolved_groups.push(sorted);

        // The members' sets shrank from `old[i]` to `common`; any read that
        // intersected an old set but misses `common` loses that neighbor.
        // (A read intersecting `common` intersected every old set already,
        // so sizes never grow.) Only unpruned reads can still be selected,
        // so only their sizes need to stay exact — but we also refresh the
        // members so invariants hold everywhere.
        for u in 0..self.graph.num_reads() as u32 {
            if group.contains(&u) {
                continue;
            }
            let cand = self.graph.candidate_set(u);
            let before = old.iter().filter(|o| cand.intersects(o)).count() as u32;
            if before == 0 {
                continue;
            }
            let after = if cand.intersects(&common) { group.len() as u32 } else { 0 };
            if after != before {
                self.sizes[u as usize] = self.sizes[u as usize] + after - before;
                if !self.pruned[u as usize] {
                    self.heap.push(Reverse((self.sizes[u as usize], u)));
                }
            }
        }
        // group members count each other and everyone intersecting `common`
        for &m in group {
            let me = self.graph.candidate_set(m);
            let size = (0..self.graph.num_reads() as u32)
                .filter(|&r| r != m && me.intersects(self.graph.candidate_set(r)))
                .count() as u32;
            self.sizes[m as usize] = size;
        }
    }

    /// Runs the selection loop to exhaustion, then peels.
    pub fn run(self) -> MatchResult {
        let mut state = self;
        while let Some(read) = state.select_next() {
            state.prune(read);
        }
        let comparisons = state.comparisons;
        let prune_rounds = state.prune_rounds;
        let groups_resolved = state.resolved_groups.len() as u64;
        let graph = state.graph;
        let mut result = pma::run_pma(graph);
        result.comparisons_used = comparisons;
        result.prune_rounds = prune_rounds;
        result.groups_resolved = groups_resolved;
        result
    }
}

/// Full pipeline: build the graph, prune with payload comparisons, peel.
pub fn run_pruning(instance: &Instance) -> MatchResult {
    let mut graph = IdentGraph::build(instance);
    PruneState::new(&mut graph, instance).run()
}
