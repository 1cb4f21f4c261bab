//! Peeling matcher: repeatedly resolves "good" address nodes.
//!
//! A Type-A address (degree exactly `N`) claims all of its neighbor reads; a
//! Type-B address (exactly `N` degree-one neighbors) claims those good reads
//! and abandons its other edges. Peeling continues until no good address is
//! left; the run succeeds exactly when every read got matched.
//!
//! The final status and assignment are order-independent: a successful run
//! happens on a forest, where the complete matching is forced. Only the
//! Type-A/Type-B counters depend on the order in which good nodes are
//! processed.

use std::collections::VecDeque;

use rand::Rng;

use crate::graph::{IdentGraph, Node, NodeClass};
use crate::model::{Instance, MatchResult, MatchStatus};
use crate::rng::derive_rng;

/// In-progress peeling run over a mutable graph.
pub struct PeelState<'a> {
    graph: &'a mut IdentGraph,
    assignment: Vec<Option<u32>>,
    matched_count: usize,
    frontier: VecDeque<u32>,
    in_frontier: Vec<bool>,
    peels_type_a: u64,
    peels_type_b: u64,
}

impl<'a> PeelState<'a> {
    /// Starts a run: scans every address once and queues the good ones.
    pub fn new(graph: &'a mut IdentGraph) -> Self {
        let num_reads = graph.num_reads();
        let num_addresses = graph.num_addresses();
        let mut state = PeelState {
            graph,
            assignment: vec![None; num_reads],
            matched_count: 0,
            frontier: VecDeque::new(),
            in_frontier: vec![false; num_addresses],
            peels_type_a: 0,
            peels_type_b: 0,
        };
        for x in 0..num_addresses as u32 {
            state.enqueue_if_good(x);
        }
        state
    }

    pub fn graph(&self) -> &IdentGraph {
        self.graph
    }

    pub fn matched_count(&self) -> usize {
        self.matched_count
    }

    fn enqueue_if_good(&mut self, x: u32) {
        if self.in_frontier[x as usize] {
            return;
        }
        match self.graph.classify(Node::Address(x)) {
            NodeClass::TypeA | NodeClass::TypeB => {
                self.in_frontier[x as usize] = true;
                self.frontier.push_back(x);
            }
            _ => {}
        }
    }

    /// Peels one good address. Panics if the node does not currently
    /// classify as Type-A or Type-B (a contract violation).
    pub fn peel(&mut self, x: u32) {
        let class = self.graph.classify(Node::Address(x));
        let neighbors = self.graph.reads_adjacent(x);
        let mut affected: Vec<u32> = Vec::new();
        match class {
            NodeClass::TypeA => {
                debug_assert_eq!(neighbors.len(), self.graph.draws());
                for r in neighbors {
                    // every other candidate address of r loses an edge
                    self.graph.candidate_set(r).for_each_member(
                        self.graph.address_len(),
                        self.graph.enum_cutoff(),
                        |cand| {
                            if cand != x {
                                affected.push(cand);
                            }
                        },
                    );
                    self.match_read(r, x);
                    self.graph.remove_read(r);
                }
                self.peels_type_a += 1;
            }
            NodeClass::TypeB => {
                let mut claimed = 0;
                for r in neighbors {
                    if self.graph.right_degree(r) == 1 {
                        self.match_read(r, x);
                        self.graph.remove_read(r);
                        claimed += 1;
                    } else {
                        // r keeps its other candidates but may now be good,
                        // which can unlock its remaining neighbors
                        self.graph.remove_edge(x, r);
                        if self.graph.right_degree(r) == 1 {
                            if let Some(rest) =
                                self.graph.candidate_set(r).sole_member(self.graph.address_len())
                            {
                                affected.push(rest);
                            }
                        }
                    }
                }
                debug_assert_eq!(claimed, self.graph.draws());
                self.peels_type_b += 1;
            }
            _ => panic!("peel() called on a node that is not good: address {x}"),
        }
        self.graph.remove_address(x);
        for cand in affected {
            if self.graph.is_address_alive(cand) {
                self.enqueue_if_good(cand);
            }
        }
        debug_assert_eq!(
            self.matched_count + self.graph.num_alive_reads(),
            self.graph.num_reads(),
            "matched reads plus remaining reads must cover everything"
        );
    }

    fn match_read(&mut self, r: u32, x: u32) {
        debug_assert!(self.assignment[r as usize].is_none());
        self.assignment[r as usize] = Some(x);
        self.matched_count += 1;
    }

    /// Pops frontier entries until one still classifies as good; stale
    /// entries (invalidated by earlier peels) are dropped. `pick` selects
    /// the index to take, letting tests randomize the processing order.
    fn pop_next(&mut self, mut pick: impl FnMut(usize) -> usize) -> Option<u32> {
        while !self.frontier.is_empty() {
            let idx = pick(self.frontier.len());
            let x = self.frontier.swap_remove_back(idx).expect("index in range");
            self.in_frontier[x as usize] = false;
            match self.graph.classify(Node::Address(x)) {
                NodeClass::TypeA | NodeClass::TypeB => return Some(x),
                // no longer good; it re-enters the frontier if a later peel
                // touches it again
                _ => {}
            }
        }
        None
    }

    fn finish(self) -> MatchResult {
        let complete = self.matched_count == self.graph.num_reads();
        MatchResult {
            status: if complete { MatchStatus::Success } else { MatchStatus::Failure },
            assignment: complete.then(|| {
                self.assignment
                    .into_iter()
                    .map(|a| a.expect("complete matching covers every read"))
                    .collect()
            }),
            comparisons_used: 0,
            peels_type_a: self.peels_type_a,
            peels_type_b: self.peels_type_b,
            prune_rounds: 0,
            groups_resolved: 0,
        }
    }

    fn run_with(mut self, mut pick: impl FnMut(usize) -> usize) -> MatchResult {
        while let Some(x) = self.pop_next(&mut pick) {
            self.peel(x);
        }
        self.finish()
    }
}

/// Runs the peeling matcher to exhaustion (first-in-first-out processing).
pub fn run_pma(graph: &mut IdentGraph) -> MatchResult {
    PeelState::new(graph).run_with(|_| 0)
}

/// As [`run_pma`] but with a seeded random processing order. The status and
/// assignment always agree with [`run_pma`]; only the per-type peel counters
/// may differ.
pub fn run_pma_shuffled(graph: &mut IdentGraph, order_seed: u64) -> MatchResult {
    let mut rng = derive_rng(&[order_seed]);
    PeelState::new(graph).run_with(move |len| rng.gen_range(0..len))
}

/// Builds the graph of an instance and runs the peeling matcher on it.
pub fn run_pma_on_instance(instance: &Instance) -> MatchResult {
    let mut graph = IdentGraph::build(instance);
    run_pma(&mut graph)
}
