//! Identification of multi-draw reads over a binary erasure channel.
//!
//! A pool of `2^n` strands, each carrying its `n`-bit address and an
//! `L`-bit payload, is sampled `N` times per strand; every read arrives
//! with independent bit erasures. The library reconstructs which reads
//! belong to which address:
//!
//! - [`model`] — instances: strands, noisy reads, seeded generation;
//! - [`word`] / [`channel`] — bit vectors, erasures, agreement tests;
//! - [`graph`] — the address/read identification graph, node classes,
//!   cycle detection, and the auxiliary uniqueness graphs;
//! - [`pma`] — the peeling matcher (no payload inspection);
//! - [`pruner`] — data-driven pruning that spends payload comparisons to
//!   thin the graph before peeling, with exact comparison accounting;
//! - [`analysis`] — closed-form success probabilities and comparison
//!   budgets for choosing `n`, `N`, and the payload rate;
//! - [`oracle`] — exhaustive ground-truth engines for tiny instances;
//! - [`rng`] — keyed seed derivation behind all of the above.
//!
//! Everything randomized is reproducible: instances are pure functions of
//! `(parameters, seed)`.

pub mod analysis;
pub mod channel;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod pma;
pub mod pruner;
pub mod rng;
pub mod word;

pub use channel::{compatible, consistent_with_codeword, reads_compatible, ChannelParams};
pub use graph::{
    confusability_graph, labelling_digraph_has_cycle, CandidateSet, ConfusabilityGraph, IdentGraph,
    Node, NodeClass,
};
pub use model::{
    assignment_matches_truth, generate_instance, generate_instance_with_payload_len,
    payload_len_for_rate, Instance, MatchResult, MatchStatus, Read, Strand,
};
pub use pma::{run_pma, run_pma_on_instance, run_pma_shuffled, PeelState};
pub use pruner::{run_pruning, PruneState};
pub use word::{BitWord, NoisyWord};
