//! Problem instances: addressed strands, their noisy reads, and match results.
//!
//! An instance fixes an address length `n` (every one of the `2^n` addresses
//! is used by exactly one strand), a payload length `L`, a draw count `N`,
//! and an erasure probability `p`. Each strand's address/payload pair is sent
//! through the erasure channel `N` times, and the resulting `N * 2^n` reads
//! are shuffled. Identification algorithms must reconstruct which address
//! produced each read.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::channel::transmit;
use crate::rng::{derive_rng, TAG_PAYLOAD, TAG_READ, TAG_SHUFFLE};
use crate::word::{BitWord, NoisyWord};

/// Addresses index the full space `{0,1}^n`, so `n` is capped to keep
/// `2^n` enumerable.
pub const MAX_ADDRESS_BITS: usize = 30;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("address length {0} exceeds the supported maximum of {MAX_ADDRESS_BITS} bits")]
    AddressSpaceTooLarge(usize),
    #[error("address length must be at least 1")]
    EmptyAddressSpace,
    #[error("erasure probability {0} must lie strictly inside (0, 1)")]
    BadErasureProb(f64),
    #[error("payload rate must be positive, got {0}")]
    BadPayloadRate(f64),
    #[error("draw count must be at least 1")]
    NoDraws,
    #[error("instance would materialize {0} reads, which exceeds the supported maximum")]
    TooManyReads(u64),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// A source strand: its address and the payload stored under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub source_index: u32,
    pub address: BitWord,
    pub payload: BitWord,
}

/// One noisy read: channel observations of a strand's address and payload.
///
/// The originating strand is ground truth. It travels with the read for
/// evaluation purposes only and is deliberately kept out of the public field
/// set; identification code must never consult it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Read {
    pub read_id: u32,
    pub noisy_address: NoisyWord,
    pub noisy_payload: NoisyWord,
    true_source: u32,
}

impl Read {
    pub fn new(
        read_id: u32,
        noisy_address: NoisyWord,
        noisy_payload: NoisyWord,
        true_source: u32,
    ) -> Self {
        Read { read_id, noisy_address, noisy_payload, true_source }
    }

    /// Ground-truth accessor for evaluation and oracles only.
    pub fn ground_truth_source(&self) -> u32 {
        self.true_source
    }
}

/// A generated (or hand-built) identification problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    address_len: usize,
    payload_len: usize,
    draws: usize,
    erasure_prob: f64,
    seed: u64,
    reads: Vec<Read>,
}

/// Snaps `beta * n` to the nearest integer when it is within floating-point
/// slop of one, then rounds up. Keeps `L = ceil(beta * n)` faithful for
/// rational rates like `2.0` that would otherwise round up spuriously.
pub fn payload_len_for_rate(beta: f64, address_len: usize) -> usize {
    let x = beta * address_len as f64;
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}

/// Draws an instance at rate `beta` (payload length `L = ceil(beta * n)`).
///
/// Generation is deterministic in `seed`: each strand's payload and each
/// read's channel noise come from generators derived from
/// `(seed, role, strand, draw)`, and the final read order is a seed-derived
/// shuffle so that read order carries no information about the sources.
pub fn generate_instance(
    address_len: usize,
    beta: f64,
    draws: usize,
    erasure_prob: f64,
    seed: u64,
) -> Result<Instance, ModelError> {
    if !(erasure_prob > 0.0 && erasure_prob < 1.0) {
        return Err(ModelError::BadErasureProb(erasure_prob));
    }
    if beta <= 0.0 || beta.is_nan() {
        return Err(ModelError::BadPayloadRate(beta));
    }
    let payload_len = payload_len_for_rate(beta, address_len);
    generate_instance_with_payload_len(address_len, payload_len, draws, erasure_prob, seed)
}

/// As [`generate_instance`], but with the payload length given directly.
pub fn generate_instance_with_payload_len(
    address_len: usize,
    payload_len: usize,
    draws: usize,
    erasure_prob: f64,
    seed: u64,
) -> Result<Instance, ModelError> {
    if address_len == 0 {
        return Err(ModelError::EmptyAddressSpace);
    }
    if address_len > MAX_ADDRESS_BITS {
        return Err(ModelError::AddressSpaceTooLarge(address_len));
    }
    if !(erasure_prob > 0.0 && erasure_prob < 1.0) {
        return Err(ModelError::BadErasureProb(erasure_prob));
    }
    if payload_len == 0 {
        return Err(ModelError::BadPayloadRate(0.0));
    }
    if draws == 0 {
        return Err(ModelError::NoDraws);
    }
    let num_strands = 1u64 << address_len;
    let total_reads = num_strands * draws as u64;
    if total_reads > u32::MAX as u64 {
        return Err(ModelError::TooManyReads(total_reads));
    }

    let mut reads = Vec::with_capacity(total_reads as usize);
    for source in 0..num_strands as u32 {
        let strand = make_strand(source, address_len, payload_len, seed);
        for draw in 0..draws as u64 {
            let mut rng = derive_rng(&[seed, TAG_READ, source as u64, draw]);
            let noisy_address = transmit(&strand.address, erasure_prob, &mut rng);
            let noisy_payload = transmit(&strand.payload, erasure_prob, &mut rng);
            reads.push(Read::new(0, noisy_address, noisy_payload, source));
        }
    }
    let mut shuffle_rng = derive_rng(&[seed, TAG_SHUFFLE]);
    reads.shuffle(&mut shuffle_rng);
    for (id, read) in reads.iter_mut().enumerate() {
        read.read_id = id as u32;
    }

    Ok(Instance { address_len, payload_len, draws, erasure_prob, seed, reads })
}

fn make_strand(source: u32, address_len: usize, payload_len: usize, seed: u64) -> Strand {
    let mut rng = derive_rng(&[seed, TAG_PAYLOAD, source as u64]);
    let mut payload = BitWord::zero(payload_len);
    for pos in 0..payload_len {
        payload.set_bit(pos, rng.gen::<bool>());
    }
    Strand {
        source_index: source,
        address: BitWord::from_index(source as u64, address_len),
        payload,
    }
}

impl Instance {
    /// Builds an instance from explicit reads (tests, replay, hand-built
    /// topologies). Validates the multi-draw shape: dense read ids in storage
    /// order, uniform word lengths, and exactly `draws` reads per source.
    pub fn from_parts(
        address_len: usize,
        payload_len: usize,
        draws: usize,
        erasure_prob: f64,
        seed: u64,
        reads: Vec<Read>,
    ) -> Result<Instance, ModelError> {
        if address_len == 0 {
            return Err(ModelError::EmptyAddressSpace);
        }
        if address_len > MAX_ADDRESS_BITS {
            return Err(ModelError::AddressSpaceTooLarge(address_len));
        }
        if draws == 0 {
            return Err(ModelError::NoDraws);
        }
        let num_strands = 1usize << address_len;
        if reads.len() != num_strands * draws {
            return Err(ModelError::Invalid(format!(
                "expected {} reads ({} sources x {} draws), got {}",
                num_strands * draws,
                num_strands,
                draws,
                reads.len()
            )));
        }
        let mut per_source = vec![0usize; num_strands];
        for (i, read) in reads.iter().enumerate() {
            if read.read_id as usize != i {
                return Err(ModelError::Invalid(format!(
                    "read at position {i} has read_id {}",
                    read.read_id
                )));
            }
            if read.noisy_address.len() != address_len || read.noisy_payload.len() != payload_len {
                return Err(ModelError::Invalid(format!("read {i} has mismatched word lengths")));
            }
            let src = read.true_source as usize;
            if src >= num_strands {
                return Err(ModelError::Invalid(format!(
                    "read {i} names source {src} outside the address space"
                )));
            }
            per_source[src] += 1;
        }
        if let Some(src) = per_source.iter().position(|&c| c != draws) {
            return Err(ModelError::Invalid(format!(
                "source {src} has {} reads, expected {draws}",
                per_source[src]
            )));
        }
        Ok(Instance { address_len, payload_len, draws, erasure_prob, seed, reads })
    }

    pub fn address_len(&self) -> usize {
        self.address_len
    }

    pub fn payload_len(&self) -> usize {
        self.payload_len
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn erasure_prob(&self) -> f64 {
        self.erasure_prob
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn num_strands(&self) -> usize {
        1usize << self.address_len
    }

    pub fn num_reads(&self) -> usize {
        self.reads.len()
    }

    pub fn reads(&self) -> &[Read] {
        &self.reads
    }

    /// The address word of a given address index.
    pub fn address_word(&self, index: u32) -> BitWord {
        BitWord::from_index(index as u64, self.address_len)
    }

    /// Ground truth for evaluation: for every read id, the address index of
    /// the strand that produced it (addresses encode their source index).
    pub fn true_assignment(&self) -> Vec<u32> {
        self.reads.iter().map(|r| r.true_source).collect()
    }

    /// Ground truth for evaluation: read ids grouped by originating source.
    pub fn read_ids_by_source(&self) -> Vec<Vec<u32>> {
        let mut groups = vec![Vec::with_capacity(self.draws); self.num_strands()];
        for read in &self.reads {
            groups[read.true_source as usize].push(read.read_id);
        }
        groups
    }

    /// Serializes the instance: a `n L N p seed` header, then one
    /// `read_id <address> <payload> <true_source>` line per read.
    pub fn write_dump(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(
            w,
            "{} {} {} {} {}",
            self.address_len, self.payload_len, self.draws, self.erasure_prob, self.seed
        )?;
        for read in &self.reads {
            writeln!(
                w,
                "{} {} {} {}",
                read.read_id, read.noisy_address, read.noisy_payload, read.true_source
            )?;
        }
        Ok(())
    }

    pub fn dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dump(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("dump is ASCII")
    }

    /// Parses the format written by [`Instance::write_dump`].
    pub fn parse_dump(r: impl BufRead) -> Result<Instance, DumpError> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| DumpError::malformed("missing header"))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(DumpError::malformed("header must be 'n L N p seed'"));
        }
        let address_len: usize = fields[0].parse().map_err(|_| DumpError::malformed("bad n"))?;
        let payload_len: usize = fields[1].parse().map_err(|_| DumpError::malformed("bad L"))?;
        let draws: usize = fields[2].parse().map_err(|_| DumpError::malformed("bad N"))?;
        let erasure_prob: f64 = fields[3].parse().map_err(|_| DumpError::malformed("bad p"))?;
        let seed: u64 = fields[4].parse().map_err(|_| DumpError::malformed("bad seed"))?;
        let mut reads = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(DumpError::malformed("read lines must have 4 fields"));
            }
            let read_id: u32 = parts[0].parse().map_err(|_| DumpError::malformed("bad read_id"))?;
            let noisy_address: NoisyWord = parts[1]
                .parse()
                .map_err(|e| DumpError::malformed(format!("bad address word: {e}")))?;
            let noisy_payload: NoisyWord = parts[2]
                .parse()
                .map_err(|e| DumpError::malformed(format!("bad payload word: {e}")))?;
            let true_source: u32 =
                parts[3].parse().map_err(|_| DumpError::malformed("bad source"))?;
            reads.push(Read::new(read_id, noisy_address, noisy_payload, true_source));
        }
        Instance::from_parts(address_len, payload_len, draws, erasure_prob, seed, reads)
            .map_err(|e| DumpError::malformed(e.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum DumpError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("malformed instance dump: {0}")]
    Malformed(String),
}

impl DumpError {
    fn malformed(msg: impl fmt::Display) -> Self {
        DumpError::Malformed(msg.to_string())
    }
}

/// Outcome of an identification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchStatus {
    Success,
    Failure,
}

impl fmt::Display for MatchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchStatus::Success => "SUCCESS",
            MatchStatus::Failure => "FAILURE",
        })
    }
}

/// Result of an identification run, with the counters the statistics
/// pipeline consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub status: MatchStatus,
    /// `read_id -> address index`; present exactly when `status` is
    /// `Success` (a complete matching).
    pub assignment: Option<Vec<u32>>,
    /// Data (payload) comparisons performed; 0 for a pure peeling run.
    pub comparisons_used: u64,
    pub peels_type_a: u64,
    pub peels_type_b: u64,
    /// Pruning selections performed (one per loop iteration).
    pub prune_rounds: u64,
    /// Pruning groups resolved to a common candidate restriction.
    pub groups_resolved: u64,
}

impl MatchResult {
    /// One-line stats record: status, comparisons, prune rounds, groups
    /// resolved, total peels.
    pub fn stats_line(&self) -> String {
        format!(
            "status={} comparisons={} prune_rounds={} groups_resolved={} pma_peels={}",
            self.status,
            self.comparisons_used,
            self.prune_rounds,
            self.groups_resolved,
            self.peels_type_a + self.peels_type_b
        )
    }
}

/// Scores an assignment against ground truth. Reads with identical observed
/// content are interchangeable: within each content class the multiset of
/// assigned addresses must equal the multiset of true addresses, which is
/// plain per-read equality whenever all reads are distinct.
pub fn assignment_matches_truth(instance: &Instance, assignment: &[u32]) -> bool {
    /// True and assigned address multisets for one observed-content class.
    type ClassTallies = (Vec<u32>, Vec<u32>);
    if assignment.len() != instance.num_reads() {
        return false;
    }
    let mut classes: HashMap<(&NoisyWord, &NoisyWord), ClassTallies> = HashMap::new();
    for read in instance.reads() {
        let entry = classes.entry((&read.noisy_address, &read.noisy_payload)).or_default();
        entry.0.push(read.true_source);
        entry.1.push(assignment[read.read_id as usize]);
    }
    classes.into_values().all(|(mut truth, mut assigned)| {
        truth.sort_unstable();
        assigned.sort_unstable();
        truth == assigned
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::consistent_with_codeword;

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let a = generate_instance(4, 2.0, 3, 0.3, 42).unwrap();
        let b = generate_instance(4, 2.0, 3, 0.3, 42).unwrap();
        let c = generate_instance(4, 2.0, 3, 0.3, 43).unwrap();
        assert_eq!(a.dump_string(), b.dump_string());
        assert_ne!(a.dump_string(), c.dump_string());
    }

    #[test]
    fn payload_length_follows_the_rate() {
        assert_eq!(payload_len_for_rate(2.0, 3), 6); // exact product stays exact
        assert_eq!(payload_len_for_rate(1.1, 3), 4); // 3.3 rounds up
        assert_eq!(generate_instance(3, 1.1, 1, 0.5, 0).unwrap().payload_len(), 4);
    }

    #[test]
    fn every_source_has_exactly_n_reads() {
        let inst = generate_instance(3, 1.0, 4, 0.4, 7).unwrap();
        let groups = inst.read_ids_by_source();
        assert_eq!(groups.len(), 8);
        assert!(groups.iter().all(|g| g.len() == 4));
        assert_eq!(inst.num_reads(), 32);
    }

    #[test]
    fn true_source_is_always_a_candidate() {
        let inst = generate_instance(5, 1.5, 2, 0.5, 99).unwrap();
        for read in inst.reads() {
            let addr = inst.address_word(read.ground_truth_source());
            assert!(consistent_with_codeword(&read.noisy_address, &addr));
        }
    }

    #[test]
    fn reads_are_shuffled() {
        let inst = generate_instance(4, 1.0, 4, 0.3, 5).unwrap();
        let sources: Vec<u32> = inst.reads().iter().map(|r| r.ground_truth_source()).collect();
        let mut sorted = sources.clone();
        sorted.sort_unstable();
        assert_ne!(sources, sorted, "seed 5 should not produce source-ordered reads");
    }

    #[test]
    fn dump_roundtrips() {
        let inst = generate_instance(3, 2.0, 2, 0.25, 11).unwrap();
        let dump = inst.dump_string();
        let back = Instance::parse_dump(dump.as_bytes()).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.dump_string(), dump);
    }

    #[test]
    fn generation_rejects_bad_parameters() {
        assert_eq!(
            generate_instance(31, 1.0, 1, 0.5, 0).unwrap_err(),
            ModelError::AddressSpaceTooLarge(31)
        );
        assert!(matches!(generate_instance(4, 1.0, 1, 0.0, 0), Err(ModelError::BadErasureProb(_))));
        assert!(matches!(generate_instance(4, 1.0, 1, 1.0, 0), Err(ModelError::BadErasureProb(_))));
        assert!(matches!(generate_instance(4, 0.0, 1, 0.5, 0), Err(ModelError::BadPayloadRate(_))));
        assert!(matches!(generate_instance(4, 1.0, 0, 0.5, 0), Err(ModelError::NoDraws)));
    }

    #[test]
    fn scoring_treats_identical_reads_as_interchangeable() {
        // Two sources, one draw each; both reads end up with identical
        // observed content (fully erased addresses, equal payloads).
        let reads = vec![
            Read::new(0, "*".parse().unwrap(), "1".parse().unwrap(), 0),
            Read::new(1, "*".parse().unwrap(), "1".parse().unwrap(), 1),
        ];
        let inst = Instance::from_parts(1, 1, 1, 0.5, 0, reads).unwrap();
        assert!(assignment_matches_truth(&inst, &[0, 1]));
        assert!(assignment_matches_truth(&inst, &[1, 0])); // swapped, same content
        assert!(!assignment_matches_truth(&inst, &[0, 0]));

        // Distinct payloads pin the reads down.
        let reads = vec![
            Read::new(0, "*".parse().unwrap(), "1".parse().unwrap(), 0),
            Read::new(1, "*".parse().unwrap(), "0".parse().unwrap(), 1),
        ];
        let inst = Instance::from_parts(1, 1, 1, 0.5, 0, reads).unwrap();
        assert!(assignment_matches_truth(&inst, &[0, 1]));
        assert!(!assignment_matches_truth(&inst, &[1, 0]));
    }

    #[test]
    fn from_parts_validates_shape() {
        let reads = vec![
            Read::new(0, "0".parse().unwrap(), "0".parse().unwrap(), 0),
            Read::new(1, "1".parse().unwrap(), "0".parse().unwrap(), 0), // source 0 twice
        ];
        assert!(matches!(
            Instance::from_parts(1, 1, 1, 0.5, 0, reads),
            Err(ModelError::Invalid(_))
        ));
    }
}
