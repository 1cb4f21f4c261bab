//! Exhaustively enumerated tiny-instance families.
//!
//! The verify subcommand and the acceptance suite check exact equivalences
//! between the fast algorithms and their by-definition oracles over *every*
//! erasure pattern of a shape rather than over samples.  Instances are built
//! from explicit per-read masks; a whole family is indexed by one packed
//! counter so sweeps parallelize by index and stay deterministic.

use strand_id_core::channel::reads_compatible;
use strand_id_core::model::{Instance, Read};
use strand_id_core::oracle::Partitioning;
use strand_id_core::word::{BitWord, NoisyWord};

/// Upper limit on the bits of one packed pattern (2^24 ≈ 16.8M cases).
pub const MAX_JOINT_BITS: usize = 24;

/// Decodes field `k` of a packed pattern.
#[inline]
pub fn decode_field(joint: u64, k: usize, bits_per_field: usize) -> u32 {
    ((joint >> (k * bits_per_field)) as u32) & ((1u32 << bits_per_field) - 1)
}

/// Decodes a whole packed pattern into per-field masks or values.
pub fn decode_joint(joint: u64, fields: usize, bits_per_field: usize) -> Vec<u32> {
    (0..fields).map(|k| decode_field(joint, k, bits_per_field)).collect()
}

/// Number of packed patterns for `fields` fields of `bits_per_field` bits.
/// Panics when the family exceeds [`MAX_JOINT_BITS`].
pub fn joint_cardinality(fields: usize, bits_per_field: usize) -> u64 {
    let bits = fields * bits_per_field;
    assert!(bits <= MAX_JOINT_BITS, "packed family of {bits} bits is too large to enumerate");
    1u64 << bits
}

/// Builds the full-address-space instance in which read `k` (of source
/// `k / draws`) observes its source's address erased at the positions set in
/// `addr_masks[k]` and payload value `payload_values[source]` erased at the
/// positions set in `payload_masks[k]` (mask bit `i` erases word position
/// `i`).
pub fn patterned_instance(
    n: usize,
    payload_len: usize,
    draws: usize,
    addr_masks: &[u32],
    payload_values: &[u32],
    payload_masks: &[u32],
) -> Instance {
    let strands = 1usize << n;
    assert_eq!(addr_masks.len(), strands * draws);
    assert_eq!(payload_masks.len(), strands * draws);
    assert_eq!(payload_values.len(), strands);
    let reads = (0..strands * draws)
        .map(|k| {
            let source = k / draws;
            let address = masked(BitWord::from_index(source as u64, n), addr_masks[k]);
            let payload = masked(
                BitWord::from_index(payload_values[source] as u64, payload_len),
                payload_masks[k],
            );
            Read::new(k as u32, address, payload, source as u32)
        })
        .collect();
    Instance::from_parts(n, payload_len, draws, 0.5, 0, reads)
        .expect("patterned instance is well formed")
}

fn masked(word: BitWord, mask: u32) -> NoisyWord {
    let mut noisy = NoisyWord::from_clean(&word);
    for pos in 0..word.len() {
        if mask >> pos & 1 == 1 {
            noisy.erase(pos);
        }
    }
    noisy
}

/// Canonical payload-value families for a `(n, payload_len)` shape: values
/// as distinct as the payload space allows, all equal, alternating, and a
/// half/half split.  Duplicates collapse, so every returned family is
/// distinct.
pub fn payload_value_families(n: usize, payload_len: usize) -> Vec<Vec<u32>> {
    let strands = 1usize << n;
    let cap = 1u64 << payload_len.min(32);
    let value = |v: usize| (v as u64 % cap) as u32;
    let candidates = [
        (0..strands).map(value).collect::<Vec<u32>>(),
        vec![0u32; strands],
        (0..strands).map(|s| value(s % 2)).collect(),
        (0..strands).map(|s| value(usize::from(s >= strands / 2))).collect(),
    ];
    let mut out: Vec<Vec<u32>> = Vec::new();
    for c in candidates {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Canonical payload-erasure families: clean, fully erased, first read of
/// each source erased, alternating reads erased.  Duplicates collapse.
pub fn payload_mask_families(n: usize, payload_len: usize, draws: usize) -> Vec<Vec<u32>> {
    let reads = (1usize << n) * draws;
    let full = ((1u64 << payload_len.min(32)) - 1) as u32;
    let candidates = [
        vec![0u32; reads],
        vec![full; reads],
        (0..reads).map(|k| if k % draws == 0 { full } else { 0 }).collect::<Vec<u32>>(),
        (0..reads).map(|k| if k % 2 == 0 { full } else { 0 }).collect(),
    ];
    let mut out: Vec<Vec<u32>> = Vec::new();
    for c in candidates {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// All partitions of the reads into groups of exactly `draws`, generated by
/// plain anchored combinations with *no* search-time pruning, then filtered
/// to pairwise-compatible groups.  An implementation independent of the
/// oracle's backtracking search, for cross-checking it.  Canonical form
/// (ascending ids in groups, groups by first id), emitted in lexicographic
/// order.
pub fn brute_force_partitionings(instance: &Instance) -> Vec<Partitioning> {
    assert!(
        instance.num_reads() <= 10 || instance.draws() == 1,
        "unfiltered partition space too large"
    );
    let ids: Vec<u32> = (0..instance.num_reads() as u32).collect();
    let mut all = Vec::new();
    all_partitions(&ids, instance.draws(), &mut Vec::new(), &mut all);
    let reads = instance.reads();
    all.retain(|partitioning| {
        partitioning.iter().all(|group| {
            group.iter().enumerate().all(|(i, &a)| {
                group[i + 1..]
                    .iter()
                    .all(|&b| reads_compatible(&reads[a as usize], &reads[b as usize]))
            })
        })
    });
    all
}

fn all_partitions(
    remaining: &[u32],
    draws: usize,
    current: &mut Partitioning,
    out: &mut Vec<Partitioning>,
) {
    let Some((&anchor, rest)) = remaining.split_first() else {
        out.push(current.clone());
        return;
    };
    let rest = rest.to_vec();
    let mut combo = Vec::with_capacity(draws.saturating_sub(1));
    choose(
        &rest,
        draws - 1,
        0,
        &mut combo,
        &mut |partners, current, out| {
            let mut group = Vec::with_capacity(draws);
            group.push(anchor);
            group.extend_from_slice(partners);
            let next: Vec<u32> = rest.iter().copied().filter(|r| !partners.contains(r)).collect();
            current.push(group);
            all_partitions(&next, draws, current, out);
            current.pop();
        },
        current,
        out,
    );
}

fn choose(
    pool: &[u32],
    k: usize,
    from: usize,
    acc: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32], &mut Partitioning, &mut Vec<Partitioning>),
    current: &mut Partitioning,
    out: &mut Vec<Partitioning>,
) {
    if acc.len() == k {
        f(acc, current, out);
        return;
    }
    // not enough elements left to finish the combination
    if pool.len() - from < k - acc.len() {
        return;
    }
    for i in from..pool.len() {
        acc.push(pool[i]);
        choose(pool, k, i + 1, acc, f, current, out);
        acc.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use strand_id_core::oracle::{enumerate_partitionings, true_partitioning};

    #[test]
    fn packed_patterns_decode_fieldwise() {
        // fields of 2 bits, little-field-first
        assert_eq!(decode_joint(0b11_01_00, 3, 2), vec![0b00, 0b01, 0b11]);
        assert_eq!(joint_cardinality(4, 2), 256);
    }

    #[test]
    fn patterned_instances_place_masks_where_asked() {
        let inst = patterned_instance(1, 1, 2, &[0b1, 0, 0, 0], &[1, 0], &[0, 0, 0b1, 0]);
        let reads = inst.reads();
        assert_eq!(reads[0].noisy_address.to_string(), "*");
        assert_eq!(reads[1].noisy_address.to_string(), "0");
        assert_eq!(reads[0].noisy_payload.to_string(), "1");
        assert_eq!(reads[2].noisy_payload.to_string(), "*");
        assert_eq!(reads[3].noisy_address.to_string(), "1");
        assert_eq!(inst.true_assignment(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn value_and_mask_families_are_distinct_and_sized() {
        let values = payload_value_families(2, 2);
        assert_eq!(values.len(), 4);
        assert!(values.contains(&vec![0, 1, 2, 3]));
        // one payload bit: "distinct" collapses onto alternating
        let narrow = payload_value_families(2, 1);
        assert_eq!(narrow.len(), 3);
        // two draws: first-read-of-source erasure coincides with alternating
        let masks = payload_mask_families(1, 1, 2);
        assert_eq!(masks.len(), 3);
        let three = payload_mask_families(1, 1, 3);
        assert_eq!(three.len(), 4);
        // single draw: first-read-of-source erasure equals full erasure
        let single = payload_mask_families(1, 1, 1);
        assert_eq!(single.len(), 3);
    }

    #[test]
    fn brute_force_agrees_with_the_oracle_on_a_mixed_instance() {
        // two fully erased addresses per source, equal payloads: the four
        // reads pair up freely
        let inst = patterned_instance(1, 1, 2, &[1, 1, 1, 1], &[0, 0], &[0, 0, 0, 0]);
        let brute = brute_force_partitionings(&inst);
        assert_eq!(brute.len(), 3);
        let oracle = enumerate_partitionings(&inst).unwrap().partitionings;
        assert_eq!(brute, oracle);
        assert!(brute.contains(&true_partitioning(&inst)));
    }

    #[test]
    fn brute_force_filters_incompatible_groupings() {
        // clean distinct everything: only the true pairing survives
        let inst = patterned_instance(1, 1, 2, &[0, 0, 0, 0], &[0, 1], &[0, 0, 0, 0]);
        let brute = brute_force_partitionings(&inst);
        assert_eq!(brute, vec![true_partitioning(&inst)]);
    }
}
