//! Brute-force ground truth for tiny instances.
//!
//! These engines enumerate *every* way to explain a set of reads — all
//! partitionings into same-strand groups and all address labellings of a
//! partitioning — plus a by-definition faulty-read scan. They are
//! deliberately exhaustive and guarded by hard size limits: an oracle that
//! silently truncates is worse than none. The library's fast algorithms are
//! validated against these engines over exhaustively enumerated instance
//! families at small `n`.

use thiserror::Error;

use crate::channel::{consistent_with_codeword, reads_compatible};
use crate::model::Instance;

/// Hard cap on `N * 2^n` for partitioning enumeration.
pub const MAX_ORACLE_READS: usize = 16;
/// Hard cap on `2^n` for labelling enumeration.
pub const MAX_ORACLE_ADDRESSES: usize = 8;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{0} reads exceed the exhaustive-enumeration cap of {MAX_ORACLE_READS}")]
    TooManyReads(usize),
    #[error("{0} addresses exceed the exhaustive-enumeration cap of {MAX_ORACLE_ADDRESSES}")]
    TooManyAddresses(usize),
}

/// Groups of read ids, each group asserted to come from one strand.
/// Canonical form: ids ascending within groups, groups ascending by first id.
pub type Partitioning = Vec<Vec<u32>>;

/// One address per group, aligned with the partitioning's group order.
pub type Labelling = Vec<u32>;

/// Every partitioning a set of reads admits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitioningEnum {
    pub partitionings: Vec<Partitioning>,
}

impl PartitioningEnum {
    pub fn count(&self) -> usize {
        self.partitionings.len()
    }

    pub fn contains(&self, p: &Partitioning) -> bool {
        self.partitionings.iter().any(|q| q == p)
    }
}

/// The ground-truth partitioning, in canonical form.
pub fn true_partitioning(instance: &Instance) -> Partitioning {
    let mut groups = instance.read_ids_by_source();
    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort();
    groups
}

/// The ground-truth labelling of a partitioning: each group's common source
/// address, or `None` if some group mixes sources (then no true labelling
/// exists for it).
pub fn true_labelling(instance: &Instance, partitioning: &Partitioning) -> Option<Labelling> {
    let truth = instance.true_assignment();
    partitioning
        .iter()
        .map(|group| {
            let first = truth[group[0] as usize];
            group.iter().all(|&r| truth[r as usize] == first).then_some(first)
        })
        .collect()
}

/// The read-to-address assignment a `(partitioning, labelling)` pair claims.
pub fn induced_assignment(
    partitioning: &Partitioning,
    labelling: &Labelling,
    num_reads: usize,
) -> Vec<u32> {
    assert_eq!(partitioning.len(), labelling.len());
    let mut assignment = vec![u32::MAX; num_reads];
    for (group, &addr) in partitioning.iter().zip(labelling) {
        for &r in group {
            assignment[r as usize] = addr;
        }
    }
    assert!(assignment.iter().all(|&a| a != u32::MAX), "partitioning misses reads");
    assignment
}

struct PartitionSearch<'a> {
    compat: Vec<Vec<bool>>,
    draws: usize,
    assigned: Vec<bool>,
    current: Partitioning,
    out: &'a mut Vec<Partitioning>,
}

impl PartitionSearch<'_> {
    /// Opens a group at the lowest unassigned read; emitting groups anchored
    /// at ascending minima makes every result canonical with no dedup pass.
    fn next_group(&mut self) {
        let Some(anchor) = self.assigned.iter().position(|&a| !a) else {
            self.out.push(self.current.clone());
            return;
        };
        self.assigned[anchor] = true;
        self.current.push(vec![anchor as u32]);
        self.extend_group(anchor + 1);
        self.current.pop();
        self.assigned[anchor] = false;
    }

    fn extend_group(&mut self, from: usize) {
        let group = self.current.last().unwrap();
        if group.len() == self.draws {
            self.next_group();
            return;
        }
        for j in from..self.assigned.len() {
            if self.assigned[j] {
                continue;
            }
            let group = self.current.last().unwrap();
            if !group.iter().all(|&g| self.compat[g as usize][j]) {
                continue;
            }
            self.assigned[j] = true;
            self.current.last_mut().unwrap().push(j as u32);
            self.extend_group(j + 1);
            self.current.last_mut().unwrap().pop();
            self.assigned[j] = false;
        }
    }
}

/// Enumerates every partitioning of the reads into groups of `N` that agree
/// pairwise on both address and payload. The true partitioning is always
/// among the results.
pub fn enumerate_partitionings(instance: &Instance) -> Result<PartitioningEnum, OracleError> {
    let num_reads = instance.num_reads();
    if num_reads > MAX_ORACLE_READS {
        return Err(OracleError::TooManyReads(num_reads));
    }
    let reads = instance.reads();
    let compat: Vec<Vec<bool>> = (0..num_reads)
        .map(|i| (0..num_reads).map(|j| i != j && reads_compatible(&reads[i], &reads[j])).collect())
        .collect();
    let mut out = Vec::new();
    PartitionSearch {
        compat,
        draws: instance.draws(),
        assigned: vec![false; num_reads],
        current: Vec::new(),
        out: &mut out,
    }
    .next_group();
    Ok(PartitioningEnum { partitionings: out })
}

/// Enumerates every labelling of a partitioning: assignments of *distinct*
/// addresses to groups such that each group member's noisy address is
/// consistent with the assigned address.
pub fn enumerate_labellings(
    instance: &Instance,
    partitioning: &Partitioning,
) -> Result<Vec<Labelling>, OracleError> {
    let num_addr = instance.num_strands();
    if num_addr > MAX_ORACLE_ADDRESSES {
        return Err(OracleError::TooManyAddresses(num_addr));
    }
    let reads = instance.reads();
    let allowed: Vec<Vec<u32>> = partitioning
        .iter()
        .map(|group| {
            (0..num_addr as u32)
                .filter(|&x| {
                    let word = instance.address_word(x);
                    group
                        .iter()
                        .all(|&r| consistent_with_codeword(&reads[r as usize].noisy_address, &word))
                })
                .collect()
        })
        .collect();

    fn assign(
        allowed: &[Vec<u32>],
        group: usize,
        used: &mut Vec<bool>,
        current: &mut Labelling,
        out: &mut Vec<Labelling>,
    ) {
        if group == allowed.len() {
            out.push(current.clone());
            return;
        }
        for &x in &allowed[group] {
            if used[x as usize] {
                continue;
            }
            used[x as usize] = true;
            current.push(x);
            assign(allowed, group + 1, used, current, out);
            current.pop();
            used[x as usize] = false;
        }
    }

    let mut out = Vec::new();
    assign(&allowed, 0, &mut vec![false; num_addr], &mut Vec::new(), &mut out);
    Ok(out)
}

/// Faulty reads and fully-faulty sources, by definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultySets {
    /// Reads compatible with at least one read of a *different* source.
    pub reads: Vec<u32>,
    /// Sources all of whose reads are faulty.
    pub sources: Vec<u32>,
}

impl FaultySets {
    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }
}

/// Quadratic scan for faulty reads: `r` is faulty iff some read of another
/// source agrees with it on every known address and payload position.
pub fn find_faulty_reads(instance: &Instance) -> FaultySets {
    let reads = instance.reads();
    let truth = instance.true_assignment();
    let mut faulty = vec![false; reads.len()];
    for i in 0..reads.len() {
        for j in (i + 1)..reads.len() {
            if truth[i] != truth[j] && reads_compatible(&reads[i], &reads[j]) {
                faulty[i] = true;
                faulty[j] = true;
            }
        }
    }
    let sources = instance
        .read_ids_by_source()
        .iter()
        .enumerate()
        .filter(|(_, ids)| ids.iter().all(|&r| faulty[r as usize]))
        .map(|(s, _)| s as u32)
        .collect();
    FaultySets { reads: (0..reads.len() as u32).filter(|&r| faulty[r as usize]).collect(), sources }
}

/// Histogram of address orders: bucket `l` counts addresses whose cleanest
/// read has exactly `l` erased address bits (candidate-set size `2^l`).
pub fn order_histogram(instance: &Instance) -> Vec<u64> {
    let mut counts = vec![0u64; instance.address_len() + 1];
    let reads = instance.reads();
    for ids in instance.read_ids_by_source() {
        let min = ids
            .iter()
            .map(|&r| reads[r as usize].noisy_address.erasure_count())
            .min()
            .expect("every source has at least one read");
        counts[min] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Read;

    fn tiny(rows: &[(&str, &str, u32)]) -> Instance {
        let reads = rows
            .iter()
            .enumerate()
            .map(|(i, (a, p, s))| Read::new(i as u32, a.parse().unwrap(), p.parse().unwrap(), *s))
            .collect();
        Instance::from_parts(1, 1, 2, 0.5, 0, reads).unwrap()
    }

    #[test]
    fn clean_reads_admit_exactly_the_truth() {
        let inst = tiny(&[("0", "0", 0), ("0", "0", 0), ("1", "1", 1), ("1", "1", 1)]);
        let parts = enumerate_partitionings(&inst).unwrap();
        assert_eq!(parts.count(), 1);
        let truth = true_partitioning(&inst);
        assert_eq!(parts.partitionings[0], truth);

        let labels = enumerate_labellings(&inst, &truth).unwrap();
        assert_eq!(labels, vec![true_labelling(&inst, &truth).unwrap()]);
        assert!(find_faulty_reads(&inst).is_empty());
    }

    #[test]
    fn erased_addresses_with_equal_payloads_blow_up_the_count() {
        let inst = tiny(&[("*", "0", 0), ("*", "0", 0), ("*", "0", 1), ("*", "0", 1)]);
        let parts = enumerate_partitionings(&inst).unwrap();
        // four mutually compatible reads pair up in 3 ways
        assert_eq!(parts.count(), 3);
        assert!(parts.contains(&true_partitioning(&inst)));

        let faulty = find_faulty_reads(&inst);
        assert_eq!(faulty.reads, vec![0, 1, 2, 3]);
        assert_eq!(faulty.sources, vec![0, 1]);
    }

    #[test]
    fn only_the_true_pair_induces_the_true_assignment() {
        // partially erased: still several explanations, exactly one true
        let inst = tiny(&[("*", "0", 0), ("0", "0", 0), ("*", "0", 1), ("1", "0", 1)]);
        let truth = inst.true_assignment();
        let p_star = true_partitioning(&inst);
        let l_star = true_labelling(&inst, &p_star).unwrap();
        let mut hits = 0;
        for p in enumerate_partitionings(&inst).unwrap().partitionings {
            for l in enumerate_labellings(&inst, &p).unwrap() {
                if induced_assignment(&p, &l, inst.num_reads()) == truth {
                    assert_eq!((p.clone(), l.clone()), (p_star.clone(), l_star.clone()));
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 1);
    }

    #[test]
    fn mixed_group_has_no_true_labelling() {
        let inst = tiny(&[("*", "0", 0), ("*", "0", 0), ("*", "0", 1), ("*", "0", 1)]);
        let crossed: Partitioning = vec![vec![0, 2], vec![1, 3]];
        assert_eq!(true_labelling(&inst, &crossed), None);
    }

    #[test]
    fn order_histogram_counts_cleanest_reads() {
        let inst = tiny(&[("*", "0", 0), ("0", "0", 0), ("*", "0", 1), ("*", "0", 1)]);
        // source 0 has an unerased read (order 2^0); source 1 does not
        assert_eq!(order_histogram(&inst), vec![1, 1]);
        let total: u64 = order_histogram(&inst).iter().sum();
        assert_eq!(total as usize, inst.num_strands());
    }

    #[test]
    fn guards_refuse_oversized_instances() {
        let inst = crate::model::generate_instance(3, 1.0, 3, 0.3, 1).unwrap(); // 24 reads
        assert!(matches!(enumerate_partitionings(&inst), Err(OracleError::TooManyReads(24))));
        let big = crate::model::generate_instance(4, 1.0, 1, 0.3, 1).unwrap(); // 16 addresses
        let p = true_partitioning(&big);
        assert!(matches!(enumerate_labellings(&big, &p), Err(OracleError::TooManyAddresses(16))));
    }
}
