//! The bipartite identification graph and its derived structures.
//!
//! Left nodes are the `2^n` addresses; right nodes are the reads. An edge
//! joins address `x` and read `y` exactly when `y`'s noisy address could have
//! been produced by `x`, so a read with `r` erased address positions starts
//! with `2^r` candidate addresses (a subcube of the address space).
//!
//! Candidate sets are kept implicit as `(values, known)` bit masks for as
//! long as possible; once individual addresses are peeled away the set
//! materializes into an explicit sorted list.

use std::io::{self, Write};

use crate::model::Instance;

/// Largest candidate set that may be enumerated into an explicit list.
/// Full algorithm runs are desk scale (`n <= 12`), which this covers even
/// for fully erased reads.
pub const DEFAULT_ENUM_CUTOFF: usize = 1 << 12;

/// A set of candidate addresses for one read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateSet {
    /// The subcube `{ x : (x ^ values) & known == 0 }`. `values` only has
    /// bits inside `known`.
    Cube { values: u32, known: u32 },
    /// Explicit sorted list of addresses (appears only after peeling or
    /// pruning removed individual candidates).
    Explicit(Vec<u32>),
}

impl CandidateSet {
    pub fn cube(values: u32, known: u32) -> Self {
        CandidateSet::Cube { values: values & known, known }
    }

    pub fn len(&self, address_len: usize) -> usize {
        match self {
            CandidateSet::Cube { known, .. } => 1usize << (address_len as u32 - known.count_ones()),
            CandidateSet::Explicit(v) => v.len(),
        }
    }

    pub fn is_empty(&self, address_len: usize) -> bool {
        self.len(address_len) == 0
    }

    pub fn contains(&self, x: u32) -> bool {
        match self {
            CandidateSet::Cube { values, known } => (x ^ values) & known == 0,
            CandidateSet::Explicit(v) => v.binary_search(&x).is_ok(),
        }
    }

    /// The single member of a size-1 set, if it is one.
    pub fn sole_member(&self, address_len: usize) -> Option<u32> {
        match self {
            CandidateSet::Cube { values, known } => {
                (known.count_ones() as usize == address_len).then_some(*values)
            }
            CandidateSet::Explicit(v) => (v.len() == 1).then(|| v[0]),
        }
    }

    /// Visits the members in ascending order. Cubes larger than `cutoff`
    /// are a scale-contract violation and panic.
    pub fn for_each_member(&self, address_len: usize, cutoff: usize, mut f: impl FnMut(u32)) {
        match self {
            CandidateSet::Cube { values, known } => {
                assert!(
                    self.len(address_len) <= cutoff,
                    "candidate cube of size {} exceeds the enumeration cutoff {}",
                    self.len(address_len),
                    cutoff
                );
                let mask = if address_len == 32 { u32::MAX } else { (1u32 << address_len) - 1 };
                let free = !known & mask;
                // ascending submask enumeration; free and values are disjoint
                let mut sub = 0u32;
                loop {
                    f(values | sub);
                    sub = sub.wrapping_sub(free) & free;
                    if sub == 0 {
                        break;
                    }
                }
            }
            CandidateSet::Explicit(v) => v.iter().copied().for_each(&mut f),
        }
    }

    pub fn members(&self, address_len: usize, cutoff: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len(address_len));
        self.for_each_member(address_len, cutoff, |x| out.push(x));
        out
    }

    /// True when the two sets share at least one address.
    pub fn intersects(&self, other: &CandidateSet) -> bool {
        use CandidateSet::*;
        match (self, other) {
            (Cube { values: v1, known: k1 }, Cube { values: v2, known: k2 }) => {
                (v1 ^ v2) & k1 & k2 == 0
            }
            (cube @ Cube { .. }, Explicit(v)) | (Explicit(v), cube @ Cube { .. }) => {
                v.iter().any(|&x| cube.contains(x))
            }
            (Explicit(a), Explicit(b)) => {
                let (mut i, mut j) = (0, 0);
                while i < a.len() && j < b.len() {
                    match a[i].cmp(&b[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => return true,
                    }
                }
                false
            }
        }
    }

    /// Set intersection. Cube-cube intersections stay cubes (or empty).
    pub fn intersect(&self, other: &CandidateSet) -> CandidateSet {
        use CandidateSet::*;
        match (self, other) {
            (Cube { values: v1, known: k1 }, Cube { values: v2, known: k2 }) => {
                if (v1 ^ v2) & k1 & k2 != 0 {
                    Explicit(Vec::new())
                } else {
                    CandidateSet::cube(v1 | v2, k1 | k2)
                }
            }
            (cube @ Cube { .. }, Explicit(v)) | (Explicit(v), cube @ Cube { .. }) => {
                Explicit(v.iter().copied().filter(|&x| cube.contains(x)).collect())
            }
            (Explicit(a), Explicit(b)) => {
                Explicit(a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect())
            }
        }
    }

    /// Removes one address, materializing a cube when necessary. Returns
    /// whether the address was present.
    pub fn remove(&mut self, x: u32, address_len: usize, cutoff: usize) -> bool {
        if !self.contains(x) {
            return false;
        }
        match self {
            CandidateSet::Cube { .. } => {
                let mut v = self.members(address_len, cutoff);
                let idx = v.binary_search(&x).expect("contains() said it was present");
                v.remove(idx);
                *self = CandidateSet::Explicit(v);
            }
            CandidateSet::Explicit(v) => {
                let idx = v.binary_search(&x).expect("contains() said it was present");
                v.remove(idx);
            }
        }
        true
    }
}

/// A node of the bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Address(u32),
    Read(u32),
}

/// Peeling classification of a node in the current graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    /// Address whose degree is exactly the draw count `N`.
    TypeA,
    /// Address with exactly `N` neighbors of degree 1.
    TypeB,
    /// Read with exactly one candidate address.
    GoodRight,
    Ordinary,
}

/// The mutable bipartite identification graph.
#[derive(Debug, Clone)]
pub struct IdentGraph {
    address_len: usize,
    draws: usize,
    enum_cutoff: usize,
    cands: Vec<CandidateSet>,
    /// Per address: read ids whose initial candidate set contained it.
    /// Filtered lazily against `cands`/`read_alive` when iterated.
    left_adj: Vec<Vec<u32>>,
    left_deg: Vec<u32>,
    read_alive: Vec<bool>,
    alive_reads: usize,
    addr_alive: Vec<bool>,
}

impl IdentGraph {
    /// Builds the graph of an instance (every read alive, candidate sets the
    /// full consistency subcubes).
    pub fn build(instance: &Instance) -> IdentGraph {
        Self::build_with_cutoff(instance, DEFAULT_ENUM_CUTOFF)
    }

    pub fn build_with_cutoff(instance: &Instance, enum_cutoff: usize) -> IdentGraph {
        let n = instance.address_len();
        let num_addresses = instance.num_strands();
        let mut cands = Vec::with_capacity(instance.num_reads());
        let mut left_adj = vec![Vec::new(); num_addresses];
        let mut left_deg = vec![0u32; num_addresses];
        for read in instance.reads() {
            let (values, known) = read.noisy_address.packed();
            let cand = CandidateSet::cube(values as u32, known as u32);
            cand.for_each_member(n, enum_cutoff, |x| {
                left_adj[x as usize].push(read.read_id);
                left_deg[x as usize] += 1;
            });
            cands.push(cand);
        }
        IdentGraph {
            address_len: n,
            draws: instance.draws(),
            enum_cutoff,
            cands,
            left_adj,
            left_deg,
            read_alive: vec![true; instance.num_reads()],
            alive_reads: instance.num_reads(),
            addr_alive: vec![true; num_addresses],
        }
    }

    pub fn address_len(&self) -> usize {
        self.address_len
    }

    pub fn num_addresses(&self) -> usize {
        1usize << self.address_len
    }

    pub fn num_reads(&self) -> usize {
        self.cands.len()
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn enum_cutoff(&self) -> usize {
        self.enum_cutoff
    }

    pub fn candidate_set(&self, read: u32) -> &CandidateSet {
        &self.cands[read as usize]
    }

    pub fn right_degree(&self, read: u32) -> usize {
        self.cands[read as usize].len(self.address_len)
    }

    pub fn left_degree(&self, x: u32) -> usize {
        self.left_deg[x as usize] as usize
    }

    pub fn is_read_alive(&self, read: u32) -> bool {
        self.read_alive[read as usize]
    }

    pub fn num_alive_reads(&self) -> usize {
        self.alive_reads
    }

    pub fn is_address_alive(&self, x: u32) -> bool {
        self.addr_alive[x as usize]
    }

    /// Read ids currently adjacent to address `x`, ascending.
    pub fn reads_adjacent(&self, x: u32) -> Vec<u32> {
        self.left_adj[x as usize]
            .iter()
            .copied()
            .filter(|&r| self.read_alive[r as usize] && self.cands[r as usize].contains(x))
            .collect()
    }

    /// Total number of edges currently in the graph.
    pub fn num_edges(&self) -> usize {
        (0..self.num_reads())
            .filter(|&r| self.read_alive[r])
            .map(|r| self.cands[r].len(self.address_len))
            .sum()
    }

    /// Removes a read and all its edges.
    pub fn remove_read(&mut self, read: u32) {
        assert!(self.read_alive[read as usize], "read {read} was already removed");
        let cand =
            std::mem::replace(&mut self.cands[read as usize], CandidateSet::Explicit(Vec::new()));
        cand.for_each_member(self.address_len, self.enum_cutoff, |x| {
            self.left_deg[x as usize] -= 1;
        });
        self.cands[read as usize] = cand;
        self.read_alive[read as usize] = false;
        self.alive_reads -= 1;
    }

    /// Removes the single edge between `x` and `read` (which must exist).
    pub fn remove_edge(&mut self, x: u32, read: u32) {
        assert!(self.read_alive[read as usize]);
        let removed = self.cands[read as usize].remove(x, self.address_len, self.enum_cutoff);
        assert!(removed, "edge ({x}, {read}) is not in the graph");
        self.left_deg[x as usize] -= 1;
    }

    /// Restricts a read's candidate set to `new_set`, which must be a subset
    /// of the current one; the dropped edges leave the graph.
    pub fn restrict_read(&mut self, read: u32, new_set: CandidateSet) {
        assert!(self.read_alive[read as usize]);
        let old = &self.cands[read as usize];
        old.for_each_member(self.address_len, self.enum_cutoff, |x| {
            if !new_set.contains(x) {
                self.left_deg[x as usize] -= 1;
            }
        });
        self.cands[read as usize] = new_set;
    }

    /// Removes an address node. All its edges must already be gone.
    pub fn remove_address(&mut self, x: u32) {
        assert!(self.addr_alive[x as usize], "address {x} was already removed");
        debug_assert_eq!(self.left_deg[x as usize], 0, "address {x} still has edges");
        self.addr_alive[x as usize] = false;
    }

    /// Peeling classification in the current graph. Removed nodes are
    /// ordinary. An address satisfying both conditions reports `TypeA`.
    pub fn classify(&self, node: Node) -> NodeClass {
        match node {
            Node::Read(r) => {
                if self.read_alive[r as usize] && self.right_degree(r) == 1 {
                    NodeClass::GoodRight
                } else {
                    NodeClass::Ordinary
                }
            }
            Node::Address(x) => {
                if !self.addr_alive[x as usize] {
                    return NodeClass::Ordinary;
                }
                let deg = self.left_deg[x as usize] as usize;
                if deg == self.draws {
                    return NodeClass::TypeA;
                }
                let good = self.left_adj[x as usize]
                    .iter()
                    .filter(|&&r| {
                        self.read_alive[r as usize]
                            && self.cands[r as usize].contains(x)
                            && self.right_degree(r) == 1
                    })
                    .count();
                if good == self.draws {
                    NodeClass::TypeB
                } else {
                    NodeClass::Ordinary
                }
            }
        }
    }

    /// True when some connected component of the current graph contains a
    /// cycle, i.e. has at least as many edges as vertices. Detected by
    /// incremental union-find: an edge whose endpoints are already connected
    /// closes a cycle. (Parallel edges cannot occur: candidate sets are
    /// sets.)
    pub fn has_cycle(&self) -> bool {
        let m = self.num_addresses();
        let mut uf = UnionFind::new(m + self.num_reads());
        for r in 0..self.num_reads() {
            if !self.read_alive[r] {
                continue;
            }
            let mut cyclic = false;
            self.cands[r].for_each_member(self.address_len, self.enum_cutoff, |x| {
                if !uf.union(x as usize, m + r) {
                    cyclic = true;
                }
            });
            if cyclic {
                return true;
            }
        }
        false
    }

    /// The two-hop neighborhood of a read: every other living read whose
    /// candidate set intersects this read's candidate set (equivalently for
    /// fresh graphs over the full address space: reads with agreeing noisy
    /// addresses). Ascending read ids.
    pub fn two_hop(&self, read: u32) -> Vec<u32> {
        assert!(self.read_alive[read as usize], "read {read} was removed");
        let me = &self.cands[read as usize];
        (0..self.num_reads() as u32)
            .filter(|&r| {
                r != read && self.read_alive[r as usize] && me.intersects(&self.cands[r as usize])
            })
            .collect()
    }

    /// Serializes the current graph: `x read_id` edge lines (ordered by
    /// address, then read), then a `# classes` trailer listing the good
    /// nodes: `A <x>` / `B <x>` per good address, `G <read_id>` per
    /// degree-one read.
    pub fn write_dump(&self, w: &mut impl Write) -> io::Result<()> {
        for x in 0..self.num_addresses() as u32 {
            if !self.addr_alive[x as usize] {
                continue;
            }
            for r in self.reads_adjacent(x) {
                writeln!(w, "{x} {r}")?;
            }
        }
        writeln!(w, "# classes")?;
        for x in 0..self.num_addresses() as u32 {
            match self.classify(Node::Address(x)) {
                NodeClass::TypeA => writeln!(w, "A {x}")?,
                NodeClass::TypeB => writeln!(w, "B {x}")?,
                _ => {}
            }
        }
        for r in 0..self.num_reads() as u32 {
            if self.classify(Node::Read(r)) == NodeClass::GoodRight {
                writeln!(w, "G {r}")?;
            }
        }
        Ok(())
    }

    pub fn dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dump(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("dump is ASCII")
    }
}

/// Union-find with path halving and union by size.
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            self.parent[x] = self.parent[self.parent[x] as usize];
            x = self.parent[x] as usize;
        }
        x
    }

    /// Returns false when both nodes were already in the same component.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        true
    }
}

/// True when the labelling digraph of the true grouping has a directed
/// cycle. The digraph has an edge `x -> x'` (`x != x'`) when every read of
/// `x` is erased at all positions where `x` and `x'` differ, i.e. `x'` lies
/// in the intersection of the candidate sets of all of `x`'s reads. A cycle
/// means the true grouping admits more than one consistent labelling.
///
/// Uses ground truth (the grouping of reads by source); evaluation only.
pub fn labelling_digraph_has_cycle(instance: &Instance) -> bool {
    let n = instance.address_len();
    let m = instance.num_strands();
    let groups = instance.read_ids_by_source();
    let reads = instance.reads();

    // Per source, the intersection cube of its reads' candidate sets: each
    // read of x is consistent with x, so the cubes pairwise intersect and
    // the intersection is the cube of positions erased in every read.
    let common: Vec<CandidateSet> = groups
        .iter()
        .map(|group| {
            let mut it = group.iter();
            let first = *it.next().expect("every source has at least one read");
            let (v, k) = reads[first as usize].noisy_address.packed();
            let mut acc = CandidateSet::cube(v as u32, k as u32);
            for &r in it {
                let (v, k) = reads[r as usize].noisy_address.packed();
                acc = acc.intersect(&CandidateSet::cube(v as u32, k as u32));
            }
            acc
        })
        .collect();

    // Iterative three-color DFS over the implicit out-edges.
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color = vec![WHITE; m];
    for start in 0..m {
        if color[start] != WHITE {
            continue;
        }
        // stack of (node, remaining successors)
        let mut stack: Vec<(u32, Vec<u32>)> = Vec::new();
        color[start] = GRAY;
        let succ = |x: u32| -> Vec<u32> {
            let mut out = common[x as usize].members(n, DEFAULT_ENUM_CUTOFF);
            out.retain(|&y| y != x);
            out
        };
        stack.push((start as u32, succ(start as u32)));
        while let Some((node, rest)) = stack.last_mut() {
            match rest.pop() {
                None => {
                    color[*node as usize] = BLACK;
                    stack.pop();
                }
                Some(next) => match color[next as usize] {
                    GRAY => return true,
                    WHITE => {
                        color[next as usize] = GRAY;
                        stack.push((next, succ(next)));
                    }
                    _ => {}
                },
            }
        }
    }
    false
}

/// The confusability graph over addresses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusabilityGraph {
    /// Directed edges `x -> x'` between addresses at Hamming distance 1,
    /// present when some read of `x` has candidate set exactly `{x, x'}`
    /// (a single erasure, at the one position where they differ). Sorted
    /// and deduplicated.
    pub edges: Vec<(u32, u32)>,
    /// Whether the undirected version connects the entire address space.
    pub connected: bool,
}

/// Builds the confusability graph. Uses ground truth; evaluation only.
pub fn confusability_graph(instance: &Instance) -> ConfusabilityGraph {
    let n = instance.address_len();
    let m = instance.num_strands();
    let mut edges = Vec::new();
    for read in instance.reads() {
        if read.noisy_address.erasure_count() != 1 {
            continue;
        }
        let (_, known) = read.noisy_address.packed();
        let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let flipped = !(known as u32) & mask; // exactly one bit
        let x = read.ground_truth_source();
        edges.push((x, x ^ flipped));
    }
    edges.sort_unstable();
    edges.dedup();

    let mut uf = UnionFind::new(m);
    let mut components = m;
    for &(a, b) in &edges {
        if uf.union(a as usize, b as usize) {
            components -= 1;
        }
    }
    ConfusabilityGraph { edges, connected: components == 1 }
}
