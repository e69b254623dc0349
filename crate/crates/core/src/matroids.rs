//! The indegree matroid and the sparsity matroid whose common independent
//! sets are the b-branchings, plus a small matroid-oracle interface.
//!
//! For an arc set `F` that is independent in the indegree matroid, `F` fails
//! the sparsity condition exactly when some strong component `X` of `(V, F)`
//! satisfies `|F[X]| = b(X)`; such an `F[X]` is then a sparsity circuit. This
//! turns the exponential-looking sparsity test into one SCC computation.

use crate::digraph::{scc_labels, ArcId, ArcSubset, Digraph, VertexId, VertexSet};
use crate::error::{Error, Result};

/// Positive integer vertex capacities `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityVector(Vec<u32>);

impl CapacityVector {
    pub fn new(b: Vec<u32>) -> Result<Self> {
        if let Some(v) = b.iter().position(|&c| c == 0) {
            return Err(Error::NonPositiveCapacity(v));
        }
        Ok(CapacityVector(b))
    }

    pub fn uniform(n: usize, c: u32) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn get(&self, v: VertexId) -> u32 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `b(X)`.
    pub fn sum_over(&self, x: &[VertexId]) -> u64 {
        x.iter().map(|&v| u64::from(self.0[v])).sum()
    }

    pub fn check_domain(&self, g: &Digraph) -> Result<()> {
        if self.0.len() != g.vertex_count() {
            return Err(Error::LengthMismatch {
                what: "capacity vector",
                expected: g.vertex_count(),
                actual: self.0.len(),
            });
        }
        Ok(())
    }
}

/// Nonnegative prescribed indegrees `b'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandVector(Vec<u32>);

impl DemandVector {
    pub fn new(d: Vec<u32>) -> Self {
        DemandVector(d)
    }

    pub fn zeros(n: usize) -> Self {
        DemandVector(vec![0; n])
    }

    pub fn get(&self, v: VertexId) -> u32 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| u64::from(d)).sum()
    }

    /// Requires `b' ≤ b` componentwise and `b' ≠ b`.
    pub fn validate_against(&self, b: &CapacityVector) -> Result<()> {
        if self.0.len() != b.len() {
            return Err(Error::LengthMismatch {
                what: "demand vector",
                expected: b.len(),
                actual: self.0.len(),
            });
        }
        if let Some(v) = (0..b.len()).find(|&v| self.0[v] > b.get(v)) {
            return Err(Error::InvalidDemand(format!(
                "demand {} exceeds capacity {} at vertex {v}",
                self.0[v],
                b.get(v)
            )));
        }
        if self.0 == b.0 {
            return Err(Error::InvalidDemand(
                "demand vector equals the capacity vector".into(),
            ));
        }
        Ok(())
    }
}

fn check_arcs(g: &Digraph, f: &ArcSubset) -> Result<()> {
    match f.as_slice().last() {
        Some(&a) if a >= g.arc_count() => Err(Error::UnknownArc {
            arc: a,
            m: g.arc_count(),
        }),
        _ => Ok(()),
    }
}

/// `d⁻_F(v) ≤ b(v)` for all `v`.
pub fn indegree_independent(g: &Digraph, b: &CapacityVector, f: &ArcSubset) -> Result<bool> {
    b.check_domain(g)?;
    check_arcs(g, f)?;
    Ok(g
        .indegrees(f)
        .iter()
        .enumerate()
        .all(|(v, &d)| d as u64 <= u64::from(b.get(v))))
}

/// Strong components `X` of `(V, F)` with `|F[X]| = b(X)`, sorted by smallest
/// member. Requires `F` to be indegree-independent.
pub fn sparsity_violating_components(
    g: &Digraph,
    b: &CapacityVector,
    f: &ArcSubset,
) -> Result<Vec<VertexSet>> {
    if !indegree_independent(g, b, f)? {
        return Err(Error::Precondition(
            "arc set exceeds an indegree capacity; the strong-component test does not apply".into(),
        ));
    }
    Ok(tight_components(g, b.as_slice(), f.as_slice()))
}

/// Shared with the greedy phases, which run on contracted graphs whose
/// capacities are plain slices.
pub(crate) fn tight_components(g: &Digraph, b: &[u32], f: &[ArcId]) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let (label, count) = scc_labels(n, f.iter().map(|&a| (g.arc(a).tail, g.arc(a).head)));
    let mut inside = vec![0u64; count];
    for &a in f {
        let arc = g.arc(a);
        if label[arc.tail] == label[arc.head] {
            inside[label[arc.head]] += 1;
        }
    }
    let mut cap = vec![0u64; count];
    for v in 0..n {
        cap[label[v]] += u64::from(b[v]);
    }
    let mut members = vec![Vec::new(); count];
    for v in 0..n {
        if inside[label[v]] == cap[label[v]] {
            members[label[v]].push(v);
        }
    }
    members
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(VertexSet::from_sorted)
        .collect()
}

/// Vertex limit for the exhaustive sparsity scan used when `F` is not
/// indegree-independent.
pub const SPARSITY_SCAN_MAX_VERTICES: usize = 20;

/// `|F[X]| ≤ b(X) − 1` for all nonempty `X`.
///
/// Indegree-independent sets go through [`sparsity_violating_components`].
/// Other sets are checked by scanning all vertex subsets, which is only
/// permitted up to [`SPARSITY_SCAN_MAX_VERTICES`] vertices.
pub fn sparsity_independent(g: &Digraph, b: &CapacityVector, f: &ArcSubset) -> Result<bool> {
    if indegree_independent(g, b, f)? {
        return Ok(tight_components(g, b.as_slice(), f.as_slice()).is_empty());
    }
    let n = g.vertex_count();
    if n > SPARSITY_SCAN_MAX_VERTICES {
        return Err(Error::SizeGate {
            what: "vertices",
            actual: n,
            limit: SPARSITY_SCAN_MAX_VERTICES,
        });
    }
    // inside[X] = |F[X]|, built by adding one vertex at a time
    let mut between = vec![vec![0u64; n]; n];
    for a in f.iter() {
        let arc = g.arc(a);
        between[arc.tail][arc.head] += 1;
        if arc.tail != arc.head {
            between[arc.head][arc.tail] += 1;
        }
    }
    let mut inside = vec![0u64; 1 << n];
    let mut cap = vec![0u64; 1 << n];
    for mask in 1usize..(1 << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut add = between[v][v];
        let mut r = rest;
        while r != 0 {
            let u = r.trailing_zeros() as usize;
            add += between[v][u];
            r &= r - 1;
        }
        inside[mask] = inside[rest] + add;
        cap[mask] = cap[rest] + u64::from(b.get(v));
        if inside[mask] >= cap[mask] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Independent in both the indegree and the sparsity matroid.
pub fn is_b_branching(g: &Digraph, b: &CapacityVector, f: &ArcSubset) -> Result<bool> {
    Ok(indegree_independent(g, b, f)? && tight_components(g, b.as_slice(), f.as_slice()).is_empty())
}

/// An arc set checked to be a b-branching of its host digraph, with its
/// indegree profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBranching {
    arcs: ArcSubset,
    indegree: Vec<usize>,
}

impl BBranching {
    pub fn new(g: &Digraph, b: &CapacityVector, arcs: ArcSubset) -> Result<Self> {
        if !is_b_branching(g, b, &arcs)? {
            return Err(Error::NotBBranching);
        }
        let indegree = g.indegrees(&arcs);
        Ok(BBranching { arcs, indegree })
    }

    pub fn arcs(&self) -> &ArcSubset {
        &self.arcs
    }

    pub fn indegree(&self, v: VertexId) -> usize {
        self.indegree[v]
    }

    pub fn indegrees(&self) -> &[usize] {
        &self.indegree
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn into_arcs(self) -> ArcSubset {
        self.arcs
    }
}

/// Black-box independence oracle over a finite ground set of arc ids.
///
/// Queried sets are subsets of [`ground`](Self::ground) without repetition;
/// sets containing foreign elements are reported dependent.
pub trait MatroidOracle: Send + Sync {
    fn ground(&self) -> &[ArcId];

    /// Rank of the whole ground set.
    fn rank(&self) -> usize;

    fn is_independent(&self, set: &[ArcId]) -> bool;
}

fn sorted_ground(ground: Vec<ArcId>) -> Result<Vec<ArcId>> {
    let mut ground = ground;
    ground.sort_unstable();
    for w in ground.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Matroid(format!("element {} repeated in ground set", w[0])));
        }
    }
    Ok(ground)
}

/// Independent sets are those with at most `r` elements.
#[derive(Clone, Debug)]
pub struct UniformOracle {
    ground: Vec<ArcId>,
    r: usize,
}

impl UniformOracle {
    /// The parameter `r`; the rank is `min(r, |ground|)`.
    pub fn limit(&self) -> usize {
        self.r
    }
}

pub fn uniform_oracle(ground: Vec<ArcId>, r: usize) -> Result<UniformOracle> {
    Ok(UniformOracle {
        ground: sorted_ground(ground)?,
        r,
    })
}

impl MatroidOracle for UniformOracle {
    fn ground(&self) -> &[ArcId] {
        &self.ground
    }

    fn rank(&self) -> usize {
        self.r.min(self.ground.len())
    }

    fn is_independent(&self, set: &[ArcId]) -> bool {
        set.len() <= self.r && set.iter().all(|e| self.ground.binary_search(e).is_ok())
    }
}

/// Independent sets take at most `caps[j]` elements from block `j`.
#[derive(Clone, Debug)]
pub struct PartitionOracle {
    ground: Vec<ArcId>,
    block_of: Vec<usize>,
    caps: Vec<usize>,
    rank: usize,
}

pub fn partition_oracle(
    ground: Vec<ArcId>,
    blocks: Vec<Vec<ArcId>>,
    caps: Vec<usize>,
) -> Result<PartitionOracle> {
    let ground = sorted_ground(ground)?;
    if blocks.len() != caps.len() {
        return Err(Error::Matroid(format!(
            "{} blocks but {} capacities",
            blocks.len(),
            caps.len()
        )));
    }
    const UNASSIGNED: usize = usize::MAX;
    let mut block_of = vec![UNASSIGNED; ground.len()];
    for (j, block) in blocks.iter().enumerate() {
        for e in block {
            let pos = ground
                .binary_search(e)
                .map_err(|_| Error::Matroid(format!("block element {e} is not in the ground set")))?;
            if block_of[pos] != UNASSIGNED {
                return Err(Error::Matroid(format!("element {e} appears in two blocks")));
            }
            block_of[pos] = j;
        }
    }
    if let Some(pos) = block_of.iter().position(|&j| j == UNASSIGNED) {
        return Err(Error::Matroid(format!(
            "ground element {} is in no block",
            ground[pos]
        )));
    }
    let rank = blocks
        .iter()
        .zip(&caps)
        .map(|(blk, &c)| blk.len().min(c))
        .sum();
    Ok(PartitionOracle {
        ground,
        block_of,
        caps,
        rank,
    })
}

impl MatroidOracle for PartitionOracle {
    fn ground(&self) -> &[ArcId] {
        &self.ground
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn is_independent(&self, set: &[ArcId]) -> bool {
        let mut used = vec![0usize; self.caps.len()];
        for e in set {
            let Ok(pos) = self.ground.binary_search(e) else {
                return false;
            };
            let j = self.block_of[pos];
            used[j] += 1;
            if used[j] > self.caps[j] {
                return false;
            }
        }
        true
    }
}

/// The unique circuit in `I ∪ {a}` through `a`, or `None` when `I ∪ {a}` is
/// independent.
///
/// An element `e ∈ I` lies on the circuit iff removing it from `I ∪ {a}`
/// restores independence, so this costs `|I| + 2` oracle queries. The result
/// is sorted.
pub fn fundamental_circuit(
    m: &dyn MatroidOracle,
    independent: &[ArcId],
    a: ArcId,
) -> Result<Option<Vec<ArcId>>> {
    if !m.is_independent(independent) {
        return Err(Error::Precondition(
            "base set of a fundamental circuit must be independent".into(),
        ));
    }
    if independent.contains(&a) {
        return Ok(None);
    }
    let mut with_a = independent.to_vec();
    with_a.push(a);
    if m.is_independent(&with_a) {
        return Ok(None);
    }
    let mut circuit = vec![a];
    let mut probe = Vec::with_capacity(independent.len());
    for (i, &e) in independent.iter().enumerate() {
        probe.clear();
        probe.extend(independent[..i].iter().copied());
        probe.extend(independent[i + 1..].iter().copied());
        probe.push(a);
        if m.is_independent(&probe) {
            circuit.push(e);
        }
    }
    if circuit.len() == 1 && m.is_independent(&[a]) {
        return Err(Error::Matroid(format!(
            "oracle is inconsistent: {{{a}}} is independent but no exchange restores independence"
        )));
    }
    circuit.sort_unstable();
    Ok(Some(circuit))
}
