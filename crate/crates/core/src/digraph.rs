//! Multigraph representation and the structural queries the algorithms need.
//!
//! Vertices are `0..n`. Arcs are identified by their position in the arc
//! list; parallel arcs and self-loops are allowed. A loop at `v` enters `v`
//! and is induced by every set containing `v`.

use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type ArcId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
}

impl Digraph {
    pub fn new<I: IntoIterator<Item = (VertexId, VertexId)>>(n: usize, arcs: I) -> Result<Self> {
        let arcs = arcs
            .into_iter()
            .map(|(tail, head)| Arc { tail, head })
            .collect::<Vec<_>>();
        for a in &arcs {
            for v in [a.tail, a.head] {
                if v >= n {
                    return Err(Error::UnknownVertex { vertex: v, n });
                }
            }
        }
        Ok(Digraph { n, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, id: ArcId) -> Arc {
        self.arcs[id]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.n
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: v, n: self.n })
        }
    }

    /// `d⁻_F(v)` for every vertex.
    pub fn indegrees(&self, f: &ArcSubset) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for a in f.iter() {
            deg[self.arcs[a].head] += 1;
        }
        deg
    }

    /// Arc ids grouped by head, each group in increasing id order.
    pub fn in_arc_lists(&self) -> Vec<Vec<ArcId>> {
        let mut lists = vec![Vec::new(); self.n];
        for (id, a) in self.arcs.iter().enumerate() {
            lists[a.head].push(id);
        }
        lists
    }

    /// Graphviz rendering; arcs are labelled by id.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for v in 0..self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for (id, a) in self.arcs.iter().enumerate() {
            out.push_str(&format!("  {} -> {} [label=\"{id}\"];\n", a.tail, a.head));
        }
        out.push_str("}\n");
        out
    }
}

/// A set of arc ids of some host digraph, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ArcSubset(Vec<ArcId>);

impl ArcSubset {
    pub fn new<I: IntoIterator<Item = ArcId>>(g: &Digraph, ids: I) -> Result<Self> {
        let mut ids: Vec<ArcId> = ids.into_iter().collect();
        ids.sort_unstable();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateArc(w[0]));
            }
        }
        if let Some(&last) = ids.last() {
            if last >= g.arc_count() {
                return Err(Error::UnknownArc {
                    arc: last,
                    m: g.arc_count(),
                });
            }
        }
        Ok(ArcSubset(ids))
    }

    /// Caller guarantees the ids are sorted, distinct and valid.
    pub(crate) fn from_sorted(ids: Vec<ArcId>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        ArcSubset(ids)
    }

    pub fn empty() -> Self {
        ArcSubset(Vec::new())
    }

    pub fn full(g: &Digraph) -> Self {
        ArcSubset((0..g.arc_count()).collect())
    }

    pub fn contains(&self, a: ArcId) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[ArcId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<ArcId> {
        self.0
    }
}

/// A sorted set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = VertexId>>(g: &Digraph, ids: I) -> Result<Self> {
        let set = Self::from_unsorted(ids)?;
        if let Some(&last) = set.0.last() {
            g.check_vertex(last)?;
        }
        Ok(set)
    }

    /// Validates distinctness only.
    pub fn from_unsorted<I: IntoIterator<Item = VertexId>>(ids: I) -> Result<Self> {
        let mut ids: Vec<VertexId> = ids.into_iter().collect();
        ids.sort_unstable();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0]));
            }
        }
        Ok(VertexSet(ids))
    }

    pub(crate) fn from_sorted(ids: Vec<VertexId>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet(ids)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }

    /// Membership bitmap over `0..n`.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut ind = vec![false; n];
        for &v in &self.0 {
            ind[v] = true;
        }
        ind
    }
}

impl Deref for VertexSet {
    type Target = [VertexId];

    fn deref(&self) -> &[VertexId] {
        &self.0
    }
}

fn check_subset(g: &Digraph, f: &ArcSubset) -> Result<()> {
    match f.0.last() {
        Some(&a) if a >= g.arc_count() => Err(Error::UnknownArc {
            arc: a,
            m: g.arc_count(),
        }),
        _ => Ok(()),
    }
}

fn check_set(g: &Digraph, x: &VertexSet) -> Result<()> {
    match x.0.last() {
        Some(&v) => g.check_vertex(v),
        None => Ok(()),
    }
}

/// `δ⁻_F(v)`: the arcs of `f` with head `v`.
pub fn in_arcs(g: &Digraph, f: &ArcSubset, v: VertexId) -> Result<ArcSubset> {
    g.check_vertex(v)?;
    check_subset(g, f)?;
    Ok(ArcSubset(f.iter().filter(|&a| g.arcs[a].head == v).collect()))
}

/// `F[X]`: the arcs of `f` with both ends in `x`.
pub fn induced_arcs(g: &Digraph, f: &ArcSubset, x: &VertexSet) -> Result<ArcSubset> {
    check_subset(g, f)?;
    check_set(g, x)?;
    let ind = x.indicator(g.n);
    Ok(ArcSubset(
        f.iter()
            .filter(|&a| ind[g.arcs[a].tail] && ind[g.arcs[a].head])
            .collect(),
    ))
}

/// Strong components of `(V, F)`, sorted by smallest member.
pub fn strong_components(g: &Digraph, f: &ArcSubset) -> Result<Vec<VertexSet>> {
    check_subset(g, f)?;
    let (label, count) = scc_labels(g.n, f.iter().map(|a| (g.arcs[a].tail, g.arcs[a].head)));
    let mut comps = vec![Vec::new(); count];
    for (v, &c) in label.iter().enumerate() {
        comps[c].push(v);
    }
    Ok(comps.into_iter().map(VertexSet::from_sorted).collect())
}

/// Tarjan's algorithm without recursion. Returns a component label per vertex
/// and the number of components; labels are assigned in order of each
/// component's smallest vertex.
pub(crate) fn scc_labels<I>(n: usize, arcs: I) -> (Vec<usize>, usize)
where
    I: IntoIterator<Item = (VertexId, VertexId)>,
{
    // CSR out-adjacency
    let arcs: Vec<(VertexId, VertexId)> = arcs.into_iter().collect();
    let mut start = vec![0usize; n + 1];
    for &(t, _) in &arcs {
        start[t + 1] += 1;
    }
    for v in 0..n {
        start[v + 1] += start[v];
    }
    let mut adj = vec![0usize; arcs.len()];
    let mut fill = start.clone();
    for &(t, h) in &arcs {
        adj[fill[t]] = h;
        fill[t] += 1;
    }

    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw = vec![UNSEEN; n];
    let mut raw_count = 0;
    let mut next_index = 0;
    let mut calls: Vec<(VertexId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, start[root]));

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if *pos < start[v + 1] {
                let w = adj[*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, start[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    raw[w] = raw_count;
                    if w == v {
                        break;
                    }
                }
                raw_count += 1;
            }
        }
    }

    let mut relabel = vec![UNSEEN; raw_count];
    let mut count = 0;
    let mut label = vec![0; n];
    for v in 0..n {
        let r = raw[v];
        if relabel[r] == UNSEEN {
            relabel[r] = count;
            count += 1;
        }
        label[v] = relabel[r];
    }
    (label, count)
}

/// Per-set data kept by [`contract`] so that a later expansion can undo it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionRecord {
    /// The contracted set, in pre-contraction vertex ids.
    pub members: VertexSet,
    /// `v_X` in the contracted graph.
    pub vertex: VertexId,
    /// `F[X]`, in pre-contraction arc ids.
    pub internal: ArcSubset,
    /// A minimum-weight arc of `F[X]` (smallest id among ties); `None` only
    /// when `F[X]` is empty.
    pub min_arc: Option<ArcId>,
}

#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Digraph,
    /// Old vertex to new vertex.
    pub vertex_map: Vec<VertexId>,
    /// `Ψ`: new arc id to the old arc it came from.
    pub provenance: Vec<ArcId>,
    pub records: Vec<ContractionRecord>,
    first_contracted: VertexId,
}

impl Contraction {
    /// The record whose `v_X` is `v`, if `v` is a contracted vertex.
    pub fn record_index(&self, v: VertexId) -> Option<usize> {
        v.checked_sub(self.first_contracted)
            .filter(|&j| j < self.records.len())
    }
}

/// Contracts each member of `family` (pairwise disjoint, nonempty) to a single
/// vertex.
///
/// Arcs with both ends inside one member are removed; every other arc
/// survives with its endpoints mapped, so arcs running between two members
/// are reattached at both ends. Surviving vertices keep their relative order
/// and are numbered first; the contracted vertices follow in family order.
/// Surviving arcs keep their relative order.
pub fn contract<W: PartialOrd + Copy>(
    g: &Digraph,
    family: &[VertexSet],
    f: &ArcSubset,
    weights: &[W],
) -> Result<Contraction> {
    check_subset(g, f)?;
    if weights.len() != g.arc_count() {
        return Err(Error::LengthMismatch {
            what: "weights",
            expected: g.arc_count(),
            actual: weights.len(),
        });
    }
    const NONE: usize = usize::MAX;
    let mut owner = vec![NONE; g.n];
    for (j, x) in family.iter().enumerate() {
        if x.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        check_set(g, x)?;
        for &v in x.iter() {
            if owner[v] != NONE {
                return Err(Error::Precondition(format!(
                    "contracted sets overlap at vertex {v}"
                )));
            }
            owner[v] = j;
        }
    }

    let mut vertex_map = vec![NONE; g.n];
    let mut next = 0;
    for v in 0..g.n {
        if owner[v] == NONE {
            vertex_map[v] = next;
            next += 1;
        }
    }
    let first_contracted = next;
    for v in 0..g.n {
        if owner[v] != NONE {
            vertex_map[v] = first_contracted + owner[v];
        }
    }
    let new_n = first_contracted + family.len();

    let mut internal: Vec<Vec<ArcId>> = vec![Vec::new(); family.len()];
    for a in f.iter() {
        let Arc { tail, head } = g.arcs[a];
        if owner[tail] != NONE && owner[tail] == owner[head] {
            internal[owner[head]].push(a);
        }
    }

    let mut arcs = Vec::with_capacity(g.arc_count());
    let mut provenance = Vec::with_capacity(g.arc_count());
    for (id, a) in g.arcs.iter().enumerate() {
        if owner[a.tail] != NONE && owner[a.tail] == owner[a.head] {
            continue;
        }
        arcs.push(Arc {
            tail: vertex_map[a.tail],
            head: vertex_map[a.head],
        });
        provenance.push(id);
    }

    let records = family
        .iter()
        .zip(internal)
        .enumerate()
        .map(|(j, (x, inner))| {
            let min_arc = inner.iter().copied().reduce(|best, a| {
                if weights[a] < weights[best] {
                    a
                } else {
                    best
                }
            });
            ContractionRecord {
                members: x.clone(),
                vertex: first_contracted + j,
                internal: ArcSubset(inner),
                min_arc,
            }
        })
        .collect();

    Ok(Contraction {
        graph: Digraph { n: new_n, arcs },
        vertex_map,
        provenance,
        records,
        first_contracted,
    })
}
