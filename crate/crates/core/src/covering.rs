//! Covering arc sets by `k` b-branchings and decomposing integer points of
//! `k` times the b-branching polytope.
//!
//! `A` is the union of `k` b-branchings iff `d⁻_A(v) ≤ k·b(v)` for every
//! vertex and `|A[X]| ≤ k(b(X) − 1)` for every nonempty `X`. The cover is
//! built by adding a root `r` with `k·b(v) − d⁻_A(v)` parallel arcs into
//! each `v` and packing `k` b-branchings of indegree `b` on `V` and 0 at `r`,
//! so the parts partition `A`.
//!
//! An integer vector `x` with `x ≤ k` is decomposed by running the same
//! construction on the multigraph with `x(a)` copies of each arc `a`. A part
//! may then hold two copies of one arc, which is not a 0/1 vector. In that
//! case the copies are assigned to parts directly by a backtracking search.

use crate::digraph::{ArcId, ArcSubset, Digraph};
use crate::error::{Error, Result, Witness};
use crate::matroids::{tight_components, BBranching, CapacityVector, DemandVector};
use crate::oracle::BruteForceSfm;
use crate::packing::{
    check_mask_size, find_disjoint_b_branchings_with, mask_members,
    Feasibility, PackingInstance, SetMinimum, SfmBackend,
};

/// Node limit for the assignment search of [`integer_decompose`].
pub const DECOMPOSE_BUDGET: usize = 2_000_000;

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("the number of parts k must be positive".into()));
    }
    Ok(())
}

/// `k(b(X) − 1) − |A[X]|` for every mask.
fn slack_table(g: &Digraph, b: &[u32], k: i64) -> Vec<i64> {
    let n = g.vertex_count();
    let full = 1usize << n;
    // adj[v][u] = arcs between v and u in either direction, loops once
    let mut adj = vec![vec![0i64; n]; n];
    for a in g.arcs() {
        adj[a.head][a.tail] += 1;
        if a.head != a.tail {
            adj[a.tail][a.head] += 1;
        }
    }
    let mut inside = vec![0i64; full];
    let mut cap = vec![0i64; full];
    let mut slack = vec![0i64; full];
    for mask in 1..full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut add = adj[v][v];
        for (u, &c) in adj[v].iter().enumerate() {
            if rest >> u & 1 == 1 {
                add += c;
            }
        }
        inside[mask] = inside[rest] + add;
        cap[mask] = cap[rest] + i64::from(b[v]);
        slack[mask] = k * (cap[mask] - 1) - inside[mask];
    }
    slack
}

pub fn check_cover_conditions(g: &Digraph, b: &CapacityVector, k: usize) -> Result<Feasibility> {
    check_cover_conditions_with(g, b, k, &BruteForceSfm::default())
}

pub fn check_cover_conditions_with(
    g: &Digraph,
    b: &CapacityVector,
    k: usize,
    sfm: &dyn SfmBackend,
) -> Result<Feasibility> {
    check_k(k)?;
    b.check_domain(g)?;
    let n = g.vertex_count();
    let mut indeg = vec![0u64; n];
    for a in g.arcs() {
        indeg[a.head] += 1;
    }
    if let Some(v) = (0..n).find(|&v| indeg[v] > k as u64 * u64::from(b.get(v))) {
        return Ok(Feasibility::Violated(Witness::Vertex(v)));
    }
    check_mask_size(n)?;
    let table = slack_table(g, b.as_slice(), k as i64);
    match sfm.minimize(n, &|m| table[m as usize], &|m| m != 0)? {
        Some(SetMinimum { set, value }) if value < 0 => {
            Ok(Feasibility::Violated(Witness::Set(mask_members(set))))
        }
        _ => Ok(Feasibility::Feasible),
    }
}

/// The instance on `D` plus a root, with `k` demand vectors `b` on `V` and
/// `0` at the root.
fn rooted_instance(g: &Digraph, b: &CapacityVector, k: usize) -> Result<PackingInstance> {
    let n = g.vertex_count();
    let mut arcs: Vec<(usize, usize)> = g.arcs().iter().map(|a| (a.tail, a.head)).collect();
    let mut indeg = vec![0usize; n];
    for a in g.arcs() {
        indeg[a.head] += 1;
    }
    for (v, &d) in indeg.iter().enumerate() {
        let extra = k * b.get(v) as usize - d;
        arcs.extend(std::iter::repeat_n((n, v), extra));
    }
    let graph = Digraph::new(n + 1, arcs)?;
    let mut caps = b.as_slice().to_vec();
    caps.push(1);
    let mut demand = b.as_slice().to_vec();
    demand.push(0);
    PackingInstance::new(
        graph,
        CapacityVector::new(caps)?,
        vec![DemandVector::new(demand); k],
    )
}

/// `k` b-branchings partitioning `A`, or [`Error::Infeasible`] with the
/// violated vertex or set.
pub fn cover_by_b_branchings(g: &Digraph, b: &CapacityVector, k: usize) -> Result<Vec<BBranching>> {
    let sfm = BruteForceSfm::default();
    check_cover_conditions_with(g, b, k, &sfm)?.into_result()?;
    let inst = rooted_instance(g, b, k)?;
    let packing = find_disjoint_b_branchings_with(&inst, &sfm)?;
    let m = g.arc_count();
    packing
        .into_parts()
        .into_iter()
        .map(|part| {
            let own: Vec<ArcId> = part.iter().filter(|&a| a < m).collect();
            BBranching::new(g, b, ArcSubset::from_sorted(own))
                .map_err(|e| Error::Internal(format!("cover part is invalid: {e}")))
        })
        .collect()
}

/// Writes `x` as a sum of `k` characteristic vectors of b-branchings.
///
/// Fails with [`Error::Infeasible`] when `x` is not in `k` times the
/// polytope: an arc with `x(a) > k`, or a vertex or set violating the cover
/// conditions on the multigraph of copies.
pub fn integer_decompose(g: &Digraph, b: &CapacityVector, k: usize, x: &[u32]) -> Result<Vec<BBranching>> {
    check_k(k)?;
    b.check_domain(g)?;
    let m = g.arc_count();
    if x.len() != m {
        return Err(Error::LengthMismatch {
            what: "multiplicity vector",
            expected: m,
            actual: x.len(),
        });
    }
    if let Some(a) = (0..m).find(|&a| x[a] as usize > k) {
        return Err(Error::Infeasible(Witness::Arc(a)));
    }
    let mut copies = Vec::new();
    let mut groups = Vec::new();
    for (a, &mult) in x.iter().enumerate() {
        let arc = g.arc(a);
        for _ in 0..mult {
            copies.push((arc.tail, arc.head));
            groups.push(a);
        }
    }
    let gx = Digraph::new(g.vertex_count(), copies)?;
    let sfm = BruteForceSfm::default();
    check_cover_conditions_with(&gx, b, k, &sfm)?.into_result()?;

    let inst = rooted_instance(&gx, b, k)?;
    let mx = gx.arc_count();
    let packing = find_disjoint_b_branchings_with(&inst, &sfm)?;
    let mut parts: Vec<Vec<ArcId>> = packing
        .into_parts()
        .into_iter()
        .map(|part| part.iter().filter(|&a| a < mx).map(|a| groups[a]).collect())
        .collect();
    for p in &mut parts {
        p.sort_unstable();
    }
    if parts.iter().any(|p| p.windows(2).any(|w| w[0] == w[1])) {
        parts = assign_copies(g, b.as_slice(), k, x)?;
    }
    parts
        .into_iter()
        .map(|mut own| {
            own.sort_unstable();
            let arcs = ArcSubset::new(g, own)
                .map_err(|e| Error::Internal(format!("decomposition part repeats an arc: {e}")))?;
            BBranching::new(g, b, arcs)
                .map_err(|e| Error::Internal(format!("decomposition part is invalid: {e}")))
        })
        .collect()
}

/// Places the `x(a)` copies of every arc into distinct parts, keeping each
/// part a b-branching.
fn assign_copies(g: &Digraph, b: &[u32], k: usize, x: &[u32]) -> Result<Vec<Vec<ArcId>>> {
    let mut items: Vec<ArcId> = (0..g.arc_count()).filter(|&a| x[a] > 0).collect();
    // most copies first, then grouped by head
    items.sort_by_key(|&a| (std::cmp::Reverse(x[a]), g.arc(a).head, a));
    let mut s = Assign {
        g,
        b,
        x,
        items,
        parts: vec![Vec::new(); k],
        indeg: vec![vec![0; g.vertex_count()]; k],
        nodes: 0,
    };
    if s.search(0)? {
        Ok(s.parts)
    } else {
        Err(Error::Internal("no assignment keeps the copies of each arc in distinct parts".into()))
    }
}

struct Assign<'a> {
    g: &'a Digraph,
    b: &'a [u32],
    x: &'a [u32],
    items: Vec<ArcId>,
    parts: Vec<Vec<ArcId>>,
    indeg: Vec<Vec<u32>>,
    nodes: usize,
}

impl Assign<'_> {
    fn fits(&mut self, i: usize, a: ArcId) -> bool {
        let v = self.g.arc(a).head;
        if self.indeg[i][v] >= self.b[v] {
            return false;
        }
        self.parts[i].push(a);
        let ok = tight_components(self.g, self.b, &self.parts[i]).is_empty();
        self.parts[i].pop();
        ok
    }

    fn search(&mut self, pos: usize) -> Result<bool> {
        let Some(&a) = self.items.get(pos) else {
            return Ok(true);
        };
        self.nodes += 1;
        if self.nodes > DECOMPOSE_BUDGET {
            return Err(Error::Internal(format!(
                "decomposition search exceeded {DECOMPOSE_BUDGET} nodes"
            )));
        }
        let cands: Vec<usize> = (0..self.parts.len()).filter(|&i| self.fits(i, a)).collect();
        let need = self.x[a] as usize;
        if cands.len() < need {
            return Ok(false);
        }
        let v = self.g.arc(a).head;
        let mut pick: Vec<usize> = (0..need).collect();
        loop {
            let chosen: Vec<usize> = pick.iter().map(|&j| cands[j]).collect();
            if self.canonical(&chosen) {
                for &i in &chosen {
                    self.parts[i].push(a);
                    self.indeg[i][v] += 1;
                }
                if self.search(pos + 1)? {
                    return Ok(true);
                }
                for &i in &chosen {
                    self.parts[i].pop();
                    self.indeg[i][v] -= 1;
                }
            }
            if !next_combination(&mut pick, cands.len()) {
                return Ok(false);
            }
        }
    }

    /// Parts with equal contents are interchangeable, so among them only
    /// the lowest-numbered ones are used.
    fn canonical(&self, chosen: &[usize]) -> bool {
        chosen.iter().all(|&j| {
            (0..j).all(|i| chosen.contains(&i) || self.parts[i] != self.parts[j])
        })
    }
}

/// Advances `pick` to the next `pick.len()`-subset of `0..n` in lexicographic
/// order.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let r = pick.len();
    let Some(i) = (0..r).rev().find(|&i| pick[i] < n - r + i) else {
        return false;
    };
    pick[i] += 1;
    for j in i + 1..r {
        pick[j] = pick[j - 1] + 1;
    }
    true
}
