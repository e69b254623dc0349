//! Arc-disjoint b-branchings with prescribed indegrees.
//!
//! For demand vectors `b_1, ..., b_k` with `b_i ≤ b` and `b_i ≠ b`, there are
//! disjoint b-branchings `B_i` with `d⁻_{B_i} = b_i` iff
//!
//! ```text
//! d⁻_A(v) ≥ Σ_i b_i(v)    for every vertex v,
//! d⁻_A(X) ≥ g(X)          for every X ⊆ V,
//! ```
//!
//! where `g(X)` counts the indices `i` with `b_i(X) = b(X) ≠ 0`. The second
//! family is checked by minimizing `h = d⁻_A − g` with an [`SfmBackend`].
//! `g` is supermodular on intersecting pairs only (`g(∅) = 0` breaks it for
//! disjoint ones), so backends must not assume full submodularity of `h`.
//!
//! The construction adds one arc at a time. For the active index `i`, split
//! `V` into `V_0`, `V_1`, `V_2` by `b_i(v) = 0`, `0 < b_i(v) < b(v)` and
//! `b_i(v) = b(v)`, take an inclusionwise-minimal `W` with `d⁻_A(W) = g(W)`
//! meeting `V_0 ∪ V_1` and leaving `V_0`, and move an arc with tail in
//! `W ∩ (V_0 ∪ V_1)` and head in `W \ V_0` from `A` into `B_i`. This keeps both
//! conditions, which is re-checked after every step.

use crate::digraph::{Arc, ArcId, ArcSubset, Digraph, VertexId, VertexSet};
use crate::error::{Error, Result, Witness};
use crate::matroids::{tight_components, BBranching, CapacityVector, DemandVector};
use crate::oracle::{BruteForceSfm, SizeGate};
use crate::weights::{Rational, WeightVector};

/// Vertex sets are passed to [`SfmBackend`]s as bit masks.
pub const MASK_VERTICES: usize = 63;

/// Minimizer of set functions over subsets of `{0, ..., n−1}`.
pub trait SfmBackend {
    /// Minimizes `h` over the masks accepted by `allowed`. A minimizer of
    /// smallest cardinality is returned, so it is inclusionwise minimal;
    /// remaining ties go to the lexicographically smallest member list.
    /// `None` when no mask is allowed.
    fn minimize(
        &self,
        n: usize,
        h: &dyn Fn(u64) -> i64,
        allowed: &dyn Fn(u64) -> bool,
    ) -> Result<Option<SetMinimum>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetMinimum {
    pub set: u64,
    pub value: i64,
}

pub fn mask_members(mask: u64) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

pub fn mask_of(set: &[VertexId]) -> u64 {
    set.iter().fold(0, |m, &v| m | (1u64 << v))
}

/// Order used to break ties between minimizers: smaller cardinality first,
/// then lexicographic order of the sorted member lists.
pub fn precedes(a: u64, b: u64) -> bool {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    if ca != cb {
        return ca < cb;
    }
    // the smallest element of the symmetric difference decides
    let d = a ^ b;
    d != 0 && a & d & d.wrapping_neg() != 0
}

pub(crate) fn check_mask_size(n: usize) -> Result<()> {
    if n > MASK_VERTICES {
        return Err(Error::SizeGate {
            what: "vertices",
            actual: n,
            limit: MASK_VERTICES,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingInstance {
    graph: Digraph,
    capacities: CapacityVector,
    demands: Vec<DemandVector>,
}

impl PackingInstance {
    pub fn new(graph: Digraph, capacities: CapacityVector, demands: Vec<DemandVector>) -> Result<Self> {
        capacities.check_domain(&graph)?;
        if demands.is_empty() {
            return Err(Error::InvalidDemand("at least one demand vector is required".into()));
        }
        for d in &demands {
            d.validate_against(&capacities)?;
        }
        Ok(PackingInstance {
            graph,
            capacities,
            demands,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn capacities(&self) -> &CapacityVector {
        &self.capacities
    }

    pub fn demands(&self) -> &[DemandVector] {
        &self.demands
    }

    pub fn k(&self) -> usize {
        self.demands.len()
    }
}

/// `k` arc sets, one per demand vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingResult {
    parts: Vec<ArcSubset>,
}

impl PackingResult {
    pub fn parts(&self) -> &[ArcSubset] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<ArcSubset> {
        self.parts
    }

    /// Checks disjointness, the b-branching property and exact indegrees.
    pub fn validate(&self, inst: &PackingInstance) -> Result<()> {
        let g = inst.graph();
        if self.parts.len() != inst.k() {
            return Err(Error::LengthMismatch {
                what: "packing",
                expected: inst.k(),
                actual: self.parts.len(),
            });
        }
        let mut owner = vec![false; g.arc_count()];
        for (i, part) in self.parts.iter().enumerate() {
            for a in part.iter() {
                if a >= g.arc_count() {
                    return Err(Error::UnknownArc { arc: a, m: g.arc_count() });
                }
                if owner[a] {
                    return Err(Error::DuplicateArc(a));
                }
                owner[a] = true;
            }
            let bb = BBranching::new(g, inst.capacities(), part.clone())?;
            let want = inst.demands()[i].as_slice();
            if bb.indegrees().iter().zip(want).any(|(&d, &t)| d != t as usize) {
                return Err(Error::Precondition(format!(
                    "part {i} does not meet its prescribed indegrees"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of a feasibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Violated(Witness),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            Feasibility::Feasible => Ok(()),
            Feasibility::Violated(w) => Err(Error::Infeasible(w)),
        }
    }
}

/// `g(X) = |{i : b_i(X) = b(X) ≠ 0}|`.
pub fn g_value(inst: &PackingInstance, x: &VertexSet) -> u32 {
    let bx = inst.capacities().sum_over(x);
    if bx == 0 {
        return 0;
    }
    inst.demands()
        .iter()
        .filter(|d| x.iter().map(|&v| u64::from(d.get(v))).sum::<u64>() == bx)
        .count() as u32
}

/// `d⁻_A(X)`: arcs with head in `X` and tail outside.
pub fn entering_count(g: &Digraph, x: &VertexSet) -> usize {
    let ind = x.indicator(g.vertex_count());
    g.arcs()
        .iter()
        .filter(|a| ind[a.head] && !ind[a.tail])
        .count()
}

/// `d⁻_A(X) − g(X)`, nonnegative on every set exactly when the cut
/// conditions hold.
pub fn cut_surplus(inst: &PackingInstance, x: &VertexSet) -> i64 {
    entering_count(inst.graph(), x) as i64 - i64::from(g_value(inst, x))
}

/// Up to this many vertices, `h` is tabulated over all sets at once.
const TABLE_VERTICES: usize = 20;

/// Remaining arcs and demands during a construction.
#[derive(Clone)]
struct Residual<'a> {
    g: &'a Digraph,
    b: &'a [u32],
    alive: Vec<bool>,
    demand: Vec<Vec<u32>>,
}

impl<'a> Residual<'a> {
    fn new(inst: &'a PackingInstance, alive: Vec<bool>) -> Self {
        Residual {
            g: inst.graph(),
            b: inst.capacities().as_slice(),
            alive,
            demand: inst.demands().iter().map(|d| d.as_slice().to_vec()).collect(),
        }
    }

    fn n(&self) -> usize {
        self.g.vertex_count()
    }

    fn alive_arcs(&self) -> impl Iterator<Item = (ArcId, Arc)> + '_ {
        self.g
            .arcs()
            .iter()
            .enumerate()
            .filter(|(id, _)| self.alive[*id])
            .map(|(id, &a)| (id, a))
    }

    /// First vertex failing `d⁻_A(v) ≥ Σ_i b_i(v)`.
    fn degree_violation(&self) -> Option<VertexId> {
        let mut indeg = vec![0u64; self.n()];
        for (_, a) in self.alive_arcs() {
            indeg[a.head] += 1;
        }
        (0..self.n()).find(|&v| {
            let need: u64 = self.demand.iter().map(|d| u64::from(d[v])).sum();
            indeg[v] < need
        })
    }

    fn h_at(&self, mask: u64) -> i64 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let cut = self
            .alive_arcs()
            .filter(|(_, a)| inside(a.head) && !inside(a.tail))
            .count() as i64;
        if mask == 0 {
            return cut;
        }
        let members = mask_members(mask);
        let bx: u64 = members.iter().map(|&v| u64::from(self.b[v])).sum();
        let g = self
            .demand
            .iter()
            .filter(|d| members.iter().map(|&v| u64::from(d[v])).sum::<u64>() == bx)
            .count() as i64;
        cut - g
    }

    /// `h` over all `2^n` masks.
    fn h_table(&self) -> Vec<i64> {
        let n = self.n();
        let full = 1usize << n;
        // into[v][u] = alive arcs u -> v, loops excluded
        let mut into = vec![vec![0i64; n]; n];
        for (_, a) in self.alive_arcs() {
            if a.tail != a.head {
                into[a.head][a.tail] += 1;
            }
        }
        let mut cut = vec![0i64; full];
        let mut bsum = vec![0u64; full];
        let mut dsum = vec![vec![0u64; full]; self.demand.len()];
        let mut h = vec![0i64; full];
        for mask in 1..full {
            let v = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut c = cut[rest];
            for (u, row) in into.iter().enumerate() {
                if mask >> u & 1 == 0 {
                    c += into[v][u];
                } else if rest >> u & 1 == 1 {
                    c -= row[v];
                }
            }
            cut[mask] = c;
            bsum[mask] = bsum[rest] + u64::from(self.b[v]);
            let mut g = 0;
            for (i, d) in self.demand.iter().enumerate() {
                let s = dsum[i][rest] + u64::from(d[v]);
                dsum[i][mask] = s;
                if s == bsum[mask] {
                    g += 1;
                }
            }
            h[mask] = c - g;
        }
        h
    }

    fn minimize_h(
        &self,
        sfm: &dyn SfmBackend,
        allowed: &dyn Fn(u64) -> bool,
    ) -> Result<Option<SetMinimum>> {
        let n = self.n();
        check_mask_size(n)?;
        if n <= TABLE_VERTICES {
            let table = self.h_table();
            sfm.minimize(n, &|m| table[m as usize], allowed)
        } else {
            sfm.minimize(n, &|m| self.h_at(m), allowed)
        }
    }

    fn conditions(&self, sfm: &dyn SfmBackend) -> Result<Feasibility> {
        if let Some(v) = self.degree_violation() {
            return Ok(Feasibility::Violated(Witness::Vertex(v)));
        }
        match self.minimize_h(sfm, &|_| true)? {
            Some(SetMinimum { set, value }) if value < 0 => {
                Ok(Feasibility::Violated(Witness::Set(mask_members(set))))
            }
            _ => Ok(Feasibility::Feasible),
        }
    }

    /// The arc chosen by the construction for index `i`, or `None` if no
    /// set `W` or no arc qualifies (impossible while the conditions hold).
    fn claim_arc(&self, i: usize, sfm: &dyn SfmBackend) -> Result<Option<ArcId>> {
        let n = self.n();
        let d = &self.demand[i];
        let v0 = mask_of(&(0..n).filter(|&v| d[v] == 0).collect::<Vec<_>>());
        let v2 = mask_of(&(0..n).filter(|&v| d[v] == self.b[v]).collect::<Vec<_>>());
        let low = !v2 & ((1u64 << n) - 1); // V_0 ∪ V_1
        let allowed = |m: u64| m & low != 0 && m & !v0 != 0;
        let Some(SetMinimum { set: w, value }) = self.minimize_h(sfm, &allowed)? else {
            return Ok(None);
        };
        if value != 0 {
            return Err(Error::Internal(format!(
                "no tight set for the construction step (minimum {value})"
            )));
        }
        let tails = w & low;
        let heads = w & !v0;
        Ok(self
            .alive_arcs()
            .find(|(_, a)| tails >> a.tail & 1 == 1 && heads >> a.head & 1 == 1)
            .map(|(id, _)| id))
    }
}

/// State of a construction: residual instance plus the parts built so far.
struct Builder<'a> {
    inst: &'a PackingInstance,
    sfm: &'a dyn SfmBackend,
    residual: Residual<'a>,
    parts: Vec<Vec<ArcId>>,
}

impl<'a> Builder<'a> {
    fn new(inst: &'a PackingInstance, sfm: &'a dyn SfmBackend, alive: Vec<bool>) -> Self {
        Builder {
            inst,
            sfm,
            residual: Residual::new(inst, alive),
            parts: vec![Vec::new(); inst.k()],
        }
    }

    /// Next index with positive remaining demand, starting at `cursor`.
    fn active(&self, cursor: usize) -> Option<usize> {
        let k = self.inst.k();
        (0..k)
            .map(|t| (cursor + t) % k)
            .find(|&i| self.residual.demand[i].iter().any(|&d| d > 0))
    }

    /// Whether `B_i + a` is still sparsity-independent. Indegrees never
    /// exceed `b_i ≤ b` because only heads with remaining demand are used.
    fn extends(&self, i: usize, a: ArcId) -> bool {
        let mut part = self.parts[i].clone();
        part.push(a);
        part.sort_unstable();
        tight_components(self.inst.graph(), self.inst.capacities().as_slice(), &part).is_empty()
    }

    fn apply(&mut self, i: usize, a: ArcId) {
        self.residual.alive[a] = false;
        self.residual.demand[i][self.inst.graph().arc(a).head] -= 1;
        self.parts[i].push(a);
    }

    /// Follows the construction step by step, checking each step.
    fn run_direct(&mut self) -> Result<()> {
        let mut cursor = 0;
        while let Some(i) = self.active(cursor) {
            let a = self.residual.claim_arc(i, self.sfm)?.ok_or_else(|| {
                Error::Internal("no arc satisfies the construction rule".into())
            })?;
            if !self.extends(i, a) {
                return Err(Error::Internal(format!(
                    "arc {a} would make part {i} violate sparsity"
                )));
            }
            self.apply(i, a);
            if let Feasibility::Violated(w) = self.residual.conditions(self.sfm)? {
                return Err(Error::Internal(format!(
                    "packing conditions fail at {w} after moving arc {a} into part {i}"
                )));
            }
            cursor = i + 1;
        }
        Ok(())
    }

    fn finish(self) -> Result<PackingResult> {
        let parts = self
            .parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                ArcSubset::from_sorted(p)
            })
            .collect();
        let result = PackingResult { parts };
        result
            .validate(self.inst)
            .map_err(|e| Error::Internal(format!("constructed packing is invalid: {e}")))?;
        Ok(result)
    }
}

pub fn check_packing_conditions(inst: &PackingInstance) -> Result<Feasibility> {
    check_packing_conditions_with(inst, &BruteForceSfm::default())
}

pub fn check_packing_conditions_with(
    inst: &PackingInstance,
    sfm: &dyn SfmBackend,
) -> Result<Feasibility> {
    Residual::new(inst, vec![true; inst.graph().arc_count()]).conditions(sfm)
}

/// Constructs the packing, or fails with [`Error::Infeasible`] carrying the
/// violated vertex or set.
pub fn find_disjoint_b_branchings(inst: &PackingInstance) -> Result<PackingResult> {
    find_disjoint_b_branchings_with(inst, &BruteForceSfm::default())
}

pub fn find_disjoint_b_branchings_with(
    inst: &PackingInstance,
    sfm: &dyn SfmBackend,
) -> Result<PackingResult> {
    let mut builder = Builder::new(inst, sfm, vec![true; inst.graph().arc_count()]);
    builder.residual.conditions(sfm)?.into_result()?;
    builder.run_direct()?;
    builder.finish()
}

/// A b-branching with indegree exactly `b_prime`, if one exists.
pub fn exists_b_branching_with_indegree(
    g: &Digraph,
    b: &CapacityVector,
    b_prime: &DemandVector,
) -> Result<Option<BBranching>> {
    let inst = PackingInstance::new(g.clone(), b.clone(), vec![b_prime.clone()])?;
    match find_disjoint_b_branchings(&inst) {
        Ok(result) => {
            let arcs = result.into_parts().pop().expect("one part");
            BBranching::new(g, b, arcs).map(Some)
        }
        Err(Error::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// A packing of minimum total weight, by exhaustive search.
///
/// Every candidate union `U` takes exactly `Σ_i b_i(v)` arcs into each `v`;
/// the lightest `U` that satisfies the cut conditions is then split by the
/// construction. Only for instances within `gate`.
pub fn min_weight_disjoint_b_branchings(
    inst: &PackingInstance,
    w: &WeightVector,
    gate: &SizeGate,
) -> Result<(PackingResult, Rational)> {
    let g = inst.graph();
    let m = g.arc_count();
    gate.check_arcs(m)?;
    gate.check_vertices(g.vertex_count())?;
    if w.len() != m {
        return Err(Error::LengthMismatch {
            what: "weight vector",
            expected: m,
            actual: w.len(),
        });
    }
    let sfm = BruteForceSfm::new(*gate);
    check_packing_conditions_with(inst, &sfm)?.into_result()?;

    let need: Vec<usize> = (0..g.vertex_count())
        .map(|v| inst.demands().iter().map(|d| d.get(v) as usize).sum())
        .collect();
    let in_lists = g.in_arc_lists();
    let mut best: Option<(i128, Vec<bool>)> = None;
    let mut alive = vec![false; m];
    choose_per_vertex(
        &mut ChoiceCtx {
            inst,
            sfm: &sfm,
            w: w.numerators(),
            need: &need,
            in_lists: &in_lists,
            best: &mut best,
        },
        0,
        0,
        &mut alive,
    )?;
    let (total, alive) = best.ok_or_else(|| {
        Error::Internal("cut conditions hold but no arc set supports a packing".into())
    })?;
    let mut builder = Builder::new(inst, &sfm, alive);
    builder.run_direct()?;
    Ok((builder.finish()?, w.unscale(total)))
}

struct ChoiceCtx<'a> {
    inst: &'a PackingInstance,
    sfm: &'a dyn SfmBackend,
    w: &'a [i128],
    need: &'a [usize],
    in_lists: &'a [Vec<ArcId>],
    best: &'a mut Option<(i128, Vec<bool>)>,
}

fn choose_per_vertex(ctx: &mut ChoiceCtx<'_>, v: usize, weight: i128, alive: &mut Vec<bool>) -> Result<()> {
    if v == ctx.need.len() {
        if ctx.best.as_ref().is_some_and(|(b, _)| *b <= weight) {
            return Ok(());
        }
        let residual = Residual::new(ctx.inst, alive.clone());
        if residual.conditions(ctx.sfm)?.is_feasible() {
            *ctx.best = Some((weight, alive.clone()));
        }
        return Ok(());
    }
    let arcs = &ctx.in_lists[v];
    let k = ctx.need[v];
    if k > arcs.len() {
        return Ok(());
    }
    // lexicographic k-combinations of the arcs entering v
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let add: i128 = idx.iter().map(|&j| ctx.w[arcs[j]]).sum();
        for &j in &idx {
            alive[arcs[j]] = true;
        }
        choose_per_vertex(ctx, v + 1, weight + add, alive)?;
        for &j in &idx {
            alive[arcs[j]] = false;
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < arcs.len() - k + p) else {
            break;
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, arcs: &[(usize, usize)], b: &[u32], demands: &[&[u32]]) -> PackingInstance {
        PackingInstance::new(
            Digraph::new(n, arcs.iter().copied()).unwrap(),
            CapacityVector::new(b.to_vec()).unwrap(),
            demands.iter().map(|d| DemandVector::new(d.to_vec())).collect(),
        )
        .unwrap()
    }

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::from_unsorted(v.iter().copied()).unwrap()
    }

    #[test]
    fn precedence_order() {
        assert!(precedes(0b1, 0b11));
        assert!(precedes(0b1001, 0b0110));
        assert!(!precedes(0b0110, 0b1001));
        assert!(!precedes(0b101, 0b101));
    }

    #[test]
    fn g_examples() {
        let p = inst(2, &[], &[1, 1], &[&[1, 0]]);
        assert_eq!(g_value(&p, &vs(&[])), 0);
        assert_eq!(g_value(&p, &vs(&[0, 1])), 0);
        assert_eq!(g_value(&p, &vs(&[0])), 1);
        assert_eq!(g_value(&p, &vs(&[1])), 0);
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let p = inst(
            4,
            &[(0, 1), (1, 2), (2, 0), (3, 1), (1, 1), (2, 3), (2, 3)],
            &[1, 2, 1, 2],
            &[&[0, 1, 1, 1], &[1, 2, 0, 0]],
        );
        let r = Residual::new(&p, vec![true; 7]);
        let t = r.h_table();
        for mask in 0..16u64 {
            assert_eq!(t[mask as usize], r.h_at(mask), "mask {mask:b}");
            assert_eq!(t[mask as usize], cut_surplus(&p, &vs(&mask_members(mask))));
        }
    }

    #[test]
    fn conditions_examples() {
        let p = inst(2, &[], &[1, 1], &[&[0, 0], &[0, 0]]);
        assert_eq!(check_packing_conditions(&p).unwrap(), Feasibility::Feasible);

        let p = inst(2, &[(0, 1)], &[1, 1], &[&[0, 1]]);
        assert_eq!(check_packing_conditions(&p).unwrap(), Feasibility::Feasible);

        let p = inst(2, &[], &[1, 1], &[&[0, 1]]);
        assert_eq!(
            check_packing_conditions(&p).unwrap(),
            Feasibility::Violated(Witness::Vertex(1))
        );

        // 2-cycle with a pendant root: indegrees fine but {1,2} is unreachable
        let p = inst(3, &[(1, 2), (2, 1)], &[1, 1, 1], &[&[0, 1, 1]]);
        assert_eq!(
            check_packing_conditions(&p).unwrap(),
            Feasibility::Violated(Witness::Set(vec![1, 2]))
        );
        assert!(matches!(find_disjoint_b_branchings(&p), Err(Error::Infeasible(_))));
    }

    #[test]
    fn arborescence_is_unique_packing() {
        let arcs = [(0, 1), (0, 2), (2, 3), (2, 4)];
        let p = inst(5, &arcs, &[1; 5], &[&[0, 1, 1, 1, 1]]);
        let r = find_disjoint_b_branchings(&p).unwrap();
        assert_eq!(r.parts()[0].as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn two_disjoint_arborescences() {
        // complete digraph on 3 vertices rooted at 0, twice
        let arcs = [(0, 1), (0, 2), (1, 2), (2, 1), (0, 1), (0, 2)];
        let p = inst(3, &arcs, &[1; 3], &[&[0, 1, 1], &[0, 1, 1]]);
        let r = find_disjoint_b_branchings(&p).unwrap();
        r.validate(&p).unwrap();
    }

    #[test]
    fn loop_can_be_packed_with_capacity_two() {
        let p = inst(1, &[(0, 0)], &[2], &[&[1]]);
        let r = find_disjoint_b_branchings(&p).unwrap();
        assert_eq!(r.parts()[0].as_slice(), &[0]);
    }

    #[test]
    fn prescribed_indegree_examples() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        let b = CapacityVector::uniform(2, 1).unwrap();
        let zero = exists_b_branching_with_indegree(&g, &b, &DemandVector::zeros(2)).unwrap();
        assert!(zero.unwrap().is_empty());
        let root0 =
            exists_b_branching_with_indegree(&g, &b, &DemandVector::new(vec![0, 1])).unwrap();
        assert_eq!(root0.unwrap().arcs().as_slice(), &[0]);
        assert!(exists_b_branching_with_indegree(&g, &b, &DemandVector::new(vec![1, 0]))
            .unwrap()
            .is_none());
        assert!(matches!(
            exists_b_branching_with_indegree(&g, &b, &DemandVector::new(vec![1, 1])),
            Err(Error::InvalidDemand(_))
        ));
    }

    #[test]
    fn min_weight_prefers_light_arcs() {
        let arcs = [(0, 1), (0, 1), (1, 2), (0, 2)];
        let p = inst(3, &arcs, &[1; 3], &[&[0, 1, 1]]);
        let w = WeightVector::from_integers([5, 2, 1, 4]);
        let (r, total) = min_weight_disjoint_b_branchings(&p, &w, &SizeGate::default()).unwrap();
        assert_eq!(r.parts()[0].as_slice(), &[1, 2]);
        assert_eq!(total, Rational::from_integer(3));
    }
}
