//! Maximum-weight b-branchings by multi-phase greedy, with dual certificates.
//!
//! Each phase picks, independently at every vertex, the `b(v)` heaviest
//! positive arcs entering it. If some strong component `X` of the picked arcs
//! carries `b(X)` of them, all such components are contracted at once: `X`
//! becomes one vertex of capacity 1, and an arc `a` entering `y ∈ X` is
//! reweighted to `w(a) − w(α(a)) + w(a_X)`, where `α(a)` is the lightest
//! picked arc into `y` and `a_X` the lightest picked arc inside `X`. When no
//! component is tight, the phases are undone in reverse order: a component
//! entered by the solution trades the `α` arc of the entering arc's head for
//! it; a component not entered drops `a_X`.
//!
//! Every phase costs `O(|A| log |A|)`. Each phase merges vertices or
//! deletes the loops at a tight vertex, so there are at most `2|V|` phases,
//! and at most `|V|` without loops.
//!
//! The dual solution is read off the same run. A contracted set `X` receives
//!
//! ```text
//! p(X) = min( w(a_X), min over arcs a = (z, y) entering X of λ(y) − w(a) )
//! ```
//!
//! in the weights of its phase, where `λ(y)` is the weight of the lightest
//! picked arc into `y`. A vertex receives `p(v) = θ(v) − Σ_{X ∋ v} p(X)`
//! where `θ(v)` is the `b(v)`-th largest positive weight entering `v` (zero if
//! there are fewer), and `q(a)` absorbs the remaining excess. Both stay
//! nonnegative, and the pair satisfies complementary slackness with the
//! returned arc set, so it is optimal. Integer weights give an integer
//! certificate.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::digraph::{contract, Arc, ArcId, ArcSubset, Contraction, Digraph, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::laminar::LaminarForest;
use crate::matroids::{is_b_branching, tight_components, BBranching, CapacityVector};
use crate::weights::{serde_rational, serde_rational_vec, Rational, WeightVector};

/// A maximum-weight independent set of the indegree matroid of `(g, b)`:
/// at each vertex the `min(b(v), #positive)` heaviest entering arcs of
/// strictly positive weight, ties broken towards smaller arc ids.
pub fn max_weight_indegree_set(g: &Digraph, b: &[u32], w: &[i128]) -> Vec<ArcId> {
    let mut by_head: Vec<Vec<ArcId>> = vec![Vec::new(); g.vertex_count()];
    for (id, a) in g.arcs().iter().enumerate() {
        if w[id] > 0 {
            by_head[a.head].push(id);
        }
    }
    let mut picked = Vec::new();
    for (v, cands) in by_head.iter_mut().enumerate() {
        let k = b[v] as usize;
        if cands.is_empty() || k == 0 {
            continue;
        }
        let key = |a: &ArcId| (std::cmp::Reverse(w[*a]), *a);
        if cands.len() > k {
            cands.select_nth_unstable_by_key(k - 1, key);
            cands.truncate(k);
        }
        picked.extend_from_slice(cands);
    }
    picked.sort_unstable();
    picked
}

/// One contraction step of a run.
#[derive(Clone, Debug)]
pub struct PhaseRecord {
    /// Phase index `i`.
    pub index: usize,
    /// `F⁽ⁱ⁾`, in arc ids of the phase-`i` graph.
    pub selected: ArcSubset,
    /// Contraction of the tight components of `F⁽ⁱ⁾`.
    pub contraction: Contraction,
    /// `α(a, F⁽ⁱ⁾)` for each phase-`i` arc entering a contracted set.
    pub alpha: Vec<Option<ArcId>>,
    /// The contracted sets in original vertex ids, aligned with
    /// `contraction.records`.
    pub original_sets: Vec<VertexSet>,
    /// `p(X)` for each contracted set, on the weight vector's scale.
    pub set_potentials: Vec<i128>,
}

/// Everything a completed run leaves behind.
#[derive(Clone, Debug)]
pub struct GreedyRun {
    pub phases: Vec<PhaseRecord>,
    /// Selection of the last phase, where nothing was tight.
    pub last_selected: ArcSubset,
    /// The maximum-weight b-branching, in original arc ids.
    pub branching: ArcSubset,
    graph: Digraph,
    capacities: CapacityVector,
    weights: WeightVector,
}

impl GreedyRun {
    pub fn phase_count(&self) -> usize {
        self.phases.len() + 1
    }
}

/// The graph, capacities and weights of the current phase.
pub(crate) struct PhaseState {
    pub(crate) graph: Digraph,
    pub(crate) capacities: Vec<u32>,
    pub(crate) weights: Vec<i128>,
    /// Original vertices represented by each current vertex.
    pub(crate) members: Vec<Vec<VertexId>>,
    /// The original vertex behind each current vertex that was never
    /// contracted.
    pub(crate) original: Vec<Option<VertexId>>,
    /// Original arc id of each current arc.
    pub(crate) origin: Vec<ArcId>,
}

impl PhaseState {
    /// Phase-0 state on the arcs in `kept`.
    pub(crate) fn initial(g: &Digraph, b: &[u32], w: &[i128], kept: &[ArcId]) -> Result<Self> {
        Ok(PhaseState {
            graph: Digraph::new(
                g.vertex_count(),
                kept.iter().map(|&a| (g.arc(a).tail, g.arc(a).head)),
            )?,
            capacities: b.to_vec(),
            weights: kept.iter().map(|&a| w[a]).collect(),
            members: (0..g.vertex_count()).map(|v| vec![v]).collect(),
            original: (0..g.vertex_count()).map(Some).collect(),
            origin: kept.to_vec(),
        })
    }
}

pub(crate) fn check_inputs(g: &Digraph, b: &CapacityVector, w: &WeightVector) -> Result<()> {
    b.check_domain(g)?;
    if w.len() != g.arc_count() {
        return Err(Error::LengthMismatch {
            what: "weight vector",
            expected: g.arc_count(),
            actual: w.len(),
        });
    }
    Ok(())
}

/// Runs the multi-phase greedy algorithm. Arcs of negative weight are
/// discarded up front; zero-weight arcs are kept but never picked.
pub fn run_greedy(g: &Digraph, b: &CapacityVector, w: &WeightVector) -> Result<GreedyRun> {
    check_inputs(g, b, w)?;
    let kept: Vec<ArcId> = (0..g.arc_count())
        .filter(|&a| w.numerators()[a] >= 0)
        .collect();
    let mut state = PhaseState::initial(g, b.as_slice(), w.numerators(), &kept)?;

    let mut phases = Vec::new();
    let last_selected = loop {
        let selected = max_weight_indegree_set(&state.graph, &state.capacities, &state.weights);
        let family = tight_components(&state.graph, &state.capacities, &selected);
        if family.is_empty() {
            break ArcSubset::from_sorted(selected);
        }
        let lightest = lightest_into(&state, &selected);
        let alpha = |a: ArcId| {
            lightest[state.graph.arc(a).head]
                .ok_or_else(|| Error::Internal("vertex of a tight component is unsaturated".into()))
        };
        let (next, record) = contract_phase(phases.len(), &state, selected, &family, alpha)?;
        phases.push(record);
        state = next;
    };

    let branching = unwind(&phases, &last_selected, &kept);
    let branching = ArcSubset::from_sorted(branching);
    debug_assert!(is_b_branching(g, b, &branching).unwrap_or(false));
    Ok(GreedyRun {
        phases,
        last_selected,
        branching,
        graph: g.clone(),
        capacities: b.clone(),
        weights: w.clone(),
    })
}

/// Lightest selected arc into each vertex, smaller id on ties.
fn lightest_into(state: &PhaseState, selected: &[ArcId]) -> Vec<Option<ArcId>> {
    let w = &state.weights;
    let mut lightest: Vec<Option<ArcId>> = vec![None; state.graph.vertex_count()];
    for &a in selected {
        let h = state.graph.arc(a).head;
        match lightest[h] {
            Some(c) if w[c] <= w[a] => {}
            _ => lightest[h] = Some(a),
        }
    }
    lightest
}

/// Steps 3 and 4 for one phase: contracts the tight family and reweights the
/// arcs entering it. `alpha_of` names, for an arc entering a member of the
/// family, the selected arc it is charged against.
pub(crate) fn contract_phase(
    index: usize,
    state: &PhaseState,
    selected: Vec<ArcId>,
    family: &[VertexSet],
    mut alpha_of: impl FnMut(ArcId) -> Result<ArcId>,
) -> Result<(PhaseState, PhaseRecord)> {
    let g = &state.graph;
    let w = &state.weights;
    let n = g.vertex_count();

    let selected = ArcSubset::from_sorted(selected);
    let contraction = contract(g, family, &selected, w)?;

    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (j, x) in family.iter().enumerate() {
        for &v in x.iter() {
            owner[v] = Some(j);
        }
    }

    let min_weights: Vec<i128> = contraction
        .records
        .iter()
        .map(|r| {
            r.min_arc
                .map(|a| w[a])
                .ok_or_else(|| Error::Internal("tight component without internal arcs".into()))
        })
        .collect::<Result<_>>()?;

    let mut set_potentials = min_weights.clone();
    let mut alpha = vec![None; g.arc_count()];
    for (id, &Arc { tail, head }) in g.arcs().iter().enumerate() {
        let Some(j) = owner[head] else { continue };
        if owner[tail] == Some(j) {
            continue;
        }
        let al = alpha_of(id)?;
        alpha[id] = Some(al);
        let gap = w[al] - w[id];
        if gap < set_potentials[j] {
            set_potentials[j] = gap;
        }
    }

    let new_weights: Vec<i128> = contraction
        .provenance
        .iter()
        .map(|&old| match (alpha[old], owner[g.arc(old).head]) {
            (Some(al), Some(j)) => w[old] - w[al] + min_weights[j],
            _ => w[old],
        })
        .collect();

    let new_n = contraction.graph.vertex_count();
    let mut new_caps = vec![1u32; new_n];
    let mut new_members: Vec<Vec<VertexId>> = vec![Vec::new(); new_n];
    let mut new_original = vec![None; new_n];
    for (v, members) in state.members.iter().enumerate() {
        let nv = contraction.vertex_map[v];
        if owner[v].is_none() {
            new_caps[nv] = state.capacities[v];
            new_original[nv] = state.original[v];
        }
        new_members[nv].extend_from_slice(members);
    }
    let original_sets = contraction
        .records
        .iter()
        .map(|r| {
            let mut m = new_members[r.vertex].clone();
            m.sort_unstable();
            VertexSet::from_sorted(m)
        })
        .collect();

    let next = PhaseState {
        graph: contraction.graph.clone(),
        capacities: new_caps,
        weights: new_weights,
        members: new_members,
        original: new_original,
        origin: contraction.provenance.iter().map(|&a| state.origin[a]).collect(),
    };
    let record = PhaseRecord {
        index,
        selected,
        contraction,
        alpha,
        original_sets,
        set_potentials,
    };
    Ok((next, record))
}

/// Steps 5 and 6: expands the final selection back through every phase and
/// maps it to original arc ids.
pub(crate) fn unwind(phases: &[PhaseRecord], last: &ArcSubset, kept: &[ArcId]) -> Vec<ArcId> {
    let mut f: Vec<ArcId> = last.as_slice().to_vec();
    for phase in phases.iter().rev() {
        let c = &phase.contraction;
        let mut entering: Vec<Option<ArcId>> = vec![None; c.records.len()];
        for &a in &f {
            if let Some(j) = c.record_index(c.graph.arc(a).head) {
                entering[j] = Some(c.provenance[a]);
            }
        }
        let mut next: Vec<ArcId> = f.iter().map(|&a| c.provenance[a]).collect();
        for (rec, enter) in c.records.iter().zip(entering) {
            let dropped = match enter {
                Some(a) => phase.alpha[a],
                None => rec.min_arc,
            };
            next.extend(rec.internal.iter().filter(|&e| Some(e) != dropped));
        }
        next.sort_unstable();
        f = next;
    }
    f.into_iter().map(|a| kept[a]).collect()
}

/// A feasible solution of the dual linear program, in original vertex and
/// arc ids: potentials `p(v)` on vertices, `p(X)` on a laminar family of
/// vertex sets and `q(a)` on arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCertificate {
    #[serde(with = "serde_rational_vec")]
    pub p_vertex: Vec<Rational>,
    pub p_sets: Vec<SetPotential>,
    #[serde(with = "serde_rational_vec")]
    pub q: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub objective: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPotential {
    #[serde(rename = "X")]
    pub set: Vec<VertexId>,
    #[serde(with = "serde_rational")]
    pub p: Rational,
}

impl DualCertificate {
    pub fn is_integral(&self) -> bool {
        self.p_vertex.iter().all(Rational::is_integer)
            && self.q.iter().all(Rational::is_integer)
            && self.p_sets.iter().all(|s| s.p.is_integer())
            && self.objective.is_integer()
    }

    /// `Σ b(v)p(v) + Σ (b(X) − 1)p(X) + Σ q(a)`.
    pub fn dual_objective(&self, b: &CapacityVector) -> Rational {
        let mut total = Rational::zero();
        for (v, p) in self.p_vertex.iter().enumerate() {
            total += p * Rational::from_integer(b.get(v).into());
        }
        for s in &self.p_sets {
            let cap = b.sum_over(&s.set) as i128 - 1;
            total += s.p * Rational::from_integer(cap);
        }
        for q in &self.q {
            total += q;
        }
        total
    }
}

/// Assembles the dual certificate of a completed run.
pub fn dual_from_run(run: &GreedyRun) -> Result<DualCertificate> {
    let g = &run.graph;
    let b = &run.capacities;
    let w = &run.weights;
    let n = g.vertex_count();

    // θ(v): b(v)-th largest positive weight entering v, else 0
    let mut positive_in: Vec<Vec<i128>> = vec![Vec::new(); n];
    for (id, a) in g.arcs().iter().enumerate() {
        let x = w.numerators()[id];
        if x > 0 {
            positive_in[a.head].push(x);
        }
    }
    let mut p_vertex: Vec<i128> = positive_in
        .into_iter()
        .enumerate()
        .map(|(v, mut ws)| {
            let k = b.get(v) as usize;
            if ws.len() < k {
                0
            } else {
                let (_, kth, _) = ws.select_nth_unstable_by(k - 1, |x, y| y.cmp(x));
                *kth
            }
        })
        .collect();

    let mut sets = Vec::new();
    let mut set_values = Vec::new();
    for phase in &run.phases {
        for (x, &p) in phase.original_sets.iter().zip(&phase.set_potentials) {
            if p < 0 {
                return Err(Error::Internal(format!("negative set potential {p}")));
            }
            for &v in x.iter() {
                p_vertex[v] -= p;
            }
            sets.push(x.clone());
            set_values.push(p);
        }
    }
    if let Some(v) = p_vertex.iter().position(|&p| p < 0) {
        return Err(Error::Internal(format!("negative vertex potential at {v}")));
    }

    let forest = LaminarForest::new(n, &sets)
        .map_err(|(s, t)| Error::Internal(format!("contracted sets {s} and {t} cross")))?;
    let chain = forest.chain_sums(&set_values);
    let q: Vec<i128> = g
        .arcs()
        .iter()
        .enumerate()
        .map(|(id, a)| {
            let covered = p_vertex[a.head]
                + forest
                    .innermost_common(a.tail, a.head)
                    .map_or(0, |s| chain[s]);
            (w.numerators()[id] - covered).max(0)
        })
        .collect();

    let mut objective: i128 = 0;
    for (v, &p) in p_vertex.iter().enumerate() {
        objective += i128::from(b.get(v)) * p;
    }
    for (x, &p) in sets.iter().zip(&set_values) {
        objective += (b.sum_over(x) as i128 - 1) * p;
    }
    objective += q.iter().sum::<i128>();

    Ok(DualCertificate {
        p_vertex: p_vertex.into_iter().map(|p| w.unscale(p)).collect(),
        p_sets: sets
            .into_iter()
            .zip(set_values)
            .map(|(x, p)| SetPotential {
                set: x.into_vec(),
                p: w.unscale(p),
            })
            .collect(),
        q: q.into_iter().map(|x| w.unscale(x)).collect(),
        objective: w.unscale(objective),
    })
}

/// A maximum-weight b-branching together with a dual certificate of its
/// optimality.
pub fn max_weight_b_branching(
    g: &Digraph,
    b: &CapacityVector,
    w: &WeightVector,
) -> Result<(BBranching, DualCertificate)> {
    let run = run_greedy(g, b, w)?;
    let cert = dual_from_run(&run)?;
    let branching = BBranching::new(g, b, run.branching)
        .map_err(|_| Error::Internal("greedy output is not a b-branching".into()))?;
    Ok((branching, cert))
}

/// The first condition a certificate check found violated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Malformed(String),
    NotBBranching,
    NotLaminar { first: usize, second: usize },
    NegativeVertexPotential(VertexId),
    NegativeSetPotential(usize),
    NegativeArcPotential(ArcId),
    /// Constraint `p(v) + Σ p(X) + q(a) ≥ w(a)` fails.
    ArcUncovered(ArcId),
    /// An arc of the branching with slack in its constraint.
    ArcNotTight(ArcId),
    /// `q(a) > 0` for an arc outside the branching.
    SlackArcPotential(ArcId),
    /// `p(v) > 0` but `d⁻_F(v) < b(v)`.
    UnsaturatedVertex(VertexId),
    /// `p(X) > 0` but `|F[X]| ≠ b(X) − 1`.
    LooseSet(usize),
    ObjectiveMismatch { primal: Rational, dual: Rational },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::Malformed(_) => "malformed",
            Violation::NotBBranching => "not_b_branching",
            Violation::NotLaminar { .. } => "not_laminar",
            Violation::NegativeVertexPotential(_) => "negative_vertex_potential",
            Violation::NegativeSetPotential(_) => "negative_set_potential",
            Violation::NegativeArcPotential(_) => "negative_arc_potential",
            Violation::ArcUncovered(_) => "arc_uncovered",
            Violation::ArcNotTight(_) => "arc_not_tight",
            Violation::SlackArcPotential(_) => "slack_arc_potential",
            Violation::UnsaturatedVertex(_) => "unsaturated_vertex",
            Violation::LooseSet(_) => "loose_set",
            Violation::ObjectiveMismatch { .. } => "objective_mismatch",
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Malformed(m) => write!(f, "malformed certificate: {m}"),
            Violation::NotBBranching => write!(f, "arc set is not a b-branching"),
            Violation::NotLaminar { first, second } => {
                write!(f, "sets {first} and {second} cross")
            }
            Violation::NegativeVertexPotential(v) => write!(f, "p(v) < 0 at vertex {v}"),
            Violation::NegativeSetPotential(s) => write!(f, "p(X) < 0 for set {s}"),
            Violation::NegativeArcPotential(a) => write!(f, "q(a) < 0 at arc {a}"),
            Violation::ArcUncovered(a) => write!(f, "dual constraint of arc {a} fails"),
            Violation::ArcNotTight(a) => write!(f, "arc {a} is in F but its constraint is slack"),
            Violation::SlackArcPotential(a) => write!(f, "q(a) > 0 at arc {a} outside F"),
            Violation::UnsaturatedVertex(v) => {
                write!(f, "p(v) > 0 at vertex {v} but its indegree is below b(v)")
            }
            Violation::LooseSet(s) => write!(f, "p(X) > 0 for set {s} but |F[X]| != b(X) - 1"),
            Violation::ObjectiveMismatch { primal, dual } => {
                write!(f, "primal weight {primal} differs from dual objective {dual}")
            }
        }
    }
}

/// Exact optimality check of `(f, cert)` for weights `w`: primal
/// feasibility, dual feasibility, complementary slackness and equal
/// objectives.
pub fn verify_certificate(
    g: &Digraph,
    b: &CapacityVector,
    w: &WeightVector,
    f: &ArcSubset,
    cert: &DualCertificate,
) -> std::result::Result<(), Violation> {
    let n = g.vertex_count();
    let m = g.arc_count();
    if b.len() != n || w.len() != m {
        return Err(Violation::Malformed("instance dimensions disagree".into()));
    }
    if cert.p_vertex.len() != n {
        return Err(Violation::Malformed(format!(
            "p_vertex has {} entries, expected {n}",
            cert.p_vertex.len()
        )));
    }
    if cert.q.len() != m {
        return Err(Violation::Malformed(format!(
            "q has {} entries, expected {m}",
            cert.q.len()
        )));
    }
    if f.as_slice().last().is_some_and(|&a| a >= m) {
        return Err(Violation::Malformed("arc id out of range".into()));
    }
    let mut sets = Vec::with_capacity(cert.p_sets.len());
    for (i, s) in cert.p_sets.iter().enumerate() {
        let x = VertexSet::from_unsorted(s.set.iter().copied())
            .map_err(|e| Violation::Malformed(format!("set {i}: {e}")))?;
        if x.is_empty() || x.last().is_some_and(|&v| v >= n) {
            return Err(Violation::Malformed(format!("set {i} is empty or out of range")));
        }
        sets.push(x);
    }

    // (a)
    if !is_b_branching(g, b, f).unwrap_or(false) {
        return Err(Violation::NotBBranching);
    }

    // (b) sign constraints
    if let Some(v) = cert.p_vertex.iter().position(Rational::is_negative) {
        return Err(Violation::NegativeVertexPotential(v));
    }
    if let Some(s) = cert.p_sets.iter().position(|s| s.p.is_negative()) {
        return Err(Violation::NegativeSetPotential(s));
    }
    if let Some(a) = cert.q.iter().position(Rational::is_negative) {
        return Err(Violation::NegativeArcPotential(a));
    }

    let forest = LaminarForest::new(n, &sets)
        .map_err(|(first, second)| Violation::NotLaminar { first, second })?;
    let values: Vec<Rational> = cert.p_sets.iter().map(|s| s.p).collect();
    let chain = forest.chain_sums(&values);

    // (b) arc constraints and (c) arc-side slackness
    let in_f = {
        let mut ind = vec![false; m];
        for a in f.iter() {
            ind[a] = true;
        }
        ind
    };
    let mut inside_count = vec![0u64; sets.len()];
    for (id, a) in g.arcs().iter().enumerate() {
        let common = forest.innermost_common(a.tail, a.head);
        let lhs = cert.p_vertex[a.head] + common.map_or(Rational::zero(), |s| chain[s]) + cert.q[id];
        let wa = w.get(id);
        if lhs < wa {
            return Err(Violation::ArcUncovered(id));
        }
        if in_f[id] {
            if lhs != wa {
                return Err(Violation::ArcNotTight(id));
            }
            let mut s = common;
            while let Some(t) = s {
                inside_count[t] += 1;
                s = forest.parent(t);
            }
        } else if cert.q[id].is_positive() {
            return Err(Violation::SlackArcPotential(id));
        }
    }

    // (c) vertex and set slackness
    let indeg = g.indegrees(f);
    for (v, &d) in indeg.iter().enumerate() {
        if cert.p_vertex[v].is_positive() && d as u64 != u64::from(b.get(v)) {
            return Err(Violation::UnsaturatedVertex(v));
        }
    }
    for (i, x) in sets.iter().enumerate() {
        if cert.p_sets[i].p.is_positive() && inside_count[i] + 1 != b.sum_over(x) {
            return Err(Violation::LooseSet(i));
        }
    }

    // (d)
    let primal = w.total(f.iter());
    let dual = cert.dual_objective(b);
    if primal != dual || cert.objective != dual {
        return Err(Violation::ObjectiveMismatch { primal, dual });
    }
    Ok(())
}
