//! Maximum-weight b-branchings under per-vertex matroid constraints.
//!
//! Every vertex `v` carries a matroid on its entering arcs, of rank at most
//! `b(v)`, and the arcs chosen into `v` must be independent in it. The
//! phases mirror [`crate::greedy`]: Step 2 runs the matroid greedy algorithm
//! at every vertex, contracted vertices carry a rank-1 uniform matroid, and
//! an arc `a` entering a tight component is charged against the lightest
//! other element of its fundamental circuit. The circuit is computed once, at
//! contraction time.
//!
//! No optimality proof is known for this variant; the test suite compares it
//! with exhaustive search.

use crate::digraph::{ArcId, ArcSubset, Digraph};
use crate::error::{Error, Result};
use crate::greedy::{check_inputs, contract_phase, unwind, PhaseState};
use crate::matroids::{
    fundamental_circuit, is_b_branching, tight_components, uniform_oracle, CapacityVector,
    MatroidOracle,
};
use crate::weights::WeightVector;

/// One matroid per vertex, on exactly the arcs entering it.
pub struct MatroidAssignment {
    oracles: Vec<Box<dyn MatroidOracle>>,
}

impl std::fmt::Debug for MatroidAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatroidAssignment")
            .field("ranks", &self.oracles.iter().map(|o| o.rank()).collect::<Vec<_>>())
            .finish()
    }
}

/// Rank of `m` by the greedy algorithm.
fn greedy_rank(m: &dyn MatroidOracle) -> usize {
    let mut basis = Vec::new();
    for &e in m.ground() {
        basis.push(e);
        if !m.is_independent(&basis) {
            basis.pop();
        }
    }
    basis.len()
}

impl MatroidAssignment {
    /// Checks that oracle `v` has ground set `δ⁻_A(v)` and rank at most
    /// `b(v)`, and that its declared rank is the one the oracle answers give.
    pub fn new(g: &Digraph, b: &CapacityVector, oracles: Vec<Box<dyn MatroidOracle>>) -> Result<Self> {
        b.check_domain(g)?;
        if oracles.len() != g.vertex_count() {
            return Err(Error::LengthMismatch {
                what: "matroid assignment",
                expected: g.vertex_count(),
                actual: oracles.len(),
            });
        }
        let in_lists = g.in_arc_lists();
        for (v, m) in oracles.iter().enumerate() {
            if m.ground() != in_lists[v].as_slice() {
                return Err(Error::Matroid(format!(
                    "ground set of vertex {v} is not the set of its entering arcs"
                )));
            }
            if !m.is_independent(&[]) {
                return Err(Error::Matroid(format!(
                    "oracle of vertex {v} rejects the empty set"
                )));
            }
            let rank = greedy_rank(m.as_ref());
            if rank != m.rank() {
                return Err(Error::Matroid(format!(
                    "oracle of vertex {v} declares rank {} but its independent sets have rank {rank}",
                    m.rank()
                )));
            }
            if rank > b.get(v) as usize {
                return Err(Error::Matroid(format!(
                    "oracle of vertex {v} has rank {rank}, above the capacity {}",
                    b.get(v)
                )));
            }
        }
        Ok(MatroidAssignment { oracles })
    }

    /// Uniform matroids of rank `b(v)`, under which the algorithm is the
    /// plain greedy one.
    pub fn uniform(g: &Digraph, b: &CapacityVector) -> Result<Self> {
        let oracles = g
            .in_arc_lists()
            .into_iter()
            .enumerate()
            .map(|(v, ground)| {
                uniform_oracle(ground, b.get(v) as usize).map(|o| Box::new(o) as Box<dyn MatroidOracle>)
            })
            .collect::<Result<Vec<_>>>()?;
        MatroidAssignment::new(g, b, oracles)
    }

    pub fn oracle(&self, v: usize) -> &dyn MatroidOracle {
        self.oracles[v].as_ref()
    }

    pub fn len(&self) -> usize {
        self.oracles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oracles.is_empty()
    }
}

/// Step 2: a maximum-weight independent set of the direct sum, by the
/// matroid greedy algorithm at each vertex.
fn select(state: &PhaseState, m: &MatroidAssignment) -> Result<Vec<ArcId>> {
    let g = &state.graph;
    let w = &state.weights;
    let mut by_head: Vec<Vec<ArcId>> = vec![Vec::new(); g.vertex_count()];
    for (id, a) in g.arcs().iter().enumerate() {
        if w[id] > 0 {
            by_head[a.head].push(id);
        }
    }
    let mut picked = Vec::new();
    for (y, mut cands) in by_head.into_iter().enumerate() {
        cands.sort_by_key(|&a| (std::cmp::Reverse(w[a]), a));
        match state.original[y] {
            None => picked.extend(cands.first()),
            Some(v) => {
                let oracle = m.oracle(v);
                let mut chosen = Vec::new();
                for a in cands {
                    chosen.push(state.origin[a]);
                    if oracle.is_independent(&chosen) {
                        picked.push(a);
                    } else {
                        chosen.pop();
                    }
                }
                if chosen.len() > oracle.rank() {
                    return Err(Error::Matroid(format!(
                        "oracle of vertex {v} accepts {} elements but declares rank {}",
                        chosen.len(),
                        oracle.rank()
                    )));
                }
            }
        }
    }
    picked.sort_unstable();
    Ok(picked)
}

/// Runs the matroid-restricted algorithm and returns its arc set.
pub fn mr_max_weight_b_branching(
    g: &Digraph,
    b: &CapacityVector,
    w: &WeightVector,
    m: &MatroidAssignment,
) -> Result<ArcSubset> {
    check_inputs(g, b, w)?;
    if m.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            what: "matroid assignment",
            expected: g.vertex_count(),
            actual: m.len(),
        });
    }
    // arcs of negative weight never help; matroid loops can never be chosen
    let kept: Vec<ArcId> = (0..g.arc_count())
        .filter(|&a| w.numerators()[a] >= 0 && m.oracle(g.arc(a).head).is_independent(&[a]))
        .collect();
    let mut state = PhaseState::initial(g, b.as_slice(), w.numerators(), &kept)?;
    let mut phases = Vec::new();
    let last = loop {
        let selected = select(&state, m)?;
        let family = tight_components(&state.graph, &state.capacities, &selected);
        if family.is_empty() {
            break ArcSubset::from_sorted(selected);
        }
        let mut into: Vec<Vec<ArcId>> = vec![Vec::new(); state.graph.vertex_count()];
        for &a in &selected {
            into[state.graph.arc(a).head].push(a);
        }
        let st = &state;
        let alpha = |a: ArcId| charged_arc(st, m, &into, a);
        let (next, record) = contract_phase(phases.len(), &state, selected, &family, alpha)?;
        phases.push(record);
        state = next;
    };
    let f = ArcSubset::from_sorted(unwind(&phases, &last, &kept));

    let in_lists = g.in_arc_lists();
    for (v, list) in in_lists.iter().enumerate() {
        let chosen: Vec<ArcId> = list.iter().copied().filter(|&a| f.contains(a)).collect();
        if !m.oracle(v).is_independent(&chosen) {
            return Err(Error::Internal(format!(
                "output is dependent in the matroid of vertex {v}"
            )));
        }
    }
    if !is_b_branching(g, b, &f)? {
        return Err(Error::Internal("output violates sparsity".into()));
    }
    Ok(f)
}

/// `α(a)`: the minimum-weight element other than `a` of the fundamental
/// circuit of `a` in the selection at its head, smaller id on ties.
fn charged_arc(state: &PhaseState, m: &MatroidAssignment, into: &[Vec<ArcId>], a: ArcId) -> Result<ArcId> {
    let y = state.graph.arc(a).head;
    let here = &into[y];
    let circuit: Vec<ArcId> = match state.original[y] {
        // rank 1: the circuit is `a` with the single selected arc
        None => here.clone(),
        Some(v) => {
            let base: Vec<ArcId> = here.iter().map(|&e| state.origin[e]).collect();
            let c = fundamental_circuit(m.oracle(v), &base, state.origin[a])?.ok_or_else(|| {
                Error::Matroid(format!(
                    "oracle of vertex {v} extends a basis of its ground set"
                ))
            })?;
            here.iter()
                .copied()
                .filter(|&e| c.binary_search(&state.origin[e]).is_ok())
                .collect()
        }
    };
    let w = &state.weights;
    circuit
        .into_iter()
        .min_by_key(|&e| (w[e], e))
        .ok_or_else(|| Error::Matroid(format!("arc {} has a trivial fundamental circuit", state.origin[a])))
}
