//! Brute-force references for tiny instances.
//!
//! Everything here works straight from the definitions: every vertex set is
//! checked, every arc subset or labelling is enumerated. These functions back
//! the test suite and the CLI's `--oracle` cross-check. They refuse inputs
//! beyond a [`SizeGate`] instead of running for hours.

use crate::digraph::{ArcId, ArcSubset, Digraph};
use crate::error::{Error, Result};
use crate::matroids::{CapacityVector, MatroidOracle};
use crate::packing::{precedes, PackingInstance, SetMinimum, SfmBackend};
use crate::weights::{Rational, WeightVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeGate {
    pub max_vertices: usize,
    pub max_arcs: usize,
}

impl Default for SizeGate {
    fn default() -> Self {
        SizeGate {
            max_vertices: 20,
            max_arcs: 22,
        }
    }
}

impl SizeGate {
    pub fn check_vertices(&self, n: usize) -> Result<()> {
        if n > self.max_vertices {
            return Err(Error::SizeGate {
                what: "vertices",
                actual: n,
                limit: self.max_vertices,
            });
        }
        Ok(())
    }

    pub fn check_arcs(&self, m: usize) -> Result<()> {
        if m > self.max_arcs {
            return Err(Error::SizeGate {
                what: "arcs",
                actual: m,
                limit: self.max_arcs,
            });
        }
        Ok(())
    }

    fn check(&self, g: &Digraph) -> Result<()> {
        self.check_vertices(g.vertex_count())?;
        self.check_arcs(g.arc_count())
    }
}

/// Minimizes `h` over all allowed masks in increasing numeric order.
pub fn brute_min_set_function(
    n: usize,
    h: &dyn Fn(u64) -> i64,
    allowed: &dyn Fn(u64) -> bool,
    gate: &SizeGate,
) -> Result<Option<SetMinimum>> {
    gate.check_vertices(n)?;
    let mut best: Option<SetMinimum> = None;
    for set in 0..1u64 << n {
        if !allowed(set) {
            continue;
        }
        let value = h(set);
        let better = match best {
            None => true,
            Some(b) => value < b.value || (value == b.value && precedes(set, b.set)),
        };
        if better {
            best = Some(SetMinimum { set, value });
        }
    }
    Ok(best)
}

/// [`SfmBackend`] by exhaustive enumeration.
#[derive(Clone, Copy, Debug, Default)]
pub struct BruteForceSfm {
    gate: SizeGate,
}

impl BruteForceSfm {
    pub fn new(gate: SizeGate) -> Self {
        BruteForceSfm { gate }
    }
}

impl SfmBackend for BruteForceSfm {
    fn minimize(
        &self,
        n: usize,
        h: &dyn Fn(u64) -> i64,
        allowed: &dyn Fn(u64) -> bool,
    ) -> Result<Option<SetMinimum>> {
        brute_min_set_function(n, h, allowed, &self.gate)
    }
}

/// `|F[X]|` for every vertex set, with the bound `b(X) − 1`.
struct SparsityCounter {
    n: usize,
    limit: Vec<i64>,
    count: Vec<i64>,
}

impl SparsityCounter {
    fn new(n: usize, b: &[u32]) -> Self {
        let mut limit = vec![-1i64; 1 << n];
        for (mask, l) in limit.iter_mut().enumerate() {
            for (v, &bv) in b.iter().enumerate() {
                if mask >> v & 1 == 1 {
                    *l += i64::from(bv);
                }
            }
        }
        SparsityCounter {
            n,
            limit,
            count: vec![0; 1 << n],
        }
    }

    /// Calls `f` on every vertex set containing both `u` and `v`.
    fn for_supersets(&self, u: usize, v: usize, mut f: impl FnMut(usize) -> bool) -> bool {
        let base = (1usize << u) | (1usize << v);
        let free = ((1usize << self.n) - 1) & !base;
        let mut sub = free;
        loop {
            if !f(base | sub) {
                return false;
            }
            if sub == 0 {
                return true;
            }
            sub = (sub - 1) & free;
        }
    }

    fn fits(&self, u: usize, v: usize) -> bool {
        self.for_supersets(u, v, |x| self.count[x] < self.limit[x])
    }

    fn shift(&mut self, u: usize, v: usize, by: i64) {
        let base = (1usize << u) | (1usize << v);
        let free = ((1usize << self.n) - 1) & !base;
        let mut sub = free;
        loop {
            self.count[base | sub] += by;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
}

/// All b-branchings, ordered by size and then lexicographically.
pub fn enumerate_b_branchings(g: &Digraph, b: &CapacityVector, gate: &SizeGate) -> Result<Vec<ArcSubset>> {
    gate.check(g)?;
    b.check_domain(g)?;
    let mut out = Vec::new();
    let mut counter = SparsityCounter::new(g.vertex_count(), b.as_slice());
    let mut indeg = vec![0u32; g.vertex_count()];
    let mut current = Vec::new();
    enumerate_rec(g, b.as_slice(), 0, &mut counter, &mut indeg, &mut current, &mut out);
    out.sort_by(|x: &Vec<ArcId>, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(out.into_iter().map(ArcSubset::from_sorted).collect())
}

fn enumerate_rec(
    g: &Digraph,
    b: &[u32],
    next: ArcId,
    counter: &mut SparsityCounter,
    indeg: &mut [u32],
    current: &mut Vec<ArcId>,
    out: &mut Vec<Vec<ArcId>>,
) {
    if next == g.arc_count() {
        out.push(current.clone());
        return;
    }
    enumerate_rec(g, b, next + 1, counter, indeg, current, out);
    let a = g.arc(next);
    if indeg[a.head] < b[a.head] && counter.fits(a.tail, a.head) {
        indeg[a.head] += 1;
        counter.shift(a.tail, a.head, 1);
        current.push(next);
        enumerate_rec(g, b, next + 1, counter, indeg, current, out);
        current.pop();
        counter.shift(a.tail, a.head, -1);
        indeg[a.head] -= 1;
    }
}

fn check_weights(g: &Digraph, w: &WeightVector) -> Result<()> {
    if w.len() != g.arc_count() {
        return Err(Error::LengthMismatch {
            what: "weight vector",
            expected: g.arc_count(),
            actual: w.len(),
        });
    }
    Ok(())
}

/// Maximum of `w(F)` over all b-branchings `F`.
pub fn brute_max_weight(g: &Digraph, b: &CapacityVector, w: &WeightVector, gate: &SizeGate) -> Result<Rational> {
    gate.check(g)?;
    b.check_domain(g)?;
    check_weights(g, w)?;
    let wn = w.numerators();
    let mut suffix = vec![0i128; g.arc_count() + 1];
    for a in (0..g.arc_count()).rev() {
        suffix[a] = suffix[a + 1] + wn[a].max(0);
    }
    struct Ctx<'a> {
        g: &'a Digraph,
        b: &'a [u32],
        w: &'a [i128],
        suffix: Vec<i128>,
        counter: SparsityCounter,
        indeg: Vec<u32>,
        best: i128,
    }
    fn rec(c: &mut Ctx<'_>, next: ArcId, value: i128) {
        if value > c.best {
            c.best = value;
        }
        if next == c.g.arc_count() || value + c.suffix[next] <= c.best {
            return;
        }
        let a = c.g.arc(next);
        if c.indeg[a.head] < c.b[a.head] && c.counter.fits(a.tail, a.head) {
            c.indeg[a.head] += 1;
            c.counter.shift(a.tail, a.head, 1);
            rec(c, next + 1, value + c.w[next]);
            c.counter.shift(a.tail, a.head, -1);
            c.indeg[a.head] -= 1;
        }
        rec(c, next + 1, value);
    }
    let mut ctx = Ctx {
        g,
        b: b.as_slice(),
        w: wn,
        suffix,
        counter: SparsityCounter::new(g.vertex_count(), b.as_slice()),
        indeg: vec![0; g.vertex_count()],
        best: 0,
    };
    rec(&mut ctx, 0, 0);
    Ok(w.unscale(ctx.best))
}

/// Maximum of `w(F)` over classical branchings: indegree at most one and no
/// directed cycle (loops count as cycles).
pub fn brute_max_weight_branching(g: &Digraph, w: &WeightVector, gate: &SizeGate) -> Result<Rational> {
    gate.check(g)?;
    check_weights(g, w)?;
    let mut best: i128 = 0;
    let mut parent: Vec<Option<usize>> = vec![None; g.vertex_count()];
    fn creates_cycle(parent: &[Option<usize>], tail: usize, head: usize) -> bool {
        let mut x = Some(tail);
        while let Some(u) = x {
            if u == head {
                return true;
            }
            x = parent[u];
        }
        false
    }
    fn rec(g: &Digraph, w: &[i128], next: usize, value: i128, parent: &mut [Option<usize>], best: &mut i128) {
        if next == g.arc_count() {
            *best = (*best).max(value);
            return;
        }
        rec(g, w, next + 1, value, parent, best);
        let a = g.arc(next);
        if parent[a.head].is_none() && !creates_cycle(parent, a.tail, a.head) {
            parent[a.head] = Some(a.tail);
            rec(g, w, next + 1, value + w[next], parent, best);
            parent[a.head] = None;
        }
    }
    rec(g, w.numerators(), 0, 0, &mut parent, &mut best);
    Ok(w.unscale(best))
}

/// Arc labelling search: every arc goes to one of the `k` parts or to none.
struct Labelling<'a> {
    g: &'a Digraph,
    residual: Vec<Vec<u32>>,
    counters: Vec<SparsityCounter>,
    /// Arcs into each vertex with id at least the current position.
    remaining_in: Vec<Vec<u32>>,
    parts: Vec<Vec<ArcId>>,
}

impl Labelling<'_> {
    fn search(&mut self, next: ArcId) -> bool {
        let n = self.g.vertex_count();
        // every outstanding demand must still be coverable
        for v in 0..n {
            let need: u32 = self.residual.iter().map(|r| r[v]).sum();
            if need > self.remaining_in[next][v] {
                return false;
            }
        }
        if next == self.g.arc_count() {
            return true;
        }
        let a = self.g.arc(next);
        for i in 0..self.parts.len() {
            if self.residual[i][a.head] > 0 && self.counters[i].fits(a.tail, a.head) {
                self.residual[i][a.head] -= 1;
                self.counters[i].shift(a.tail, a.head, 1);
                self.parts[i].push(next);
                if self.search(next + 1) {
                    return true;
                }
                self.parts[i].pop();
                self.counters[i].shift(a.tail, a.head, -1);
                self.residual[i][a.head] += 1;
            }
        }
        self.search(next + 1)
    }
}

/// Disjoint b-branchings with exact indegrees `b_i`, found by labelling
/// arcs; `None` if there are none.
pub fn brute_find_packing(inst: &PackingInstance, gate: &SizeGate) -> Result<Option<Vec<ArcSubset>>> {
    let g = inst.graph();
    gate.check(g)?;
    let n = g.vertex_count();
    let m = g.arc_count();
    let mut remaining_in = vec![vec![0u32; n]; m + 1];
    for a in (0..m).rev() {
        remaining_in[a] = remaining_in[a + 1].clone();
        remaining_in[a][g.arc(a).head] += 1;
    }
    let b = inst.capacities().as_slice();
    let mut search = Labelling {
        g,
        residual: inst.demands().iter().map(|d| d.as_slice().to_vec()).collect(),
        counters: (0..inst.k()).map(|_| SparsityCounter::new(n, b)).collect(),
        remaining_in,
        parts: vec![Vec::new(); inst.k()],
    };
    if search.search(0) {
        Ok(Some(search.parts.into_iter().map(ArcSubset::from_sorted).collect()))
    } else {
        Ok(None)
    }
}

pub fn brute_exists_packing(inst: &PackingInstance, gate: &SizeGate) -> Result<bool> {
    brute_find_packing(inst, gate).map(|p| p.is_some())
}

/// Minimum total weight over all `k`-tuples of disjoint b-branchings with
/// `d⁻_{B_i} = b_i`, by combining the full list of b-branchings.
pub fn brute_min_weight_packing(
    inst: &PackingInstance,
    w: &WeightVector,
    gate: &SizeGate,
) -> Result<Option<(Rational, Vec<ArcSubset>)>> {
    let g = inst.graph();
    check_weights(g, w)?;
    if g.arc_count() > 63 {
        return Err(Error::SizeGate {
            what: "arcs",
            actual: g.arc_count(),
            limit: 63,
        });
    }
    let all = enumerate_b_branchings(g, inst.capacities(), gate)?;
    let wn = w.numerators();
    let candidates: Vec<Vec<(u64, i128, usize)>> = inst
        .demands()
        .iter()
        .map(|d| {
            all.iter()
                .enumerate()
                .filter(|(_, f)| {
                    let deg = g.indegrees(f);
                    deg.iter().zip(d.as_slice()).all(|(&x, &y)| x == y as usize)
                })
                .map(|(j, f)| {
                    let mask = f.iter().fold(0u64, |m, a| m | 1 << a);
                    (mask, f.iter().map(|a| wn[a]).sum(), j)
                })
                .collect()
        })
        .collect();
    fn rec(
        c: &[Vec<(u64, i128, usize)>],
        i: usize,
        used: u64,
        value: i128,
        pick: &mut Vec<usize>,
        best: &mut Option<(i128, Vec<usize>)>,
    ) {
        if i == c.len() {
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                *best = Some((value, pick.clone()));
            }
            return;
        }
        for &(mask, wt, j) in &c[i] {
            if mask & used == 0 {
                pick.push(j);
                rec(c, i + 1, used | mask, value + wt, pick, best);
                pick.pop();
            }
        }
    }
    let mut best = None;
    rec(&candidates, 0, 0, 0, &mut Vec::new(), &mut best);
    Ok(best.map(|(v, picks)| {
        (
            w.unscale(v),
            picks.into_iter().map(|j| all[j].clone()).collect(),
        )
    }))
}

/// Maximum of `w(F)` over sparsity-independent `F` that are independent in
/// the oracle of every vertex (oracle `v` judges `F ∩ δ⁻(v)`).
pub fn brute_mr_max_weight(
    g: &Digraph,
    b: &CapacityVector,
    w: &WeightVector,
    oracles: &[&dyn MatroidOracle],
    gate: &SizeGate,
) -> Result<Rational> {
    gate.check(g)?;
    b.check_domain(g)?;
    check_weights(g, w)?;
    if oracles.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            what: "matroid assignment",
            expected: g.vertex_count(),
            actual: oracles.len(),
        });
    }
    struct Ctx<'a> {
        g: &'a Digraph,
        w: &'a [i128],
        oracles: &'a [&'a dyn MatroidOracle],
        counter: SparsityCounter,
        chosen: Vec<Vec<ArcId>>,
        best: i128,
    }
    fn rec(c: &mut Ctx<'_>, next: ArcId, value: i128) {
        if next == c.g.arc_count() {
            c.best = c.best.max(value);
            return;
        }
        rec(c, next + 1, value);
        let a = c.g.arc(next);
        if !c.counter.fits(a.tail, a.head) {
            return;
        }
        c.chosen[a.head].push(next);
        if c.oracles[a.head].is_independent(&c.chosen[a.head]) {
            c.counter.shift(a.tail, a.head, 1);
            rec(c, next + 1, value + c.w[next]);
            c.counter.shift(a.tail, a.head, -1);
        }
        c.chosen[a.head].pop();
    }
    let mut ctx = Ctx {
        g,
        w: w.numerators(),
        oracles,
        counter: SparsityCounter::new(g.vertex_count(), b.as_slice()),
        chosen: vec![Vec::new(); g.vertex_count()],
        best: 0,
    };
    rec(&mut ctx, 0, 0);
    Ok(w.unscale(ctx.best))
}
