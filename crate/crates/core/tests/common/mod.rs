#![allow(dead_code)]

use bbranching::matroids::{partition_oracle, PartitionOracle};
use bbranching::{ArcSubset, CapacityVector, DemandVector, Digraph, WeightVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random multigraph with `n` vertices and `m` arcs, loops with probability
/// `loop_p` per arc.
pub fn digraph(rng: &mut StdRng, n: usize, m: usize, loop_p: f64) -> Digraph {
    let arcs: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let t = rng.random_range(0..n);
            if n == 1 || rng.random_bool(loop_p) {
                (t, t)
            } else {
                let mut h = rng.random_range(0..n - 1);
                if h >= t {
                    h += 1;
                }
                (t, h)
            }
        })
        .collect();
    Digraph::new(n, arcs).unwrap()
}

pub fn capacities(rng: &mut StdRng, n: usize, lo: u32, hi: u32) -> CapacityVector {
    CapacityVector::new((0..n).map(|_| rng.random_range(lo..=hi)).collect()).unwrap()
}

pub fn weights(rng: &mut StdRng, m: usize, lo: i64, hi: i64) -> WeightVector {
    WeightVector::from_integers((0..m).map(|_| rng.random_range(lo..=hi)))
}

/// A demand vector `≤ b` and `≠ b`.
pub fn demand(rng: &mut StdRng, b: &CapacityVector) -> DemandVector {
    loop {
        let d: Vec<u32> = b.as_slice().iter().map(|&c| rng.random_range(0..=c)).collect();
        if d != b.as_slice() {
            return DemandVector::new(d);
        }
    }
}

/// `|F[X]| ≤ b(X) − 1` for every nonempty `X`, checked set by set.
pub fn sparse_by_definition(g: &Digraph, b: &CapacityVector, f: &[usize]) -> bool {
    let n = g.vertex_count();
    (1u32..1 << n).all(|x| {
        let inside = |v: usize| x >> v & 1 == 1;
        let arcs = f
            .iter()
            .filter(|&&a| inside(g.arc(a).tail) && inside(g.arc(a).head))
            .count() as u64;
        let cap: u64 = (0..n).filter(|&v| inside(v)).map(|v| u64::from(b.get(v))).sum();
        arcs < cap
    })
}

pub fn is_b_branching_by_definition(g: &Digraph, b: &CapacityVector, f: &[usize]) -> bool {
    let mut indeg = vec![0u32; g.vertex_count()];
    for &a in f {
        indeg[g.arc(a).head] += 1;
    }
    indeg.iter().zip(b.as_slice()).all(|(d, c)| d <= c) && sparse_by_definition(g, b, f)
}

/// Random partition matroid on `ground` of rank at most `cap`.
pub fn partition(rng: &mut StdRng, ground: &[usize], cap: u32) -> PartitionOracle {
    let blocks_n = rng.random_range(1..=3usize);
    let mut blocks = vec![Vec::new(); blocks_n];
    for &e in ground {
        blocks[rng.random_range(0..blocks_n)].push(e);
    }
    let mut caps: Vec<usize> = (0..blocks_n).map(|_| rng.random_range(0..=2)).collect();
    let rank = |caps: &[usize]| -> usize {
        blocks.iter().zip(caps).map(|(b, &c)| b.len().min(c)).sum()
    };
    while rank(&caps) > cap as usize {
        let j = (0..blocks_n).find(|&j| caps[j] > 0 && blocks[j].len().min(caps[j]) > 0).unwrap();
        caps[j] -= 1;
    }
    partition_oracle(ground.to_vec(), blocks, caps).unwrap()
}

/// Random b-branching, grown arc by arc in random order.
pub fn random_b_branching(rng: &mut StdRng, g: &Digraph, b: &CapacityVector) -> ArcSubset {
    let mut order: Vec<usize> = (0..g.arc_count()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut f: Vec<usize> = Vec::new();
    for a in order {
        if rng.random_bool(0.3) {
            continue;
        }
        f.push(a);
        if !is_b_branching_by_definition(g, b, &f) {
            f.pop();
        }
    }
    ArcSubset::new(g, f).unwrap()
}
