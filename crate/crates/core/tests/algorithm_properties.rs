mod common;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use bbranching::covering::{check_cover_conditions, cover_by_b_branchings, integer_decompose};
use bbranching::greedy::{max_weight_b_branching, run_greedy, verify_certificate};
use bbranching::matroids::{partition_oracle, MatroidOracle, PartitionOracle};
use bbranching::mrgreedy::{mr_max_weight_b_branching, MatroidAssignment};
use bbranching::oracle::{brute_exists_packing, brute_max_weight, brute_min_set_function, SizeGate};
use bbranching::packing::{
    check_packing_conditions, find_disjoint_b_branchings, g_value, mask_members, precedes, PackingInstance,
};
use bbranching::{ArcSubset, CapacityVector, DemandVector, Digraph, Rational, VertexSet, WeightVector};
use common::is_b_branching_by_definition;
use proptest::prelude::*;

/// Digraph, capacities and integer weights.
fn weighted(
    max_n: usize,
    max_m: usize,
    max_b: u32,
    w_lo: i64,
) -> impl Strategy<Value = (Digraph, CapacityVector, Vec<i64>)> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, w_lo..=10i64), 0..=max_m).prop_flat_map(move |arcs| {
            let g = Digraph::new(n, arcs.iter().map(|&(t, h, _)| (t, h))).unwrap();
            let w: Vec<i64> = arcs.iter().map(|a| a.2).collect();
            prop::collection::vec(1..=max_b, n)
                .prop_map(move |b| (g.clone(), CapacityVector::new(b).unwrap(), w.clone()))
        })
    })
}

fn packing(max_n: usize, max_m: usize, max_k: usize) -> impl Strategy<Value = PackingInstance> {
    weighted(max_n, max_m, 2, 0).prop_flat_map(move |(g, b, _)| {
        let caps = b.as_slice().to_vec();
        let one = caps
            .iter()
            .map(|&c| 0..=c)
            .collect::<Vec<_>>()
            .prop_filter("demand differs from b", {
                let caps = caps.clone();
                move |d: &Vec<u32>| *d != caps
            });
        prop::collection::vec(one, 1..=max_k).prop_map(move |ds| {
            PackingInstance::new(g.clone(), b.clone(), ds.into_iter().map(DemandVector::new).collect()).unwrap()
        })
    })
}

fn laminar(sets: &[Vec<usize>]) -> bool {
    sets.iter().enumerate().all(|(i, x)| {
        sets[i + 1..].iter().all(|y| {
            let common = x.iter().filter(|v| y.contains(v)).count();
            common == 0 || common == x.len() || common == y.len()
        })
    })
}

/// Partition oracle that counts independence queries.
struct Counting {
    inner: PartitionOracle,
    calls: Arc<AtomicUsize>,
}

impl MatroidOracle for Counting {
    fn ground(&self) -> &[usize] {
        self.inner.ground()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.is_independent(set)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn greedy_matches_exhaustive_search((g, b, w) in weighted(6, 12, 3, -4)) {
        let w = WeightVector::from_integers(w);
        let (f, cert) = max_weight_b_branching(&g, &b, &w).unwrap();
        let best = brute_max_weight(&g, &b, &w, &SizeGate::default()).unwrap();
        prop_assert_eq!(w.total(f.arcs().iter()), best);
        prop_assert!(is_b_branching_by_definition(&g, &b, f.arcs().as_slice()));
        prop_assert_eq!(verify_certificate(&g, &b, &w, f.arcs(), &cert), Ok(()));
        prop_assert_eq!(cert.dual_objective(&b), best);
        prop_assert!(cert.is_integral());
        let sets: Vec<Vec<usize>> = cert.p_sets.iter().map(|s| s.set.clone()).collect();
        prop_assert!(laminar(&sets));
    }

    #[test]
    fn rational_weights_keep_certificates_exact(
        (g, b, w) in weighted(5, 10, 2, 0),
        den in 1i128..=6,
    ) {
        let w: Vec<Rational> = w.iter().enumerate().map(|(i, &x)| Rational::new(x.into(), den + (i as i128 % 3))).collect();
        let w = WeightVector::from_rationals(&w).unwrap();
        let (f, cert) = max_weight_b_branching(&g, &b, &w).unwrap();
        prop_assert_eq!(verify_certificate(&g, &b, &w, f.arcs(), &cert), Ok(()));
        prop_assert_eq!(w.total(f.arcs().iter()), brute_max_weight(&g, &b, &w, &SizeGate::default()).unwrap());
    }

    #[test]
    fn phases_shrink_the_graph((g, b, w) in weighted(8, 20, 3, 0)) {
        let w = WeightVector::from_integers(w);
        let run = run_greedy(&g, &b, &w).unwrap();
        // a tight singleton is a vertex whose loops fill its capacity; its
        // contraction keeps the vertex count but deletes those loops
        let looped = |d: &Digraph| {
            let mut has = vec![false; d.vertex_count()];
            for a in d.arcs().iter().filter(|a| a.tail == a.head) {
                has[a.head] = true;
            }
            has.iter().filter(|&&h| h).count()
        };
        let mut n = g.vertex_count();
        let mut potential = n + looped(&g);
        let mut loopless = looped(&g) == 0;
        for p in &run.phases {
            let next = &p.contraction.graph;
            if loopless {
                prop_assert!(next.vertex_count() < n);
            }
            let next_potential = next.vertex_count() + looped(next);
            prop_assert!(next_potential < potential);
            n = next.vertex_count();
            potential = next_potential;
            loopless = looped(next) == 0;
        }
        prop_assert!(run.phases.len() <= 2 * g.vertex_count());
        // same input, same output
        let again = run_greedy(&g, &b, &w).unwrap();
        prop_assert_eq!(run.branching, again.branching);
    }

    #[test]
    fn packing_conditions_match_search(inst in packing(5, 10, 2)) {
        let feasible = check_packing_conditions(&inst).unwrap().is_feasible();
        prop_assert_eq!(feasible, brute_exists_packing(&inst, &SizeGate::default()).unwrap());
        if feasible {
            let result = find_disjoint_b_branchings(&inst).unwrap();
            prop_assert!(result.validate(&inst).is_ok());
        }
    }

    #[test]
    fn g_is_supermodular_on_intersecting_pairs(inst in packing(5, 6, 3)) {
        let n = inst.graph().vertex_count();
        let set = |m: u64| VertexSet::from_unsorted(mask_members(m)).unwrap();
        let g: Vec<u32> = (0..1u64 << n).map(|m| g_value(&inst, &set(m))).collect();
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                if x & y != 0 {
                    prop_assert!(g[x] + g[y] <= g[x | y] + g[x & y]);
                }
            }
        }
    }

    #[test]
    fn covers_exist_exactly_under_the_conditions((g, b, _) in weighted(5, 10, 2, 0), k in 1usize..=3) {
        let ok = check_cover_conditions(&g, &b, k).unwrap().is_feasible();
        match cover_by_b_branchings(&g, &b, k) {
            Ok(parts) => {
                prop_assert!(ok);
                let mut seen = vec![0; g.arc_count()];
                for p in &parts {
                    prop_assert!(is_b_branching_by_definition(&g, &b, p.arcs().as_slice()));
                    for a in p.arcs().iter() {
                        seen[a] += 1;
                    }
                }
                prop_assert!(seen.iter().all(|&c| c == 1));
            }
            Err(_) => prop_assert!(!ok),
        }
    }

    #[test]
    fn sums_of_branchings_decompose((g, b, _) in weighted(5, 9, 2, 0), seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = common::rng(seed);
        let mut x = vec![0u32; g.arc_count()];
        for _ in 0..k {
            for a in common::random_b_branching(&mut rng, &g, &b).iter() {
                x[a] += 1;
            }
        }
        let parts = integer_decompose(&g, &b, k, &x).unwrap();
        prop_assert_eq!(parts.len(), k);
        let mut sum = vec![0u32; g.arc_count()];
        for p in &parts {
            prop_assert!(is_b_branching_by_definition(&g, &b, p.arcs().as_slice()));
            for a in p.arcs().iter() {
                sum[a] += 1;
            }
        }
        prop_assert_eq!(sum, x);
    }

    #[test]
    fn uniform_matroids_reduce_to_greedy((g, b, w) in weighted(7, 16, 3, -2)) {
        let w = WeightVector::from_integers(w);
        let m = MatroidAssignment::uniform(&g, &b).unwrap();
        let f = mr_max_weight_b_branching(&g, &b, &w, &m).unwrap();
        let (bb, _) = max_weight_b_branching(&g, &b, &w).unwrap();
        prop_assert_eq!(w.total(f.iter()), w.total(bb.arcs().iter()));
    }

    #[test]
    fn matroid_output_is_independent_within_budget((g, b, w) in weighted(7, 16, 3, 0), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let calls = Arc::new(AtomicUsize::new(0));
        let oracles: Vec<Box<dyn MatroidOracle>> = g
            .in_arc_lists()
            .into_iter()
            .enumerate()
            .map(|(v, ground)| {
                let p = common::partition(&mut rng, &ground, b.get(v));
                Box::new(Counting { inner: p, calls: calls.clone() }) as Box<dyn MatroidOracle>
            })
            .collect();
        let m = MatroidAssignment::new(&g, &b, oracles).unwrap();
        let w = WeightVector::from_integers(w);
        calls.store(0, Ordering::Relaxed);
        let f = mr_max_weight_b_branching(&g, &b, &w, &m).unwrap();
        let used = calls.load(Ordering::Relaxed);
        prop_assert!(is_b_branching_by_definition(&g, &b, f.as_slice()));
        for (v, list) in g.in_arc_lists().iter().enumerate() {
            let chosen: Vec<usize> = list.iter().copied().filter(|&a| f.contains(a)).collect();
            prop_assert!(m.oracle(v).is_independent(&chosen));
        }
        // per phase: one query per candidate arc, a circuit of at most
        // b + 2 queries per arc entering a tight set, plus the final check
        let bmax = *b.as_slice().iter().max().unwrap() as usize;
        let m_arcs = g.arc_count();
        prop_assert!(used <= m_arcs + (g.vertex_count() + 1) * m_arcs * (bmax + 3) + g.vertex_count());
    }

    #[test]
    fn set_function_minimum_independent_of_scan_order(
        n in 1usize..=6,
        values in prop::collection::vec(-5i64..=5, 64),
        forbid in any::<u64>(),
    ) {
        let h = |m: u64| values[m as usize];
        let allowed = |m: u64| m == 0 || forbid >> (m % 64) & 1 == 0;
        let ours = brute_min_set_function(n, &h, &allowed, &SizeGate::default()).unwrap();
        // descending scan with the same tie-break
        let mut best: Option<(u64, i64)> = None;
        for m in (0..1u64 << n).rev().filter(|&m| allowed(m)) {
            let v = h(m);
            if best.is_none_or(|(bm, bv)| v < bv || (v == bv && precedes(m, bm))) {
                best = Some((m, v));
            }
        }
        prop_assert_eq!(ours.map(|s| (s.set, s.value)), best);
    }
}

#[test]
fn arc_subsets_reject_duplicates() {
    let g = Digraph::new(2, [(0, 1)]).unwrap();
    assert!(ArcSubset::new(&g, [0, 0]).is_err());
    assert!(partition_oracle(vec![0, 0], vec![vec![0]], vec![1]).is_err());
}
