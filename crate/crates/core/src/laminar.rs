//! Forest structure of a laminar family of vertex sets.

use crate::digraph::{VertexId, VertexSet};

#[derive(Clone, Debug)]
pub(crate) struct LaminarForest {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    deepest: Vec<Option<usize>>,
    /// Set indices with every parent before its children.
    order: Vec<usize>,
}

impl LaminarForest {
    /// Fails with the indices of a crossing pair if the family is not
    /// laminar.
    pub(crate) fn new(n: usize, sets: &[VertexSet]) -> Result<Self, (usize, usize)> {
        let mut order: Vec<usize> = (0..sets.len()).collect();
        order.sort_by(|&a, &b| sets[b].len().cmp(&sets[a].len()).then(a.cmp(&b)));
        let mut parent = vec![None; sets.len()];
        let mut depth = vec![0; sets.len()];
        let mut deepest: Vec<Option<usize>> = vec![None; n];
        for &s in &order {
            let members = &sets[s];
            let Some(&first) = members.first() else {
                continue;
            };
            let p = deepest[first];
            for &v in members.iter() {
                if deepest[v] != p {
                    let other = deepest[v].or(p).expect("one side is a set");
                    return Err((other, s));
                }
            }
            parent[s] = p;
            depth[s] = p.map_or(0, |q| depth[q] + 1);
            for &v in members.iter() {
                deepest[v] = Some(s);
            }
        }
        Ok(LaminarForest {
            parent,
            depth,
            deepest,
            order,
        })
    }

    pub(crate) fn parent(&self, s: usize) -> Option<usize> {
        self.parent[s]
    }

    /// Innermost set containing both `u` and `v`. Every set containing both
    /// is on the parent chain of the result.
    pub(crate) fn innermost_common(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let mut a = self.deepest[u]?;
        let mut b = self.deepest[v]?;
        while self.depth[a] > self.depth[b] {
            a = self.parent[a]?;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b]?;
        }
        while a != b {
            a = self.parent[a]?;
            b = self.parent[b]?;
        }
        Some(a)
    }

    /// Sum of `value` along the parent chain starting at each set.
    pub(crate) fn chain_sums<T>(&self, values: &[T]) -> Vec<T>
    where
        T: Clone + std::ops::Add<Output = T>,
    {
        let mut sums: Vec<Option<T>> = vec![None; values.len()];
        for &s in &self.order {
            let own = values[s].clone();
            sums[s] = Some(match self.parent[s] {
                Some(p) => sums[p].clone().expect("parents come first") + own,
                None => own,
            });
        }
        sums.into_iter().map(|s| s.expect("all sets visited")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::from_unsorted(v.iter().copied()).unwrap()
    }

    #[test]
    fn nested_and_disjoint() {
        let sets = [vs(&[0, 1]), vs(&[0, 1, 2, 3]), vs(&[2]), vs(&[4])];
        let f = LaminarForest::new(5, &sets).unwrap();
        assert_eq!(f.parent(0), Some(1));
        assert_eq!(f.parent(2), Some(1));
        assert_eq!(f.parent(1), None);
        assert_eq!(f.innermost_common(0, 1), Some(0));
        assert_eq!(f.innermost_common(0, 2), Some(1));
        assert_eq!(f.innermost_common(2, 2), Some(2));
        assert_eq!(f.innermost_common(0, 4), None);
        assert_eq!(f.chain_sums(&[1, 10, 100, 1000]), vec![11, 10, 110, 1000]);
    }

    #[test]
    fn crossing_sets_rejected() {
        assert!(LaminarForest::new(3, &[vs(&[0, 1]), vs(&[1, 2])]).is_err());
        assert!(LaminarForest::new(4, &[vs(&[0, 1, 2]), vs(&[2, 3])]).is_err());
    }

    #[test]
    fn duplicates_nest() {
        let f = LaminarForest::new(2, &[vs(&[0, 1]), vs(&[0, 1])]).unwrap();
        assert_eq!(f.innermost_common(0, 1), Some(1));
        assert_eq!(f.parent(1), Some(0));
    }
}
