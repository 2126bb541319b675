use std::collections::BTreeMap;

use serde::Serialize;

use super::{complete, distinguishing_submeasurement, AffineFunctional, Measurement};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, VertexSet};
use crate::par::Execution;

pub const DEFAULT_VERTEX_CAP: usize = 12;

/// Ordered vertices together with a measurement distinguishing them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Frame {
    pub vertices: Vec<usize>,
    pub measurement: Measurement,
}

/// Every perfectly distinguishable vertex set of a polytope, by cardinality.
///
/// Distinguishability does not depend on the order of the states, so sets
/// are stored unordered, each with the submeasurement found for its sorted
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameCatalog {
    n_vertices: usize,
    /// `by_size[k]` lists the distinguishable `k`-sets in increasing bitmask order.
    by_size: Vec<Vec<(VertexSet, Vec<AffineFunctional>)>>,
}

fn subsets_of_size(n: usize, k: usize) -> Vec<VertexSet> {
    (0u64..1 << n).map(VertexSet).filter(|s| s.len() == k).collect()
}

/// Builds the catalog level by level; a `k`-set is tried only when all of
/// its `(k−1)`-subsets are distinguishable.
pub fn frame_catalog(p: &Polytope, cap: usize, exec: Execution) -> Result<FrameCatalog> {
    let n = p.n_vertices();
    if n > cap || n > 63 {
        return Err(Error::CapExceeded { count: n, cap });
    }
    let mut by_size: Vec<Vec<(VertexSet, Vec<AffineFunctional>)>> = vec![vec![(VertexSet::EMPTY, vec![])]];
    for k in 1..=n {
        let prev: Vec<VertexSet> = by_size[k - 1].iter().map(|(s, _)| *s).collect();
        let candidates: Vec<VertexSet> = subsets_of_size(n, k)
            .into_iter()
            .filter(|s| s.indices().iter().all(|&i| prev.binary_search(&VertexSet(s.0 & !(1 << i))).is_ok()))
            .collect();
        let found = exec.map_slice(&candidates, |s| {
            let states: Vec<Vec<_>> = s.indices().iter().map(|&i| p.vertex(i).to_vec()).collect();
            Ok(distinguishing_submeasurement(p, &states)?.map(|e| (*s, e)))
        });
        let level: Vec<_> = found.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
        if level.is_empty() {
            break;
        }
        by_size.push(level);
    }
    Ok(FrameCatalog { n_vertices: n, by_size })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

impl FrameCatalog {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Maximal frame cardinality.
    pub fn rank(&self) -> usize {
        self.by_size.len() - 1
    }

    /// Unordered distinguishable sets of size `k`.
    pub fn sets(&self, k: usize) -> Vec<VertexSet> {
        self.by_size.get(k).map(|l| l.iter().map(|(s, _)| *s).collect()).unwrap_or_default()
    }

    pub fn is_frame_set(&self, s: VertexSet) -> bool {
        self.by_size.get(s.len()).is_some_and(|l| l.binary_search_by_key(&s, |(t, _)| *t).is_ok())
    }

    /// Sets not contained in a larger distinguishable set.
    pub fn maximal_sets(&self) -> Vec<VertexSet> {
        let all: Vec<VertexSet> = self.by_size.iter().skip(1).flatten().map(|(s, _)| *s).collect();
        all.iter().copied().filter(|s| !all.iter().any(|t| t != s && s.is_subset(*t))).collect()
    }

    /// Number of ordered frames of each size `k ≥ 1`.
    pub fn ordered_counts(&self) -> BTreeMap<usize, usize> {
        (1..self.by_size.len())
            .map(|k| (k, self.by_size[k].len() * (1..=k).product::<usize>()))
            .collect()
    }

    /// All ordered `k`-frames in lexicographic order of vertex indices, each
    /// with a completed measurement.
    pub fn ordered(&self, p: &Polytope, k: usize) -> Vec<Frame> {
        let Some(level) = self.by_size.get(k) else { return vec![] };
        let mut out: Vec<Frame> = level
            .iter()
            .flat_map(|(s, effects)| {
                let idx = s.indices();
                permutations(&(0..k).collect::<Vec<_>>()).into_iter().map(move |perm| {
                    let vertices = perm.iter().map(|&i| idx[i]).collect();
                    let effects = perm.iter().map(|&i| effects[i].clone()).collect();
                    (vertices, effects)
                })
            })
            .map(|(vertices, effects)| Frame { vertices, measurement: complete(p, effects) })
            .collect();
        out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        out
    }
}

/// All ordered `k`-frames of vertices, lexicographically.
pub fn enumerate_frames(p: &Polytope, k: usize, cap: usize, exec: Execution) -> Result<Vec<Frame>> {
    Ok(frame_catalog(p, cap, exec)?.ordered(p, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    fn catalog(p: &Polytope) -> FrameCatalog {
        frame_catalog(p, DEFAULT_VERTEX_CAP, Execution::default()).unwrap()
    }

    #[test]
    fn triangle_frames() {
        let p = fixtures::simplex(2);
        let frames = enumerate_frames(&p, 3, DEFAULT_VERTEX_CAP, Execution::default()).unwrap();
        assert_eq!(frames.len(), 6);
        assert_eq!(frames[0].vertices, vec![0, 1, 2]);
        assert_eq!(frames[5].vertices, vec![2, 1, 0]);
        for f in &frames {
            let states: Vec<_> = f.vertices.iter().map(|&i| p.vertex(i).to_vec()).collect();
            assert!(f.measurement.is_valid_on(&p) && f.measurement.distinguishes(&states));
        }
    }

    #[test]
    fn pentagon_frames_are_non_adjacent_pairs() {
        let p = fixtures::pentagon();
        let c = catalog(&p);
        assert_eq!(c.rank(), 2);
        let pairs: Vec<Vec<usize>> = c.ordered(&p, 2).into_iter().map(|f| f.vertices).collect();
        assert_eq!(pairs.len(), 10);
        assert!(pairs.iter().all(|v| matches!((v[0] + 5 - v[1]) % 5, 2 | 3)));
        assert!(c.ordered(&p, 3).is_empty());
    }

    #[test]
    fn square_frames_are_all_pairs() {
        let p = fixtures::square();
        let c = catalog(&p);
        assert_eq!(c.ordered_counts(), BTreeMap::from([(1, 4), (2, 12)]));
        assert!(c.sets(3).is_empty());
    }

    #[test]
    fn simplex_rank_and_maximal_frames() {
        let p = fixtures::simplex(4);
        let c = catalog(&p);
        assert_eq!(c.rank(), 5);
        assert_eq!(c.maximal_sets(), vec![VertexSet::full(5)]);
    }

    #[test]
    fn cap_exceeded() {
        assert!(matches!(
            frame_catalog(&fixtures::cube(), 7, Execution::Sequential),
            Err(Error::CapExceeded { count: 8, cap: 7 })
        ));
    }
}
