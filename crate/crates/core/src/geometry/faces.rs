//! Exposed faces, the face lattice and flags of a polytope.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg;
use super::polytope::{Polytope, Scalar};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, OrderedField, Relation};
use crate::par::Execution;

pub const DEFAULT_FACE_CAP: usize = 14;

/// A set of vertex indices (at most 64 vertices).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        VertexSet(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn singleton(i: usize) -> Self {
        VertexSet(1 << i)
    }

    pub fn from_indices(it: impl IntoIterator<Item = usize>) -> Self {
        VertexSet(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// Image under a vertex permutation.
    pub fn permute(self, perm: &[usize]) -> Self {
        VertexSet::from_indices(self.indices().into_iter().map(|i| perm[i]))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.iter().any(|&i| i >= 64) {
            return Err(serde::de::Error::custom("vertex index ≥ 64"));
        }
        Ok(VertexSet::from_indices(v))
    }
}

/// Strictly increasing chain of nonempty faces.
pub type Flag = Vec<VertexSet>;

/// A functional `a·x + b` (affine-frame coordinates) vanishing on the face
/// and at most −1 on every other vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ExposingFunctional {
    pub a: Vec<Scalar>,
    pub b: Scalar,
}

impl ExposingFunctional {
    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        linalg::dot(&self.a, x) + self.b.clone()
    }

    /// Vertices at which the functional attains its maximum over the polytope.
    pub fn argmax(&self, p: &Polytope) -> VertexSet {
        let values: Vec<Scalar> = p.local_vertices().iter().map(|v| self.eval(v)).collect();
        let best = values.iter().max().expect("nonempty polytope").clone();
        VertexSet::from_indices(values.iter().enumerate().filter(|(_, v)| **v == best).map(|(i, _)| i))
    }
}

/// All exposed faces of a polytope, including ∅ and the polytope itself,
/// ordered by size and then by vertex bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceLattice {
    n_vertices: usize,
    faces: Vec<VertexSet>,
    certificates: Vec<Option<ExposingFunctional>>,
}

fn exposing_functional(p: &Polytope, s: VertexSet) -> Result<Option<ExposingFunctional>> {
    let d = p.dim();
    let mut lp = LinearProgram::new(d + 1);
    for (i, v) in p.local_vertices().iter().enumerate() {
        let mut row = v.clone();
        row.push(Scalar::one());
        if s.contains(i) {
            lp.constrain(row, Relation::Eq, Scalar::zero());
        } else {
            lp.constrain(row, Relation::Le, -Scalar::one());
        }
    }
    Ok(lp.feasible()?.witness().map(|mut w| {
        let b = w.pop().expect("d + 1 variables");
        ExposingFunctional { a: w, b }
    }))
}

impl FaceLattice {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn faces(&self) -> &[VertexSet] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn top(&self) -> VertexSet {
        VertexSet::full(self.n_vertices)
    }

    pub fn bottom(&self) -> VertexSet {
        VertexSet::EMPTY
    }

    pub fn contains(&self, f: VertexSet) -> bool {
        self.faces.binary_search_by(|g| (g.len(), *g).cmp(&(f.len(), f))).is_ok()
    }

    /// Exposing functional of a nonempty face (`None` for ∅ or non-faces).
    pub fn certificate(&self, f: VertexSet) -> Option<&ExposingFunctional> {
        let i = self.faces.binary_search_by(|g| (g.len(), *g).cmp(&(f.len(), f))).ok()?;
        self.certificates[i].as_ref()
    }

    /// Faces with exactly `k` vertices.
    pub fn faces_of_size(&self, k: usize) -> impl Iterator<Item = VertexSet> + '_ {
        self.faces.iter().copied().filter(move |f| f.len() == k)
    }

    pub fn meet(&self, a: VertexSet, b: VertexSet) -> VertexSet {
        a.intersection(b)
    }

    /// Smallest face containing the given vertices.
    pub fn join_of(&self, s: VertexSet) -> VertexSet {
        self.faces.iter().copied().find(|f| s.is_subset(*f)).unwrap_or(self.top())
    }

    pub fn join(&self, a: VertexSet, b: VertexSet) -> VertexSet {
        self.join_of(a.union(b))
    }

    /// Faces `g ⊋ f` with no face strictly between.
    pub fn covers(&self, f: VertexSet) -> Vec<VertexSet> {
        let above: Vec<VertexSet> = self.faces.iter().copied().filter(|g| f.is_subset(*g) && *g != f).collect();
        above
            .iter()
            .copied()
            .filter(|g| !above.iter().any(|h| h != g && h.is_subset(*g)))
            .collect()
    }

    /// Maximal proper subfaces of `f`, excluding ∅.
    pub fn facets_of(&self, f: VertexSet) -> Vec<VertexSet> {
        let below: Vec<VertexSet> =
            self.faces.iter().copied().filter(|g| g.is_subset(f) && *g != f && !g.is_empty()).collect();
        below
            .iter()
            .copied()
            .filter(|g| !below.iter().any(|h| h != g && g.is_subset(*h)))
            .collect()
    }

    /// Maximal chains of nonempty faces, each ending at the whole polytope.
    pub fn maximal_flags(&self) -> Vec<Flag> {
        let mut out = Vec::new();
        for atom in self.covers(VertexSet::EMPTY) {
            let mut chain = vec![atom];
            self.extend_chains(&mut chain, &mut out);
        }
        out
    }

    fn extend_chains(&self, chain: &mut Flag, out: &mut Vec<Flag>) {
        let last = *chain.last().expect("nonempty chain");
        if last == self.top() {
            out.push(chain.clone());
            return;
        }
        for g in self.covers(last) {
            chain.push(g);
            self.extend_chains(chain, out);
            chain.pop();
        }
    }

    /// Every strictly increasing chain of nonempty faces.
    pub fn flags(&self) -> Vec<Flag> {
        let nonempty: Vec<VertexSet> = self.faces.iter().copied().filter(|f| !f.is_empty()).collect();
        let mut out = Vec::new();
        fn grow(from: usize, nonempty: &[VertexSet], chain: &mut Flag, out: &mut Vec<Flag>) {
            for (j, &g) in nonempty.iter().enumerate().skip(from) {
                if chain.last().is_none_or(|l| l.is_subset(g) && *l != g) {
                    chain.push(g);
                    out.push(chain.clone());
                    grow(j + 1, nonempty, chain, out);
                    chain.pop();
                }
            }
        }
        grow(0, &nonempty, &mut Vec::new(), &mut out);
        out
    }
}

/// Enumerates all exposed faces with one exact LP per vertex subset.
pub fn exposed_faces(p: &Polytope, cap: usize, exec: Execution) -> Result<FaceLattice> {
    let n = p.n_vertices();
    if n > cap || n > 63 {
        return Err(Error::CapExceeded { count: n, cap });
    }
    let found = exec.map(1usize << n, |mask| {
        let s = VertexSet(mask as u64);
        if s.is_empty() {
            return Ok(Some((s, None)));
        }
        Ok(exposing_functional(p, s)?.map(|c| (s, Some(c))))
    });
    let mut faces: Vec<(VertexSet, Option<ExposingFunctional>)> =
        found.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    faces.sort_by_key(|(f, _)| (f.len(), *f));
    let (faces, certificates) = faces.into_iter().unzip();
    Ok(FaceLattice { n_vertices: n, faces, certificates })
}

/// Exact volume-weighted centroid of a face, in ambient coordinates.
pub fn face_barycenter(p: &Polytope, lattice: &FaceLattice, face: VertexSet) -> Result<Vec<Scalar>> {
    if face.is_empty() || !lattice.contains(face) {
        return Err(Error::InvalidPolytope(format!("{face:?} is not a nonempty face")));
    }
    let idx = face.indices();
    let pts: Vec<Vec<Scalar>> = idx.iter().map(|&i| p.vertex(i).to_vec()).collect();
    let (_, basis, coords) = linalg::affine_coordinates(&pts);
    let k = basis.len();
    let pos = |v: usize| idx.iter().position(|&i| i == v).expect("vertex of face");

    let mut total = Scalar::zero();
    let mut weighted = vec![Scalar::zero(); p.ambient_dim()];
    for simplex in triangulate(lattice, face) {
        let base = &coords[pos(simplex[0])];
        let m: linalg::Mat<Scalar> = simplex[1..].iter().map(|&v| linalg::sub(&coords[pos(v)], base)).collect();
        debug_assert_eq!(m.len(), k);
        let mut vol = linalg::determinant(m);
        if vol.lt_zero() {
            vol = -vol;
        }
        let centroid = simplex
            .iter()
            .fold(vec![Scalar::zero(); p.ambient_dim()], |acc, &v| linalg::add(&acc, p.vertex(v)));
        weighted = linalg::add(&weighted, &linalg::scale(&centroid, &vol));
        total = total + vol;
    }
    let norm = Scalar::one() / (total * Scalar::from_int(k as i64 + 1));
    Ok(linalg::scale(&weighted, &norm))
}

/// Pulling triangulation of a face from its lowest-index vertex.
fn triangulate(lattice: &FaceLattice, face: VertexSet) -> Vec<Vec<usize>> {
    let idx = face.indices();
    if idx.len() == 1 {
        return vec![idx];
    }
    let apex = idx[0];
    let mut out = Vec::new();
    for g in lattice.facets_of(face) {
        if g.contains(apex) {
            continue;
        }
        for mut s in triangulate(lattice, g) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    fn lattice(p: &Polytope) -> FaceLattice {
        exposed_faces(p, DEFAULT_FACE_CAP, Execution::default()).unwrap()
    }

    fn count_by_size(l: &FaceLattice) -> Vec<usize> {
        (0..=l.n_vertices()).map(|k| l.faces_of_size(k).count()).collect()
    }

    #[test]
    fn triangle_faces_and_flags() {
        let l = lattice(&fixtures::simplex(2));
        assert_eq!(count_by_size(&l), vec![1, 3, 3, 1]);
        assert_eq!(l.maximal_flags().len(), 6);
        assert!(l.maximal_flags().iter().all(|f| f.last() == Some(&l.top())));
    }

    #[test]
    fn square_faces_and_flags() {
        let l = lattice(&fixtures::square());
        assert_eq!(count_by_size(&l), vec![1, 4, 4, 0, 1]);
        assert_eq!(l.maximal_flags().len(), 8);
        // diagonal vertices join to the whole square
        assert_eq!(l.join(VertexSet::singleton(0), VertexSet::singleton(2)), l.top());
    }

    #[test]
    fn single_point_lattice() {
        let p = Polytope::new(vec![vec![Scalar::from(1)]]).unwrap();
        let l = lattice(&p);
        assert_eq!(l.faces(), &[VertexSet::EMPTY, VertexSet::singleton(0)]);
        assert_eq!(l.maximal_flags(), vec![vec![VertexSet::singleton(0)]]);
    }

    #[test]
    fn cube_and_octahedron_face_counts() {
        assert_eq!(count_by_size(&lattice(&fixtures::cube())), vec![1, 8, 12, 0, 6, 0, 0, 0, 1]);
        assert_eq!(count_by_size(&lattice(&fixtures::octahedron())), vec![1, 6, 12, 8, 0, 0, 1]);
    }

    #[test]
    fn certificates_expose_their_faces() {
        for p in [fixtures::pentagon(), fixtures::cube(), fixtures::simplex(3)] {
            let l = lattice(&p);
            for &f in l.faces().iter().filter(|f| !f.is_empty()) {
                assert_eq!(l.certificate(f).unwrap().argmax(&p), f);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let p = fixtures::cube();
        assert_eq!(
            exposed_faces(&p, 7, Execution::Sequential).unwrap_err(),
            Error::CapExceeded { count: 8, cap: 7 }
        );
    }

    #[test]
    fn barycenters() {
        let s = |v: &[&str]| v.iter().map(|x| x.parse::<Scalar>().unwrap()).collect::<Vec<_>>();
        let d = fixtures::simplex(2);
        assert_eq!(face_barycenter(&d, &lattice(&d), VertexSet::full(3)).unwrap(), s(&["1/3", "1/3", "1/3"]));
        let sq = fixtures::square();
        assert_eq!(face_barycenter(&sq, &lattice(&sq), VertexSet::full(4)).unwrap(), s(&["0", "0"]));
        // shoelace centroid of (0,0),(2,0),(2,1),(0,3)
        let q = Polytope::new(vec![s(&["0", "0"]), s(&["2", "0"]), s(&["2", "1"]), s(&["0", "3"])]).unwrap();
        assert_eq!(face_barycenter(&q, &lattice(&q), VertexSet::full(4)).unwrap(), s(&["5/6", "13/12"]));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let p = fixtures::cube();
        assert_eq!(
            exposed_faces(&p, DEFAULT_FACE_CAP, Execution::Sequential).unwrap(),
            exposed_faces(&p, DEFAULT_FACE_CAP, Execution::Parallel).unwrap()
        );
    }
}
