use num_traits::{One, Zero};
use serde::Serialize;

use super::{distinguishing_submeasurement, AffineFunctional};
use crate::eja::EjaElement;
use crate::error::{Error, Result};
use crate::geometry::{FaceLattice, Polytope, Scalar, VertexSet};
use crate::lp::{LinearProgram, Relation};

/// A face of a polytope (vertex set) or of a Jordan-algebra state space.
#[derive(Clone, Debug, PartialEq)]
pub enum Face {
    Polytope(VertexSet),
    Eja(EjaFace),
}

/// Unit-trace part of `U_p(V₊)` for an idempotent `p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EjaFace {
    pub projector: EjaElement,
    pub rank: usize,
}

impl EjaFace {
    /// Face generated by a frame of pairwise orthogonal primitive idempotents.
    pub fn of_frame(frame: &[EjaElement], tol: f64) -> Result<EjaFace> {
        let Some(first) = frame.first() else {
            return Err(Error::InvalidFrame("empty frame".into()));
        };
        for (i, c) in frame.iter().enumerate() {
            if !c.is_primitive_idempotent(tol) {
                return Err(Error::InvalidFrame(format!("element {i} is not a primitive idempotent")));
            }
            for d in &frame[..i] {
                if c.inner(d)?.abs() > tol {
                    return Err(Error::InvalidFrame(format!("element {i} is not orthogonal to an earlier one")));
                }
            }
        }
        let projector = frame[1..].iter().try_fold(first.clone(), |acc, c| acc.add(c))?;
        Ok(EjaFace { projector, rank: frame.len() })
    }

    /// Face of `e − p`.
    pub fn complement(&self) -> EjaFace {
        let alg = self.projector.algebra();
        let projector = EjaElement::unit(alg).sub(&self.projector).expect("same algebra");
        EjaFace { projector, rank: alg.rank() - self.rank }
    }

    /// Centroid `p / rank`.
    pub fn barycenter(&self) -> Option<EjaElement> {
        (self.rank > 0).then(|| self.projector.scale(1.0 / self.rank as f64))
    }

    /// Whether a state lies in the face: `U_p ω = ω`.
    pub fn contains(&self, state: &EjaElement, tol: f64) -> Result<bool> {
        Ok(self.projector.quadratic_rep(state)?.distance(state)? <= tol)
    }
}

/// Effect equal to 1 on `ones` and 0 on `zeros` (vertex sets), if any.
pub(crate) fn separating_effect(p: &Polytope, ones: VertexSet, zeros: VertexSet) -> Result<Option<AffineFunctional>> {
    let d = p.ambient_dim();
    let row = |v: &[Scalar]| {
        let mut r = v.to_vec();
        r.push(Scalar::one());
        r
    };
    let mut lp = LinearProgram::new(d + 1);
    for (i, v) in p.vertices().iter().enumerate() {
        if ones.contains(i) {
            lp.constrain(row(v), Relation::Eq, Scalar::one());
        } else if zeros.contains(i) {
            lp.constrain(row(v), Relation::Eq, Scalar::zero());
        } else {
            lp.constrain(row(v), Relation::Ge, Scalar::zero());
            lp.constrain(row(v), Relation::Le, Scalar::one());
        }
    }
    Ok(lp.feasible()?.witness().map(|mut x| {
        let c = x.pop().expect("d + 1 variables");
        AffineFunctional { a: x, c }
    }))
}

/// Smallest face containing the frame's vertices.
pub fn face_of_frame(p: &Polytope, lattice: &FaceLattice, frame: &[usize]) -> Result<VertexSet> {
    if frame.iter().any(|&i| i >= p.n_vertices()) {
        return Err(Error::InvalidFrame("vertex index out of range".into()));
    }
    let states: Vec<Vec<Scalar>> = frame.iter().map(|&i| p.vertex(i).to_vec()).collect();
    if distinguishing_submeasurement(p, &states)?.is_none() {
        return Err(Error::InvalidFrame(format!("vertices {frame:?} are not perfectly distinguishable")));
    }
    Ok(lattice.join_of(VertexSet::from_indices(frame.iter().copied())))
}

/// The face `F′` of states on which some effect that is 1 on `F` vanishes.
///
/// Collects every vertex separable from `F` by an effect and returns the
/// face they generate; fails if no single effect separates that face from
/// `F`, i.e. the complement is not well defined on this polytope.
pub fn complement_face(p: &Polytope, lattice: &FaceLattice, face: VertexSet) -> Result<VertexSet> {
    if !lattice.contains(face) {
        return Err(Error::InvalidPolytope(format!("{face:?} is not a face")));
    }
    let mut zeros = VertexSet::EMPTY;
    for v in 0..p.n_vertices() {
        if !face.contains(v) && separating_effect(p, face, VertexSet::singleton(v))?.is_some() {
            zeros = zeros.union(VertexSet::singleton(v));
        }
    }
    let g = if zeros.is_empty() { zeros } else { lattice.join_of(zeros) };
    if separating_effect(p, face, g)?.is_none() {
        return Err(Error::Unsupported(format!("no orthocomplement of {face:?} on this polytope")));
    }
    Ok(g)
}

/// Faces generated by subsets of a fixed Jordan frame.
///
/// Lattice operations are evaluated on projectors and read back as subsets
/// of the frame, so the combinatorial laws checked on top of them are
/// statements about the algebra, not about set operations.
#[derive(Clone, Debug)]
pub struct SubFrameLattice {
    frame: Vec<EjaElement>,
    tol: f64,
}

impl SubFrameLattice {
    pub fn new(frame: Vec<EjaElement>, tol: f64) -> Result<Self> {
        let face = EjaFace::of_frame(&frame, tol)?;
        let alg = face.projector.algebra();
        if frame.len() != alg.rank() || face.projector.distance(&EjaElement::unit(alg))? > tol {
            return Err(Error::InvalidFrame("not a Jordan frame".into()));
        }
        Ok(SubFrameLattice { frame, tol })
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn frame(&self) -> &[EjaElement] {
        &self.frame
    }

    pub fn top(&self) -> VertexSet {
        VertexSet::full(self.rank())
    }

    pub fn elements(&self) -> impl Iterator<Item = VertexSet> {
        (0u64..1 << self.rank()).map(VertexSet)
    }

    pub fn projector(&self, s: VertexSet) -> EjaElement {
        let alg = self.frame[0].algebra();
        s.indices().iter().fold(EjaElement::zero(alg), |acc, &i| acc.add(&self.frame[i]).expect("same algebra"))
    }

    /// Frame elements `cᵢ` with `⟨cᵢ, x⟩ > tol`.
    pub fn support(&self, x: &EjaElement) -> VertexSet {
        VertexSet::from_indices((0..self.rank()).filter(|&i| self.frame[i].inner(x).expect("same algebra") > self.tol))
    }

    fn below(&self, c: &EjaElement, p: &EjaElement) -> bool {
        c.jordan_product(p).expect("same algebra").distance(c).expect("same algebra") <= self.tol
    }

    /// `p_S ≤ p_T`, i.e. `p_S ∘ p_T = p_S`.
    pub fn leq(&self, s: VertexSet, t: VertexSet) -> bool {
        self.below(&self.projector(s), &self.projector(t))
    }

    pub fn meet(&self, s: VertexSet, t: VertexSet) -> VertexSet {
        let (ps, pt) = (self.projector(s), self.projector(t));
        VertexSet::from_indices((0..self.rank()).filter(|&i| self.below(&self.frame[i], &ps) && self.below(&self.frame[i], &pt)))
    }

    pub fn join(&self, s: VertexSet, t: VertexSet) -> VertexSet {
        self.support(&self.projector(s).add(&self.projector(t)).expect("same algebra"))
    }

    /// Support of `e − p_S`.
    pub fn complement(&self, s: VertexSet) -> VertexSet {
        let alg = self.frame[0].algebra();
        self.support(&EjaElement::unit(alg).sub(&self.projector(s)).expect("same algebra"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eja::{random_jordan_frame, AlgebraDescriptor};
    use crate::geometry::{exposed_faces, fixtures, DEFAULT_FACE_CAP};
    use crate::operational::spectral_decompose_state;
    use crate::par::Execution;

    #[test]
    fn simplex_faces_and_complements() {
        let p = fixtures::simplex(4);
        let l = exposed_faces(&p, DEFAULT_FACE_CAP, Execution::default()).unwrap();
        let f = face_of_frame(&p, &l, &[0, 1]).unwrap();
        assert_eq!(f, VertexSet::from_indices([0, 1]));
        assert_eq!(complement_face(&p, &l, f).unwrap(), VertexSet::from_indices([2, 3, 4]));
        for &g in l.faces() {
            let gc = complement_face(&p, &l, g).unwrap();
            assert_eq!(complement_face(&p, &l, gc).unwrap(), g);
        }
    }

    #[test]
    fn square_edges_have_opposite_complements() {
        let p = fixtures::square();
        let l = exposed_faces(&p, DEFAULT_FACE_CAP, Execution::default()).unwrap();
        let top = VertexSet::from_indices([0, 1]);
        assert_eq!(complement_face(&p, &l, top).unwrap(), VertexSet::from_indices([2, 3]));
        assert!(matches!(complement_face(&p, &l, VertexSet::singleton(0)), Err(Error::Unsupported(_))));
        assert!(face_of_frame(&p, &l, &[0, 1, 2]).is_err());
    }

    #[test]
    fn herm3_face_of_two_diagonal_units() {
        let a = AlgebraDescriptor::sym_r(3);
        let e = |i| EjaElement::matrix_unit(a, i).unwrap();
        let f = EjaFace::of_frame(&[e(0), e(1)], 1e-10).unwrap();
        let c = f.complement();
        assert_eq!(c.rank, 1);
        assert!(c.projector.distance(&e(2)).unwrap() < 1e-12);
        // the 2×2 block lies in the face, e₃₃ does not
        let block = EjaElement::from_matrix(a, &crate::eja::matrix::Matrix::<f64>::from_coeffs(3, &[0.5, 0.5, 0.0, 0.5, 0.0, 0.0]))
            .unwrap();
        assert!(f.contains(&block, 1e-12).unwrap());
        assert!(!f.contains(&e(2), 1e-12).unwrap());
        assert!(c.contains(&e(2), 1e-12).unwrap());
        assert!(EjaFace::of_frame(&[e(0), e(0)], 1e-10).is_err());
    }

    #[test]
    fn sub_frame_lattice_operations() {
        let a = AlgebraDescriptor::herm_c(3);
        let frame = random_jordan_frame(a, 5).unwrap();
        let l = SubFrameLattice::new(frame, 1e-9).unwrap();
        let s = VertexSet::from_indices([0, 1]);
        let t = VertexSet::from_indices([1, 2]);
        assert_eq!(l.meet(s, t), VertexSet::singleton(1));
        assert_eq!(l.join(s, t), l.top());
        assert_eq!(l.complement(s), VertexSet::singleton(2));
        assert!(l.leq(VertexSet::singleton(0), s) && !l.leq(s, t));
        assert!(SubFrameLattice::new(l.frame()[..2].to_vec(), 1e-9).is_err());
    }

    /// A rank-2 face of Herm(3,ℝ) is itself spectral, with frames drawn from
    /// the face.
    #[test]
    fn rank_two_face_is_hereditarily_spectral() {
        let a = AlgebraDescriptor::sym_r(3);
        let frame = random_jordan_frame(a, 11).unwrap();
        let face = EjaFace::of_frame(&frame[..2], 1e-9).unwrap();
        for seed in 0..20 {
            // random state of the face: compress a random state and renormalise
            let w = crate::eja::random_state(a, seed);
            let z = face.projector.quadratic_rep(&w).unwrap();
            let z = z.scale(1.0 / z.trace());
            assert!(face.contains(&z, 1e-9).unwrap());
            let d = spectral_decompose_state(&z, 1e-9).unwrap();
            assert!(d.frame.len() <= 2);
            for c in &d.frame {
                assert!(face.contains(c, 1e-8).unwrap());
            }
        }
    }
}
