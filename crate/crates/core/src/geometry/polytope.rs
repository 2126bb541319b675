use num_traits::{One, Zero};

use super::linalg::{self, affine_coordinates};
use super::Membership;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, OrderedField, QSqrt5, Relation};

/// Exact coordinates; rational inputs embed as `a + 0·√5`.
pub type Scalar = QSqrt5;

/// Convex hull of finitely many extreme points.
///
/// Besides the ambient vertices the polytope stores each vertex in an affine
/// frame of its own hull, so every query works full-dimensionally.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    vertices: Vec<Vec<Scalar>>,
    origin: usize,
    basis: Vec<usize>,
    local: Vec<Vec<Scalar>>,
}

impl Polytope {
    /// Fails unless the vertices are nonempty, equally sized, pairwise
    /// distinct and each extreme.
    pub fn new(vertices: Vec<Vec<Scalar>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidPolytope("no vertices".into()));
        };
        let d = first.len();
        if vertices.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidPolytope("vertices of different lengths".into()));
        }
        for i in 0..vertices.len() {
            if vertices[..i].contains(&vertices[i]) {
                return Err(Error::InvalidPolytope(format!("vertex {i} repeated")));
            }
        }
        let (origin, basis, local) = affine_coordinates(&vertices);
        let p = Polytope { vertices, origin, basis, local };
        for i in 0..p.n_vertices() {
            let others: Vec<usize> = (0..p.n_vertices()).filter(|&j| j != i).collect();
            if !others.is_empty() && p.in_hull_of(&others, &p.local[i])?.is_some() {
                return Err(Error::InvalidPolytope(format!("vertex {i} is not extreme")));
            }
        }
        Ok(p)
    }

    pub fn from_strings(vertices: &[Vec<String>]) -> Result<Self> {
        let parsed = vertices
            .iter()
            .map(|v| v.iter().map(|s| s.parse::<Scalar>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Polytope::new(parsed)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.vertices.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertices(&self) -> &[Vec<Scalar>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[Scalar] {
        &self.vertices[i]
    }

    /// Vertex coordinates in the affine frame of the hull.
    pub fn local(&self, i: usize) -> &[Scalar] {
        &self.local[i]
    }

    pub fn local_vertices(&self) -> &[Vec<Scalar>] {
        &self.local
    }

    /// Affine-frame coordinates of an ambient point, or `None` off the hull.
    pub fn to_local(&self, point: &[Scalar]) -> Option<Vec<Scalar>> {
        if point.len() != self.ambient_dim() {
            return None;
        }
        let o = &self.vertices[self.origin];
        let a: linalg::Mat<Scalar> = (0..self.ambient_dim())
            .map(|r| self.basis.iter().map(|&b| self.vertices[b][r].clone() - o[r].clone()).collect())
            .collect();
        linalg::solve(&a, &linalg::sub(point, o), self.dim())
    }

    pub fn from_local(&self, c: &[Scalar]) -> Vec<Scalar> {
        let o = &self.vertices[self.origin];
        self.basis.iter().zip(c).fold(o.clone(), |acc, (&b, ck)| {
            linalg::add(&acc, &linalg::scale(&linalg::sub(&self.vertices[b], o), ck))
        })
    }

    /// Convex weights over `among` reproducing `x` (local coordinates), if any.
    pub(crate) fn in_hull_of(&self, among: &[usize], x: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        let mut lp = LinearProgram::new(among.len());
        lp.nonnegative();
        lp.constrain(vec![Scalar::one(); among.len()], Relation::Eq, Scalar::one());
        for (k, xk) in x.iter().enumerate().take(self.dim()) {
            lp.constrain(among.iter().map(|&i| self.local[i][k].clone()).collect(), Relation::Eq, xk.clone());
        }
        Ok(lp.feasible()?.witness())
    }

    /// Exact classification of an ambient point; `Inside` means the relative
    /// interior.
    pub fn membership(&self, point: &[Scalar]) -> Result<Membership> {
        if point.len() != self.ambient_dim() {
            return Err(Error::Dimension(format!("point of length {}, expected {}", point.len(), self.ambient_dim())));
        }
        let Some(x) = self.to_local(point) else { return Ok(Membership::Outside) };
        let n = self.n_vertices();
        // variables λ₀…λₙ₋₁, t; maximise t subject to λᵢ ≥ t
        let mut lp = LinearProgram::new(n + 1);
        for i in 0..n {
            lp.lower[i] = Some(Scalar::zero());
            let mut row = vec![Scalar::zero(); n + 1];
            row[i] = Scalar::one();
            row[n] = -Scalar::one();
            lp.constrain(row, Relation::Ge, Scalar::zero());
        }
        lp.upper[n] = Some(Scalar::one());
        let mut sum = vec![Scalar::one(); n + 1];
        sum[n] = Scalar::zero();
        lp.constrain(sum, Relation::Eq, Scalar::one());
        for (k, xk) in x.iter().enumerate().take(self.dim()) {
            let mut row: Vec<Scalar> = (0..n).map(|i| self.local[i][k].clone()).collect();
            row.push(Scalar::zero());
            lp.constrain(row, Relation::Eq, xk.clone());
        }
        let mut obj = vec![Scalar::zero(); n + 1];
        obj[n] = Scalar::one();
        lp.maximize(obj);
        Ok(match lp.optimize()? {
            LpOutcome::Optimal { value, .. } if value.gt_zero() => Membership::Inside,
            LpOutcome::Optimal { .. } => Membership::Boundary,
            _ => Membership::Outside,
        })
    }

    /// Subpolytope on a subset of the vertices (indices into `self`).
    pub fn sub_polytope(&self, indices: &[usize]) -> Result<Polytope> {
        Polytope::new(indices.iter().map(|&i| self.vertices[i].clone()).collect())
    }

    pub fn map_vertices(&self, f: impl Fn(&[Scalar]) -> Vec<Scalar>) -> Result<Polytope> {
        Polytope::new(self.vertices.iter().map(|v| f(v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    fn s(v: &[&str]) -> Vec<Scalar> {
        v.iter().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn rejects_interior_and_repeated_vertices() {
        let sq = fixtures::square();
        let mut v = sq.vertices().to_vec();
        v.push(s(&["0", "0"]));
        assert!(matches!(Polytope::new(v), Err(Error::InvalidPolytope(_))));
        let mut v = sq.vertices().to_vec();
        v.push(v[0].clone());
        assert!(matches!(Polytope::new(v), Err(Error::InvalidPolytope(_))));
        assert!(Polytope::new(vec![]).is_err());
    }

    #[test]
    fn simplex_in_space_is_two_dimensional() {
        let d = fixtures::simplex(2);
        assert_eq!(d.ambient_dim(), 3);
        assert_eq!(d.dim(), 2);
        let c = s(&["1/3", "1/3", "1/3"]);
        assert_eq!(d.from_local(&d.to_local(&c).unwrap()), c);
        assert!(d.to_local(&s(&["1", "1", "1"])).is_none());
    }

    #[test]
    fn membership_examples() {
        let d = fixtures::simplex(2);
        assert_eq!(d.membership(&s(&["1/3", "1/3", "1/3"])).unwrap(), Membership::Inside);
        assert_eq!(d.membership(&s(&["1/2", "1/2", "0"])).unwrap(), Membership::Boundary);
        assert_eq!(d.membership(&s(&["1", "0", "0"])).unwrap(), Membership::Boundary);
        assert_eq!(d.membership(&s(&["1", "1", "-1"])).unwrap(), Membership::Outside);
        assert_eq!(d.membership(&s(&["1", "1", "1"])).unwrap(), Membership::Outside);
        let sq = fixtures::square();
        assert_eq!(sq.membership(&s(&["1/2", "1/5"])).unwrap(), Membership::Inside);
        assert_eq!(sq.membership(&s(&["1", "1/5"])).unwrap(), Membership::Boundary);
        assert!(sq.membership(&s(&["1"])).is_err());
        let pt = Polytope::new(vec![s(&["2", "3"])]).unwrap();
        assert_eq!(pt.membership(&s(&["2", "3"])).unwrap(), Membership::Inside);
    }

    #[test]
    fn pentagon_vertices_are_extreme() {
        let p = fixtures::pentagon();
        assert_eq!(p.n_vertices(), 5);
        assert_eq!(p.dim(), 2);
    }
}
