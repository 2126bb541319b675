//! Convex bodies: polytopes with exact coordinates, Euclidean balls, and
//! normalized state spaces of Euclidean Jordan algebras.

mod canonical;
mod faces;
pub mod fixtures;
pub mod linalg;
mod polytope;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use canonical::{canonical_embed, AffineMap, CanonicalEmbedding};
pub use faces::{exposed_faces, face_barycenter, ExposingFunctional, FaceLattice, Flag, VertexSet, DEFAULT_FACE_CAP};
pub use polytope::{Polytope, Scalar};

use crate::eja::{AlgebraDescriptor, EjaElement};
use crate::error::{Error, Result};
use crate::par::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// The three kinds of state space handled by the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    Polytope(Polytope),
    /// Unit ball in ℝⁿ centred at the origin.
    Ball(usize),
    /// Unit-trace elements of the cone of squares.
    Eja(AlgebraDescriptor),
}

/// JSON form of a body: `{"type":"polytope","vertices":[["1","0"],…]}`,
/// `{"type":"ball","n":3}` or `{"type":"eja","family":"herm_c","m":3}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodyJson {
    Polytope { vertices: Vec<Vec<String>> },
    Ball { n: usize },
    Eja(AlgebraDescriptor),
}

impl TryFrom<BodyJson> for ConvexBody {
    type Error = Error;

    fn try_from(j: BodyJson) -> Result<Self> {
        Ok(match j {
            BodyJson::Polytope { vertices } => ConvexBody::Polytope(Polytope::from_strings(&vertices)?),
            BodyJson::Ball { n } if n >= 1 => ConvexBody::Ball(n),
            BodyJson::Ball { n } => return Err(Error::Dimension(format!("ball of dimension {n}"))),
            BodyJson::Eja(a) => ConvexBody::Eja(a),
        })
    }
}

impl From<&ConvexBody> for BodyJson {
    fn from(b: &ConvexBody) -> Self {
        match b {
            ConvexBody::Polytope(p) => BodyJson::Polytope { vertices: p.to_strings() },
            ConvexBody::Ball(n) => BodyJson::Ball { n: *n },
            ConvexBody::Eja(a) => BodyJson::Eja(*a),
        }
    }
}

impl ConvexBody {
    pub fn from_json(s: &str) -> Result<Self> {
        let j: BodyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BodyJson::from(self)).expect("body JSON is serializable")
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.dim(),
            ConvexBody::Ball(n) => *n,
            ConvexBody::Eja(a) => a.dim() - 1,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ConvexBody::Polytope(p) => format!("polytope({} vertices, dim {})", p.n_vertices(), p.dim()),
            ConvexBody::Ball(n) => format!("ball({n})"),
            ConvexBody::Eja(a) => format!("states({a})"),
        }
    }
}

/// A point of a body, in the body's own coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum BodyPoint {
    Exact(Vec<Scalar>),
    Float(Vec<f64>),
    Eja(EjaElement),
}

/// Centroid of the body under its Lebesgue (relative-interior) measure.
pub fn barycenter(body: &ConvexBody) -> Result<BodyPoint> {
    Ok(match body {
        ConvexBody::Polytope(p) => {
            let l = exposed_faces(p, DEFAULT_FACE_CAP, Execution::default())?;
            BodyPoint::Exact(face_barycenter(p, &l, l.top())?)
        }
        ConvexBody::Ball(n) => BodyPoint::Exact(vec![Scalar::zero(); *n]),
        ConvexBody::Eja(a) => BodyPoint::Eja(EjaElement::unit(*a).scale(1.0 / a.rank() as f64)),
    })
}

/// Tolerance for floating-point membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

pub fn membership(body: &ConvexBody, point: &BodyPoint) -> Result<Membership> {
    match (body, point) {
        (ConvexBody::Polytope(p), BodyPoint::Exact(x)) => p.membership(x),
        (ConvexBody::Ball(n), BodyPoint::Exact(x)) if x.len() == *n => {
            let r2 = x.iter().fold(Scalar::zero(), |acc, v| acc + v.clone() * v.clone());
            Ok(match r2.cmp(&Scalar::one()) {
                std::cmp::Ordering::Less => Membership::Inside,
                std::cmp::Ordering::Equal => Membership::Boundary,
                std::cmp::Ordering::Greater => Membership::Outside,
            })
        }
        (ConvexBody::Ball(n), BodyPoint::Float(x)) if x.len() == *n => {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Ok(classify(1.0 - r2))
        }
        (ConvexBody::Eja(a), BodyPoint::Eja(x)) => {
            if x.algebra() != *a {
                return Err(Error::AlgebraMismatch(a.to_string(), x.algebra().to_string()));
            }
            if (x.trace() - 1.0).abs() > MEMBERSHIP_TOL {
                return Ok(Membership::Outside);
            }
            Ok(classify(x.min_eigenvalue()?))
        }
        _ => Err(Error::Dimension(format!("point does not match {}", body.name()))),
    }
}

fn classify(margin: f64) -> Membership {
    if margin > MEMBERSHIP_TOL {
        Membership::Inside
    } else if margin >= -MEMBERSHIP_TOL {
        Membership::Boundary
    } else {
        Membership::Outside
    }
}

/// The cone `ℝ₊Ω` with its order unit.
#[derive(Clone, Debug, PartialEq)]
pub enum ConeEmbedding {
    /// Cone generated by `rays`; `order_unit · ray = 1` for every ray.
    /// `lifted` is set when the rays are `(local coordinates, 1)`.
    Polyhedral { rays: Vec<Vec<Scalar>>, order_unit: Vec<Scalar>, lifted: bool },
    /// `{(x, t) ∈ ℝⁿ × ℝ : ‖x‖ ≤ t}` with order unit `(0, 1)`.
    Lorentz { n: usize },
    /// Cone of squares; the order unit is `e` under the trace form.
    Symmetric { algebra: AlgebraDescriptor, order_unit: EjaElement },
}

impl ConeEmbedding {
    pub fn dimension(&self) -> usize {
        match self {
            ConeEmbedding::Polyhedral { order_unit, .. } => order_unit.len(),
            ConeEmbedding::Lorentz { n } => n + 1,
            ConeEmbedding::Symmetric { algebra, .. } => algebra.dim(),
        }
    }
}

pub fn cone_embed(body: &ConvexBody) -> ConeEmbedding {
    match body {
        ConvexBody::Polytope(p) => {
            // use the ambient space when its vertices span it from an affine hull missing 0
            let n = p.ambient_dim();
            let ones = vec![Scalar::one(); p.n_vertices()];
            let direct = (linalg::independent_subset(p.vertices()).len() == n)
                .then(|| linalg::solve(&p.vertices().to_vec(), &ones, n))
                .flatten();
            match direct {
                Some(u) => ConeEmbedding::Polyhedral { rays: p.vertices().to_vec(), order_unit: u, lifted: false },
                None => {
                    let rays = p
                        .local_vertices()
                        .iter()
                        .map(|v| {
                            let mut r = v.clone();
                            r.push(Scalar::one());
                            r
                        })
                        .collect();
                    let mut u = vec![Scalar::zero(); p.dim()];
                    u.push(Scalar::one());
                    ConeEmbedding::Polyhedral { rays, order_unit: u, lifted: true }
                }
            }
        }
        ConvexBody::Ball(n) => ConeEmbedding::Lorentz { n: *n },
        ConvexBody::Eja(a) => ConeEmbedding::Symmetric { algebra: *a, order_unit: EjaElement::unit(*a) },
    }
}
