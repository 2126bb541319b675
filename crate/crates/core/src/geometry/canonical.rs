//! Affine maps of a polytope's hull and the group-averaged inner product.

use num_traits::{One, Zero};
use serde::Serialize;

use super::linalg::{self, Mat};
use super::polytope::{Polytope, Scalar};
use crate::lp::OrderedField;

/// `x ↦ linear·x + translation` in affine-frame coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub linear: Mat<Scalar>,
    pub translation: Vec<Scalar>,
}

impl AffineMap {
    pub fn identity(d: usize) -> Self {
        AffineMap { linear: linalg::identity(d), translation: vec![Scalar::zero(); d] }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        linalg::add(&linalg::mat_vec(&self.linear, x), &self.translation)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: linalg::mat_mul(&self.linear, &other.linear, self.dim()),
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let inv = linalg::inverse(&self.linear)?;
        let t = linalg::mat_vec(&inv, &self.translation);
        Some(AffineMap { linear: inv, translation: t.into_iter().map(|v| -v).collect() })
    }
}

/// Polytope centred at its barycenter, with an inner product for which every
/// supplied automorphism is orthogonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalEmbedding {
    /// Vertices in affine-frame coordinates minus the barycenter.
    #[serde(serialize_with = "ser_mat")]
    pub centered: Mat<Scalar>,
    /// Averaged Gram matrix `(1/|G|) Σ Lᵀ L`.
    #[serde(serialize_with = "ser_mat")]
    pub gram: Mat<Scalar>,
}

fn ser_mat<S: serde::Serializer>(m: &Mat<Scalar>, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    m.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
}

impl CanonicalEmbedding {
    pub fn inner(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        linalg::dot(x, &linalg::mat_vec(&self.gram, y))
    }

    /// Pairwise inner products of the centred vertices.
    pub fn vertex_gram(&self) -> Mat<Scalar> {
        self.centered.iter().map(|x| self.centered.iter().map(|y| self.inner(x, y)).collect()).collect()
    }

    /// Whether `Lᵀ M L = M` for the linear part of `g`.
    pub fn is_orthogonal(&self, g: &AffineMap) -> bool {
        let d = g.dim();
        let lt = linalg::transpose(&g.linear, d);
        linalg::mat_mul(&linalg::mat_mul(&lt, &self.gram, d), &g.linear, d) == self.gram
    }
}

/// Centres `p` at `barycenter_local` and averages the standard Gram matrix
/// over `group`.
pub fn canonical_embed(p: &Polytope, barycenter_local: &[Scalar], group: &[AffineMap]) -> CanonicalEmbedding {
    let d = p.dim();
    let centered = p.local_vertices().iter().map(|v| linalg::sub(v, barycenter_local)).collect();
    let mut gram: Mat<Scalar> = vec![vec![Scalar::zero(); d]; d];
    for g in group {
        let lt = linalg::transpose(&g.linear, d);
        let term = linalg::mat_mul(&lt, &g.linear, d);
        gram = gram.iter().zip(&term).map(|(a, b)| linalg::add(a, b)).collect();
    }
    let inv = Scalar::one() / Scalar::from_int(group.len().max(1) as i64);
    if group.is_empty() {
        gram = linalg::identity(d);
    } else {
        gram = gram.iter().map(|r| linalg::scale(r, &inv)).collect();
    }
    CanonicalEmbedding { centered, gram }
}
