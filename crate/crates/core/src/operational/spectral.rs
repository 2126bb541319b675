use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::frames::{frame_catalog, FrameCatalog, DEFAULT_VERTEX_CAP};
use crate::eja::{random_state, AlgebraDescriptor, EjaElement, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::geometry::{linalg, ConvexBody, Polytope, Scalar, VertexSet};
use crate::lp::OrderedField;
use crate::par::{trial_seed, Execution};

/// Default number of sampled points when searching for an uncovered state.
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Clone, Copy, Debug)]
pub struct SpectralOptions {
    pub cap: usize,
    pub samples: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { cap: DEFAULT_VERTEX_CAP, samples: DEFAULT_SAMPLES, seed: 0, exec: Execution::default() }
    }
}

/// Why a body is spectral.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralityCertificate {
    /// One frame contains every vertex, so every state is a convex
    /// combination of that frame (barycentric coordinates).
    SingleFrame { vertices: VertexSet },
    /// Every state lies on a diameter of the ball.
    Diameter,
    /// Spectral decomposition into a Jordan frame.
    JordanFrame,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Spectrality {
    Spectral(SpectralityCertificate),
    /// No uncovered point among `samples` random states; not a proof.
    Probabilistic { samples: usize },
    /// A state in no frame's convex hull.
    NotSpectral { counterexample: Vec<Scalar> },
}

impl Spectrality {
    pub fn is_spectral(&self) -> bool {
        matches!(self, Spectrality::Spectral(_))
    }
}

/// Report of a spectrality check, serialised as the verdict JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    /// `true`, `false` or `"probabilistic"`.
    pub spectral: serde_json::Value,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
    /// Ordered frame counts per cardinality (polytopes only).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub frames_by_k: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SpectralityCertificate>,
}

/// Random relative-interior point with rational convex weights in `1..=100`.
fn sample_point(p: &Polytope, seed: u64) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<i64> = (0..p.n_vertices()).map(|_| rng.random_range(1..=100)).collect();
    let total: i64 = w.iter().sum();
    p.vertices().iter().zip(&w).fold(vec![Scalar::zero(); p.ambient_dim()], |acc, (v, &wi)| {
        linalg::add(&acc, &linalg::scale(v, &Scalar::ratio(wi, total)))
    })
}

/// Whether `x` lies in the convex hull of some frame.
pub(crate) fn covered(p: &Polytope, frames: &[VertexSet], x: &[Scalar]) -> Result<bool> {
    let Some(local) = p.to_local(x) else { return Ok(false) };
    for f in frames {
        if p.in_hull_of(&f.indices(), &local)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Spectrality of a polytope from its frame catalog.
///
/// A frame with `dim + 1` elements forces its effects to be the barycentric
/// coordinates of its hull, which then contains every vertex; so the polytope
/// is spectral exactly when the rank is `dim + 1`. Below that, frame hulls
/// have measure zero and a sampled point misses them almost surely; the
/// first such point is certified by exact LP.
pub(crate) fn polytope_spectrality(p: &Polytope, catalog: &FrameCatalog, opts: &SpectralOptions) -> Result<Spectrality> {
    if let Some(&all) = catalog.maximal_sets().iter().find(|s| s.len() == p.n_vertices()) {
        return Ok(Spectrality::Spectral(SpectralityCertificate::SingleFrame { vertices: all }));
    }
    let frames = catalog.maximal_sets();
    let hit = opts.exec.find_first(opts.samples, |i| {
        let x = sample_point(p, trial_seed(opts.seed, i));
        match covered(p, &frames, &x) {
            Ok(false) => Some(Ok(x)),
            Ok(true) => None,
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        Some((_, x)) => Ok(Spectrality::NotSpectral { counterexample: x? }),
        None => Ok(Spectrality::Probabilistic { samples: opts.samples }),
    }
}

/// A point written as a convex combination of one frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameDecomposition {
    pub frame: Vec<usize>,
    pub weights: Vec<Scalar>,
}

/// Convex weights over the first maximal frame (in catalog order) whose hull
/// contains `x`; `None` if `x` is in no frame's hull.
pub fn decompose_in_frames(p: &Polytope, catalog: &FrameCatalog, x: &[Scalar]) -> Result<Option<FrameDecomposition>> {
    let Some(local) = p.to_local(x) else { return Ok(None) };
    for f in catalog.maximal_sets() {
        let frame = f.indices();
        if let Some(weights) = p.in_hull_of(&frame, &local)? {
            return Ok(Some(FrameDecomposition { frame, weights }));
        }
    }
    Ok(None)
}

/// Maximal frame cardinality. Polytopes enumerate frames; Jordan algebras
/// count the frame of a decomposed random state; balls have rank 2.
pub fn rank(body: &ConvexBody, opts: &SpectralOptions) -> Result<usize> {
    match body {
        ConvexBody::Polytope(p) => Ok(frame_catalog(p, opts.cap, opts.exec)?.rank()),
        ConvexBody::Ball(_) => Ok(2),
        ConvexBody::Eja(a) => eja_rank(*a, opts.seed),
    }
}

fn eja_rank(a: AlgebraDescriptor, seed: u64) -> Result<usize> {
    let d = random_state(a, seed).spectral_decompose(DEFAULT_TOL)?;
    Ok(d.frame.len())
}

pub fn is_spectral(body: &ConvexBody, opts: &SpectralOptions) -> Result<Verdict> {
    match body {
        ConvexBody::Polytope(p) => {
            let catalog = frame_catalog(p, opts.cap, opts.exec)?;
            let s = polytope_spectrality(p, &catalog, opts)?;
            let (spectral, counterexample, certificate) = match s {
                Spectrality::Spectral(c) => (true.into(), None, Some(c)),
                Spectrality::Probabilistic { .. } => ("probabilistic".into(), None, None),
                Spectrality::NotSpectral { counterexample } => {
                    (false.into(), Some(counterexample.iter().map(ToString::to_string).collect()), None)
                }
            };
            Ok(Verdict { spectral, rank: catalog.rank(), counterexample, frames_by_k: catalog.ordered_counts(), certificate })
        }
        ConvexBody::Ball(_) => Ok(Verdict {
            spectral: true.into(),
            rank: 2,
            counterexample: None,
            frames_by_k: BTreeMap::new(),
            certificate: Some(SpectralityCertificate::Diameter),
        }),
        ConvexBody::Eja(a) => Ok(Verdict {
            spectral: true.into(),
            rank: eja_rank(*a, opts.seed)?,
            counterexample: None,
            frames_by_k: BTreeMap::new(),
            certificate: Some(SpectralityCertificate::JordanFrame),
        }),
    }
}

/// `ω = Σ pᵢ ωᵢ` over an ordered Jordan frame, weights descending, zero
/// weights dropped.
#[derive(Clone, Debug, Serialize)]
pub struct StateDecomposition {
    pub weights: Vec<f64>,
    pub frame: Vec<EjaElement>,
}

/// Decomposes a unit-trace square; fails if it has a negative eigenvalue or
/// trace other than 1 beyond `tol`.
pub fn spectral_decompose_state(state: &EjaElement, tol: f64) -> Result<StateDecomposition> {
    if (state.trace() - 1.0).abs() > tol {
        return Err(Error::NotAState(format!("trace {} ≠ 1", state.trace())));
    }
    let d = state.spectral_decompose(DEFAULT_TOL)?;
    if let Some(&l) = d.eigenvalues.iter().find(|&&l| l < -tol) {
        return Err(Error::NotAState(format!("negative eigenvalue {l}")));
    }
    let (weights, frame) = d.eigenvalues.iter().zip(&d.frame).filter(|(l, _)| **l > tol).map(|(l, c)| (*l, c.clone())).unzip();
    Ok(StateDecomposition { weights, frame })
}
