//! Farran–Robertson sections: the span of the barycenters of a maximal flag,
//! intersected with the body.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::eja::{random_jordan_frame, AlgebraDescriptor, EjaElement, Family};
use crate::error::{Error, Result};
use crate::lp::OrderedField;
use crate::geometry::{exposed_faces, face_barycenter, linalg, ConvexBody, Flag, Polytope, Scalar, DEFAULT_FACE_CAP};
use crate::operational::{frame_catalog, DEFAULT_VERTEX_CAP};
use crate::par::{trial_seed, Execution};
use crate::symmetry::{automorphism_group, is_strongly_symmetric, AutomorphismGroup};

pub const FR_SAMPLES: usize = 10_000;
/// Lower bound on frame coordinates of sampled cone points.
pub const FR_COORD_TOL: f64 = 1e-10;
/// Bound on idempotency, trace, orthogonality and completeness of the frame.
pub const FR_VERTEX_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct FrOptions {
    /// `None`: the diagonal frame `E₁₁, …, E_mm` (or `(±e₁/2, 1/2)` in a spin
    /// factor); `Some(s)`: the frame of a random element.
    pub frame_seed: Option<u64>,
    pub samples: usize,
    pub seed: u64,
    pub cap: usize,
    pub exec: Execution,
}

impl Default for FrOptions {
    fn default() -> Self {
        FrOptions { frame_seed: None, samples: FR_SAMPLES, seed: 0, cap: DEFAULT_VERTEX_CAP, exec: Execution::default() }
    }
}

fn ser_points<S: Serializer>(pts: &[Vec<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = pts.iter().map(|p| p.iter().map(ToString::to_string).collect()).collect();
    strings.serialize(s)
}

fn ser_polytope<S: Serializer>(p: &Polytope, s: S) -> std::result::Result<S::Ok, S::Error> {
    p.to_strings().serialize(s)
}

/// Sampled check that `span(frame) ∩ V₊` is the simplex on the frame.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionSampling {
    pub samples: usize,
    /// Samples found in the cone by their eigenvalues.
    pub in_cone: usize,
    /// Smallest frame coordinate over the in-cone samples.
    pub min_coordinate: f64,
    /// Samples with nonnegative coefficients found outside the cone.
    pub misclassified: usize,
}

impl SectionSampling {
    pub fn passed(&self) -> bool {
        self.min_coordinate >= -FR_COORD_TOL && self.misclassified == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FrSection {
    /// A spectral strongly symmetric polytope: the flag barycenters span its
    /// affine hull, so the section is the polytope itself.
    Polytope {
        flag: Flag,
        #[serde(serialize_with = "ser_points")]
        basis: Vec<Vec<Scalar>>,
        #[serde(serialize_with = "ser_polytope")]
        section: Polytope,
    },
    /// A ball: the diameter through `±e₁`.
    Ball {
        dim: usize,
        #[serde(serialize_with = "ser_polytope")]
        section: Polytope,
    },
    /// The simplex on a Jordan frame.
    Eja { algebra: AlgebraDescriptor, frame: Vec<EjaElement>, vertex_residual: f64, sampling: SectionSampling },
}

impl FrSection {
    /// Number of vertices of the section simplex.
    pub fn n_vertices(&self) -> usize {
        match self {
            FrSection::Polytope { section, .. } | FrSection::Ball { section, .. } => section.n_vertices(),
            FrSection::Eja { frame, .. } => frame.len(),
        }
    }

    /// The section as an exact polytope. Jordan frames are mapped to their
    /// frame coordinates `⟨cⱼ, cᵢ⟩`, which must round to `0` or `1`.
    pub fn exact_polytope(&self) -> Result<Polytope> {
        match self {
            FrSection::Polytope { section, .. } | FrSection::Ball { section, .. } => Ok(section.clone()),
            FrSection::Eja { frame, .. } => {
                let mut pts = Vec::with_capacity(frame.len());
                for cj in frame {
                    let mut row = Vec::with_capacity(frame.len());
                    for ci in frame {
                        let x = cj.inner(ci)?;
                        row.push(if x.abs() <= FR_VERTEX_TOL {
                            Scalar::zero()
                        } else if (x - 1.0).abs() <= FR_VERTEX_TOL {
                            Scalar::one()
                        } else {
                            return Err(Error::InvalidFrame(format!("frame coordinate {x} is neither 0 nor 1")));
                        });
                    }
                    pts.push(row);
                }
                Polytope::new(pts)
            }
        }
    }
}

/// `(±e₁/2, 1/2)` in a spin factor, `E_ii` otherwise.
pub fn diagonal_frame(alg: AlgebraDescriptor) -> Vec<EjaElement> {
    match alg.family() {
        Family::Spin => [1.0, -1.0]
            .iter()
            .map(|s| {
                let mut x = vec![0.0; alg.param()];
                x[0] = s / 2.0;
                EjaElement::spin(&x, 0.5)
            })
            .collect(),
        _ => (0..alg.rank()).map(|i| EjaElement::matrix_unit(alg, i).expect("matrix family")).collect(),
    }
}

fn frame_residual(frame: &[EjaElement]) -> Result<f64> {
    let alg = frame[0].algebra();
    let mut r: f64 = 0.0;
    let mut sum = EjaElement::zero(alg);
    for (i, c) in frame.iter().enumerate() {
        r = r.max(c.square().distance(c)?).max((c.trace() - 1.0).abs());
        for d in &frame[..i] {
            r = r.max(c.jordan_product(d)?.norm());
        }
        sum = sum.add(c)?;
    }
    Ok(r.max(sum.distance(&EjaElement::unit(alg))?))
}

/// Random points `Σ λᵢ cᵢ` with `λᵢ ∈ [−1/4, 1]`: membership in `V₊` is
/// decided by eigenvalues, independently of the frame coordinates.
fn sample_section(frame: &[EjaElement], samples: usize, seed: u64, exec: Execution) -> Result<SectionSampling> {
    let alg = frame[0].algebra();
    let results = exec.map(samples, |i| -> Result<(bool, f64, bool)> {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, i));
        let lambda: Vec<f64> = frame.iter().map(|_| rng.random_range(-0.25..=1.0)).collect();
        let x = frame.iter().zip(&lambda).try_fold(EjaElement::zero(alg), |acc, (c, l)| acc.axpy(*l, c))?;
        let in_cone = x.min_eigenvalue()? >= -FR_COORD_TOL;
        let mut min_coord = f64::INFINITY;
        for c in frame {
            min_coord = min_coord.min(x.inner(c)?);
        }
        let misclassified = lambda.iter().all(|l| *l >= 0.0) && !in_cone;
        Ok((in_cone, min_coord, misclassified))
    });
    let mut out = SectionSampling { samples, in_cone: 0, min_coordinate: f64::INFINITY, misclassified: 0 };
    for r in results {
        let (in_cone, min_coord, mis) = r?;
        if in_cone {
            out.in_cone += 1;
            out.min_coordinate = out.min_coordinate.min(min_coord);
        }
        out.misclassified += usize::from(mis);
    }
    Ok(out)
}

/// The section of an algebra's state space along a given Jordan frame.
pub fn fr_section_on_frame(frame: Vec<EjaElement>, samples: usize, seed: u64, exec: Execution) -> Result<FrSection> {
    let Some(first) = frame.first() else { return Err(Error::InvalidFrame("empty frame".into())) };
    let algebra = first.algebra();
    if frame.len() != algebra.rank() {
        return Err(Error::InvalidFrame(format!("{} elements in a rank-{} algebra", frame.len(), algebra.rank())));
    }
    let vertex_residual = frame_residual(&frame)?;
    if vertex_residual > FR_VERTEX_TOL {
        return Err(Error::InvalidFrame(format!("frame residual {vertex_residual:e}")));
    }
    let sampling = sample_section(&frame, samples, seed, exec)?;
    Ok(FrSection::Eja { algebra, frame, vertex_residual, sampling })
}

fn polytope_section(p: &Polytope, opts: &FrOptions) -> Result<FrSection> {
    let catalog = frame_catalog(p, opts.cap, opts.exec)?;
    if catalog.rank() != p.dim() + 1 {
        return Err(Error::NotSss(format!("not spectral: rank {} but affine dimension {}", catalog.rank(), p.dim())));
    }
    let group = automorphism_group(p, opts.cap)?;
    let ss = is_strongly_symmetric(&group, &catalog);
    if let Some((a, b)) = ss.witness() {
        return Err(Error::NotSss(format!("not strongly symmetric: ordered frames {a:?} and {b:?} lie in different orbits")));
    }
    let lattice = exposed_faces(p, opts.cap.max(DEFAULT_FACE_CAP), opts.exec)?;
    let flag = lattice.maximal_flags().into_iter().next().ok_or_else(|| Error::InvalidPolytope("no maximal flag".into()))?;
    let basis = flag.iter().map(|&f| face_barycenter(p, &lattice, f)).collect::<Result<Vec<_>>>()?;
    let (_, span, _) = linalg::affine_coordinates(&basis);
    if span.len() != p.dim() {
        return Err(Error::Unsupported(format!("flag barycenters span dimension {} of {}", span.len(), p.dim())));
    }
    // barycenters span the affine hull, so the section is the whole body;
    // its vertices must form one maximal frame
    if !catalog.is_frame_set(crate::geometry::VertexSet::full(p.n_vertices())) {
        return Err(Error::NotSss("section vertices are not a frame".into()));
    }
    Ok(FrSection::Polytope { flag, basis, section: p.clone() })
}

fn ball_section(n: usize) -> Result<FrSection> {
    let e = |s: i64| (0..n).map(|i| if i == 0 { Scalar::from_int(s) } else { Scalar::zero() }).collect::<Vec<_>>();
    Ok(FrSection::Ball { dim: n, section: Polytope::new(vec![e(1), e(-1)])? })
}

/// Farran–Robertson polytope of a spectral strongly symmetric body.
///
/// Polytopes are checked for spectrality and strong symmetry first and
/// refused with a diagnostic otherwise.
pub fn fr_polytope(body: &ConvexBody, opts: &FrOptions) -> Result<FrSection> {
    match body {
        ConvexBody::Polytope(p) => polytope_section(p, opts),
        ConvexBody::Ball(n) => ball_section(*n),
        ConvexBody::Eja(a) => {
            let frame = match opts.frame_seed {
                None => diagonal_frame(*a),
                Some(s) => random_jordan_frame(*a, s)?,
            };
            fr_section_on_frame(frame, opts.samples, opts.seed, opts.exec)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrSymmetry {
    pub vertices: usize,
    pub order: usize,
    /// The group is all of `S_r` on the section's vertices.
    pub full_symmetric: bool,
    pub permutations: Vec<Vec<usize>>,
}

/// Affine automorphisms of the extracted section, expected to be the full
/// symmetric group on its vertices.
pub fn fr_polytope_symmetry(section: &FrSection, cap: usize) -> Result<(AutomorphismGroup, FrSymmetry)> {
    let p = section.exact_polytope()?;
    let g = automorphism_group(&p, cap)?;
    let r = p.n_vertices();
    let factorial: usize = (1..=r).product();
    let permutations: Vec<Vec<usize>> = g.elements().iter().map(|a| a.perm.clone()).collect();
    let report = FrSymmetry { vertices: r, order: g.order(), full_symmetric: g.order() == factorial && g.is_closed(), permutations };
    Ok((g, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    fn opts(samples: usize) -> FrOptions {
        FrOptions { samples, ..FrOptions::default() }
    }

    #[test]
    fn sym3_is_a_triangle_on_diagonal_units() {
        let a = AlgebraDescriptor::sym_r(3);
        let s = fr_polytope(&ConvexBody::Eja(a), &opts(500)).unwrap();
        let FrSection::Eja { frame, vertex_residual, sampling, .. } = &s else { panic!() };
        assert_eq!(frame.len(), 3);
        for (i, c) in frame.iter().enumerate() {
            assert_eq!(*c, EjaElement::matrix_unit(a, i).unwrap());
        }
        assert_eq!(*vertex_residual, 0.0);
        assert!(sampling.passed() && sampling.in_cone > 0 && sampling.in_cone < 500);
        let (_, sym) = fr_polytope_symmetry(&s, 12).unwrap();
        assert_eq!((sym.order, sym.full_symmetric), (6, true));
    }

    #[test]
    fn spin_is_a_diameter() {
        let s = fr_polytope(&ConvexBody::Eja(AlgebraDescriptor::spin(5)), &opts(200)).unwrap();
        assert_eq!(s.n_vertices(), 2);
        let (_, sym) = fr_polytope_symmetry(&s, 12).unwrap();
        assert_eq!(sym.order, 2);
        let b = fr_polytope(&ConvexBody::Ball(3), &opts(0)).unwrap();
        assert_eq!(fr_polytope_symmetry(&b, 12).unwrap().1.order, 2);
    }

    #[test]
    fn simplex_is_its_own_section() {
        let p = fixtures::simplex(3);
        let s = fr_polytope(&ConvexBody::Polytope(p.clone()), &opts(0)).unwrap();
        let FrSection::Polytope { flag, basis, section } = &s else { panic!() };
        assert_eq!(section, &p);
        assert_eq!(flag.len(), 4);
        assert_eq!(basis.len(), 4);
        // last basis vector is the barycenter (1/4, 1/4, 1/4, 1/4)
        assert!(basis[3].iter().all(|x| *x == Scalar::ratio(1, 4)));
        assert_eq!(fr_polytope_symmetry(&s, 12).unwrap().1.order, 24);
    }

    #[test]
    fn non_sss_polytopes_are_refused() {
        for p in [fixtures::square(), fixtures::pentagon()] {
            assert!(matches!(fr_polytope(&ConvexBody::Polytope(p), &opts(0)), Err(Error::NotSss(_))));
        }
    }

    #[test]
    fn random_frame_in_herm_c3() {
        let o = FrOptions { frame_seed: Some(4), ..opts(300) };
        let s = fr_polytope(&ConvexBody::Eja(AlgebraDescriptor::herm_c(3)), &o).unwrap();
        let FrSection::Eja { vertex_residual, sampling, .. } = &s else { panic!() };
        assert!(*vertex_residual <= FR_VERTEX_TOL);
        assert!(sampling.passed());
        assert_eq!(fr_polytope_symmetry(&s, 12).unwrap().1.order, 6);
    }
}
