//! Spectral decomposition `x = Σ λᵢ cᵢ` over a Jordan frame, and the unique
//! coarse decomposition by distinct eigenvalues.
//!
//! * `Sym(m,ℝ)`: cyclic real Jacobi.
//! * `Herm(m,ℂ)`: cyclic complex Jacobi.
//! * `Herm(m,ℍ)`: complex Jacobi on the `2m × 2m` complex image, eigenvectors
//!   paired through the quaternionic structure map `J`.
//! * spin factors: closed form `λ = t ± |x|`, `c± = (±x/2|x|, 1/2)`.
//! * `Herm(3,𝕆)`: characteristic cubic from `tr x, tr x², tr x³`, trigonometric
//!   roots, Lagrange interpolation in Jordan powers for the idempotents.
//!
//! Degenerate eigenspaces of `Herm(3,𝕆)` are split by recursing on
//! `U_c(y)` for a seeded random `y` in the Peirce 1-space of `c`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::division::Quaternion;
use super::jacobi::{hermitian_eigen, symmetric_eigen};
use super::matrix::Matrix;
use super::random::gaussian_element;
use super::{EjaElement, Family};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_SWEEPS: usize = 100;
pub(crate) const DEFAULT_SEED: u64 = 0x5EED;
const REFINE_DEPTH: usize = 8;
const REFINE_ATTEMPTS: usize = 16;

/// One term `λ_α c_α` of the coarse decomposition; `trace(c_α) = multiplicity`.
#[derive(Clone, Debug, Serialize)]
pub struct CoarseTerm {
    pub eigenvalue: f64,
    pub idempotent: EjaElement,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralDecomposition {
    /// `λ₁ ≥ … ≥ λ_r`.
    pub eigenvalues: Vec<f64>,
    /// Jordan frame `c₁, …, c_r` aligned with `eigenvalues`.
    pub frame: Vec<EjaElement>,
    /// Distinct eigenvalues (descending) with their spectral idempotents.
    pub coarse: Vec<CoarseTerm>,
}

/// Worst-case residuals of a decomposition against the element it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Residuals {
    pub reconstruction: f64,
    pub idempotency: f64,
    pub orthogonality: f64,
    pub completeness: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.reconstruction.max(self.idempotency).max(self.orthogonality).max(self.completeness)
    }
}

impl SpectralDecomposition {
    /// `Σ λᵢ cᵢ`.
    pub fn reconstruct(&self) -> EjaElement {
        let alg = self.frame[0].algebra();
        self.eigenvalues
            .iter()
            .zip(&self.frame)
            .fold(EjaElement::zero(alg), |acc, (l, c)| acc.axpy(*l, c).expect("same algebra"))
    }

    pub fn residuals(&self, x: &EjaElement) -> Residuals {
        let alg = x.algebra();
        let mut r = Residuals {
            reconstruction: self.reconstruct().distance(x).unwrap_or(f64::INFINITY),
            ..Residuals::default()
        };
        let mut sum = EjaElement::zero(alg);
        for (i, ci) in self.frame.iter().enumerate() {
            r.idempotency = r.idempotency.max(ci.square().distance(ci).unwrap_or(f64::INFINITY));
            for cj in &self.frame[i + 1..] {
                r.orthogonality = r.orthogonality.max(ci.jordan_product(cj).map(|p| p.norm()).unwrap_or(f64::INFINITY));
            }
            sum = sum.add(ci).expect("same algebra");
        }
        r.completeness = sum.distance(&EjaElement::unit(alg)).unwrap_or(f64::INFINITY);
        r
    }

    /// Eigenvalue multiset of the coarse decomposition, expanded and sorted.
    pub fn clustered_eigenvalues(&self) -> Vec<f64> {
        self.coarse
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.eigenvalue, t.multiplicity))
            .collect()
    }
}

pub(crate) fn decompose(x: &EjaElement, tol: f64, seed: u64) -> Result<SpectralDecomposition> {
    let alg = x.algebra();
    let fine = match alg.family() {
        Family::Spin => return Ok(spin_decompose(x, tol)),
        Family::HermO => return herm_o_decompose(x, tol, seed),
        Family::SymR => symmetric_fine(x)?,
        Family::HermC => complex_fine(x)?,
        Family::HermH => quaternionic_fine(x)?,
    };
    Ok(from_fine(fine, tol))
}

fn cluster_bound(values: &[f64], tol: f64) -> f64 {
    tol * (1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Groups consecutive entries of a descending list whose gap is within `tol`.
fn clusters(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let bound = cluster_bound(values, tol);
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i - 1] - values[i] > bound {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn sort_descending(fine: &mut [(f64, EjaElement)]) {
    fine.sort_by(|a, b| b.0.total_cmp(&a.0));
}

fn from_fine(mut fine: Vec<(f64, EjaElement)>, tol: f64) -> SpectralDecomposition {
    sort_descending(&mut fine);
    let values: Vec<f64> = fine.iter().map(|f| f.0).collect();
    let alg = fine[0].1.algebra();
    let coarse = clusters(&values, tol)
        .into_iter()
        .map(|range| {
            let k = range.len();
            let eigenvalue = values[range.clone()].iter().sum::<f64>() / k as f64;
            let idempotent = fine[range]
                .iter()
                .fold(EjaElement::zero(alg), |acc, (_, c)| acc.add(c).expect("same algebra"));
            CoarseTerm { eigenvalue, idempotent, multiplicity: k }
        })
        .collect();
    let (eigenvalues, frame) = fine.into_iter().unzip();
    SpectralDecomposition { eigenvalues, frame, coarse }
}

fn spin_decompose(x: &EjaElement, tol: f64) -> SpectralDecomposition {
    let alg = x.algebra();
    let (v, t) = x.spin_parts().expect("spin factor");
    let r = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let (l1, l2) = (t + r, t - r);
    let degenerate = l1 - l2 <= cluster_bound(&[l1, l2], tol);
    let dir: Vec<f64> = if degenerate {
        let mut d = vec![0.0; v.len()];
        d[0] = 1.0;
        d
    } else {
        v.iter().map(|c| c / r).collect()
    };
    let half: Vec<f64> = dir.iter().map(|c| c / 2.0).collect();
    let neg: Vec<f64> = half.iter().map(|c| -c).collect();
    let plus = EjaElement::spin(&half, 0.5);
    let minus = EjaElement::spin(&neg, 0.5);
    let coarse = if degenerate {
        vec![CoarseTerm { eigenvalue: t, idempotent: EjaElement::unit(alg), multiplicity: 2 }]
    } else {
        vec![
            CoarseTerm { eigenvalue: l1, idempotent: plus.clone(), multiplicity: 1 },
            CoarseTerm { eigenvalue: l2, idempotent: minus.clone(), multiplicity: 1 },
        ]
    };
    let eigenvalues = if degenerate { vec![t, t] } else { vec![l1, l2] };
    SpectralDecomposition { eigenvalues, frame: vec![plus, minus], coarse }
}

fn symmetric_fine(x: &EjaElement) -> Result<Vec<(f64, EjaElement)>> {
    let alg = x.algebra();
    let mat: Matrix<f64> = x.to_matrix()?;
    let m = mat.m;
    let a: Vec<f64> = (0..m * m).map(|k| mat[(k / m, k % m)]).collect();
    let (vals, vecs) = symmetric_eigen(a, m, DEFAULT_MAX_SWEEPS)?;
    (0..m)
        .map(|k| {
            let v: Vec<f64> = (0..m).map(|i| vecs[i * m + k]).collect();
            Ok((vals[k], EjaElement::from_matrix(alg, &Matrix::outer(&v))?))
        })
        .collect()
}

fn complex_fine(x: &EjaElement) -> Result<Vec<(f64, EjaElement)>> {
    let alg = x.algebra();
    let mat: Matrix<Complex64> = x.to_matrix()?;
    let m = mat.m;
    let a: Vec<Complex64> = (0..m * m).map(|k| mat[(k / m, k % m)]).collect();
    let (vals, vecs) = hermitian_eigen(a, m, DEFAULT_MAX_SWEEPS)?;
    (0..m)
        .map(|k| {
            let v: Vec<Complex64> = (0..m).map(|i| vecs[i * m + k]).collect();
            Ok((vals[k], EjaElement::from_matrix(alg, &Matrix::outer(&v))?))
        })
        .collect()
}

/// Complex `2m × 2m` image of a quaternionic matrix, entry `w + xi + yj + zk`
/// mapped to the block `[[w + xi, y + zi], [−y + zi, w − xi]]`.
pub(crate) fn quaternion_to_complex(q: &Matrix<Quaternion>) -> Vec<Complex64> {
    let m = q.m;
    let n = 2 * m;
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for p in 0..m {
        for r in 0..m {
            let h = q[(p, r)];
            a[(2 * p) * n + 2 * r] = Complex64::new(h.w, h.x);
            a[(2 * p) * n + 2 * r + 1] = Complex64::new(h.y, h.z);
            a[(2 * p + 1) * n + 2 * r] = Complex64::new(-h.y, h.z);
            a[(2 * p + 1) * n + 2 * r + 1] = Complex64::new(h.w, -h.x);
        }
    }
    a
}

/// Inverse of [`quaternion_to_complex`] on its image.
pub(crate) fn complex_to_quaternion(a: &[Complex64], m: usize) -> Matrix<Quaternion> {
    let n = 2 * m;
    let mut q = Matrix::<Quaternion>::zeros(m);
    for p in 0..m {
        for r in 0..m {
            let alpha = a[(2 * p) * n + 2 * r];
            let beta = a[(2 * p) * n + 2 * r + 1];
            q[(p, r)] = Quaternion::new(alpha.re, alpha.im, beta.re, beta.im);
        }
    }
    q
}

/// Quaternionic structure map `J(v₁, v₂) = (−v̄₂, v̄₁)` applied per block.
pub(crate) fn structure_map(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for p in 0..v.len() / 2 {
        out[2 * p] = -v[2 * p + 1].conj();
        out[2 * p + 1] = v[2 * p].conj();
    }
    out
}

fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn quaternionic_fine(x: &EjaElement) -> Result<Vec<(f64, EjaElement)>> {
    let alg = x.algebra();
    let q: Matrix<Quaternion> = x.to_matrix()?;
    let m = q.m;
    let n = 2 * m;
    let a = quaternion_to_complex(&q);
    let (vals, vecs) = hermitian_eigen(a.clone(), n, DEFAULT_MAX_SWEEPS)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));

    // Each accepted vector v claims the quaternionic line span{v, Jv}.
    let mut claimed: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(m);
    for k in order {
        if out.len() == m {
            break;
        }
        let mut v: Vec<Complex64> = (0..n).map(|i| vecs[i * n + k]).collect();
        for _ in 0..2 {
            for w in &claimed {
                let c = cdot(w, &v);
                v.iter_mut().zip(w).for_each(|(vi, wi)| *vi -= c * wi);
            }
        }
        let norm = cdot(&v, &v).re.sqrt();
        if norm < 0.5 {
            continue;
        }
        v.iter_mut().for_each(|vi| *vi /= norm);
        let jv = structure_map(&v);
        let mut proj = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                proj[i * n + j] = v[i] * v[j].conj() + jv[i] * jv[j].conj();
            }
        }
        let av: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect();
        let lambda = cdot(&v, &av).re;
        out.push((lambda, EjaElement::from_matrix(alg, &complex_to_quaternion(&proj, m))?));
        claimed.push(v);
        claimed.push(jv);
    }
    if out.len() != m {
        return Err(Error::NoConvergence { sweeps: DEFAULT_MAX_SWEEPS, residual: f64::NAN });
    }
    Ok(out)
}

/// Pulls an approximate idempotent in the subalgebra generated by one
/// element back onto the idempotent variety: `c ← 3c² − 2c³`.
fn purify(c: &EjaElement) -> EjaElement {
    let mut c = c.clone();
    for _ in 0..2 {
        let c2 = c.square();
        let c3 = c.jordan_product(&c2).expect("same algebra");
        c = c2.scale(3.0).axpy(-2.0, &c3).expect("same algebra");
    }
    c
}

/// Coarse decomposition of a rank-3 element from its characteristic cubic.
fn cubic_coarse(x: &EjaElement, tol: f64) -> Vec<CoarseTerm> {
    let alg = x.algebra();
    let e = EjaElement::unit(alg);
    let shift = x.trace() / 3.0;
    let a = x.axpy(-shift, &e).expect("same algebra");
    let a2 = a.square();
    let s2 = a2.trace();
    let s3 = a.jordan_product(&a2).expect("same algebra").trace();
    let p = (s2 / 6.0).max(0.0).sqrt();
    if 2.0 * p <= cluster_bound(&[shift], tol) {
        return vec![CoarseTerm { eigenvalue: shift, idempotent: e, multiplicity: 3 }];
    }
    let r = (s3 / (6.0 * p * p * p)).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let third = 2.0 * std::f64::consts::PI / 3.0;
    let poly = |mu: f64| mu * mu * mu - 0.5 * s2 * mu - s3 / 3.0;
    let mut mus: Vec<f64> = (0..3)
        .map(|k| {
            let mut mu = 2.0 * p * (phi + third * k as f64).cos();
            for _ in 0..2 {
                let d = 3.0 * mu * mu - 0.5 * s2;
                if d.abs() > 1e-3 * s2.max(f64::MIN_POSITIVE) {
                    let next = mu - poly(mu) / d;
                    if poly(next).abs() < poly(mu).abs() {
                        mu = next;
                    }
                }
            }
            mu
        })
        .collect();
    mus.sort_by(|a, b| b.total_cmp(a));
    let lambdas: Vec<f64> = mus.iter().map(|mu| mu + shift).collect();
    let groups = clusters(&lambdas, tol);
    let centers: Vec<f64> = groups
        .iter()
        .map(|g| mus[g.clone()].iter().sum::<f64>() / g.len() as f64)
        .collect();
    groups
        .iter()
        .enumerate()
        .map(|(ia, g)| {
            let mut y = e.clone();
            for (ib, mu_b) in centers.iter().enumerate() {
                if ib == ia {
                    continue;
                }
                let ay = a.jordan_product(&y).expect("same algebra");
                y = ay.axpy(-mu_b, &y).expect("same algebra").scale(1.0 / (centers[ia] - mu_b));
            }
            CoarseTerm { eigenvalue: centers[ia] + shift, idempotent: purify(&y), multiplicity: g.len() }
        })
        .collect()
}

/// Splits a non-primitive idempotent `c` of trace `k` into `k` orthogonal
/// primitive idempotents.
fn refine(
    c: &EjaElement,
    k: usize,
    tol: f64,
    rng: &mut ChaCha8Rng,
    depth: usize,
    coarse: &dyn Fn(&EjaElement, f64) -> Vec<CoarseTerm>,
) -> Result<Vec<EjaElement>> {
    if depth > REFINE_DEPTH {
        return Err(Error::RetryCap(REFINE_DEPTH));
    }
    let alg = c.algebra();
    let complement = EjaElement::unit(alg).sub(c)?;
    for _ in 0..REFINE_ATTEMPTS {
        let y = gaussian_element(alg, rng);
        let z = c.quadratic_rep(&y)?;
        let s = -(2.0 * z.norm() + 1.0);
        let w = z.axpy(s, &complement)?;
        let parts: Vec<CoarseTerm> = coarse(&w, tol).into_iter().filter(|t| t.eigenvalue > s / 2.0).collect();
        if parts.iter().map(|t| t.multiplicity).sum::<usize>() != k {
            continue;
        }
        let mut out = Vec::with_capacity(k);
        for t in parts {
            if t.multiplicity == 1 {
                out.push(t.idempotent);
            } else {
                out.extend(refine(&t.idempotent, t.multiplicity, tol, rng, depth + 1, coarse)?);
            }
        }
        return Ok(out);
    }
    Err(Error::RetryCap(REFINE_ATTEMPTS))
}

fn herm_o_decompose(x: &EjaElement, tol: f64, seed: u64) -> Result<SpectralDecomposition> {
    let coarse = cubic_coarse(x, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fine = Vec::with_capacity(3);
    for term in &coarse {
        if term.multiplicity == 1 {
            fine.push((term.eigenvalue, term.idempotent.clone()));
        } else {
            for c in refine(&term.idempotent, term.multiplicity, tol, &mut rng, 0, &cubic_coarse)? {
                fine.push((term.eigenvalue, c));
            }
        }
    }
    // stable: members of a cluster keep their refinement order
    sort_descending(&mut fine);
    let (eigenvalues, frame) = fine.into_iter().unzip();
    Ok(SpectralDecomposition { eigenvalues, frame, coarse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eja::{random_element, AlgebraDescriptor};

    fn check(x: &EjaElement, bound: f64) -> SpectralDecomposition {
        let d = x.spectral_decompose(DEFAULT_TOL).unwrap();
        let r = d.residuals(x);
        assert!(r.max() <= bound, "{}: {r:?}", x.algebra());
        assert_eq!(d.frame.len(), x.algebra().rank());
        assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        for c in &d.frame {
            assert!(c.is_primitive_idempotent(1e-8));
        }
        let total: usize = d.coarse.iter().map(|t| t.multiplicity).sum();
        assert_eq!(total, x.algebra().rank());
        for t in &d.coarse {
            assert!((t.idempotent.trace() - t.multiplicity as f64).abs() < 1e-8);
        }
        d
    }

    #[test]
    fn diagonal_sym() {
        let alg = AlgebraDescriptor::sym_r(2);
        let x = EjaElement::new(alg, vec![2.0, -1.0, 0.0]).unwrap();
        let d = check(&x, 1e-14);
        assert_eq!(d.eigenvalues, vec![2.0, -1.0]);
        assert!(d.frame[0].distance(&EjaElement::matrix_unit(alg, 0).unwrap()).unwrap() < 1e-15);
        assert!(d.frame[1].distance(&EjaElement::matrix_unit(alg, 1).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn spin_closed_form() {
        let x = EjaElement::spin(&[3.0, 4.0], 1.0);
        let d = check(&x, 1e-14);
        assert_eq!(d.eigenvalues, vec![6.0, -4.0]);
        assert!(d.frame[0].distance(&EjaElement::spin(&[0.3, 0.4], 0.5)).unwrap() < 1e-15);
        assert!(d.frame[1].distance(&EjaElement::spin(&[-0.3, -0.4], 0.5)).unwrap() < 1e-15);
        // oracle: c∘c = c and reconstruction, computed from the product formula
        let c = EjaElement::spin(&[0.3, 0.4], 0.5);
        assert!(c.square().distance(&c).unwrap() < 1e-15);
    }

    #[test]
    fn unit_has_single_coarse_term() {
        for alg in [
            AlgebraDescriptor::sym_r(3),
            AlgebraDescriptor::herm_c(2),
            AlgebraDescriptor::herm_h(3),
            AlgebraDescriptor::spin(3),
            AlgebraDescriptor::herm_o(),
        ] {
            let e = EjaElement::unit(alg);
            let d = check(&e, 1e-9);
            assert_eq!(d.coarse.len(), 1, "{alg}");
            assert_eq!(d.coarse[0].eigenvalue, 1.0);
            assert!(d.coarse[0].idempotent.distance(&e).unwrap() < 1e-9);
        }
    }

    #[test]
    fn random_elements_all_families() {
        for (alg, seeds) in [
            (AlgebraDescriptor::sym_r(5), 0..20u64),
            (AlgebraDescriptor::herm_c(4), 0..20),
            (AlgebraDescriptor::herm_h(3), 0..20),
            (AlgebraDescriptor::spin(10), 0..20),
            (AlgebraDescriptor::herm_o(), 0..20),
        ] {
            for seed in seeds {
                let x = random_element(alg, seed);
                let d = check(&x, 1e-9);
                let tr: f64 = d.eigenvalues.iter().sum();
                assert!((tr - x.trace()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_octonionic_element() {
        // x = 2e − 3c for a primitive c has eigenvalue 2 with multiplicity two
        let alg = AlgebraDescriptor::herm_o();
        let c = random_element(alg, 5).spectral_decompose(DEFAULT_TOL).unwrap().frame[0].clone();
        let x = EjaElement::unit(alg).scale(2.0).axpy(-3.0, &c).unwrap();
        let d = check(&x, 1e-9);
        assert_eq!(d.coarse.len(), 2);
        assert_eq!(d.coarse[0].multiplicity, 2);
        assert!((d.coarse[0].eigenvalue - 2.0).abs() < 1e-12);
        assert!((d.coarse[1].eigenvalue + 1.0).abs() < 1e-12);
        assert!(d.coarse[1].idempotent.distance(&c).unwrap() < 1e-9);
    }

    #[test]
    fn degenerate_quaternionic_element() {
        let alg = AlgebraDescriptor::herm_h(3);
        let frame = random_element(alg, 8).spectral_decompose(DEFAULT_TOL).unwrap().frame;
        let x = frame[0].add(&frame[1]).unwrap();
        let d = check(&x, 1e-9);
        assert_eq!(d.coarse.len(), 2);
        assert_eq!(d.coarse[0].multiplicity, 2);
    }

    #[test]
    fn coarse_is_seed_independent() {
        let alg = AlgebraDescriptor::herm_o();
        let x = EjaElement::unit(alg).scale(0.5);
        let a = x.spectral_decompose_seeded(DEFAULT_TOL, 1).unwrap();
        let b = x.spectral_decompose_seeded(DEFAULT_TOL, 2).unwrap();
        assert_eq!(a.clustered_eigenvalues(), b.clustered_eigenvalues());
        // the fine frames differ, the coarse idempotent does not
        assert!(a.frame[0].distance(&b.frame[0]).unwrap() > 1e-3);
        assert!(a.coarse[0].idempotent.distance(&b.coarse[0].idempotent).unwrap() < 1e-12);
    }

    #[test]
    fn quaternion_embedding_roundtrip() {
        let alg = AlgebraDescriptor::herm_h(3);
        let x = random_element(alg, 2);
        let q: Matrix<Quaternion> = x.to_matrix().unwrap();
        let back = complex_to_quaternion(&quaternion_to_complex(&q), 3);
        assert_eq!(q, back);
        // embedding is multiplicative
        let y: Matrix<Quaternion> = random_element(alg, 3).to_matrix().unwrap();
        let prod = quaternion_to_complex(&q.mul(&y));
        let (ca, cb) = (quaternion_to_complex(&q), quaternion_to_complex(&y));
        let n = 6;
        for i in 0..n {
            for j in 0..n {
                let s: Complex64 = (0..n).map(|k| ca[i * n + k] * cb[k * n + j]).sum();
                assert!((s - prod[i * n + j]).norm() < 1e-12);
            }
        }
    }
}
