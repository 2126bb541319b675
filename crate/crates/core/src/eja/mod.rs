//! Euclidean Jordan algebras: the four matrix families `Sym(m,ℝ)`,
//! `Herm(m,ℂ)`, `Herm(m,ℍ)`, `Herm(3,𝕆)` and the spin factors `ℝⁿ ⊕ ℝ`.
//!
//! Elements are coefficient vectors in a fixed real basis. For the matrix
//! families the basis is orthonormal for the trace form (see
//! [`matrix`]); for a spin factor the coefficients are `(x₁, …, xₙ, t)` and
//! the trace form is `2(⟨x, y⟩ + st)`.

pub mod division;
pub mod jacobi;
pub mod matrix;
mod random;
mod spectral;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use division::{DivisionAlgebra, Octonion, Quaternion};
use matrix::Matrix;

pub use random::{random_element, random_jordan_frame, random_state};
pub use spectral::{CoarseTerm, Residuals, SpectralDecomposition, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SymR,
    HermC,
    HermH,
    Spin,
    HermO,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::SymR => "sym_r",
            Family::HermC => "herm_c",
            Family::HermH => "herm_h",
            Family::Spin => "spin",
            Family::HermO => "herm_o",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Ok(match s {
            "sym_r" => Family::SymR,
            "herm_c" => Family::HermC,
            "herm_h" => Family::HermH,
            "spin" => Family::Spin,
            "herm_o" => Family::HermO,
            other => return Err(Error::InvalidAlgebra(format!("unknown family {other:?}"))),
        })
    }

    /// Real dimension of the entry algebra, `None` for spin factors.
    pub fn division_dim(self) -> Option<usize> {
        match self {
            Family::SymR => Some(1),
            Family::HermC => Some(2),
            Family::HermH => Some(4),
            Family::HermO => Some(8),
            Family::Spin => None,
        }
    }
}

/// One of the simple Euclidean Jordan algebras.
///
/// `param` is the matrix size `m` for the matrix families (always 3 for
/// `HermO`) and the ball dimension `n` for a spin factor `ℝⁿ ⊕ ℝ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DescriptorJson", into = "DescriptorJson")]
pub struct AlgebraDescriptor {
    family: Family,
    param: usize,
}

impl AlgebraDescriptor {
    pub fn new(family: Family, param: usize) -> Result<Self> {
        if param == 0 {
            return Err(Error::InvalidAlgebra(format!("{} needs a positive parameter", family.name())));
        }
        if family == Family::HermO && param != 3 {
            return Err(Error::InvalidAlgebra(format!("herm_o exists only for m = 3, got {param}")));
        }
        Ok(AlgebraDescriptor { family, param })
    }

    pub fn sym_r(m: usize) -> Self {
        Self::new(Family::SymR, m).expect("m > 0")
    }
    pub fn herm_c(m: usize) -> Self {
        Self::new(Family::HermC, m).expect("m > 0")
    }
    pub fn herm_h(m: usize) -> Self {
        Self::new(Family::HermH, m).expect("m > 0")
    }
    pub fn spin(n: usize) -> Self {
        Self::new(Family::Spin, n).expect("n > 0")
    }
    pub fn herm_o() -> Self {
        AlgebraDescriptor { family: Family::HermO, param: 3 }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn param(&self) -> usize {
        self.param
    }

    pub fn dim(&self) -> usize {
        let m = self.param;
        match self.family {
            Family::SymR => m * (m + 1) / 2,
            Family::HermC => m * m,
            Family::HermH => m * (2 * m - 1),
            Family::Spin => m + 1,
            Family::HermO => 27,
        }
    }

    pub fn rank(&self) -> usize {
        match self.family {
            Family::Spin => 2,
            Family::HermO => 3,
            _ => self.param,
        }
    }

    /// Matrix size for the matrix families.
    pub fn matrix_size(&self) -> Option<usize> {
        (self.family != Family::Spin).then_some(self.param)
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.param;
        match self.family {
            Family::SymR => write!(f, "Sym({m},R)"),
            Family::HermC => write!(f, "Herm({m},C)"),
            Family::HermH => write!(f, "Herm({m},H)"),
            Family::Spin => write!(f, "R^{m}+R"),
            Family::HermO => write!(f, "Herm(3,O)"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DescriptorJson {
    family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

impl TryFrom<DescriptorJson> for AlgebraDescriptor {
    type Error = Error;
    fn try_from(j: DescriptorJson) -> Result<Self> {
        let param = match j.family {
            Family::Spin => j.n.or(j.m),
            Family::HermO => Some(j.m.unwrap_or(3)),
            _ => j.m.or(j.n),
        }
        .ok_or_else(|| Error::InvalidAlgebra(format!("{} requires a size parameter", j.family.name())))?;
        AlgebraDescriptor::new(j.family, param)
    }
}

impl From<AlgebraDescriptor> for DescriptorJson {
    fn from(a: AlgebraDescriptor) -> Self {
        match a.family {
            Family::Spin => DescriptorJson { family: a.family, m: None, n: Some(a.param) },
            _ => DescriptorJson { family: a.family, m: Some(a.param), n: None },
        }
    }
}

/// An element of a Euclidean Jordan algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EjaElement {
    algebra: AlgebraDescriptor,
    coeffs: Vec<f64>,
}

/// Applies a matrix-level operation for whichever entry algebra `alg` uses.
macro_rules! dispatch_matrix {
    ($alg:expr, $f:ident ( $($arg:expr),* )) => {
        match $alg.family() {
            Family::SymR => $f::<f64>($($arg),*),
            Family::HermC => $f::<Complex64>($($arg),*),
            Family::HermH => $f::<Quaternion>($($arg),*),
            Family::HermO => $f::<Octonion>($($arg),*),
            Family::Spin => unreachable!("spin factors have no matrix form"),
        }
    };
}

fn matrix_jordan<T: DivisionAlgebra>(m: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let x = Matrix::<T>::from_coeffs(m, a);
    let y = Matrix::<T>::from_coeffs(m, b);
    x.jordan(&y).to_coeffs()
}

impl EjaElement {
    pub fn new(algebra: AlgebraDescriptor, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::CoefficientLength { expected: algebra.dim(), got: coeffs.len() });
        }
        Ok(EjaElement { algebra, coeffs })
    }

    pub fn zero(algebra: AlgebraDescriptor) -> Self {
        EjaElement { algebra, coeffs: vec![0.0; algebra.dim()] }
    }

    /// The Jordan unit `e`.
    pub fn unit(algebra: AlgebraDescriptor) -> Self {
        let mut out = Self::zero(algebra);
        match algebra.family {
            Family::Spin => *out.coeffs.last_mut().unwrap() = 1.0,
            _ => out.coeffs[..algebra.param].iter_mut().for_each(|c| *c = 1.0),
        }
        out
    }

    /// The `i`-th basis element.
    pub fn basis(algebra: AlgebraDescriptor, i: usize) -> Self {
        let mut out = Self::zero(algebra);
        out.coeffs[i] = 1.0;
        out
    }

    /// Diagonal matrix unit `E_ii` (matrix families only).
    pub fn matrix_unit(algebra: AlgebraDescriptor, i: usize) -> Result<Self> {
        match algebra.matrix_size() {
            Some(m) if i < m => Ok(Self::basis(algebra, i)),
            _ => Err(Error::InvalidAlgebra(format!("no matrix unit E_{i}{i} in {algebra}"))),
        }
    }

    /// Spin factor element `(x, t)`.
    pub fn spin(x: &[f64], t: f64) -> Self {
        let algebra = AlgebraDescriptor::spin(x.len());
        let mut coeffs = x.to_vec();
        coeffs.push(t);
        EjaElement { algebra, coeffs }
    }

    pub fn from_matrix<T: DivisionAlgebra>(algebra: AlgebraDescriptor, x: &Matrix<T>) -> Result<Self> {
        if algebra.family.division_dim() != Some(T::DIM) || algebra.matrix_size() != Some(x.m) {
            return Err(Error::InvalidAlgebra(format!("matrix does not belong to {algebra}")));
        }
        Self::new(algebra, x.to_coeffs())
    }

    pub fn to_matrix<T: DivisionAlgebra>(&self) -> Result<Matrix<T>> {
        if self.algebra.family.division_dim() != Some(T::DIM) {
            return Err(Error::InvalidAlgebra(format!("{} has no matrix form over this algebra", self.algebra)));
        }
        Ok(Matrix::from_coeffs(self.algebra.param, &self.coeffs))
    }

    pub fn algebra(&self) -> AlgebraDescriptor {
        self.algebra
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Ball part `x` and scalar part `t` of a spin factor element.
    pub fn spin_parts(&self) -> Option<(&[f64], f64)> {
        (self.algebra.family == Family::Spin).then(|| {
            let (x, t) = self.coeffs.split_at(self.algebra.param);
            (x, t[0])
        })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(self.algebra.to_string(), other.algebra.to_string()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Ok(EjaElement { algebra: self.algebra, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        EjaElement { algebra: self.algebra, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + s * b)
    }

    /// `x ∘ y`: `(xy + yx)/2` for matrices, `(tx + sy, ⟨x, y⟩ + st)` for spin factors.
    pub fn jordan_product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let alg = self.algebra;
        let coeffs = match alg.family {
            Family::Spin => {
                let n = alg.param;
                let (x, s) = (&self.coeffs[..n], self.coeffs[n]);
                let (y, t) = (&other.coeffs[..n], other.coeffs[n]);
                let mut out: Vec<f64> = x.iter().zip(y).map(|(xi, yi)| t * xi + s * yi).collect();
                out.push(dot(x, y) + s * t);
                out
            }
            _ => dispatch_matrix!(alg, matrix_jordan(alg.param, &self.coeffs, &other.coeffs)),
        };
        Ok(EjaElement { algebra: alg, coeffs })
    }

    pub fn square(&self) -> Self {
        self.jordan_product(self).expect("same algebra")
    }

    pub fn trace(&self) -> f64 {
        match self.algebra.family {
            Family::Spin => 2.0 * self.coeffs[self.algebra.param],
            _ => self.coeffs[..self.algebra.param].iter().sum(),
        }
    }

    /// Trace form `(x, y) = tr(x ∘ y)`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(match self.algebra.family {
            // coordinates are orthonormal for the trace form
            Family::Spin => 2.0 * dot(&self.coeffs, &other.coeffs),
            _ => dot(&self.coeffs, &other.coeffs),
        })
    }

    /// Norm induced by the trace form.
    pub fn norm(&self) -> f64 {
        self.inner(self).expect("same algebra").max(0.0).sqrt()
    }

    /// `‖self − other‖` in the trace norm.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// Determinant `Πλᵢ`: Newton identities on `tr x, tr x², tr x³` for
    /// rank ≤ 3, the eigensolver otherwise.
    pub fn determinant(&self) -> Result<f64> {
        let r = self.algebra.rank();
        if r <= 3 {
            let (e1, e2, e3) = self.elementary_symmetric();
            return Ok(match r {
                1 => e1,
                2 => e2,
                _ => e3,
            });
        }
        let d = self.spectral_decompose(DEFAULT_TOL)?;
        Ok(d.eigenvalues.iter().product())
    }

    /// Elementary symmetric functions of the eigenvalues via Newton's identities.
    pub(crate) fn elementary_symmetric(&self) -> (f64, f64, f64) {
        let x2 = self.square();
        let x3 = self.jordan_product(&x2).expect("same algebra");
        let (p1, p2, p3) = (self.trace(), x2.trace(), x3.trace());
        let e2 = (p1 * p1 - p2) / 2.0;
        let e3 = (p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0;
        (p1, e2, e3)
    }

    /// `x^k` by repeated Jordan products (`x⁰ = e`).
    pub fn power(&self, k: u32) -> Self {
        let mut out = Self::unit(self.algebra);
        for _ in 0..k {
            out = self.jordan_product(&out).expect("same algebra");
        }
        out
    }

    /// Quadratic representation `U_a(b) = 2a∘(a∘b) − a²∘b`.
    pub fn quadratic_rep(&self, b: &Self) -> Result<Self> {
        let ab = self.jordan_product(b)?;
        let a_ab = self.jordan_product(&ab)?;
        let a2b = self.square().jordan_product(b)?;
        a_ab.scale(2.0).sub(&a2b)
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        self.square().distance(self).is_ok_and(|d| d <= tol)
    }

    /// Idempotent of trace one (primitive idempotents have unit trace in
    /// every simple family with this trace normalisation).
    pub fn is_primitive_idempotent(&self, tol: f64) -> bool {
        self.is_idempotent(tol) && (self.trace() - 1.0).abs() <= tol
    }

    pub fn spectral_decompose(&self, tol: f64) -> Result<SpectralDecomposition> {
        spectral::decompose(self, tol, spectral::DEFAULT_SEED)
    }

    /// As [`spectral_decompose`](Self::spectral_decompose), with an explicit
    /// seed for the (non-canonical) refinement of degenerate eigenspaces.
    pub fn spectral_decompose_seeded(&self, tol: f64, seed: u64) -> Result<SpectralDecomposition> {
        spectral::decompose(self, tol, seed)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let d = self.spectral_decompose(DEFAULT_TOL)?;
        Ok(*d.eigenvalues.last().expect("rank ≥ 1"))
    }

    /// Largest absolute coefficient; used as a scale for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small_algebras() -> Vec<AlgebraDescriptor> {
        vec![
            AlgebraDescriptor::sym_r(3),
            AlgebraDescriptor::herm_c(3),
            AlgebraDescriptor::herm_h(3),
            AlgebraDescriptor::spin(4),
            AlgebraDescriptor::herm_o(),
        ]
    }

    #[test]
    fn table_one_dimensions_and_ranks() {
        for m in 1..=6 {
            assert_eq!(AlgebraDescriptor::sym_r(m).dim(), m * (m + 1) / 2);
            assert_eq!(AlgebraDescriptor::herm_c(m).dim(), m * m);
            assert_eq!(AlgebraDescriptor::herm_h(m).dim(), m * (2 * m - 1));
            assert_eq!(AlgebraDescriptor::sym_r(m).rank(), m);
            assert_eq!(AlgebraDescriptor::herm_h(m).rank(), m);
            // the coefficient layout has exactly dim entries
            assert_eq!(Matrix::<Quaternion>::coeff_len(m), AlgebraDescriptor::herm_h(m).dim());
        }
        assert_eq!(AlgebraDescriptor::spin(7).dim(), 8);
        assert_eq!(AlgebraDescriptor::spin(7).rank(), 2);
        assert_eq!(AlgebraDescriptor::herm_o().dim(), 27);
        assert_eq!(AlgebraDescriptor::herm_o().rank(), 3);
        assert!(AlgebraDescriptor::new(Family::HermO, 4).is_err());
        assert!(AlgebraDescriptor::new(Family::SymR, 0).is_err());
    }

    #[test]
    fn descriptor_json() {
        let a: AlgebraDescriptor = serde_json::from_str(r#"{"family":"sym_r","m":3}"#).unwrap();
        assert_eq!(a, AlgebraDescriptor::sym_r(3));
        let s: AlgebraDescriptor = serde_json::from_str(r#"{"family":"spin","n":5}"#).unwrap();
        assert_eq!(s, AlgebraDescriptor::spin(5));
        let o: AlgebraDescriptor = serde_json::from_str(r#"{"family":"herm_o"}"#).unwrap();
        assert_eq!(o, AlgebraDescriptor::herm_o());
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"family":"spin","n":5}"#);
        assert!(serde_json::from_str::<AlgebraDescriptor>(r#"{"family":"herm_o","m":2}"#).is_err());
        assert!(serde_json::from_str::<AlgebraDescriptor>(r#"{"family":"herm_c"}"#).is_err());
    }

    #[test]
    fn spin_product_example() {
        let a = EjaElement::spin(&[1.0, 0.0], 2.0);
        let b = EjaElement::spin(&[0.0, 1.0], 3.0);
        assert_eq!(a.jordan_product(&b).unwrap(), EjaElement::spin(&[3.0, 2.0], 6.0));
    }

    #[test]
    fn anticommuting_pair_has_zero_product() {
        let alg = AlgebraDescriptor::sym_r(2);
        let diag = EjaElement::new(alg, vec![1.0, -1.0, 0.0]).unwrap();
        let anti = EjaElement::new(alg, vec![0.0, 0.0, std::f64::consts::SQRT_2]).unwrap();
        let p = diag.jordan_product(&anti).unwrap();
        assert!(p.coeffs().iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn unit_law_and_powers() {
        for alg in all_small_algebras() {
            let e = EjaElement::unit(alg);
            let x = random_element(alg, 3);
            assert!(e.jordan_product(&x).unwrap().distance(&x).unwrap() < 1e-14);
            assert_eq!(x.power(0), e);
            assert!(e.quadratic_rep(&x).unwrap().distance(&x).unwrap() < 1e-13);
            assert!((e.trace() - alg.rank() as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn trace_and_inner_examples() {
        let alg = AlgebraDescriptor::sym_r(2);
        let e11 = EjaElement::matrix_unit(alg, 0).unwrap();
        let e22 = EjaElement::matrix_unit(alg, 1).unwrap();
        assert_eq!(e11.inner(&e22).unwrap(), 0.0);
        assert_eq!(EjaElement::unit(AlgebraDescriptor::herm_c(3)).trace(), 3.0);
        assert_eq!(EjaElement::spin(&[3.0, 4.0], 1.0).trace(), 2.0);
    }

    #[test]
    fn idempotent_powers_are_stable() {
        let c = EjaElement::spin(&[0.3, 0.4], 0.5);
        assert!(c.power(5).distance(&c).unwrap() < 1e-14);
        let alg = AlgebraDescriptor::herm_c(3);
        let e11 = EjaElement::matrix_unit(alg, 0).unwrap();
        assert_eq!(e11.power(5), e11);
    }

    #[test]
    fn idempotent_examples() {
        let tol = 1e-12;
        let e11 = EjaElement::matrix_unit(AlgebraDescriptor::herm_c(3), 0).unwrap();
        assert!(e11.is_primitive_idempotent(tol));
        let alg = AlgebraDescriptor::sym_r(3);
        let p = EjaElement::matrix_unit(alg, 0).unwrap().add(&EjaElement::matrix_unit(alg, 1).unwrap()).unwrap();
        assert!(p.is_idempotent(tol));
        assert!(!p.is_primitive_idempotent(tol));
        let c = EjaElement::spin(&[0.3, 0.4], 0.5);
        assert!(c.is_primitive_idempotent(tol));
        assert!(!EjaElement::spin(&[0.3, 0.4], 0.6).is_idempotent(tol));
    }

    #[test]
    fn algebra_mismatch_is_an_error() {
        let a = EjaElement::unit(AlgebraDescriptor::sym_r(2));
        let b = EjaElement::unit(AlgebraDescriptor::herm_c(2));
        assert!(matches!(a.jordan_product(&b), Err(Error::AlgebraMismatch(..))));
        assert!(a.inner(&b).is_err());
        assert!(EjaElement::new(AlgebraDescriptor::sym_r(2), vec![1.0]).is_err());
    }

    #[test]
    fn determinant_routes_agree() {
        // rank ≤ 3 goes through Newton identities, compare with eigenvalues
        for alg in [AlgebraDescriptor::sym_r(3), AlgebraDescriptor::herm_h(2), AlgebraDescriptor::spin(3), AlgebraDescriptor::herm_o()] {
            let x = random_element(alg, 11);
            let d = x.spectral_decompose(DEFAULT_TOL).unwrap();
            let prod: f64 = d.eigenvalues.iter().product();
            assert!((x.determinant().unwrap() - prod).abs() < 1e-9 * (1.0 + prod.abs()), "{alg}");
        }
        // spin factor: det (x, t) = t² − |x|²
        assert!((EjaElement::spin(&[3.0, 4.0], 1.0).determinant().unwrap() + 24.0).abs() < 1e-12);
        let alg = AlgebraDescriptor::sym_r(4);
        let x = EjaElement::new(alg, vec![1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((x.determinant().unwrap() - 24.0).abs() < 1e-12);
    }
}
