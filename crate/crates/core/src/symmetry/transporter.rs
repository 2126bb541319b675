//! Automorphisms of Jordan algebras carrying one ordered Jordan frame onto
//! another.
//!
//! Matrix families use `X ↦ U X U†` with `U = U_B U_A†`, where the columns
//! of `U_A` are unit vectors `vᵢ` with `aᵢ = vᵢ vᵢ†`, phase-fixed so that
//! the first component of significant size is real and positive. Spin
//! factors rotate the vector part in the plane spanned by the two frames.

use num_complex::Complex64;
use serde::Serialize;

use crate::eja::division::{DivisionAlgebra, Quaternion};
use crate::eja::matrix::Matrix;
use crate::eja::{random_element, random_jordan_frame, AlgebraDescriptor, EjaElement, Family, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::par::{trial_seed, Execution};

/// Residual bound for transporter checks.
pub const TRANSPORTER_TOL: f64 = 1e-8;

/// Diagonal entries below this are skipped when fixing eigenvector phases.
const PHASE_THRESHOLD: f64 = 1e-3;

/// A linear automorphism of the algebra, stored as its matrix on
/// coefficient vectors (`columns[j]` is the image of basis element `j`).
#[derive(Clone, Debug, Serialize)]
pub struct EjaTransporter {
    pub algebra: AlgebraDescriptor,
    /// `"unitary_conjugation"` or `"spin_rotation"`.
    pub kind: &'static str,
    pub columns: Vec<Vec<f64>>,
}

impl EjaTransporter {
    pub fn apply(&self, x: &EjaElement) -> Result<EjaElement> {
        if x.algebra() != self.algebra {
            return Err(Error::AlgebraMismatch(self.algebra.to_string(), x.algebra().to_string()));
        }
        let n = self.algebra.dim();
        let mut out = vec![0.0; n];
        for (j, &c) in x.coeffs().iter().enumerate() {
            for (o, t) in out.iter_mut().zip(&self.columns[j]) {
                *o += c * t;
            }
        }
        EjaElement::new(self.algebra, out)
    }
}

/// Unit vector `v` with `p = v v†` for a rank-one projector in matrix form.
fn rank_one_vector<T: DivisionAlgebra>(p: &Matrix<T>) -> Vec<T> {
    let j = (0..p.m).find(|&j| p[(j, j)].re() > PHASE_THRESHOLD).unwrap_or_else(|| {
        (0..p.m).max_by(|&a, &b| p[(a, a)].re().total_cmp(&p[(b, b)].re())).expect("nonempty matrix")
    });
    let s = 1.0 / p[(j, j)].re().sqrt();
    p.column(j).iter().map(|x| x.scale(s)).collect()
}

fn frame_unitary<T: DivisionAlgebra>(frame: &[EjaElement]) -> Result<Matrix<T>> {
    let cols = frame.iter().map(|c| Ok(rank_one_vector(&c.to_matrix::<T>()?))).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(&cols))
}

fn conjugation<T: DivisionAlgebra>(alg: AlgebraDescriptor, a: &[EjaElement], b: &[EjaElement]) -> Result<Vec<Vec<f64>>> {
    let u = frame_unitary::<T>(b)?.mul(&frame_unitary::<T>(a)?.adjoint());
    let ua = u.adjoint();
    (0..alg.dim())
        .map(|j| {
            let x = EjaElement::basis(alg, j).to_matrix::<T>()?;
            Ok(u.mul(&x).mul(&ua).to_coeffs())
        })
        .collect()
}

/// Rotation of ℝⁿ taking the unit vector `x` to the unit vector `y`, acting
/// as the identity off their span.
fn rotation(x: &[f64], y: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let c = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0);
    let mut w: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - c * a).collect();
    let mut wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if wn < 1e-12 {
        // y = ±x: any direction orthogonal to x
        let k = (0..n).min_by(|&i, &j| x[i].abs().total_cmp(&x[j].abs())).expect("n ≥ 1");
        w = (0..n).map(|i| if i == k { 1.0 } else { 0.0 } - x[k] * x[i]).collect();
        wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    w.iter_mut().for_each(|v| *v /= wn);
    let s = (1.0 - c * c).max(0.0).sqrt();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let id = if i == j { 1.0 } else { 0.0 };
                    id + (c - 1.0) * (x[i] * x[j] + w[i] * w[j]) + s * (w[i] * x[j] - x[i] * w[j])
                })
                .collect()
        })
        .collect()
}

fn spin_direction(c: &EjaElement) -> Vec<f64> {
    let (x, _) = c.spin_parts().expect("spin element");
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter().map(|v| v / n).collect()
}

fn check_frame(alg: AlgebraDescriptor, frame: &[EjaElement], name: &str) -> Result<()> {
    if frame.len() != alg.rank() {
        return Err(Error::InvalidFrame(format!("{name} has {} elements, rank is {}", frame.len(), alg.rank())));
    }
    let tol = 1e-8;
    let mut sum = EjaElement::zero(alg);
    for (i, c) in frame.iter().enumerate() {
        if c.algebra() != alg {
            return Err(Error::AlgebraMismatch(alg.to_string(), c.algebra().to_string()));
        }
        if !c.is_primitive_idempotent(tol) {
            return Err(Error::InvalidFrame(format!("{name}[{i}] is not a primitive idempotent")));
        }
        sum = sum.add(c)?;
    }
    if sum.distance(&EjaElement::unit(alg))? > tol {
        return Err(Error::InvalidFrame(format!("{name} does not sum to the unit")));
    }
    Ok(())
}

/// An automorphism `T` with `T(aᵢ) = bᵢ` for two ordered Jordan frames.
pub fn jordan_frame_transporter(alg: AlgebraDescriptor, a: &[EjaElement], b: &[EjaElement]) -> Result<EjaTransporter> {
    if alg.family() == Family::HermO {
        return Err(Error::Unsupported("frame transporters for Herm(3,O) need F4 elements".into()));
    }
    check_frame(alg, a, "source frame")?;
    check_frame(alg, b, "target frame")?;
    let (kind, columns) = match alg.family() {
        Family::SymR => ("unitary_conjugation", conjugation::<f64>(alg, a, b)?),
        Family::HermC => ("unitary_conjugation", conjugation::<Complex64>(alg, a, b)?),
        Family::HermH => ("unitary_conjugation", conjugation::<Quaternion>(alg, a, b)?),
        Family::Spin => {
            let r = rotation(&spin_direction(&a[0]), &spin_direction(&b[0]));
            let n = alg.param();
            let columns = (0..=n)
                .map(|j| if j < n { (0..n).map(|i| r[i][j]).chain([0.0]).collect() } else { (0..n).map(|_| 0.0).chain([1.0]).collect() })
                .collect();
            ("spin_rotation", columns)
        }
        Family::HermO => unreachable!(),
    };
    Ok(EjaTransporter { algebra: alg, kind, columns })
}

/// Completes pairwise orthogonal primitive idempotents to a Jordan frame by
/// decomposing `e − Σ aᵢ` (its eigenvalue-1 part).
pub fn extend_frame(partial: &[EjaElement], seed: u64) -> Result<Vec<EjaElement>> {
    let Some(first) = partial.first() else {
        return Err(Error::InvalidFrame("empty frame".into()));
    };
    let alg = first.algebra();
    let sum = partial[1..].iter().try_fold(first.clone(), |acc, c| acc.add(c))?;
    let rest = EjaElement::unit(alg).sub(&sum)?;
    let mut out = partial.to_vec();
    if partial.len() < alg.rank() {
        let d = rest.spectral_decompose_seeded(DEFAULT_TOL, seed)?;
        out.extend(d.eigenvalues.iter().zip(&d.frame).filter(|(l, _)| **l > 0.5).map(|(_, c)| c.clone()));
    }
    if out.len() != alg.rank() {
        return Err(Error::InvalidFrame(format!("extension has {} elements, rank is {}", out.len(), alg.rank())));
    }
    Ok(out)
}

/// Residuals of a transporter against its defining frames.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TransporterCheck {
    /// `maxᵢ ‖T(aᵢ) − bᵢ‖`.
    pub frame: f64,
    /// `‖T(e) − e‖`.
    pub unit: f64,
    /// `max |⟨T xᵢ, T xⱼ⟩ − ⟨xᵢ, xⱼ⟩|` over basis pairs.
    pub orthogonality: f64,
    /// Most negative eigenvalue of `T(y²)` over sampled `y` (0 if none).
    pub cone: f64,
    /// Max eigenvalue deviation between `x` and `T(x)` over samples.
    pub spectrum: f64,
}

impl TransporterCheck {
    pub fn max(&self) -> f64 {
        [self.frame, self.unit, self.orthogonality, self.cone, self.spectrum].into_iter().fold(0.0, f64::max)
    }
}

pub fn check_transporter(t: &EjaTransporter, a: &[EjaElement], b: &[EjaElement], seed: u64) -> Result<TransporterCheck> {
    let alg = t.algebra;
    let mut out = TransporterCheck::default();
    for (x, y) in a.iter().zip(b) {
        out.frame = out.frame.max(t.apply(x)?.distance(y)?);
    }
    let e = EjaElement::unit(alg);
    out.unit = t.apply(&e)?.distance(&e)?;
    let images: Vec<EjaElement> = (0..alg.dim()).map(|j| t.apply(&EjaElement::basis(alg, j))).collect::<Result<_>>()?;
    for i in 0..alg.dim() {
        for j in 0..=i {
            let before = EjaElement::basis(alg, i).inner(&EjaElement::basis(alg, j))?;
            out.orthogonality = out.orthogonality.max((images[i].inner(&images[j])? - before).abs());
        }
    }
    for s in 0..4 {
        let y = random_element(alg, trial_seed(seed, s));
        let sq = t.apply(&y.square())?;
        out.cone = out.cone.max(-sq.min_eigenvalue()?);
        let mut lx = y.spectral_decompose(DEFAULT_TOL)?.eigenvalues;
        let mut ly = t.apply(&y)?.spectral_decompose(DEFAULT_TOL)?.eigenvalues;
        lx.sort_by(f64::total_cmp);
        ly.sort_by(f64::total_cmp);
        let dev = lx.iter().zip(&ly).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        out.spectrum = out.spectrum.max(dev);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TrialOutcome {
    Pass { k: usize, residuals: TransporterCheck },
    Fail { k: usize, residuals: TransporterCheck },
    Error { message: String },
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EjaSymmetryReport {
    pub algebra: AlgebraDescriptor,
    pub trials: usize,
    pub passed: usize,
    pub unsupported: bool,
    pub max_residual: f64,
    /// Counts of trial maxima by decade: `[≤1e-14, ≤1e-12, ≤1e-10, ≤1e-8, >1e-8]`.
    pub residual_histogram: [usize; 5],
    /// Continuous transitivity is exercised by construction: each trial
    /// builds a transporter between two random ordered (sub-)frames.
    pub method: &'static str,
    pub outcomes: Vec<TrialOutcome>,
}

impl EjaSymmetryReport {
    pub fn all_passed(&self) -> bool {
        !self.unsupported && self.passed == self.trials
    }
}

fn one_trial(alg: AlgebraDescriptor, seed: u64, index: usize) -> TrialOutcome {
    let k = 1 + index % alg.rank();
    let run = || -> Result<TrialOutcome> {
        let s = trial_seed(seed, index);
        let a = extend_frame(&random_jordan_frame(alg, s)?[..k], s)?;
        let b = extend_frame(&random_jordan_frame(alg, s ^ 0x9E37_79B9)?[..k], s)?;
        let t = jordan_frame_transporter(alg, &a, &b)?;
        let residuals = check_transporter(&t, &a, &b, s)?;
        Ok(if residuals.max() <= TRANSPORTER_TOL { TrialOutcome::Pass { k, residuals } } else { TrialOutcome::Fail { k, residuals } })
    };
    run().unwrap_or_else(|e| TrialOutcome::Error { message: e.to_string() })
}

/// Randomized constructive check of transitivity on ordered frames: for each
/// trial a random `k`-subframe pair (`k` cycling through `1..=rank`) is
/// extended to full frames and a transporter is built and verified.
pub fn verify_strong_symmetry_eja(alg: AlgebraDescriptor, trials: usize, seed: u64, exec: Execution) -> EjaSymmetryReport {
    let unsupported = alg.family() == Family::HermO;
    let outcomes: Vec<TrialOutcome> =
        if unsupported { vec![TrialOutcome::Unsupported; trials] } else { exec.map(trials, |i| one_trial(alg, seed, i)) };
    let mut histogram = [0usize; 5];
    let mut max_residual: f64 = 0.0;
    for o in &outcomes {
        if let TrialOutcome::Pass { residuals, .. } | TrialOutcome::Fail { residuals, .. } = o {
            let r = residuals.max();
            max_residual = max_residual.max(r);
            let bin = [1e-14, 1e-12, 1e-10, 1e-8].iter().position(|&b| r <= b).unwrap_or(4);
            histogram[bin] += 1;
        }
    }
    EjaSymmetryReport {
        algebra: alg,
        trials,
        passed: outcomes.iter().filter(|o| matches!(o, TrialOutcome::Pass { .. })).count(),
        unsupported,
        max_residual,
        residual_histogram: histogram,
        method: "randomized constructive transporters",
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_in_herm_c2_is_conjugation_by_swap() {
        let a = AlgebraDescriptor::herm_c(2);
        let e = |i| EjaElement::matrix_unit(a, i).unwrap();
        let t = jordan_frame_transporter(a, &[e(0), e(1)], &[e(1), e(0)]).unwrap();
        // swap conjugation: diag(p, q) + off-diagonal z ↦ diag(q, p) + conj(z)
        let x = EjaElement::new(a, vec![0.3, -0.7, 0.5, 0.25]).unwrap();
        let m = x.to_matrix::<Complex64>().unwrap();
        let s = Matrix::from_columns(&[vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]]);
        let want = EjaElement::from_matrix(a, &s.mul(&m).mul(&s.adjoint())).unwrap();
        assert!(t.apply(&x).unwrap().distance(&want).unwrap() < 1e-14);
    }

    #[test]
    fn random_frames_in_sym3() {
        let a = AlgebraDescriptor::sym_r(3);
        let fa = random_jordan_frame(a, 1).unwrap();
        let fb = random_jordan_frame(a, 2).unwrap();
        let t = jordan_frame_transporter(a, &fa, &fb).unwrap();
        assert!(check_transporter(&t, &fa, &fb, 3).unwrap().max() <= TRANSPORTER_TOL);
    }

    #[test]
    fn spin_rotation_fixes_unit_exactly() {
        let a = AlgebraDescriptor::spin(3);
        let half = |x: [f64; 3]| EjaElement::spin(&x.map(|v| v / 2.0), 0.5);
        let fa = [half([1.0, 0.0, 0.0]), half([-1.0, 0.0, 0.0])];
        let fb = [half([0.0, 1.0, 0.0]), half([0.0, -1.0, 0.0])];
        let t = jordan_frame_transporter(a, &fa, &fb).unwrap();
        let e = EjaElement::unit(a);
        assert_eq!(t.apply(&e).unwrap(), e);
        assert!(check_transporter(&t, &fa, &fb, 0).unwrap().max() <= 1e-12);
        // antipodal target
        let t = jordan_frame_transporter(a, &fa, &[fa[1].clone(), fa[0].clone()]).unwrap();
        assert!(t.apply(&fa[0]).unwrap().distance(&fa[1]).unwrap() < 1e-12);
    }

    #[test]
    fn octonions_unsupported_and_bad_frames_rejected() {
        let o = AlgebraDescriptor::herm_o();
        let f = random_jordan_frame(o, 0).unwrap();
        assert!(matches!(jordan_frame_transporter(o, &f, &f), Err(Error::Unsupported(_))));
        let a = AlgebraDescriptor::sym_r(2);
        let e0 = EjaElement::matrix_unit(a, 0).unwrap();
        assert!(matches!(jordan_frame_transporter(a, &[e0.clone(), e0.clone()], &[e0.clone(), e0]), Err(Error::InvalidFrame(_))));
        let r = verify_strong_symmetry_eja(o, 3, 0, Execution::Sequential);
        assert!(r.unsupported && !r.all_passed());
    }

    #[test]
    fn suites_pass_for_small_algebras() {
        for a in [AlgebraDescriptor::sym_r(3), AlgebraDescriptor::herm_c(2), AlgebraDescriptor::herm_h(2), AlgebraDescriptor::spin(4)] {
            let r = verify_strong_symmetry_eja(a, 6, 9, Execution::default());
            assert!(r.all_passed(), "{a}: {:?}", r.outcomes);
        }
    }

    #[test]
    fn suite_is_mode_independent() {
        let a = AlgebraDescriptor::herm_h(2);
        assert_eq!(
            verify_strong_symmetry_eja(a, 4, 1, Execution::Sequential),
            verify_strong_symmetry_eja(a, 4, 1, Execution::Parallel)
        );
    }
}
