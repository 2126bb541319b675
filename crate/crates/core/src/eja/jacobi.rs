//! Cyclic Jacobi eigensolvers for real symmetric and complex Hermitian
//! matrices (row-major, dense).
//!
//! Both return `(eigenvalues, eigenvectors)` with eigenvectors as columns,
//! in no particular order.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Converged when the off-diagonal Frobenius norm drops below this fraction
/// of the full Frobenius norm.
const RELATIVE_OFF: f64 = 1e-15;

fn off_norm_real(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += 2.0 * a[p * n + q].powi(2);
        }
    }
    s.sqrt()
}

fn off_norm_complex(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += 2.0 * a[p * n + q].norm_sqr();
        }
    }
    s.sqrt()
}

/// Rotation `(c, s)` annihilating the off-diagonal entry `r` of the real
/// 2×2 block `[[app, r], [r, aqq]]`.
fn rotation(app: f64, aqq: f64, r: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c)
}

pub fn symmetric_eigen(mut a: Vec<f64>, n: usize, max_sweeps: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = RELATIVE_OFF * scale;
    let mut sweeps = 0;
    while off_norm_real(&a, n) > target {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps, residual: off_norm_real(&a, n) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let r = a[p * n + q];
                if r == 0.0 {
                    continue;
                }
                let (c, s) = rotation(a[p * n + p], a[q * n + q], r);
                // columns
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                // rows
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}

pub fn hermitian_eigen(
    mut a: Vec<Complex64>,
    n: usize,
    max_sweeps: usize,
) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let scale = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let target = RELATIVE_OFF * scale;
    let mut sweeps = 0;
    while off_norm_complex(&a, n) > target {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps, residual: off_norm_complex(&a, n) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // G = diag(1, e^{-iφ}) · R with a_pq = r e^{iφ}
                let phase = apq / r;
                let phase_c = phase.conj();
                let (c, s) = rotation(a[p * n + p].re, a[q * n + q].re, r);
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = akp * c - akq * phase_c * s;
                    a[k * n + q] = akp * s + akq * phase_c * c;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                a[p * n + q] = zero;
                a[q * n + p] = zero;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = vkp * c - vkq * phase_c * s;
                    v[k * n + q] = vkp * s + vkq * phase_c * c;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((values, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 3 and 1
        let (mut vals, vecs) = symmetric_eigen(vec![2.0, 1.0, 1.0, 2.0], 2, 100).unwrap();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((vals[0] - 3.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let dot = vecs[0] * vecs[1] + vecs[2] * vecs[3];
        assert!(dot.abs() < 1e-14);
    }

    #[test]
    fn real_reconstructs() {
        let n = 5;
        let a: Vec<f64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                ((i + j) as f64).cos() + (i * j) as f64 * 0.1
            })
            .collect();
        let (vals, v) = symmetric_eigen(a.clone(), n, 100).unwrap();
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n).map(|k| v[i * n + k] * vals[k] * v[j * n + k]).sum();
                assert!((r - a[i * n + j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn complex_pauli_y() {
        // σ_y has eigenvalues ±1
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let (mut vals, _) = hermitian_eigen(vec![z, -i, i, z], 2, 100).unwrap();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_reconstructs() {
        let n = 4;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let x = Complex64::new((i + 2 * j) as f64 * 0.3, if i == j { 0.0 } else { (i as f64 - j as f64) * 0.7 });
                a[i * n + j] = x;
                a[j * n + i] = x.conj();
            }
        }
        let (vals, v) = hermitian_eigen(a.clone(), n, 100).unwrap();
        for i in 0..n {
            for j in 0..n {
                let r: Complex64 = (0..n).map(|k| v[i * n + k] * vals[k] * v[j * n + k].conj()).sum();
                assert!((r - a[i * n + j]).norm() < 1e-12);
            }
        }
    }
}
