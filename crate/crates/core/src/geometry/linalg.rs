//! Exact dense linear algebra over an ordered field.

use crate::lp::OrderedField;

pub type Mat<F> = Vec<Vec<F>>;

pub fn dot<F: OrderedField>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<F: OrderedField>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<F: OrderedField>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<F: OrderedField>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn identity<F: OrderedField>(n: usize) -> Mat<F> {
    (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
}

pub fn transpose<F: OrderedField>(a: &Mat<F>, cols: usize) -> Mat<F> {
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec<F: OrderedField>(a: &Mat<F>, x: &[F]) -> Vec<F> {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn mat_mul<F: OrderedField>(a: &Mat<F>, b: &Mat<F>, b_cols: usize) -> Mat<F> {
    let bt = transpose(b, b_cols);
    a.iter().map(|row| bt.iter().map(|col| dot(row, col)).collect()).collect()
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset<F: OrderedField>(vectors: &[Vec<F>]) -> Vec<usize> {
    // reduced rows paired with their pivot column
    let mut echelon: Vec<(usize, Vec<F>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut r = v.clone();
        for (p, row) in &echelon {
            if !r[*p].is_zero() {
                let f = r[*p].clone() / row[*p].clone();
                r = sub(&r, &scale(row, &f));
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            echelon.push((p, r));
            chosen.push(idx);
        }
    }
    chosen
}

/// Some solution of `a x = b` (free variables set to zero), or `None` if the
/// system is inconsistent.
pub fn solve<F: OrderedField>(a: &Mat<F>, b: &[F], cols: usize) -> Option<Vec<F>> {
    let mut rows: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = F::one() / rows[r][c].clone();
        rows[r] = scale(&rows[r], &inv);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = scale(&rows[r], &f);
                rows[i] = sub(&rows[i], &pr);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][cols].clone();
    }
    Some(x)
}

pub fn inverse<F: OrderedField>(a: &Mat<F>) -> Option<Mat<F>> {
    let n = a.len();
    let cols: Vec<Vec<F>> = (0..n)
        .map(|j| {
            let e: Vec<F> = (0..n).map(|i| if i == j { F::one() } else { F::zero() }).collect();
            solve(a, &e, n)
        })
        .collect::<Option<_>>()?;
    let inv = transpose(&cols, n);
    (mat_mul(a, &inv, n) == identity(n)).then_some(inv)
}

pub fn determinant<F: OrderedField>(mut a: Mat<F>) -> F {
    let n = a.len();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return F::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det = det * pivot.clone();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = a[i][c].clone() / pivot.clone();
                let pr = scale(&a[c], &f);
                a[i] = sub(&a[i], &pr);
            }
        }
    }
    det
}

/// Affine frame of a point set: `(origin, basis)` indices such that the
/// differences `p[b] − p[origin]` form a basis of the direction space, and
/// the coordinates of every point in that frame.
pub fn affine_coordinates<F: OrderedField>(points: &[Vec<F>]) -> (usize, Vec<usize>, Vec<Vec<F>>) {
    let origin = 0;
    let diffs: Vec<Vec<F>> = points.iter().map(|p| sub(p, &points[origin])).collect();
    let basis = independent_subset(&diffs);
    let dim = points[origin].len();
    // columns are basis directions
    let a: Mat<F> = (0..dim).map(|r| basis.iter().map(|&b| diffs[b][r].clone()).collect()).collect();
    let coords = diffs
        .iter()
        .map(|d| solve(&a, d, basis.len()).expect("point lies in its own affine hull"))
        .collect();
    (origin, basis, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn determinant_and_inverse() {
        let a = vec![vec![q(2), q(1)], vec![q(7), q(4)]];
        assert_eq!(determinant(a.clone()), q(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![q(4), q(-1)], vec![q(-7), q(2)]]);
        assert!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&a, &[q(1), q(3)], 2).is_none());
        let x = solve(&a, &[q(1), q(2)], 2).unwrap();
        assert_eq!(dot(&a[0], &x), q(1));
    }

    #[test]
    fn affine_frame_of_planar_points_in_space() {
        let pts = vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)], vec![q(1), q(1), q(-1)]];
        let (o, basis, coords) = affine_coordinates(&pts);
        assert_eq!(o, 0);
        assert_eq!(basis, vec![1, 2]);
        assert_eq!(coords[3], vec![q(1), q(-1)]);
    }
}
