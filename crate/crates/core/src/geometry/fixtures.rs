//! Reference polytopes with exact coordinates.

use super::polytope::{Polytope, Scalar};
use crate::lp::{OrderedField, QSqrt5};

fn pts(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
    rows.iter().map(|r| r.iter().map(|&x| Scalar::from(x)).collect()).collect()
}

fn build(v: Vec<Vec<Scalar>>) -> Polytope {
    Polytope::new(v).expect("fixture vertices are extreme")
}

/// Δₙ as the standard basis of ℝⁿ⁺¹.
pub fn simplex(n: usize) -> Polytope {
    build(
        (0..=n)
            .map(|i| (0..=n).map(|j| if i == j { Scalar::from(1) } else { Scalar::from(0) }).collect())
            .collect(),
    )
}

/// [−1, 1]², counter-clockwise from (1, 1).
pub fn square() -> Polytope {
    build(pts(&[&[1, 1], &[-1, 1], &[-1, -1], &[1, -1]]))
}

/// [−2, 2] × [−1, 1], counter-clockwise from (2, 1).
pub fn rectangle() -> Polytope {
    build(pts(&[&[2, 1], &[-2, 1], &[-2, -1], &[2, -1]]))
}

/// [−1, 1]³ in binary order of the sign pattern.
pub fn cube() -> Polytope {
    build(
        (0..8)
            .map(|m: i64| (0..3).map(|k| Scalar::from(if m >> k & 1 == 1 { 1 } else { -1 })).collect())
            .collect(),
    )
}

/// ±eᵢ in ℝ³, ordered e₁, −e₁, e₂, −e₂, e₃, −e₃.
pub fn octahedron() -> Polytope {
    build(pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]))
}

/// Affinely regular hexagon with rational vertices, counter-clockwise.
pub fn hexagon() -> Polytope {
    build(pts(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]]))
}

/// Affinely regular pentagon `(sin 72k° / sin 72°, cos 72k°)`, k = 0‥4.
///
/// Both coordinates lie in ℚ(√5): `cos 72° = (√5 − 1)/4`,
/// `cos 144° = −(√5 + 1)/4`, and `sin 144° / sin 72° = φ − 1`. The first
/// vertex is the top one, `(0, 1)`; order is clockwise.
pub fn pentagon() -> Polytope {
    let q = |n, d| Scalar::ratio(n, d);
    let s5 = QSqrt5::sqrt5();
    let cos72 = (s5.clone() - Scalar::from(1)) * q(1, 4);
    let cos144 = -(s5 + Scalar::from(1)) * q(1, 4);
    let r = QSqrt5::phi() - Scalar::from(1);
    build(vec![
        vec![Scalar::from(0), Scalar::from(1)],
        vec![Scalar::from(1), cos72.clone()],
        vec![r.clone(), cos144.clone()],
        vec![-r, cos144],
        vec![Scalar::from(-1), cos72],
    ])
}

/// Looks up a fixture by name: `simplex<n>`, `square`, `rectangle`, `cube`,
/// `octahedron`, `hexagon`, `pentagon`.
pub fn by_name(name: &str) -> Option<Polytope> {
    if let Some(n) = name.strip_prefix("simplex") {
        return n.parse().ok().filter(|&n| n <= 12).map(simplex);
    }
    Some(match name {
        "square" => square(),
        "rectangle" => rectangle(),
        "cube" => cube(),
        "octahedron" => octahedron(),
        "hexagon" => hexagon(),
        "pentagon" => pentagon(),
        _ => return None,
    })
}

/// Names accepted by [`by_name`] that make up the polytope catalog.
pub const CATALOG: &[&str] =
    &["simplex1", "simplex2", "simplex3", "simplex4", "square", "rectangle", "pentagon", "hexagon", "cube", "octahedron"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_coordinates_match_floating_point() {
        let p = pentagon();
        for (k, v) in p.vertices().iter().enumerate() {
            let t = (72.0 * k as f64).to_radians();
            assert!((v[0].approx() - t.sin() / 72f64.to_radians().sin()).abs() < 1e-12);
            assert!((v[1].approx() - t.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn catalog_resolves() {
        for name in CATALOG {
            assert!(by_name(name).is_some(), "{name}");
        }
        assert!(by_name("dodecahedron").is_none());
        assert!(by_name("simplexx").is_none());
    }
}
