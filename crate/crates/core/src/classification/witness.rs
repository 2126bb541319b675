//! Refutation payloads and their standalone re-verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Membership, Polytope, Scalar};
use crate::lp::OrderedField;
use crate::operational::{distinguishing_measurement, frame_catalog};
use crate::symmetry::automorphism_group;

/// Evidence that a polytope is not spectral or not strongly symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A state lying in no frame's convex hull.
    UncoveredPoint { point: Vec<String> },
    /// Two ordered frames of equal size that no automorphism relates.
    InequivalentFrames { a: Vec<usize>, b: Vec<usize> },
}

impl Witness {
    pub fn uncovered(point: &[Scalar]) -> Witness {
        Witness::UncoveredPoint { point: point.iter().map(ToString::to_string).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recheck {
    pub valid: bool,
    pub detail: String,
}

fn frame_points(p: &Polytope, idx: &[usize]) -> Result<Vec<Vec<Scalar>>> {
    idx.iter()
        .map(|&i| {
            (i < p.n_vertices()).then(|| p.vertex(i).to_vec()).ok_or_else(|| Error::InvalidFrame(format!("vertex {i} out of range")))
        })
        .collect()
}

/// Re-derives the witnessed property from scratch: the frame catalog and
/// the automorphism group are recomputed, nothing is taken from the run
/// that produced the witness.
pub fn recheck(p: &Polytope, w: &Witness, cap: usize) -> Result<Recheck> {
    match w {
        Witness::UncoveredPoint { point } => {
            let x: Vec<Scalar> = point.iter().map(|s| s.parse()).collect::<Result<_>>()?;
            if x.len() != p.ambient_dim() {
                return Ok(Recheck { valid: false, detail: format!("point has {} coordinates, expected {}", x.len(), p.ambient_dim()) });
            }
            if p.membership(&x)? == Membership::Outside {
                return Ok(Recheck { valid: false, detail: "point lies outside the body".into() });
            }
            let local = p.to_local(&x).expect("inside points lie in the affine hull");
            let catalog = frame_catalog(p, cap, Default::default())?;
            for s in catalog.maximal_sets() {
                if p.in_hull_of(&s.indices(), &local)?.is_some() {
                    return Ok(Recheck { valid: false, detail: format!("point lies in the hull of frame {:?}", s.indices()) });
                }
            }
            let approx: Vec<f64> = x.iter().map(OrderedField::approx).collect();
            Ok(Recheck {
                valid: true,
                detail: format!("state {approx:?} lies in none of the {} maximal frame hulls", catalog.maximal_sets().len()),
            })
        }
        Witness::InequivalentFrames { a, b } => {
            if a.len() != b.len() || a.is_empty() {
                return Ok(Recheck { valid: false, detail: "frames must be nonempty and of equal size".into() });
            }
            for f in [a, b] {
                let m = distinguishing_measurement(p, &frame_points(p, f)?)?;
                if m.is_none() {
                    return Ok(Recheck { valid: false, detail: format!("{f:?} is not perfectly distinguishable") });
                }
            }
            let g = automorphism_group(p, cap)?;
            if let Some(h) = g.elements().iter().find(|h| a.iter().zip(b).all(|(&i, &j)| h.perm[i] == j)) {
                return Ok(Recheck { valid: false, detail: format!("automorphism {:?} maps one frame to the other", h.perm) });
            }
            Ok(Recheck { valid: true, detail: format!("no element of the order-{} automorphism group maps {a:?} to {b:?}", g.order()) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;
    use crate::operational::DEFAULT_VERTEX_CAP;

    #[test]
    fn square_witnesses() {
        let p = fixtures::square();
        // adjacent versus diagonal pair
        let w = Witness::InequivalentFrames { a: vec![0, 1], b: vec![0, 2] };
        assert!(recheck(&p, &w, DEFAULT_VERTEX_CAP).unwrap().valid);
        let w = Witness::InequivalentFrames { a: vec![0, 1], b: vec![1, 2] };
        assert!(!recheck(&p, &w, DEFAULT_VERTEX_CAP).unwrap().valid);
        let w = Witness::uncovered(&[Scalar::ratio(1, 2), Scalar::ratio(1, 5)]);
        assert!(recheck(&p, &w, DEFAULT_VERTEX_CAP).unwrap().valid);
        let w = Witness::uncovered(&[Scalar::ratio(1, 2), Scalar::ratio(1, 2)]);
        assert!(!recheck(&p, &w, DEFAULT_VERTEX_CAP).unwrap().valid);
        let w = Witness::uncovered(&[Scalar::from_int(2), Scalar::from_int(0)]);
        assert!(!recheck(&p, &w, DEFAULT_VERTEX_CAP).unwrap().valid);
    }

    #[test]
    fn witness_json_round_trip() {
        let w = Witness::InequivalentFrames { a: vec![0, 1], b: vec![0, 2] };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"kind":"inequivalent_frames","a":[0,1],"b":[0,2]}"#);
        assert_eq!(serde_json::from_str::<Witness>(&s).unwrap(), w);
    }
}
