//! Effects, measurements, perfect distinguishability, frames, rank and
//! spectrality of convex state spaces.

mod faces;
mod frames;
pub(crate) mod spectral;

use num_traits::{One, Zero};
use serde::Serialize;

pub use faces::{complement_face, face_of_frame, EjaFace, Face, SubFrameLattice};
pub use frames::{enumerate_frames, frame_catalog, Frame, FrameCatalog, DEFAULT_VERTEX_CAP};
pub use spectral::{
    decompose_in_frames, is_spectral, rank, FrameDecomposition, spectral_decompose_state, SpectralOptions, Spectrality, SpectralityCertificate,
    StateDecomposition, Verdict, DEFAULT_SAMPLES,
};

use crate::eja::EjaElement;
use crate::error::{Error, Result};
use crate::geometry::{linalg, ConvexBody, Membership, Polytope, Scalar};
use crate::lp::{LinearProgram, OrderedField, Relation};

/// Tolerance for floating-point effect and measurement checks.
pub const EFFECT_TOL: f64 = 1e-10;

/// `x ↦ a·x + c` on the ambient space of a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub a: Vec<Scalar>,
    pub c: Scalar,
}

impl AffineFunctional {
    pub fn constant(dim: usize, c: Scalar) -> Self {
        AffineFunctional { a: vec![Scalar::zero(); dim], c }
    }

    /// The order unit `u ≡ 1`.
    pub fn unit(dim: usize) -> Self {
        Self::constant(dim, Scalar::one())
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        linalg::dot(&self.a, x) + self.c.clone()
    }

    pub fn add(&self, o: &Self) -> Self {
        AffineFunctional { a: linalg::add(&self.a, &o.a), c: self.c.clone() + o.c.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        AffineFunctional { a: linalg::scale(&self.a, s), c: self.c.clone() * s.clone() }
    }

    pub fn to_strings(&self) -> (Vec<String>, String) {
        (self.a.iter().map(ToString::to_string).collect(), self.c.to_string())
    }
}

impl Serialize for AffineFunctional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J {
            a: Vec<String>,
            c: String,
        }
        let (a, c) = self.to_strings();
        J { a, c }.serialize(s)
    }
}

/// A candidate effect on some body.
#[derive(Clone, Debug, PartialEq)]
pub enum Functional {
    /// Exact affine functional on a polytope's ambient space.
    Affine(AffineFunctional),
    /// `x ↦ a·x + c` on the ambient space of a ball.
    Float { a: Vec<f64>, c: f64 },
    /// `x ↦ ⟨f, x⟩` under the trace form.
    Eja(EjaElement),
}

/// Whether the functional takes values in `[0, 1]` on the whole body.
pub fn is_effect(body: &ConvexBody, f: &Functional) -> Result<bool> {
    match (body, f) {
        (ConvexBody::Polytope(p), Functional::Affine(f)) => {
            check_len(f.a.len(), p.ambient_dim())?;
            Ok(p.vertices().iter().all(|v| in_unit_interval(&f.eval(v))))
        }
        (ConvexBody::Ball(n), Functional::Float { a, c }) => {
            check_len(a.len(), *n)?;
            let r = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            Ok(c - r >= -EFFECT_TOL && c + r <= 1.0 + EFFECT_TOL)
        }
        (ConvexBody::Eja(alg), Functional::Eja(x)) => {
            if x.algebra() != *alg {
                return Err(Error::AlgebraMismatch(alg.to_string(), x.algebra().to_string()));
            }
            // self-duality: ⟨x, ω⟩ ∈ [0, 1] on states iff spec(x) ⊆ [0, 1]
            let d = x.spectral_decompose(crate::eja::DEFAULT_TOL)?;
            Ok(d.eigenvalues.iter().all(|&l| (-EFFECT_TOL..=1.0 + EFFECT_TOL).contains(&l)))
        }
        _ => Err(Error::Dimension(format!("functional does not match {}", body.name()))),
    }
}

fn check_len(got: usize, expected: usize) -> Result<()> {
    if got == expected {
        Ok(())
    } else {
        Err(Error::CoefficientLength { expected, got })
    }
}

fn in_unit_interval(v: &Scalar) -> bool {
    !v.lt_zero() && *v <= Scalar::one()
}

/// Effects summing to the order unit on a polytope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub effects: Vec<AffineFunctional>,
}

impl Measurement {
    /// Exact check that every effect lies in `[0, u]` and the effects sum to
    /// `u` on the polytope.
    pub fn is_valid_on(&self, p: &Polytope) -> bool {
        p.vertices().iter().all(|v| {
            let vals: Vec<Scalar> = self.effects.iter().map(|e| e.eval(v)).collect();
            vals.iter().all(in_unit_interval) && vals.iter().fold(Scalar::zero(), |a, b| a + b.clone()) == Scalar::one()
        })
    }

    /// Whether `eᵢ(ωⱼ) = δᵢⱼ` for the given states.
    pub fn distinguishes(&self, states: &[Vec<Scalar>]) -> bool {
        states.iter().enumerate().all(|(j, s)| {
            self.effects
                .iter()
                .enumerate()
                .take(states.len())
                .all(|(i, e)| e.eval(s) == if i == j { Scalar::one() } else { Scalar::zero() })
        })
    }

    pub fn permuted(&self, order: &[usize]) -> Measurement {
        let mut effects: Vec<AffineFunctional> = order.iter().map(|&i| self.effects[i].clone()).collect();
        effects.extend(self.effects.iter().skip(order.len()).cloned());
        Measurement { effects }
    }
}

/// Effects `e₁…e_k` with `eᵢ(sⱼ) = δᵢⱼ` and `Σ eᵢ ≤ u`, found by one exact
/// LP over the coefficients of all effects.
pub(crate) fn distinguishing_submeasurement(p: &Polytope, states: &[Vec<Scalar>]) -> Result<Option<Vec<AffineFunctional>>> {
    let d = p.ambient_dim();
    let k = states.len();
    let w = d + 1;
    let row_for = |i: usize, x: &[Scalar]| {
        let mut row = vec![Scalar::zero(); k * w];
        row[i * w..i * w + d].clone_from_slice(x);
        row[i * w + d] = Scalar::one();
        row
    };
    let mut lp = LinearProgram::new(k * w);
    for (j, s) in states.iter().enumerate() {
        for i in 0..k {
            lp.constrain(row_for(i, s), Relation::Eq, if i == j { Scalar::one() } else { Scalar::zero() });
        }
    }
    for v in p.vertices() {
        let mut total = vec![Scalar::zero(); k * w];
        for i in 0..k {
            let row = row_for(i, v);
            total = linalg::add(&total, &row);
            lp.constrain(row, Relation::Ge, Scalar::zero());
        }
        lp.constrain(total, Relation::Le, Scalar::one());
    }
    Ok(lp.feasible()?.witness().map(|x| {
        (0..k).map(|i| AffineFunctional { a: x[i * w..i * w + d].to_vec(), c: x[i * w + d].clone() }).collect()
    }))
}

/// Completes a submeasurement: `e′₁ = e₁ + (u − Σ eᵢ)`. A remainder that
/// vanishes on the polytope is dropped.
pub(crate) fn complete(p: &Polytope, mut effects: Vec<AffineFunctional>) -> Measurement {
    let d = p.ambient_dim();
    let sum = effects.iter().fold(AffineFunctional::constant(d, Scalar::zero()), |acc, e| acc.add(e));
    let rest = AffineFunctional::unit(d).add(&sum.scale(&-Scalar::one()));
    if p.vertices().iter().any(|v| !rest.eval(v).is_zero()) {
        if let Some(first) = effects.first_mut() {
            *first = first.add(&rest);
        } else {
            effects.push(rest);
        }
    }
    Measurement { effects }
}

/// A measurement perfectly distinguishing `states` (points of `p`), or
/// `None` if they are not perfectly distinguishable.
pub fn distinguishing_measurement(p: &Polytope, states: &[Vec<Scalar>]) -> Result<Option<Measurement>> {
    for (i, s) in states.iter().enumerate() {
        if p.membership(s)? == Membership::Outside {
            return Err(Error::NotAState(format!("state {i} lies outside the polytope")));
        }
    }
    Ok(distinguishing_submeasurement(p, states)?.map(|e| complete(p, e)))
}

/// Effects distinguishing Jordan-algebra states: succeeds iff the states are
/// pairwise orthogonal primitive idempotents; the effects are the states,
/// with the remainder `e − Σ ωᵢ` folded into the first.
pub fn distinguishing_measurement_eja(states: &[EjaElement], tol: f64) -> Result<Option<Vec<EjaElement>>> {
    let Some(first) = states.first() else { return Ok(Some(vec![])) };
    let alg = first.algebra();
    for (i, s) in states.iter().enumerate() {
        if s.algebra() != alg {
            return Err(Error::AlgebraMismatch(alg.to_string(), s.algebra().to_string()));
        }
        if !s.is_primitive_idempotent(tol) {
            return Err(Error::NotAState(format!("state {i} is not a primitive idempotent")));
        }
    }
    for i in 0..states.len() {
        for j in 0..i {
            if states[i].inner(&states[j])?.abs() > tol {
                return Ok(None);
            }
        }
    }
    let mut effects = states.to_vec();
    let sum = states.iter().skip(1).try_fold(states[0].clone(), |acc, s| acc.add(s))?;
    let rest = EjaElement::unit(alg).sub(&sum)?;
    if rest.norm() > tol {
        effects[0] = effects[0].add(&rest)?;
    }
    Ok(Some(effects))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eja::AlgebraDescriptor;
    use crate::geometry::fixtures;

    fn s(v: &[&str]) -> Vec<Scalar> {
        v.iter().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn unit_and_twice_unit() {
        for body in [ConvexBody::Polytope(fixtures::square()), ConvexBody::Polytope(fixtures::pentagon())] {
            let ConvexBody::Polytope(p) = &body else { unreachable!() };
            let u = AffineFunctional::unit(p.ambient_dim());
            assert!(is_effect(&body, &Functional::Affine(u.clone())).unwrap());
            assert!(!is_effect(&body, &Functional::Affine(u.scale(&Scalar::from(2)))).unwrap());
        }
        let a = AlgebraDescriptor::herm_c(2);
        let body = ConvexBody::Eja(a);
        assert!(is_effect(&body, &Functional::Eja(EjaElement::unit(a))).unwrap());
        assert!(!is_effect(&body, &Functional::Eja(EjaElement::unit(a).scale(2.0))).unwrap());
        assert!(is_effect(&ConvexBody::Ball(3), &Functional::Float { a: vec![0.5, 0.0, 0.0], c: 0.5 }).unwrap());
        assert!(!is_effect(&ConvexBody::Ball(3), &Functional::Float { a: vec![0.6, 0.0, 0.0], c: 0.5 }).unwrap());
    }

    #[test]
    fn pentagon_height_effect() {
        // f(x, y) = (1 − √5/5) y + √5/5: 1 on top, 0 on the bottom edge
        let p = fixtures::pentagon();
        let f = AffineFunctional { a: s(&["0", "1-1/5*sqrt5"]), c: s(&["1/5*sqrt5"])[0].clone() };
        let vals: Vec<Scalar> = p.vertices().iter().map(|v| f.eval(v)).collect();
        let r = s(&["-1/2+1/2*sqrt5"])[0].clone();
        assert_eq!(vals, vec![Scalar::one(), r.clone(), Scalar::zero(), Scalar::zero(), r]);
        assert!(is_effect(&ConvexBody::Polytope(p), &Functional::Affine(f)).unwrap());
    }

    #[test]
    fn simplex_vertices_measured_by_coordinates() {
        let p = fixtures::simplex(2);
        let m = distinguishing_measurement(&p, p.vertices()).unwrap().unwrap();
        assert_eq!(m.effects.len(), 3);
        for (i, e) in m.effects.iter().enumerate() {
            let mut unit = vec![Scalar::zero(); 3];
            unit[i] = Scalar::one();
            assert_eq!(e, &AffineFunctional { a: unit, c: Scalar::zero() });
        }
        assert!(m.is_valid_on(&p));
    }

    #[test]
    fn square_vertex_triple_is_not_distinguishable() {
        let p = fixtures::square();
        let states = vec![s(&["1", "1"]), s(&["-1", "1"]), s(&["-1", "-1"])];
        assert_eq!(distinguishing_measurement(&p, &states).unwrap(), None);
        let m = distinguishing_measurement(&p, &states[..2]).unwrap().unwrap();
        assert!(m.is_valid_on(&p) && m.distinguishes(&states[..2]));
    }

    #[test]
    fn pentagon_pairs() {
        let p = fixtures::pentagon();
        let v = p.vertices();
        assert_eq!(distinguishing_measurement(&p, &[v[0].clone(), v[1].clone()]).unwrap(), None);
        let m = distinguishing_measurement(&p, &[v[0].clone(), v[2].clone()]).unwrap().unwrap();
        assert!(m.is_valid_on(&p) && m.distinguishes(&[v[0].clone(), v[2].clone()]));
    }

    #[test]
    fn outside_state_is_an_error() {
        let p = fixtures::square();
        assert!(matches!(distinguishing_measurement(&p, &[s(&["2", "0"])]), Err(Error::NotAState(_))));
    }

    #[test]
    fn eja_distinguishability() {
        let a = AlgebraDescriptor::sym_r(3);
        let e = |i| EjaElement::matrix_unit(a, i).unwrap();
        let m = distinguishing_measurement_eja(&[e(0), e(1)], 1e-10).unwrap().unwrap();
        assert!((m[0].add(&m[1]).unwrap().distance(&EjaElement::unit(a)).unwrap()) < 1e-12);
        assert!((m[0].inner(&e(0)).unwrap() - 1.0).abs() < 1e-12);
        assert!(m[0].inner(&e(1)).unwrap().abs() < 1e-12);
        assert_eq!(distinguishing_measurement_eja(&[e(0), e(0)], 1e-10).unwrap(), None);
        let mixed = EjaElement::unit(a).scale(1.0 / 3.0);
        assert!(distinguishing_measurement_eja(&[mixed], 1e-10).is_err());
    }
}
