//! Exact linear programming over ordered fields.
//!
//! Programs are generic over [`OrderedField`]; polytope queries use
//! [`Rational`] or [`QSqrt5`] depending on their coordinates. The JSON form
//! carries numbers as strings (`"3/7"`, `"-1/4+1/4*sqrt5"`).

pub mod field;
mod simplex;

use serde::{Deserialize, Serialize};

pub use field::{parse_rational, rational_from_f64, rational_to_f64, OrderedField, QSqrt5, Rational};
pub use simplex::{Constraint, DualCertificate, Feasibility, LinearProgram, LpOutcome, Objective, Relation, Sense};

use crate::error::Result;

/// Feasibility query; see [`LinearProgram::feasible`].
pub fn lp_feasible<F: OrderedField>(lp: &LinearProgram<F>) -> Result<Feasibility<F>> {
    lp.feasible()
}

/// Optimisation query; see [`LinearProgram::optimize`].
pub fn lp_optimize<F: OrderedField>(lp: &LinearProgram<F>) -> Result<LpOutcome<F>> {
    lp.optimize()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub coeffs: Vec<String>,
    pub relation: Relation,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveJson {
    pub sense: Sense,
    pub coeffs: Vec<String>,
}

/// Serialized program with string-encoded field elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgramJson {
    pub n_vars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveJson>,
    pub constraints: Vec<ConstraintJson>,
    pub lower: Vec<Option<String>>,
    pub upper: Vec<Option<String>>,
}

fn strings<F: OrderedField>(v: &[F]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn parse_all<F: OrderedField>(v: &[String]) -> Result<Vec<F>> {
    v.iter().map(|s| F::parse_exact(s)).collect()
}

impl<F: OrderedField> From<&LinearProgram<F>> for LinearProgramJson {
    fn from(lp: &LinearProgram<F>) -> Self {
        LinearProgramJson {
            n_vars: lp.n_vars(),
            objective: lp.objective.as_ref().map(|o| ObjectiveJson { sense: o.sense, coeffs: strings(&o.coeffs) }),
            constraints: lp
                .constraints
                .iter()
                .map(|c| ConstraintJson { coeffs: strings(&c.coeffs), relation: c.relation, rhs: c.rhs.to_string() })
                .collect(),
            lower: lp.lower.iter().map(|b| b.as_ref().map(ToString::to_string)).collect(),
            upper: lp.upper.iter().map(|b| b.as_ref().map(ToString::to_string)).collect(),
        }
    }
}

impl LinearProgramJson {
    pub fn to_program<F: OrderedField>(&self) -> Result<LinearProgram<F>> {
        let mut lp = LinearProgram::new(self.n_vars);
        for c in &self.constraints {
            lp.constrain(parse_all(&c.coeffs)?, c.relation, F::parse_exact(&c.rhs)?);
        }
        let bound = |b: &Option<String>| b.as_deref().map(F::parse_exact).transpose();
        lp.lower = self.lower.iter().map(bound).collect::<Result<_>>()?;
        lp.upper = self.upper.iter().map(bound).collect::<Result<_>>()?;
        if let Some(o) = &self.objective {
            lp.objective = Some(Objective { sense: o.sense, coeffs: parse_all(&o.coeffs)? });
        }
        lp.validate()?;
        Ok(lp)
    }
}
