//! Dense tableau simplex with Bland's rule over an exact ordered field.
//!
//! Variables are mapped to nonnegative columns (shifted by a finite lower
//! bound, reflected at an upper bound, or split into `y⁺ − y⁻` when free),
//! rows get slack columns and an artificial column each, and Phase I
//! minimises the sum of the artificials.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::OrderedField;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub relation: Relation,
    pub rhs: F,
}

impl<F: OrderedField> Constraint<F> {
    pub fn holds_at(&self, x: &[F]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Objective<F> {
    pub sense: Sense,
    pub coeffs: Vec<F>,
}

/// A linear program over `F`. Variables are free unless bounded.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<F> {
    n_vars: usize,
    pub constraints: Vec<Constraint<F>>,
    pub lower: Vec<Option<F>>,
    pub upper: Vec<Option<F>>,
    pub objective: Option<Objective<F>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility<F> {
    Feasible(Vec<F>),
    Infeasible,
}

impl<F> Feasibility<F> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(self) -> Option<Vec<F>> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<F> {
    Optimal { value: F, witness: Vec<F> },
    Unbounded,
    Infeasible,
}

/// Multipliers `y` for the rows of [`LinearProgram::dual_rows`], proving an
/// upper bound `Σ yᵢ bᵢ` on a maximisation (lower bound for minimisation).
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate<F> {
    pub multipliers: Vec<F>,
    pub value: F,
}

pub(crate) fn dot<F: OrderedField>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

impl<F: OrderedField> LinearProgram<F> {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            constraints: Vec::new(),
            lower: vec![None; n_vars],
            upper: vec![None; n_vars],
            objective: None,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn constrain(&mut self, coeffs: Vec<F>, relation: Relation, rhs: F) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn bound(&mut self, var: usize, lower: Option<F>, upper: Option<F>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    /// Marks every variable nonnegative.
    pub fn nonnegative(&mut self) -> &mut Self {
        self.lower.iter_mut().for_each(|l| *l = Some(F::zero()));
        self
    }

    pub fn maximize(&mut self, coeffs: Vec<F>) -> &mut Self {
        self.objective = Some(Objective { sense: Sense::Maximize, coeffs });
        self
    }

    pub fn minimize(&mut self, coeffs: Vec<F>) -> &mut Self {
        self.objective = Some(Objective { sense: Sense::Minimize, coeffs });
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_vars;
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension(format!("bounds for {} variables, expected {n}", self.lower.len())));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Dimension(format!("constraint {i} has {} coefficients, expected {n}", c.coeffs.len())));
            }
        }
        if let Some(o) = &self.objective {
            if o.coeffs.len() != n {
                return Err(Error::Dimension(format!("objective has {} coefficients, expected {n}", o.coeffs.len())));
            }
        }
        Ok(())
    }

    /// Exact check of every constraint and bound at `x`.
    pub fn satisfied_by(&self, x: &[F]) -> bool {
        x.len() == self.n_vars
            && self.constraints.iter().all(|c| c.holds_at(x))
            && x.iter().zip(&self.lower).all(|(v, l)| l.as_ref().is_none_or(|l| v >= l))
            && x.iter().zip(&self.upper).all(|(v, u)| u.as_ref().is_none_or(|u| v <= u))
    }

    pub fn feasible(&self) -> Result<Feasibility<F>> {
        self.validate()?;
        let mut solver = Tableau::build(self);
        if !solver.phase_one() {
            return Ok(Feasibility::Infeasible);
        }
        // prefer the witness closest to the bounds (free variables: to 0)
        let mut cost = vec![F::zero(); solver.cols];
        for c in cost.iter_mut().take(solver.n_struct) {
            *c = -F::one();
        }
        let bounded = solver.run(&cost, false);
        debug_assert!(bounded);
        let x = solver.solution(self);
        debug_assert!(self.satisfied_by(&x));
        Ok(Feasibility::Feasible(x))
    }

    pub fn optimize(&self) -> Result<LpOutcome<F>> {
        self.validate()?;
        let objective = self.objective.as_ref().ok_or(Error::MissingObjective)?;
        let mut solver = Tableau::build(self);
        if !solver.phase_one() {
            return Ok(LpOutcome::Infeasible);
        }
        let mut cost = vec![F::zero(); solver.cols];
        let flip = objective.sense == Sense::Minimize;
        for (j, c) in objective.coeffs.iter().enumerate() {
            let c = if flip { -c.clone() } else { c.clone() };
            let map = &solver.var_map[j];
            for (col, sign) in &map.columns {
                cost[*col] = cost[*col].clone() + c.clone() * sign.clone();
            }
        }
        if !solver.run(&cost, false) {
            return Ok(LpOutcome::Unbounded);
        }
        let witness = solver.solution(self);
        debug_assert!(self.satisfied_by(&witness));
        let value = dot(&objective.coeffs, &witness);
        Ok(LpOutcome::Optimal { value, witness })
    }

    /// Every constraint and finite bound as a row `(a, relation, b)`.
    pub fn dual_rows(&self) -> Vec<Constraint<F>> {
        let mut rows = self.constraints.clone();
        let unit = |j: usize| {
            let mut e = vec![F::zero(); self.n_vars];
            e[j] = F::one();
            e
        };
        for j in 0..self.n_vars {
            if let Some(l) = &self.lower[j] {
                rows.push(Constraint { coeffs: unit(j), relation: Relation::Ge, rhs: l.clone() });
            }
            if let Some(u) = &self.upper[j] {
                rows.push(Constraint { coeffs: unit(j), relation: Relation::Le, rhs: u.clone() });
            }
        }
        rows
    }

    /// Solves the dual program and returns its optimal multipliers, or `None`
    /// when the dual is infeasible (primal unbounded or infeasible).
    pub fn dual_certificate(&self) -> Result<Option<DualCertificate<F>>> {
        self.validate()?;
        let objective = self.objective.as_ref().ok_or(Error::MissingObjective)?;
        let rows = self.dual_rows();
        let flip = objective.sense == Sense::Minimize;
        // max c·x, rows a_i·x (rel) b_i  ⇒  min b·y, Σ yᵢ aᵢ = c, y_i ≥ 0 (≤), ≤ 0 (≥)
        let c: Vec<F> = objective.coeffs.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        let mut dual = LinearProgram::new(rows.len());
        for (j, cj) in c.iter().enumerate().take(self.n_vars) {
            dual.constrain(rows.iter().map(|r| r.coeffs[j].clone()).collect(), Relation::Eq, cj.clone());
        }
        for (i, r) in rows.iter().enumerate() {
            match r.relation {
                Relation::Le => dual.lower[i] = Some(F::zero()),
                Relation::Ge => dual.upper[i] = Some(F::zero()),
                Relation::Eq => {}
            }
        }
        dual.minimize(rows.iter().map(|r| r.rhs.clone()).collect());
        Ok(match dual.optimize()? {
            LpOutcome::Optimal { value, witness } => Some(DualCertificate {
                multipliers: witness,
                value: if flip { -value } else { value },
            }),
            _ => None,
        })
    }

    /// Checks a dual certificate exactly: sign conditions, `Σ yᵢ aᵢ = c`, and
    /// that its bound equals `primal_value`.
    pub fn verify_dual(&self, cert: &DualCertificate<F>, primal_value: &F) -> bool {
        let Some(objective) = &self.objective else { return false };
        let rows = self.dual_rows();
        if cert.multipliers.len() != rows.len() {
            return false;
        }
        let flip = objective.sense == Sense::Minimize;
        let signs_ok = rows.iter().zip(&cert.multipliers).all(|(r, y)| match r.relation {
            Relation::Le => !y.lt_zero(),
            Relation::Ge => !y.gt_zero(),
            Relation::Eq => true,
        });
        let combo_ok = (0..self.n_vars).all(|j| {
            let s = rows.iter().zip(&cert.multipliers).fold(F::zero(), |acc, (r, y)| acc + r.coeffs[j].clone() * y.clone());
            let c = objective.coeffs[j].clone();
            s == if flip { -c } else { c }
        });
        let bound = rows.iter().zip(&cert.multipliers).fold(F::zero(), |acc, (r, y)| acc + r.rhs.clone() * y.clone());
        let bound = if flip { -bound } else { bound };
        signs_ok && combo_ok && bound == cert.value && &cert.value == primal_value
    }
}

/// How an original variable is expressed in tableau columns:
/// `x = offset + Σ sign · y_col`.
struct VarMap<F> {
    offset: F,
    columns: Vec<(usize, F)>,
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
    cols: usize,
    n_struct: usize,
    artificial_start: usize,
    var_map: Vec<VarMap<F>>,
}

impl<F: OrderedField> Tableau<F> {
    fn build(lp: &LinearProgram<F>) -> Self {
        let mut var_map = Vec::with_capacity(lp.n_vars);
        let mut n_struct = 0;
        let mut extra_rows: Vec<(usize, F)> = Vec::new();
        for j in 0..lp.n_vars {
            let map = match (&lp.lower[j], &lp.upper[j]) {
                (Some(l), u) => {
                    let col = n_struct;
                    n_struct += 1;
                    if let Some(u) = u {
                        extra_rows.push((col, u.clone() - l.clone()));
                    }
                    VarMap { offset: l.clone(), columns: vec![(col, F::one())] }
                }
                (None, Some(u)) => {
                    let col = n_struct;
                    n_struct += 1;
                    VarMap { offset: u.clone(), columns: vec![(col, -F::one())] }
                }
                (None, None) => {
                    let col = n_struct;
                    n_struct += 2;
                    VarMap { offset: F::zero(), columns: vec![(col, F::one()), (col + 1, -F::one())] }
                }
            };
            var_map.push(map);
        }

        // rows over structural columns, with relation and shifted rhs
        let mut raw: Vec<(Vec<F>, Relation, F)> = Vec::new();
        for c in &lp.constraints {
            let mut row = vec![F::zero(); n_struct];
            let mut rhs = c.rhs.clone();
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let map = &var_map[j];
                rhs = rhs - a.clone() * map.offset.clone();
                for (col, sign) in &map.columns {
                    row[*col] = row[*col].clone() + a.clone() * sign.clone();
                }
            }
            raw.push((row, c.relation, rhs));
        }
        for (col, width) in extra_rows {
            let mut row = vec![F::zero(); n_struct];
            row[col] = F::one();
            raw.push((row, Relation::Le, width));
        }

        let n_slack = raw.iter().filter(|r| r.1 != Relation::Eq).count();
        let m = raw.len();
        let artificial_start = n_struct + n_slack;
        let cols = artificial_start + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs_col = Vec::with_capacity(m);
        let mut slack = n_struct;
        for (i, (coeffs, rel, b)) in raw.into_iter().enumerate() {
            let mut row = coeffs;
            row.resize(cols, F::zero());
            match rel {
                Relation::Le => {
                    row[slack] = F::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -F::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            let mut b = b;
            if b.lt_zero() {
                row.iter_mut().for_each(|v| *v = -v.clone());
                b = -b;
            }
            row[artificial_start + i] = F::one();
            rows.push(row);
            rhs_col.push(b);
        }
        let basis = (0..m).map(|i| artificial_start + i).collect();
        Tableau { rows, rhs: rhs_col, basis, cols, n_struct, artificial_start, var_map }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() / p.clone();
                }
            }
            self.rhs[r] = self.rhs[r].clone() / p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        self.basis[r] = c;
    }

    /// Maximises `cost · y` from the current basic feasible solution using
    /// Bland's rule. Returns `false` if unbounded.
    fn run(&mut self, cost: &[F], allow_artificial: bool) -> bool {
        let limit = if allow_artificial { self.cols } else { self.artificial_start };
        loop {
            // reduced cost d_j = c_j − Σ_i c_{B(i)} a_ij; enter smallest j with d_j > 0
            let entering = (0..limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        d = d - cost[b].clone() * self.rows[i][j].clone();
                    }
                }
                d.gt_zero()
            });
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.gt_zero() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr || (ratio == lr && self.basis[i] < self.basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    /// Phase I; on success the basis contains no artificial column.
    fn phase_one(&mut self) -> bool {
        let mut cost = vec![F::zero(); self.cols];
        for c in cost.iter_mut().skip(self.artificial_start) {
            *c = -F::one();
        }
        let bounded = self.run(&cost, true);
        debug_assert!(bounded);
        let infeasibility = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(b, _)| **b >= self.artificial_start)
            .fold(F::zero(), |acc, (_, v)| acc + v.clone());
        if infeasibility.gt_zero() {
            return false;
        }
        // drive zero-level artificials out, dropping redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        true
    }

    fn solution(&self, lp: &LinearProgram<F>) -> Vec<F> {
        let mut y = vec![F::zero(); self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            y[b] = self.rhs[i].clone();
        }
        (0..lp.n_vars)
            .map(|j| {
                let map = &self.var_map[j];
                map.columns
                    .iter()
                    .fold(map.offset.clone(), |acc, (col, sign)| acc + sign.clone() * y[*col].clone())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Rational;
    use num_traits::Zero;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn unit_interval_is_feasible_at_zero() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![r(1)], Relation::Ge, r(0)).constrain(vec![r(1)], Relation::Le, r(1));
        assert_eq!(lp.feasible().unwrap(), Feasibility::Feasible(vec![r(0)]));
    }

    #[test]
    fn empty_interval_is_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![r(1)], Relation::Ge, r(1)).constrain(vec![r(1)], Relation::Le, r(0));
        assert_eq!(lp.feasible().unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn maximize_on_interval() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![r(1)], Relation::Ge, r(0)).constrain(vec![r(1)], Relation::Le, r(1)).maximize(vec![r(1)]);
        assert_eq!(lp.optimize().unwrap(), LpOutcome::Optimal { value: r(1), witness: vec![r(1)] });
    }

    #[test]
    fn maximize_on_square() {
        let mut lp = LinearProgram::new(2);
        lp.bound(0, Some(r(-1)), Some(r(1))).bound(1, Some(r(-1)), Some(r(1))).maximize(vec![r(1), r(1)]);
        let out = lp.optimize().unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: r(2), witness: vec![r(1), r(1)] });
        let cert = lp.dual_certificate().unwrap().unwrap();
        assert!(lp.verify_dual(&cert, &r(2)));
    }

    #[test]
    fn unbounded_and_missing_objective() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![r(1)], Relation::Ge, r(0));
        assert_eq!(lp.optimize(), Err(Error::MissingObjective));
        lp.maximize(vec![r(1)]);
        assert_eq!(lp.optimize().unwrap(), LpOutcome::Unbounded);
        assert_eq!(lp.dual_certificate().unwrap(), None);
    }

    #[test]
    fn dimension_mismatch() {
        let mut lp = LinearProgram::new(2);
        lp.constrain(vec![r(1)], Relation::Ge, r(0));
        assert!(matches!(lp.feasible(), Err(Error::Dimension(_))));
    }

    #[test]
    fn minimize_with_equalities_and_redundancy() {
        // min x + 2y s.t. x + y = 3, 2x + 2y = 6, x, y ≥ 0  → (3, 0), value 3
        let mut lp = LinearProgram::new(2);
        lp.nonnegative()
            .constrain(vec![r(1), r(1)], Relation::Eq, r(3))
            .constrain(vec![r(2), r(2)], Relation::Eq, r(6))
            .minimize(vec![r(1), r(2)]);
        let LpOutcome::Optimal { value, witness } = lp.optimize().unwrap() else { panic!() };
        assert_eq!(value, r(3));
        assert_eq!(witness, vec![r(3), r(0)]);
        let cert = lp.dual_certificate().unwrap().unwrap();
        assert!(lp.verify_dual(&cert, &value));
        // a wrong claimed value fails verification
        assert!(!lp.verify_dual(&cert, &r(4)));
    }

    /// Beale's classic cycling example: Bland's rule must terminate.
    #[test]
    fn beale_does_not_cycle() {
        let q = |n: i64, d: i64| Rational::ratio(n, d);
        let mut lp = LinearProgram::new(4);
        lp.nonnegative()
            .constrain(vec![q(1, 4), r(-60), q(-1, 25), r(9)], Relation::Le, r(0))
            .constrain(vec![q(1, 2), r(-90), q(-1, 50), r(3)], Relation::Le, r(0))
            .constrain(vec![r(0), r(0), r(1), r(0)], Relation::Le, r(1))
            .maximize(vec![q(3, 4), r(-150), q(1, 50), r(-6)]);
        let LpOutcome::Optimal { value, witness } = lp.optimize().unwrap() else { panic!() };
        assert_eq!(value, q(1, 20));
        assert!(lp.satisfied_by(&witness));
        let cert = lp.dual_certificate().unwrap().unwrap();
        assert!(lp.verify_dual(&cert, &value));
    }

    #[test]
    fn zero_constraints() {
        let lp: LinearProgram<Rational> = LinearProgram::new(2);
        let w = lp.feasible().unwrap().witness().unwrap();
        assert!(w.iter().all(|v| v.is_zero()));
    }
}
