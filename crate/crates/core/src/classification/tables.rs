//! Simple Euclidean Jordan algebras and the symmetric space
//! representations carrying regular convex bodies.
//!
//! The data lives in `resources/tables.json`, compiled in; setting
//! `JORDAN_SPECTRA_TABLES` to a path loads that file instead.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::formula::{evaluate_bool, evaluate_int, render};
use crate::eja::{AlgebraDescriptor, Family};
use crate::error::{Error, Result};

pub const TABLES_ENV: &str = "JORDAN_SPECTRA_TABLES";
pub const BUILTIN_TABLES: &str = include_str!("../../resources/tables.json");

/// Parameter sweep width for the consistency check: `min ..= min + SWEEP`.
pub const SWEEP: i64 = 6;

pub type Bindings = BTreeMap<String, i64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub min: i64,
}

/// A row of the algebra table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EjaTableRow {
    pub key: String,
    pub algebra: String,
    pub cone: String,
    pub g: String,
    pub k: String,
    pub params: Vec<Param>,
    pub dim: String,
    pub rank: String,
    pub family: Family,
    /// This crate's descriptor parameter as a formula in the row's own.
    pub family_param: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSpaceCase {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub when: Option<String>,
}

/// The "EJA" column of a symmetric-space row, pointing into the algebra table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EjaAnnotation {
    pub printed: String,
    pub algebra_key: String,
    /// Algebra-table parameters as formulas in the row's parameters.
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub when: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// A known discrepancy; arithmetic failures are flagged, not failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
}

/// Another row describing the same body under `when`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coincidence {
    pub when: String,
    pub with: Vec<String>,
    pub note: String,
}

fn is_true(b: &bool) -> bool {
    *b
}

fn yes() -> bool {
    true
}

/// Which family of symmetric spaces a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    Classical,
    Exceptional,
    /// Compact groups `G × G / G`.
    Group,
}

/// A symmetric-space row with formulas kept as printed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MrTableRow {
    pub series: Series,
    pub label: String,
    pub symmetric_space: String,
    pub params: Vec<Param>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub derived: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
    pub rank: String,
    /// `false` where the table has no rank column and the rank is the
    /// root-space subscript.
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub rank_printed: bool,
    pub isotropy_dim: String,
    pub root_space: Vec<RootSpaceCase>,
    pub polytopes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eja: Option<EjaAnnotation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coincidences: Vec<Coincidence>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub schema_version: u32,
    pub algebras: Vec<EjaTableRow>,
    pub rows: Vec<MrTableRow>,
}

/// An algebra-table entry at concrete parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluatedEja {
    pub key: String,
    pub name: String,
    pub dim: i64,
    pub rank: i64,
    pub algebra: AlgebraDescriptor,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluatedAnnotation {
    pub printed: String,
    pub algebra: EvaluatedEja,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
}

/// A symmetric-space row at concrete parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluatedRow {
    pub series: Series,
    pub label: String,
    pub params: Bindings,
    pub symmetric_space: String,
    pub rank: i64,
    pub isotropy_dim: i64,
    pub root_space: String,
    pub polytopes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eja: Option<EvaluatedAnnotation>,
    pub coincidences: Vec<Coincidence>,
}

fn bind(params: &[Param], given: &Bindings, what: &str) -> Result<Bindings> {
    let mut env = Bindings::new();
    for p in params {
        let v = *given.get(&p.name).ok_or_else(|| Error::Formula(format!("{what}: missing parameter {}", p.name)))?;
        if v < p.min {
            return Err(Error::Formula(format!("{what}: {} = {v} is below its minimum {}", p.name, p.min)));
        }
        env.insert(p.name.clone(), v);
    }
    if let Some(extra) = given.keys().find(|k| !params.iter().any(|p| &p.name == *k)) {
        return Err(Error::Formula(format!("{what}: unknown parameter {extra}")));
    }
    Ok(env)
}

impl EjaTableRow {
    pub fn evaluate(&self, given: &Bindings) -> Result<EvaluatedEja> {
        let env = bind(&self.params, given, &self.key)?;
        let param = usize::try_from(evaluate_int(&self.family_param, &env)?)
            .map_err(|_| Error::Formula(format!("{}: negative family parameter", self.key)))?;
        let algebra = AlgebraDescriptor::new(self.family, param)?;
        Ok(EvaluatedEja {
            key: self.key.clone(),
            name: algebra.to_string(),
            dim: evaluate_int(&self.dim, &env)?,
            rank: evaluate_int(&self.rank, &env)?,
            algebra,
        })
    }
}

impl Tables {
    pub fn from_json(s: &str) -> Result<Tables> {
        let t: Tables = serde_json::from_str(s).map_err(|e| Error::Parse(format!("tables: {e}")))?;
        if t.schema_version != 1 {
            return Err(Error::Parse(format!("tables: unsupported schema_version {}", t.schema_version)));
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialise")
    }

    pub fn builtin() -> Tables {
        Tables::from_json(BUILTIN_TABLES).expect("compiled-in tables parse")
    }

    /// The compiled-in tables, or the file named by `JORDAN_SPECTRA_TABLES`.
    pub fn load() -> Result<Tables> {
        match std::env::var_os(TABLES_ENV) {
            Some(path) => {
                let s = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.to_string_lossy())))?;
                Tables::from_json(&s)
            }
            None => Ok(Tables::builtin()),
        }
    }

    pub fn algebra_row(&self, key: &str) -> Result<&EjaTableRow> {
        self.algebras.iter().find(|r| r.key == key).ok_or_else(|| Error::UnknownLabel(key.to_string()))
    }

    /// Algebra-table row for an algebra, with its parameters.
    pub fn algebra_entry(&self, a: AlgebraDescriptor) -> Result<EvaluatedEja> {
        let row = self.algebra_row(a.family().name())?;
        let p = a.param() as i64;
        let given: Bindings = match a.family() {
            Family::Spin => [("n".to_string(), p + 1)].into(),
            Family::HermO => Bindings::new(),
            _ => [("m".to_string(), p)].into(),
        };
        row.evaluate(&given)
    }

    pub fn row(&self, label: &str) -> Result<&MrTableRow> {
        self.rows.iter().find(|r| r.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn evaluate_row(&self, label: &str, params: &Bindings) -> Result<EvaluatedRow> {
        let row = self.row(label)?;
        let env = row.environment(params)?;
        let eja = match &row.eja {
            Some(a) if a.when.as_deref().map_or(Ok(true), |w| evaluate_bool(w, &env))? => {
                let given = a.params.iter().map(|(k, f)| Ok((k.clone(), evaluate_int(f, &env)?))).collect::<Result<Bindings>>()?;
                Some(EvaluatedAnnotation {
                    printed: a.printed.clone(),
                    algebra: self.algebra_row(&a.algebra_key)?.evaluate(&given)?,
                    discrepancy: a.discrepancy.clone(),
                })
            }
            _ => None,
        };
        let mut coincidences = Vec::new();
        for c in &row.coincidences {
            if evaluate_bool(&c.when, &env)? {
                coincidences.push(c.clone());
            }
        }
        Ok(EvaluatedRow {
            series: row.series,
            label: row.label.clone(),
            params: params.clone(),
            symmetric_space: row.symmetric_space.clone(),
            rank: evaluate_int(&row.rank, &env)?,
            isotropy_dim: evaluate_int(&row.isotropy_dim, &env)?,
            root_space: row.root_space_at(&env)?,
            polytopes: row.polytopes.iter().map(|t| render(t, &env)).collect::<Result<_>>()?,
            eja,
            coincidences,
        })
    }
}

impl MrTableRow {
    /// Parameters plus derived quantities, after checking the row's constraint.
    fn environment(&self, given: &Bindings) -> Result<Bindings> {
        let mut env = bind(&self.params, given, &self.label)?;
        for (k, f) in &self.derived {
            let v = evaluate_int(f, &env)?;
            env.insert(k.clone(), v);
        }
        if let Some(c) = &self.constraint {
            if !evaluate_bool(c, &env)? {
                return Err(Error::Formula(format!("{}: parameters violate {c:?}", self.label)));
            }
        }
        Ok(env)
    }

    fn root_space_at(&self, env: &Bindings) -> Result<String> {
        for case in &self.root_space {
            if case.when.as_deref().map_or(Ok(true), |w| evaluate_bool(w, env))? {
                return render(&case.label, env);
            }
        }
        Err(Error::Formula(format!("{}: no root-space case applies", self.label)))
    }

    /// Admissible bindings with each parameter in `min ..= min + SWEEP`.
    pub fn sweep(&self) -> Vec<Bindings> {
        let mut out = vec![Bindings::new()];
        for p in &self.params {
            out = out
                .into_iter()
                .flat_map(|b| {
                    (p.min..=p.min + SWEEP).map(move |v| {
                        let mut b = b.clone();
                        b.insert(p.name.clone(), v);
                        b
                    })
                })
                .collect();
        }
        out.retain(|b| self.environment(b).is_ok());
        out
    }
}

pub fn mr_table_lookup(label: &str) -> Result<MrTableRow> {
    Tables::load()?.row(label).cloned()
}

pub fn mr_table_all() -> Result<Vec<MrTableRow>> {
    Ok(Tables::load()?.rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A failure on a row carrying a documented open question.
    Flagged,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyEntry {
    pub label: String,
    pub params: Bindings,
    /// `dim_rank` or `annotation`.
    pub check: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub passed: bool,
    pub checked: usize,
    pub flagged: usize,
    pub entries: Vec<ConsistencyEntry>,
}

fn simplex_dim(label: &str) -> Option<i64> {
    label.strip_prefix("Δ_")?.parse().ok()
}

/// Cross-checks the symmetric-space rows against the algebra table over a parameter sweep:
/// every EJA annotation must satisfy `isotropy dim = dim V − 1` and
/// `rank = rank V − 1`, and every `Δ_n` row with `n ≥ 2` must carry one.
pub fn table_consistency_check(tables: &Tables) -> Result<ConsistencyReport> {
    let mut entries = Vec::new();
    for row in &tables.rows {
        for b in row.sweep() {
            let ev = tables.evaluate_row(&row.label, &b)?;
            let entry = |check, status, detail| ConsistencyEntry { label: row.label.clone(), params: b.clone(), check, status, detail };
            if let Some(a) = &ev.eja {
                let ok = ev.isotropy_dim == a.algebra.dim - 1 && ev.rank == a.algebra.rank - 1;
                let status = match (ok, &a.discrepancy) {
                    (true, _) => CheckStatus::Pass,
                    (false, Some(_)) => CheckStatus::Flagged,
                    (false, None) => CheckStatus::Fail,
                };
                let mut detail = format!(
                    "isotropy dim {} vs dim {} − 1 = {}; rank {} vs rank {} − 1 = {}",
                    ev.isotropy_dim,
                    a.algebra.name,
                    a.algebra.dim - 1,
                    ev.rank,
                    a.algebra.name,
                    a.algebra.rank - 1
                );
                if let (CheckStatus::Flagged, Some(q)) = (status, &a.discrepancy) {
                    detail.push_str(&format!(" [{q}]"));
                }
                entries.push(entry("dim_rank", status, detail));
            }
            for p in &ev.polytopes {
                if simplex_dim(p).is_some_and(|n| n >= 2) {
                    let status = if ev.eja.is_some() { CheckStatus::Pass } else { CheckStatus::Fail };
                    entries.push(entry("annotation", status, format!("{p} row annotated: {}", ev.eja.is_some())));
                }
            }
        }
    }
    Ok(ConsistencyReport {
        passed: entries.iter().all(|e| e.status != CheckStatus::Fail),
        checked: entries.len(),
        flagged: entries.iter().filter(|e| e.status == CheckStatus::Flagged).count(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(pairs: &[(&str, i64)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn ai_at_four() {
        let r = Tables::builtin().evaluate_row("AI", &b(&[("n", 4)])).unwrap();
        assert_eq!((r.rank, r.isotropy_dim), (3, 9));
        assert_eq!(r.root_space, "A_3");
        assert_eq!(r.polytopes, vec!["Δ_3"]);
        assert_eq!(r.eja.unwrap().algebra.algebra, AlgebraDescriptor::sym_r(4));
    }

    #[test]
    fn eiv() {
        let r = Tables::builtin().evaluate_row("EIV", &Bindings::new()).unwrap();
        assert_eq!((r.rank, r.isotropy_dim, r.root_space.as_str()), (2, 26, "A_2"));
        let a = r.eja.unwrap();
        assert_eq!(a.printed, "Herm(3,O)");
        assert_eq!((a.algebra.dim, a.algebra.rank), (27, 3));
    }

    #[test]
    fn a_n_keeps_printed_parameter() {
        let r = Tables::builtin().evaluate_row("A_n", &b(&[("n", 2)])).unwrap();
        assert_eq!(r.isotropy_dim, 8);
        assert_eq!(r.polytopes, vec!["Δ_2"]);
        let a = r.eja.unwrap();
        assert_eq!(a.algebra.algebra, AlgebraDescriptor::herm_c(2));
        assert!(a.discrepancy.is_some());
    }

    #[test]
    fn conditional_annotations_and_cases() {
        let t = Tables::builtin();
        let r = t.evaluate_row("AIII", &b(&[("p", 3), ("q", 1)])).unwrap();
        assert!(r.eja.is_none());
        assert_eq!(r.root_space, "C_1");
        let r = t.evaluate_row("AIII", &b(&[("p", 2), ("q", 2)])).unwrap();
        assert_eq!(r.root_space, "B_2");
        let r = t.evaluate_row("BI", &b(&[("p", 4), ("q", 1)])).unwrap();
        assert_eq!(r.eja.unwrap().algebra.algebra, AlgebraDescriptor::spin(4));
        assert_eq!(r.coincidences.len(), 1);
        let r = t.evaluate_row("DIII", &b(&[("n", 5)])).unwrap();
        assert_eq!((r.rank, r.root_space.as_str()), (2, "BC_2"));
        assert!(t.evaluate_row("BI", &b(&[("p", 2), ("q", 2)])).is_err());
        assert!(t.evaluate_row("AI", &b(&[("n", 1)])).is_err());
        assert!(t.evaluate_row("AI", &b(&[("m", 3)])).is_err());
        assert!(matches!(t.evaluate_row("XYZ", &Bindings::new()), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn algebra_formulas_match_descriptors() {
        let t = Tables::builtin();
        let mut algs = vec![AlgebraDescriptor::herm_o()];
        for m in 1..=6 {
            algs.extend([AlgebraDescriptor::sym_r(m), AlgebraDescriptor::herm_c(m), AlgebraDescriptor::herm_h(m), AlgebraDescriptor::spin(m)]);
        }
        for a in algs {
            let e = t.algebra_entry(a).unwrap();
            assert_eq!(e.algebra, a);
            assert_eq!(e.dim as usize, a.dim(), "{a}");
        }
    }

    #[test]
    fn consistency_passes_and_flags_a_n() {
        let r = table_consistency_check(&Tables::builtin()).unwrap();
        assert!(r.passed, "{:#?}", r.entries.iter().filter(|e| e.status == CheckStatus::Fail).collect::<Vec<_>>());
        assert!(r.flagged > 0);
        assert!(r.entries.iter().filter(|e| e.status == CheckStatus::Flagged).all(|e| e.label == "A_n"));
        // AII at n = 3: 14 = 15 − 1
        assert!(r.entries.iter().any(|e| e.label == "AII" && e.params == b(&[("n", 3)]) && e.status == CheckStatus::Pass));
    }

    #[test]
    fn round_trip_is_exact() {
        let t = Tables::builtin();
        let original: serde_json::Value = serde_json::from_str(BUILTIN_TABLES).unwrap();
        let again: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(original, again);
        assert_eq!(Tables::from_json(&t.to_json()).unwrap(), t);
    }
}
