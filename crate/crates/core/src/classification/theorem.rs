//! End-to-end drivers: every simple Euclidean Jordan algebra and every
//! simplex is spectral and strongly symmetric, and among polytopes only
//! simplices are.

use num_traits::{One, Zero};
use serde::Serialize;

use super::fr::{fr_polytope, FrOptions, FrSection};
use super::tables::Tables;
use super::witness::Witness;
use crate::eja::{random_state, AlgebraDescriptor, EjaElement, DEFAULT_TOL};
use crate::error::Result;
use crate::geometry::{barycenter, exposed_faces, face_barycenter, fixtures, linalg, BodyPoint, ConvexBody, Polytope, Scalar, DEFAULT_FACE_CAP};
use crate::lp::OrderedField;
use crate::operational::{self, distinguishing_measurement, frame_catalog, SpectralOptions, Spectrality, SpectralityCertificate};
use crate::par::{trial_seed, Execution};
use crate::symmetry::{automorphism_group, frame_flag_bijection, is_strongly_symmetric, verify_strong_symmetry_eja, TRANSPORTER_TOL};

/// Decomposition residual bound (reconstruction, idempotency, orthogonality,
/// completeness).
pub const SPECTRAL_TOL: f64 = 1e-8;
/// Bound on `|⟨cᵢ, cⱼ⟩ − δᵢⱼ|` and `‖Σ cᵢ − e‖`.
pub const FRAME_TOL: f64 = 1e-9;
/// Bound on `‖(Σ cᵢ)/r − barycenter‖`.
pub const BARYCENTER_TOL: f64 = 1e-12;
/// Sampled points per section check inside the theorem driver.
pub const DRIVER_FR_SAMPLES: usize = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    /// Worst observed residual; `0` for exact checks that passed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl Check {
    fn toleranced(name: &'static str, residual: f64, tolerance: f64, detail: String) -> Check {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Check { name, status, residual: Some(residual), tolerance: Some(tolerance), detail, witness: None }
    }

    fn exact(name: &'static str, ok: bool, detail: String) -> Check {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { name, status, residual: ok.then_some(0.0), tolerance: None, detail, witness: None }
    }

    fn error(name: &'static str, e: impl std::fmt::Display) -> Check {
        Check { name, status: Status::Fail, residual: None, tolerance: None, detail: e.to_string(), witness: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TheoremTarget {
    Eja { algebra: AlgebraDescriptor },
    Simplex { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub target: TheoremTarget,
    pub name: String,
    pub trials: usize,
    pub seed: u64,
    /// No check failed; unsupported checks do not count as failures.
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl TheoremReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn with_result(name: &'static str, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check::error(name, e))
}

/// Per-trial numbers from one random state.
struct Trial {
    decomposition: f64,
    negative_weight: f64,
    orthonormality: f64,
    completeness: f64,
    frame_len: usize,
    barycenter: f64,
}

fn eja_trial(alg: AlgebraDescriptor, seed: u64, bary: &EjaElement) -> Result<Trial> {
    let omega = random_state(alg, seed);
    let d = omega.spectral_decompose(DEFAULT_TOL)?;
    let mut orthonormality: f64 = 0.0;
    for (i, ci) in d.frame.iter().enumerate() {
        for (j, cj) in d.frame.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            orthonormality = orthonormality.max((ci.inner(cj)? - delta).abs());
        }
    }
    let sum = d.frame[1..].iter().try_fold(d.frame[0].clone(), |acc, c| acc.add(c))?;
    let r = d.frame.len() as f64;
    Ok(Trial {
        decomposition: d.residuals(&omega).max(),
        negative_weight: d.eigenvalues.iter().fold(0.0f64, |m, l| m.max(-l)),
        orthonormality,
        completeness: sum.distance(&EjaElement::unit(alg))?,
        frame_len: d.frame.len(),
        barycenter: sum.scale(1.0 / r).distance(bary)?,
    })
}

fn eja_battery(alg: AlgebraDescriptor, trials: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let body = ConvexBody::Eja(alg);
    let mut checks = Vec::new();

    let table_rank = Tables::load().and_then(|t| t.algebra_entry(alg)).map(|e| e.rank as usize);
    let bary = match barycenter(&body) {
        Ok(BodyPoint::Eja(b)) => b,
        _ => EjaElement::unit(alg).scale(f64::NAN),
    };
    let results: Vec<Result<Trial>> = exec.map(trials, |i| eja_trial(alg, trial_seed(seed, i), &bary));
    let (oks, errs): (Vec<_>, Vec<_>) = results.into_iter().partition(|r| r.is_ok());
    let ts: Vec<Trial> = oks.into_iter().map(|r| r.unwrap_or_else(|_| unreachable!())).collect();
    if let Some(Err(e)) = errs.into_iter().next() {
        for name in ["spectrality", "frame_orthonormality", "frame_sum_unit", "barycenter"] {
            checks.push(Check::error(name, &e));
        }
    } else {
        let max = |f: fn(&Trial) -> f64| ts.iter().map(f).fold(0.0f64, f64::max);
        let worst = max(|t| t.decomposition).max(max(|t| t.negative_weight));
        checks.push(Check::toleranced(
            "spectrality",
            worst,
            SPECTRAL_TOL,
            format!("{trials} random states decomposed into Jordan frames with nonnegative weights"),
        ));
        checks.push(Check::toleranced("frame_orthonormality", max(|t| t.orthonormality), FRAME_TOL, "max |⟨cᵢ, cⱼ⟩ − δᵢⱼ|".into()));
        let short = ts.iter().filter(|t| t.frame_len != alg.rank()).count();
        let mut c = Check::toleranced("frame_sum_unit", max(|t| t.completeness), FRAME_TOL, "max ‖Σ cᵢ − e‖ over maximal frames".into());
        if short > 0 {
            c.status = Status::Fail;
            c.detail = format!("{short} decompositions returned fewer than rank elements");
        }
        checks.push(c);
        let mut c = Check::toleranced("barycenter", max(|t| t.barycenter), BARYCENTER_TOL, "max ‖(Σ cᵢ)/r − e/rank‖".into());
        if (bary.trace() - 1.0).abs() > BARYCENTER_TOL {
            c.status = Status::Fail;
            c.detail = format!("barycenter has trace {}", bary.trace());
        }
        checks.push(c);
    }

    checks.push(with_result("rank", (|| {
        let computed = operational::rank(&body, &SpectralOptions { seed, ..SpectralOptions::default() })?;
        let expected = table_rank.clone()?;
        Ok(Check::exact("rank", computed == expected, format!("computed {computed}, the algebra table gives {expected}")))
    })()));

    let ss = verify_strong_symmetry_eja(alg, trials, seed, exec);
    checks.push(if ss.unsupported {
        Check {
            name: "strong_symmetry",
            status: Status::Unsupported,
            residual: None,
            tolerance: Some(TRANSPORTER_TOL),
            detail: format!("no constructive transporter for {alg}"),
            witness: None,
        }
    } else {
        let mut c = Check::toleranced(
            "strong_symmetry",
            ss.max_residual,
            TRANSPORTER_TOL,
            format!("{}/{} transporter trials passed ({})", ss.passed, ss.trials, ss.method),
        );
        if !ss.all_passed() {
            c.status = Status::Fail;
        }
        c
    });

    checks.push(with_result("fr_polytope", (|| {
        let opts = FrOptions { frame_seed: Some(seed), samples: DRIVER_FR_SAMPLES, seed, exec, ..FrOptions::default() };
        let FrSection::Eja { frame, vertex_residual, sampling, .. } = fr_polytope(&body, &opts)? else { unreachable!() };
        let mut c = Check::toleranced(
            "fr_polytope",
            vertex_residual.max(-sampling.min_coordinate.min(0.0)),
            FRAME_TOL,
            format!("simplex on a {}-element Jordan frame; {}/{} samples in the cone", frame.len(), sampling.in_cone, sampling.samples),
        );
        if frame.len() != alg.rank() || !sampling.passed() {
            c.status = Status::Fail;
        }
        Ok(c)
    })()));
    checks
}

fn simplex_battery(n: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let p = fixtures::simplex(n);
    let body = ConvexBody::Polytope(p.clone());
    let cap = (n + 1).max(operational::DEFAULT_VERTEX_CAP);
    let mut checks = Vec::new();

    let catalog = match frame_catalog(&p, cap, exec) {
        Ok(c) => c,
        Err(e) => return vec![Check::error("frame_catalog", e)],
    };
    let opts = SpectralOptions { cap, seed, exec, ..SpectralOptions::default() };
    checks.push(with_result("spectrality", (|| {
        let s = operational::spectral::polytope_spectrality(&p, &catalog, &opts)?;
        let ok = matches!(s, Spectrality::Spectral(SpectralityCertificate::SingleFrame { .. }));
        Ok(Check::exact("spectrality", ok, "all vertices form one frame, so every state is a convex combination of it".into()))
    })()));

    let vertices = p.vertices().to_vec();
    let measurement = distinguishing_measurement(&p, &vertices);
    checks.push(with_result("frame_orthonormality", (|| {
        let Some(m) = measurement.clone()? else { return Ok(Check::exact("frame_orthonormality", false, "vertices not distinguishable".into())) };
        let ok = m.effects.iter().enumerate().all(|(i, e)| {
            vertices.iter().enumerate().all(|(j, v)| e.eval(v) == if i == j { Scalar::one() } else { Scalar::zero() })
        });
        Ok(Check::exact("frame_orthonormality", ok, format!("eᵢ(ωⱼ) = δᵢⱼ exactly for {} vertices", n + 1)))
    })()));
    checks.push(with_result("frame_sum_unit", (|| {
        let Some(m) = measurement.clone()? else { return Ok(Check::exact("frame_sum_unit", false, "vertices not distinguishable".into())) };
        let ok = vertices.iter().all(|v| m.effects.iter().fold(Scalar::zero(), |acc, e| acc + e.eval(v)) == Scalar::one());
        Ok(Check::exact("frame_sum_unit", ok && m.effects.len() == n + 1, "Σ eᵢ = u on every vertex".into()))
    })()));

    let r = catalog.rank();
    checks.push(Check::exact("rank", r == n + 1, format!("computed {r}, expected {}", n + 1)));

    checks.push(with_result("strong_symmetry", (|| {
        let g = automorphism_group(&p, cap)?;
        let rep = is_strongly_symmetric(&g, &catalog);
        let mut c = Check::exact(
            "strong_symmetry",
            rep.strongly_symmetric,
            format!("automorphism group of order {} transitive on ordered k-frames for k ≤ {}", rep.group_order, r),
        );
        c.witness = rep.witness().map(|(a, b)| serde_json::to_value(Witness::InequivalentFrames { a, b }).expect("serialise"));
        Ok(c)
    })()));

    checks.push(with_result("frame_flag_bijection", (|| {
        let lattice = exposed_faces(&p, cap.max(DEFAULT_FACE_CAP), exec)?;
        let b = frame_flag_bijection(&p, &catalog, &lattice)?;
        Ok(Check::exact("frame_flag_bijection", b.bijective, format!("{} maximal frames ↔ {} maximal flags", b.maximal_frames, b.maximal_flags)))
    })()));

    checks.push(with_result("barycenter", (|| {
        let BodyPoint::Exact(b) = barycenter(&body)? else { unreachable!() };
        let lattice = exposed_faces(&p, cap.max(DEFAULT_FACE_CAP), exec)?;
        let centroid = face_barycenter(&p, &lattice, lattice.top())?;
        let mean = vertices.iter().fold(vec![Scalar::zero(); p.ambient_dim()], |acc, v| linalg::add(&acc, v));
        let mean = linalg::scale(&mean, &Scalar::ratio(1, (n + 1) as i64));
        Ok(Check::exact("barycenter", b == mean && centroid == mean, "triangulated centroid equals the vertex mean (u/rank)".into()))
    })()));

    checks.push(with_result("fr_polytope", (|| {
        let s = fr_polytope(&body, &FrOptions { cap, exec, samples: 0, ..FrOptions::default() })?;
        let FrSection::Polytope { section, .. } = &s else { unreachable!() };
        Ok(Check::exact("fr_polytope", *section == p && s.n_vertices() == n + 1, format!("section is Δ_{n} itself")))
    })()));
    checks
}

/// Runs the battery for one algebra or simplex: spectrality, frame
/// orthonormality, `Σ ωᵢ = u`, rank, strong symmetry, barycenter and the
/// Farran–Robertson section.
pub fn verify_main_theorem_if_direction(target: TheoremTarget, trials: usize, seed: u64, exec: Execution) -> TheoremReport {
    let (name, checks) = match target {
        TheoremTarget::Eja { algebra } => (algebra.to_string(), eja_battery(algebra, trials, seed, exec)),
        TheoremTarget::Simplex { n } => (format!("simplex{n}"), simplex_battery(n, seed, exec)),
    };
    TheoremReport { target, name, trials, seed, passed: checks.iter().all(|c| c.status != Status::Fail), checks }
}

#[derive(Clone, Copy, Debug)]
pub struct ConverseOptions {
    pub cap: usize,
    pub samples: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for ConverseOptions {
    fn default() -> Self {
        let s = SpectralOptions::default();
        ConverseOptions { cap: s.cap, samples: s.samples, seed: s.seed, exec: s.exec }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConverseEntry {
    pub name: String,
    pub n_vertices: usize,
    pub dim: usize,
    /// `n_vertices = dim + 1`, decided from the vertex list alone.
    pub simplex: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// `true`, `false` or `"probabilistic"`.
    pub spectral: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strongly_symmetric: Option<bool>,
    pub sss: bool,
    /// `sss` coincides with `simplex`.
    pub agrees: bool,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConverseReport {
    pub all_agree: bool,
    pub entries: Vec<ConverseEntry>,
}

fn converse_entry(name: &str, p: &Polytope, opts: &ConverseOptions) -> ConverseEntry {
    let mut e = ConverseEntry {
        name: name.to_string(),
        n_vertices: p.n_vertices(),
        dim: p.dim(),
        simplex: p.n_vertices() == p.dim() + 1,
        rank: None,
        spectral: serde_json::Value::Null,
        strongly_symmetric: None,
        sss: false,
        agrees: false,
        witnesses: Vec::new(),
        error: None,
    };
    let run = |e: &mut ConverseEntry| -> Result<()> {
        let catalog = frame_catalog(p, opts.cap, opts.exec)?;
        e.rank = Some(catalog.rank());
        let sopts = SpectralOptions { cap: opts.cap, samples: opts.samples, seed: opts.seed, exec: opts.exec };
        let spectral = match operational::spectral::polytope_spectrality(p, &catalog, &sopts)? {
            Spectrality::Spectral(_) => {
                e.spectral = true.into();
                true
            }
            Spectrality::Probabilistic { .. } => {
                e.spectral = "probabilistic".into();
                false
            }
            Spectrality::NotSpectral { counterexample } => {
                e.spectral = false.into();
                e.witnesses.push(Witness::uncovered(&counterexample));
                false
            }
        };
        let g = automorphism_group(p, opts.cap)?;
        let ss = is_strongly_symmetric(&g, &catalog);
        e.strongly_symmetric = Some(ss.strongly_symmetric);
        if let Some((a, b)) = ss.witness() {
            e.witnesses.push(Witness::InequivalentFrames { a, b });
        }
        e.sss = spectral && ss.strongly_symmetric;
        e.agrees = e.sss == e.simplex;
        Ok(())
    };
    if let Err(err) = run(&mut e) {
        e.error = Some(err.to_string());
    }
    e
}

/// Decides spectrality and strong symmetry for each polytope and compares
/// the conjunction with being a simplex. Items over the cap are reported
/// with an error and count as disagreeing.
pub fn verify_converse_on_polytopes(catalog: &[(String, Polytope)], opts: &ConverseOptions) -> ConverseReport {
    let entries: Vec<ConverseEntry> = catalog.iter().map(|(name, p)| converse_entry(name, p, opts)).collect();
    ConverseReport { all_agree: entries.iter().all(|e| e.agrees), entries }
}

/// The built-in polytope catalog by name.
pub fn builtin_catalog() -> Vec<(String, Polytope)> {
    fixtures::CATALOG.iter().map(|n| (n.to_string(), fixtures::by_name(n).expect("catalog names resolve"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_battery_passes_exactly() {
        for n in 1..=3 {
            let r = verify_main_theorem_if_direction(TheoremTarget::Simplex { n }, 10, 0, Execution::Sequential);
            assert!(r.passed, "{r:#?}");
            assert!(r.checks.iter().all(|c| c.status == Status::Pass && c.residual == Some(0.0)));
        }
    }

    #[test]
    fn herm_c2_battery_passes() {
        let r = verify_main_theorem_if_direction(TheoremTarget::Eja { algebra: AlgebraDescriptor::herm_c(2) }, 10, 1, Execution::Sequential);
        assert!(r.passed, "{r:#?}");
        assert_eq!(r.check("rank").unwrap().status, Status::Pass);
    }

    #[test]
    fn herm_o_marks_transporters_unsupported() {
        let r = verify_main_theorem_if_direction(TheoremTarget::Eja { algebra: AlgebraDescriptor::herm_o() }, 5, 1, Execution::Sequential);
        assert!(r.passed, "{r:#?}");
        assert_eq!(r.check("strong_symmetry").unwrap().status, Status::Unsupported);
        assert!(r.checks.iter().filter(|c| c.name != "strong_symmetry").all(|c| c.status == Status::Pass));
    }

    #[test]
    fn converse_on_small_catalog() {
        let cat: Vec<(String, Polytope)> =
            ["simplex2", "square", "pentagon"].iter().map(|n| (n.to_string(), fixtures::by_name(n).unwrap())).collect();
        let r = verify_converse_on_polytopes(&cat, &ConverseOptions::default());
        assert!(r.all_agree, "{r:#?}");
        let [tri, sq, pent] = &r.entries[..] else { panic!() };
        assert!(tri.sss && tri.witnesses.is_empty());
        assert_eq!(sq.strongly_symmetric, Some(false));
        assert_eq!(sq.witnesses.len(), 2);
        assert_eq!(pent.strongly_symmetric, Some(true));
        assert_eq!(pent.spectral, serde_json::Value::Bool(false));
    }
}
