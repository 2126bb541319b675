use std::collections::BTreeMap;

use jordan_spectra::classification::{
    builtin_catalog, fr_polytope, fr_polytope_symmetry, recheck, table_consistency_check, verify_converse_on_polytopes,
    verify_main_theorem_if_direction, Bindings, ConverseOptions, FrOptions, Tables, TheoremTarget, Witness,
};
use jordan_spectra::eja::{random_element, random_jordan_frame, random_state, AlgebraDescriptor, EjaElement};
use jordan_spectra::geometry::{exposed_faces, ConvexBody, Polytope, Scalar, DEFAULT_FACE_CAP};
use jordan_spectra::lp::OrderedField;
use jordan_spectra::operational::{
    decompose_in_frames, distinguishing_measurement_eja, enumerate_frames, frame_catalog, is_spectral, rank, SpectralOptions,
};
use jordan_spectra::par::{trial_seed, Execution};
use jordan_spectra::symmetry::{automorphism_group, is_regular, is_strongly_symmetric, verify_strong_symmetry_eja};
use jordan_spectra::{Error, Result};
use serde_json::{json, Value};

use crate::input::{exact_point, float_point};

/// Result of a command: the JSON body and whether a property was refuted.
pub struct Outcome {
    pub body: Value,
    pub refuted: bool,
}

impl Outcome {
    fn ok(body: Value) -> Outcome {
        Outcome { body, refuted: false }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Run {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub cap: usize,
    pub exec: Execution,
}

fn strings(xs: &[Scalar]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialise")
}

fn polytope_of(body: &ConvexBody, what: &str) -> Result<Polytope> {
    match body {
        ConvexBody::Polytope(p) => Ok(p.clone()),
        other => Err(Error::Unsupported(format!("{what} is implemented for polytopes, got {}", other.name()))),
    }
}

pub fn decompose(body: &ConvexBody, point: Option<&str>, run: &Run) -> Result<Outcome> {
    match body {
        ConvexBody::Eja(a) => {
            let x = match point {
                Some(s) => EjaElement::new(*a, float_point(s)?)?,
                None => random_state(*a, run.seed),
            };
            let d = x.spectral_decompose(run.tol)?;
            let residuals = d.residuals(&x);
            Ok(Outcome::ok(json!({
                "algebra": a,
                "element": x.coeffs(),
                "eigenvalues": d.eigenvalues,
                "frame": d.frame.iter().map(EjaElement::coeffs).collect::<Vec<_>>(),
                "coarse": d.coarse.iter().map(|t| json!({"eigenvalue": t.eigenvalue, "multiplicity": t.multiplicity})).collect::<Vec<_>>(),
                "residuals": residuals,
            })))
        }
        ConvexBody::Polytope(p) => {
            let x = match point {
                Some(s) => exact_point(s)?,
                None => return Err(Error::Parse("polytope decomposition needs --point".into())),
            };
            if p.membership(&x)? == jordan_spectra::geometry::Membership::Outside {
                return Err(Error::NotAState("point lies outside the polytope".into()));
            }
            let catalog = frame_catalog(p, run.cap, run.exec)?;
            Ok(match decompose_in_frames(p, &catalog, &x)? {
                Some(d) => Outcome::ok(json!({"point": strings(&x), "frame": d.frame, "weights": strings(&d.weights)})),
                None => Outcome {
                    body: json!({"point": strings(&x), "frame": null, "witness": Witness::uncovered(&x)}),
                    refuted: true,
                },
            })
        }
        ConvexBody::Ball(n) => {
            let x = match point {
                Some(s) => float_point(s)?,
                None => return Err(Error::Parse("ball decomposition needs --point".into())),
            };
            if x.len() != *n {
                return Err(Error::Dimension(format!("point has {} coordinates, ball has {n}", x.len())));
            }
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > 1.0 + run.tol {
                return Err(Error::NotAState(format!("norm {r} exceeds 1")));
            }
            let dir: Vec<f64> = if r > run.tol { x.iter().map(|v| v / r).collect() } else { (0..*n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect() };
            let neg: Vec<f64> = dir.iter().map(|v| -v).collect();
            Ok(Outcome::ok(json!({"point": x, "frame": [dir, neg], "weights": [(1.0 + r) / 2.0, (1.0 - r) / 2.0]})))
        }
    }
}

pub fn check_spectral(body: &ConvexBody, run: &Run) -> Result<Outcome> {
    let opts = SpectralOptions { cap: run.cap, seed: run.seed, exec: run.exec, ..SpectralOptions::default() };
    let v = is_spectral(body, &opts)?;
    let mut out = to_value(&v);
    let refuted = v.spectral == Value::Bool(false);
    if let Some(ce) = &v.counterexample {
        out["witness"] = to_value(&Witness::UncoveredPoint { point: ce.clone() });
    }
    Ok(Outcome { body: out, refuted })
}

pub fn check_rank(body: &ConvexBody, run: &Run) -> Result<Outcome> {
    let opts = SpectralOptions { cap: run.cap, seed: run.seed, exec: run.exec, ..SpectralOptions::default() };
    Ok(Outcome::ok(json!({"rank": rank(body, &opts)?})))
}

pub fn check_strong_symmetry(body: &ConvexBody, run: &Run) -> Result<Outcome> {
    let alg = match body {
        ConvexBody::Polytope(p) => {
            let catalog = frame_catalog(p, run.cap, run.exec)?;
            let g = automorphism_group(p, run.cap)?;
            let rep = is_strongly_symmetric(&g, &catalog);
            let mut out = to_value(&rep);
            if let Some((a, b)) = rep.witness() {
                out["witness"] = to_value(&Witness::InequivalentFrames { a, b });
            }
            return Ok(Outcome { body: out, refuted: !rep.strongly_symmetric });
        }
        ConvexBody::Ball(n) => AlgebraDescriptor::spin(*n),
        ConvexBody::Eja(a) => *a,
    };
    let rep = verify_strong_symmetry_eja(alg, run.trials, run.seed, run.exec);
    if rep.unsupported {
        return Err(Error::Unsupported(format!("no constructive frame transporter for {alg}")));
    }
    let mut out = to_value(&rep);
    out["strongly_symmetric"] = Value::Bool(rep.all_passed());
    Ok(Outcome { refuted: !rep.all_passed(), body: out })
}

pub fn check_regular(body: &ConvexBody, run: &Run) -> Result<Outcome> {
    let p = polytope_of(body, "regularity")?;
    let lattice = exposed_faces(&p, run.cap.max(DEFAULT_FACE_CAP), run.exec)?;
    let g = automorphism_group(&p, run.cap)?;
    let rep = is_regular(&g, &lattice);
    Ok(Outcome { refuted: !rep.regular, body: to_value(&rep) })
}

pub fn frames(body: &ConvexBody, k: usize, run: &Run) -> Result<Outcome> {
    match body {
        ConvexBody::Polytope(p) => {
            let fs = enumerate_frames(p, k, run.cap, run.exec)?;
            Ok(Outcome::ok(json!({"k": k, "count": fs.len(), "frames": fs})))
        }
        ConvexBody::Eja(a) => {
            if k == 0 || k > a.rank() {
                return Err(Error::InvalidFrame(format!("k = {k} outside 1..={}", a.rank())));
            }
            let frame: Vec<EjaElement> = random_jordan_frame(*a, run.seed)?.into_iter().take(k).collect();
            let effects = distinguishing_measurement_eja(&frame, run.tol.max(1e-9))?
                .ok_or_else(|| Error::InvalidFrame("sampled frame is not distinguishable".into()))?;
            Ok(Outcome::ok(json!({
                "k": k,
                "algebra": a,
                "frame": frame.iter().map(EjaElement::coeffs).collect::<Vec<_>>(),
                "effects": effects.iter().map(EjaElement::coeffs).collect::<Vec<_>>(),
            })))
        }
        ConvexBody::Ball(_) => Err(Error::Unsupported("frames of a ball: use --eja spin".into())),
    }
}

pub fn fr(body: &ConvexBody, samples: usize, random_frame: bool, run: &Run) -> Result<Outcome> {
    let opts = FrOptions { frame_seed: random_frame.then_some(run.seed), samples, seed: run.seed, cap: run.cap, exec: run.exec };
    let section = match fr_polytope(body, &opts) {
        Ok(s) => s,
        Err(Error::NotSss(msg)) => return Ok(Outcome { body: json!({"sss": false, "diagnostic": msg}), refuted: true }),
        Err(e) => return Err(e),
    };
    let (_, sym) = fr_polytope_symmetry(&section, run.cap)?;
    Ok(Outcome::ok(json!({"sss": true, "vertices": section.n_vertices(), "section": section, "symmetry": sym})))
}

pub fn tables(label: Option<&str>, params: &[String], consistency: bool) -> Result<Outcome> {
    let t = Tables::load()?;
    if consistency {
        let r = table_consistency_check(&t)?;
        return Ok(Outcome { refuted: !r.passed, body: to_value(&r) });
    }
    let Some(label) = label else {
        return Ok(Outcome::ok(json!({"algebras": t.algebras, "rows": t.rows})));
    };
    let row = t.row(label)?;
    let mut bindings = Bindings::new();
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("--param expects NAME=VALUE, got {p:?}")))?;
        let v: i64 = v.trim().parse().map_err(|_| Error::Parse(format!("--param {k}: not an integer")))?;
        bindings.insert(k.trim().to_string(), v);
    }
    let mut out = json!({"row": row});
    if row.params.is_empty() || !bindings.is_empty() {
        out["evaluated"] = to_value(&t.evaluate_row(label, &bindings)?);
    }
    Ok(Outcome::ok(out))
}

pub fn verify_theorem(body: Option<&ConvexBody>, simplex: Option<usize>, converse: bool, run: &Run) -> Result<Outcome> {
    if converse {
        let opts = ConverseOptions { cap: run.cap, seed: run.seed, exec: run.exec, ..ConverseOptions::default() };
        let r = verify_converse_on_polytopes(&builtin_catalog(), &opts);
        return Ok(Outcome { refuted: !r.all_agree, body: to_value(&r) });
    }
    let target = match (simplex, body) {
        (Some(n), _) => TheoremTarget::Simplex { n },
        (None, Some(ConvexBody::Eja(a))) => TheoremTarget::Eja { algebra: *a },
        (None, Some(ConvexBody::Ball(n))) => TheoremTarget::Eja { algebra: AlgebraDescriptor::spin(*n) },
        (None, Some(ConvexBody::Polytope(_))) => {
            return Err(Error::Unsupported("polytope targets: use --simplex N, or --converse for the catalog".into()))
        }
        (None, None) => return Err(Error::Parse("verify-theorem needs --eja, --simplex or --converse".into())),
    };
    let r = verify_main_theorem_if_direction(target, run.trials, run.seed, run.exec);
    Ok(Outcome { refuted: !r.passed, body: to_value(&r) })
}

/// Traceless unit directions `A ⟂ B` from random elements.
fn plane(a: AlgebraDescriptor, seed: u64) -> Result<(EjaElement, EjaElement)> {
    let e = EjaElement::unit(a);
    let r = a.rank() as f64;
    let traceless = |x: EjaElement| x.axpy(-x.trace() / r, &e);
    let u = traceless(random_element(a, seed))?;
    let u = u.scale(1.0 / u.norm());
    let v = traceless(random_element(a, seed.wrapping_add(1)))?;
    let v = v.axpy(-v.inner(&u)?, &u)?;
    Ok((u.clone(), v.scale(1.0 / v.norm())))
}

pub fn plot_data(body: &ConvexBody, points: usize, run: &Run) -> Result<Outcome> {
    let angles: Vec<f64> = (0..points).map(|k| std::f64::consts::TAU * k as f64 / points as f64).collect();
    match body {
        ConvexBody::Polytope(p) => {
            let lattice = exposed_faces(p, run.cap.max(DEFAULT_FACE_CAP), run.exec)?;
            let d = p.dim().min(3);
            let coords: Vec<Vec<f64>> = p.local_vertices().iter().map(|v| v[..d].iter().map(OrderedField::approx).collect()).collect();
            let edges: Vec<Vec<usize>> = lattice.faces_of_size(2).map(|f| f.indices()).collect();
            Ok(Outcome::ok(json!({"kind": "polytope", "dim": d, "points": coords, "segments": edges})))
        }
        ConvexBody::Ball(n) => {
            let boundary: Vec<[f64; 2]> = angles.iter().map(|t| [t.cos(), t.sin()]).collect();
            Ok(Outcome::ok(json!({"kind": "ball", "dim": 2, "section": format!("coordinates 1, 2 of the {n}-ball"), "boundary": boundary})))
        }
        ConvexBody::Eja(a) => {
            let (u, v) = plane(*a, run.seed)?;
            let r = a.rank() as f64;
            let center = EjaElement::unit(*a).scale(1.0 / r);
            let mut boundary = Vec::with_capacity(points);
            for t in &angles {
                let dir = u.scale(t.cos()).add(&v.scale(t.sin()))?;
                let reach = (1.0 / r) / (-dir.min_eigenvalue()?);
                boundary.push([reach * t.cos(), reach * t.sin()]);
            }
            let spectrum = random_state(*a, run.seed).spectral_decompose(run.tol)?.eigenvalues;
            let mut orbit = Vec::with_capacity(points);
            for i in 0..points {
                let frame = random_jordan_frame(*a, trial_seed(run.seed, i))?;
                let y = frame.iter().zip(&spectrum).try_fold(EjaElement::zero(*a), |acc, (c, l)| acc.axpy(*l, c))?;
                let y = y.sub(&center)?;
                orbit.push([y.inner(&u)?, y.inner(&v)?]);
            }
            Ok(Outcome::ok(json!({
                "kind": "eja",
                "algebra": a,
                "dim": 2,
                "section": "state space through e/rank along two random traceless directions",
                "boundary": boundary,
                "orbit_spectrum": spectrum,
                "orbit": orbit,
            })))
        }
    }
}

fn collect_witnesses(v: &Value, out: &mut Vec<Witness>) {
    match v {
        Value::Object(map) => {
            if let Ok(w) = serde_json::from_value::<Witness>(v.clone()) {
                out.push(w);
                return;
            }
            map.values().for_each(|x| collect_witnesses(x, out));
        }
        Value::Array(xs) => xs.iter().for_each(|x| collect_witnesses(x, out)),
        _ => {}
    }
}

pub fn recheck_file(body: &ConvexBody, witness_json: &str, run: &Run) -> Result<Outcome> {
    let p = polytope_of(body, "witness recheck")?;
    let v: Value = serde_json::from_str(witness_json).map_err(|e| Error::Parse(e.to_string()))?;
    let mut ws = Vec::new();
    collect_witnesses(&v, &mut ws);
    if ws.is_empty() {
        return Err(Error::Parse("no witness found in the given JSON".into()));
    }
    let mut results = Vec::new();
    for w in &ws {
        let r = recheck(&p, w, run.cap)?;
        results.push(json!({"witness": w, "valid": r.valid, "detail": r.detail}));
    }
    let all_valid = results.iter().all(|r| r["valid"] == Value::Bool(true));
    Ok(Outcome { refuted: !all_valid, body: json!({"all_valid": all_valid, "results": results}) })
}

pub fn fixture(name: Option<&str>) -> Result<Outcome> {
    use jordan_spectra::geometry::{fixtures, BodyJson};
    match name {
        None => Ok(Outcome::ok(json!({"fixtures": fixtures::CATALOG}))),
        Some(n) => {
            let p = fixtures::by_name(n).ok_or_else(|| Error::Parse(format!("unknown fixture {n:?}")))?;
            Ok(Outcome::ok(to_value(&BodyJson::from(&ConvexBody::Polytope(p)))))
        }
    }
}

/// Adds the envelope fields shared by every command.
pub fn envelope(command: &str, mut body: Value) -> Value {
    let mut out = BTreeMap::new();
    out.insert("schema_version".to_string(), json!(1));
    out.insert("command".to_string(), json!(command));
    if let Value::Object(map) = &mut body {
        for (k, v) in std::mem::take(map) {
            out.insert(k, v);
        }
    } else {
        out.insert("result".to_string(), body);
    }
    to_value(&out)
}
