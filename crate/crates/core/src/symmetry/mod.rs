//! Affine automorphism groups of polytopes, transitivity on frames and
//! flags, and constructive frame transporters for Jordan algebras.

mod transporter;

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Zero};
use serde::Serialize;

pub use transporter::{
    check_transporter, extend_frame, jordan_frame_transporter, verify_strong_symmetry_eja, EjaSymmetryReport, EjaTransporter, TransporterCheck,
    TrialOutcome, TRANSPORTER_TOL,
};

use crate::error::{Error, Result};
use crate::geometry::{AffineMap, FaceLattice, Flag, Polytope, Scalar, VertexSet};
use crate::operational::{FrameCatalog, SubFrameLattice};

/// A vertex permutation together with the affine map (in the polytope's
/// affine frame) inducing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub perm: Vec<usize>,
    pub map: AffineMap,
}

/// The affine automorphism group of a polytope, identity first.
#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismGroup {
    elements: Vec<Automorphism>,
}

fn injective_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    go(n, k, &mut cur, &mut out);
    out
}

/// Every vertex permutation induced by an affine self-map.
///
/// The affine frame of the polytope (one origin vertex plus `dim` basis
/// vertices, with local coordinates `0, e₁, …, e_d`) is sent to every
/// injective tuple of vertices; the unique affine map doing so is accepted
/// iff it permutes the vertex set exactly. Closure under composition and
/// inverses is verified before returning.
pub fn automorphism_group(p: &Polytope, cap: usize) -> Result<AutomorphismGroup> {
    let n = p.n_vertices();
    if n > cap {
        return Err(Error::CapExceeded { count: n, cap });
    }
    let d = p.dim();
    let index: HashMap<&[Scalar], usize> = p.local_vertices().iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let frame: Vec<usize> = {
        // vertices whose local coordinates are 0, e₁, …, e_d
        let mut f = vec![0; d + 1];
        for (i, v) in p.local_vertices().iter().enumerate() {
            let ones: Vec<usize> = (0..d).filter(|&k| !v[k].is_zero()).collect();
            if ones.is_empty() {
                f[0] = i;
            } else if ones.len() == 1 && v[ones[0]] == Scalar::one() {
                f[ones[0] + 1] = i;
            }
        }
        f
    };
    let mut elements = Vec::new();
    for images in injective_tuples(n, d + 1) {
        let t = p.local(images[0]).to_vec();
        let cols: Vec<Vec<Scalar>> = (1..=d).map(|k| linalg_sub(p.local(images[k]), &t)).collect();
        let linear: Vec<Vec<Scalar>> = (0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect();
        let map = AffineMap { linear, translation: t };
        let perm: Option<Vec<usize>> = p.local_vertices().iter().map(|v| index.get(map.apply(v).as_slice()).copied()).collect();
        let Some(perm) = perm else { continue };
        if perm.iter().collect::<HashSet<_>>().len() != n {
            continue;
        }
        debug_assert!(frame.iter().zip(&images).all(|(&f, &i)| perm[f] == i));
        elements.push(Automorphism { perm, map });
    }
    elements.sort_by(|a, b| a.perm.cmp(&b.perm));
    let g = AutomorphismGroup { elements };
    if !g.is_closed() {
        return Err(Error::InvalidPolytope("automorphism set is not closed under composition".into()));
    }
    Ok(g)
}

fn linalg_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    crate::geometry::linalg::sub(a, b)
}

fn compose_perm(g: &[usize], h: &[usize]) -> Vec<usize> {
    h.iter().map(|&i| g[i]).collect()
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn maps(&self) -> Vec<AffineMap> {
        self.elements.iter().map(|g| g.map.clone()).collect()
    }

    /// Exact closure under composition and inverses. Checked on the
    /// permutations only: the vertices affinely span the polytope, so each
    /// permutation determines its affine map and composition commutes with
    /// that correspondence.
    pub fn is_closed(&self) -> bool {
        let perms: HashSet<&[usize]> = self.elements.iter().map(|g| g.perm.as_slice()).collect();
        let closed = self.elements.iter().all(|g| self.elements.iter().all(|h| perms.contains(compose_perm(&g.perm, &h.perm).as_slice())));
        let inverses = self.elements.iter().all(|g| {
            let mut inv = vec![0; g.perm.len()];
            for (i, &j) in g.perm.iter().enumerate() {
                inv[j] = i;
            }
            perms.contains(inv.as_slice())
        });
        closed && inverses
    }

    /// Orbit of an ordered vertex tuple, sorted.
    pub fn orbit_of_tuple(&self, t: &[usize]) -> Vec<Vec<usize>> {
        let mut o: Vec<Vec<usize>> = self.elements.iter().map(|g| t.iter().map(|&i| g.perm[i]).collect()).collect();
        o.sort();
        o.dedup();
        o
    }

    pub fn stabilizer_order_of_tuple(&self, t: &[usize]) -> usize {
        self.elements.iter().filter(|g| t.iter().all(|&i| g.perm[i] == i)).count()
    }

    pub fn act_on_flag(g: &Automorphism, f: &Flag) -> Flag {
        f.iter().map(|s| s.permute(&g.perm)).collect()
    }

    /// Partition of `items` into orbits under `act`, in order of first
    /// appearance.
    pub fn orbits<T: Clone + Eq + std::hash::Hash>(&self, items: &[T], act: impl Fn(&Automorphism, &T) -> T) -> Vec<Vec<T>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for x in items {
            if seen.contains(x) {
                continue;
            }
            let mut orbit: Vec<T> = Vec::new();
            for g in &self.elements {
                let y = act(g, x);
                if seen.insert(y.clone()) {
                    orbit.push(y);
                }
            }
            out.push(orbit);
        }
        out
    }
}

/// Orbits of the group on ordered `k`-frames.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameOrbits {
    pub k: usize,
    pub frames: usize,
    /// One representative and the size of each orbit.
    pub orbits: Vec<(Vec<usize>, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongSymmetryReport {
    pub strongly_symmetric: bool,
    pub group_order: usize,
    pub by_k: Vec<FrameOrbits>,
}

impl StrongSymmetryReport {
    /// Two ordered frames of equal size in different orbits, if any.
    pub fn witness(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        self.by_k.iter().find(|o| o.orbits.len() > 1).map(|o| (o.orbits[0].0.clone(), o.orbits[1].0.clone()))
    }
}

fn ordered_tuples(catalog: &FrameCatalog, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = catalog
        .sets(k)
        .iter()
        .flat_map(|s| injective_tuples(k, k).into_iter().map(move |perm| perm.iter().map(|&i| s.indices()[i]).collect()))
        .collect();
    out.sort();
    out
}

/// Transitivity of the group on ordered `k`-frames for every `k`.
pub fn is_strongly_symmetric(group: &AutomorphismGroup, catalog: &FrameCatalog) -> StrongSymmetryReport {
    let by_k: Vec<FrameOrbits> = (1..=catalog.rank())
        .map(|k| {
            let tuples = ordered_tuples(catalog, k);
            let orbits = group.orbits(&tuples, |g, t| t.iter().map(|&i| g.perm[i]).collect::<Vec<_>>());
            FrameOrbits { k, frames: tuples.len(), orbits: orbits.iter().map(|o| (o[0].clone(), o.len())).collect() }
        })
        .collect();
    StrongSymmetryReport {
        strongly_symmetric: by_k.iter().all(|o| o.orbits.len() == 1),
        group_order: group.order(),
        by_k,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub group_order: usize,
    pub maximal_flags: usize,
    pub orbit_sizes: Vec<usize>,
}

/// Transitivity of the group on maximal flags.
pub fn is_regular(group: &AutomorphismGroup, lattice: &FaceLattice) -> RegularityReport {
    let flags = lattice.maximal_flags();
    let orbits = group.orbits(&flags, AutomorphismGroup::act_on_flag);
    RegularityReport {
        regular: orbits.len() == 1,
        group_order: group.order(),
        maximal_flags: flags.len(),
        orbit_sizes: orbits.iter().map(Vec::len).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BijectionReport {
    pub maximal_frames: usize,
    pub maximal_flags: usize,
    /// Frame ↦ (F₁ ⊂ … ⊂ F_r) with `Fᵢ` the join of the first `i` states is
    /// injective and onto the maximal flags.
    pub bijective: bool,
}

fn check_bijection(frames: &[Vec<usize>], flags: &[Flag], image: impl Fn(&[usize]) -> Flag) -> BijectionReport {
    let flag_set: HashSet<&Flag> = flags.iter().collect();
    let images: Vec<Flag> = frames.iter().map(|f| image(f)).collect();
    let distinct: HashSet<&Flag> = images.iter().collect();
    let into = images.iter().all(|f| flag_set.contains(f));
    BijectionReport {
        maximal_frames: frames.len(),
        maximal_flags: flags.len(),
        bijective: into && distinct.len() == images.len() && distinct.len() == flags.len(),
    }
}

/// Frame–flag correspondence on a polytope. Requires a spectral strongly
/// symmetric polytope (rank = dim + 1), i.e. a simplex.
pub fn frame_flag_bijection(p: &Polytope, catalog: &FrameCatalog, lattice: &FaceLattice) -> Result<BijectionReport> {
    if catalog.rank() != p.dim() + 1 {
        return Err(Error::NotSss(format!("rank {} with affine dimension {}", catalog.rank(), p.dim())));
    }
    let frames = ordered_tuples(catalog, catalog.rank());
    let flags = lattice.maximal_flags();
    Ok(check_bijection(&frames, &flags, |f| {
        (1..=f.len()).map(|i| lattice.join_of(VertexSet::from_indices(f[..i].iter().copied()))).collect()
    }))
}

/// Frame–flag correspondence on the sub-frame lattice of a Jordan frame:
/// orderings of the frame against maximal chains of nonempty elements.
pub fn frame_flag_bijection_eja(lattice: &SubFrameLattice) -> BijectionReport {
    let r = lattice.rank();
    let frames = injective_tuples(r, r);
    let mut flags = Vec::new();
    fn chains(l: &SubFrameLattice, cur: &mut Flag, out: &mut Vec<Flag>) {
        let last = cur.last().copied().unwrap_or(VertexSet::EMPTY);
        if last == l.top() {
            out.push(cur.clone());
            return;
        }
        for i in 0..l.rank() {
            if !last.contains(i) {
                // covering step: join with one more frame element
                let next = l.join(last, VertexSet::singleton(i));
                if next.len() == last.len() + 1 {
                    cur.push(next);
                    chains(l, cur, out);
                    cur.pop();
                }
            }
        }
    }
    chains(lattice, &mut Vec::new(), &mut flags);
    check_bijection(&frames, &flags, |f| {
        let mut acc = VertexSet::EMPTY;
        f.iter().map(|&i| {
            acc = lattice.join(acc, VertexSet::singleton(i));
            acc
        }).collect()
    })
}

/// Group report for the CLI: order, generators-as-matrices and orbit table.
#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub permutations: Vec<Vec<usize>>,
    pub vertex_orbits: Vec<Vec<usize>>,
    pub orbit_stabilizer: BTreeMap<usize, (usize, usize)>,
}

impl AutomorphismGroup {
    pub fn summary(&self, n_vertices: usize) -> GroupSummary {
        let vertex_orbits = self.orbits(&(0..n_vertices).collect::<Vec<_>>(), |g, &v| g.perm[v]);
        let orbit_stabilizer = (0..n_vertices)
            .map(|v| (v, (self.orbit_of_tuple(&[v]).len(), self.stabilizer_order_of_tuple(&[v]))))
            .collect();
        GroupSummary {
            order: self.order(),
            permutations: self.elements.iter().map(|g| g.perm.clone()).collect(),
            vertex_orbits,
            orbit_stabilizer,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{exposed_faces, fixtures, DEFAULT_FACE_CAP};
    use crate::operational::{frame_catalog, DEFAULT_VERTEX_CAP};
    use crate::par::Execution;

    fn group(p: &Polytope) -> AutomorphismGroup {
        automorphism_group(p, DEFAULT_VERTEX_CAP).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(group(&fixtures::simplex(2)).order(), 6);
        assert_eq!(group(&fixtures::square()).order(), 8);
        assert_eq!(group(&fixtures::pentagon()).order(), 10);
        assert_eq!(group(&fixtures::hexagon()).order(), 12);
        assert_eq!(group(&fixtures::rectangle()).order(), 8);
        assert_eq!(group(&fixtures::cube()).order(), 48);
        assert_eq!(group(&fixtures::simplex(3)).order(), 24);
    }

    #[test]
    fn identity_first_and_closed() {
        let g = group(&fixtures::pentagon());
        assert_eq!(g.elements()[0].perm, vec![0, 1, 2, 3, 4]);
        assert!(g.is_closed());
    }

    #[test]
    fn strong_symmetry_examples() {
        for (p, expect) in [(fixtures::simplex(3), true), (fixtures::pentagon(), true), (fixtures::square(), false)] {
            let c = frame_catalog(&p, DEFAULT_VERTEX_CAP, Execution::default()).unwrap();
            let r = is_strongly_symmetric(&group(&p), &c);
            assert_eq!(r.strongly_symmetric, expect);
            assert_eq!(r.witness().is_some(), !expect);
        }
        let p = fixtures::pentagon();
        let c = frame_catalog(&p, DEFAULT_VERTEX_CAP, Execution::default()).unwrap();
        let r = is_strongly_symmetric(&group(&p), &c);
        assert_eq!(r.by_k[0].orbits, vec![(vec![0], 5)]);
        assert_eq!(r.by_k[1].frames, 10);
        assert_eq!(r.by_k[1].orbits.len(), 1);
    }

    #[test]
    fn square_adjacent_and_antipodal_pairs_split() {
        let p = fixtures::square();
        let c = frame_catalog(&p, DEFAULT_VERTEX_CAP, Execution::default()).unwrap();
        let r = is_strongly_symmetric(&group(&p), &c);
        let sizes: Vec<usize> = r.by_k[1].orbits.iter().map(|o| o.1).collect();
        assert_eq!(sizes, vec![8, 4]);
        assert_eq!(r.witness(), Some((vec![0, 1], vec![0, 2])));
    }

    #[test]
    fn regularity() {
        for p in [fixtures::square(), fixtures::simplex(2), fixtures::rectangle(), fixtures::pentagon()] {
            let l = exposed_faces(&p, DEFAULT_FACE_CAP, Execution::default()).unwrap();
            let r = is_regular(&group(&p), &l);
            assert!(r.regular);
            assert_eq!(r.maximal_flags, r.group_order);
        }
    }

    #[test]
    fn frame_flag_counts() {
        for (n, count) in [(2, 6), (3, 24)] {
            let p = fixtures::simplex(n);
            let c = frame_catalog(&p, DEFAULT_VERTEX_CAP, Execution::default()).unwrap();
            let l = exposed_faces(&p, DEFAULT_FACE_CAP, Execution::default()).unwrap();
            let r = frame_flag_bijection(&p, &c, &l).unwrap();
            assert_eq!((r.maximal_frames, r.maximal_flags, r.bijective), (count, count, true));
        }
        let p = fixtures::square();
        let c = frame_catalog(&p, DEFAULT_VERTEX_CAP, Execution::default()).unwrap();
        let l = exposed_faces(&p, DEFAULT_FACE_CAP, Execution::default()).unwrap();
        assert!(matches!(frame_flag_bijection(&p, &c, &l), Err(Error::NotSss(_))));
    }

    #[test]
    fn orbit_stabilizer() {
        for p in [fixtures::cube(), fixtures::pentagon(), fixtures::rectangle()] {
            let g = group(&p);
            for v in 0..p.n_vertices() {
                assert_eq!(g.orbit_of_tuple(&[v]).len() * g.stabilizer_order_of_tuple(&[v]), g.order());
            }
        }
    }
}
