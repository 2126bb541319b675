//! Barycenters and canonical embeddings commute with symmetries and affine
//! changes of coordinates.

use jordan_spectra::geometry::{barycenter, canonical_embed, exposed_faces, fixtures, BodyPoint, ConvexBody, Polytope, Scalar, DEFAULT_FACE_CAP};
use jordan_spectra::lp::OrderedField;
use jordan_spectra::operational::DEFAULT_VERTEX_CAP;
use jordan_spectra::par::Execution;
use jordan_spectra::symmetry::automorphism_group;
use proptest::prelude::*;

fn exact_barycenter(p: &Polytope) -> Vec<Scalar> {
    match barycenter(&ConvexBody::Polytope(p.clone())).unwrap() {
        BodyPoint::Exact(b) => b,
        other => panic!("polytope barycenter is exact, got {other:?}"),
    }
}

fn catalog() -> Vec<Polytope> {
    ["square", "rectangle", "pentagon", "hexagon", "cube", "octahedron", "simplex3"].iter().map(|n| fixtures::by_name(n).unwrap()).collect()
}

#[test]
fn barycenter_is_fixed_by_every_automorphism() {
    for p in catalog() {
        let b = p.to_local(&exact_barycenter(&p)).expect("barycenter lies in the affine hull");
        let g = automorphism_group(&p, DEFAULT_VERTEX_CAP).unwrap();
        for h in g.elements() {
            assert_eq!(h.map.apply(&b), b);
        }
    }
}

/// Centroid of a polygon by the shoelace formula, in floating point.
fn shoelace(vertices: &[[f64; 2]]) -> [f64; 2] {
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..vertices.len() {
        let [x0, y0] = vertices[i];
        let [x1, y1] = vertices[(i + 1) % vertices.len()];
        let cross = x0 * y1 - x1 * y0;
        a += cross;
        cx += (x0 + x1) * cross;
        cy += (y0 + y1) * cross;
    }
    [cx / (3.0 * a), cy / (3.0 * a)]
}

#[test]
fn polygon_barycenters_match_the_shoelace_centroid() {
    // a lopsided quadrilateral, whose area centroid differs from its vertex mean
    let quad = Polytope::from_strings(&[
        vec!["0".into(), "0".into()],
        vec!["4".into(), "0".into()],
        vec!["2".into(), "2".into()],
        vec!["0".into(), "3".into()],
    ])
    .unwrap();
    for p in [quad, fixtures::pentagon(), fixtures::hexagon()] {
        let b = exact_barycenter(&p);
        let pts: Vec<[f64; 2]> = p.vertices().iter().map(|v| [v[0].approx(), v[1].approx()]).collect();
        let want = shoelace(&pts);
        assert!((b[0].approx() - want[0]).abs() < 1e-12 && (b[1].approx() - want[1]).abs() < 1e-12, "{b:?} vs {want:?}");
    }
}

#[test]
fn canonical_gram_makes_the_group_orthogonal() {
    for p in catalog() {
        let g = automorphism_group(&p, DEFAULT_VERTEX_CAP).unwrap();
        let b = p.to_local(&exact_barycenter(&p)).unwrap();
        let emb = canonical_embed(&p, &b, &g.maps());
        assert!(g.elements().iter().all(|h| emb.is_orthogonal(&h.map)));
        // vertex-transitive catalog: every centred vertex has the same norm
        let gram = emb.vertex_gram();
        assert!(gram.iter().enumerate().all(|(i, r)| r[i] == gram[0][0]));
    }
}

#[test]
fn canonical_simplex_is_regular() {
    for n in 1..=4 {
        let p = fixtures::simplex(n);
        let g = automorphism_group(&p, DEFAULT_VERTEX_CAP).unwrap();
        let b = p.to_local(&exact_barycenter(&p)).unwrap();
        let gram = canonical_embed(&p, &b, &g.maps()).vertex_gram();
        let (diag, off) = (gram[0][0].clone(), gram[0][1].clone());
        for (i, row) in gram.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, if i == j { diag.clone() } else { off.clone() });
            }
        }
        // centred vertices sum to zero, so ⟨v, v⟩ = −n ⟨v, w⟩
        assert_eq!(diag, -(off * Scalar::from_int(n as i64)));
    }
}

fn small() -> impl Strategy<Value = i64> {
    -4i64..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// barycenter(A·P + t) = A·barycenter(P) + t for invertible rational A.
    #[test]
    fn barycenter_commutes_with_affine_maps(
        a in prop::array::uniform4(small()),
        t in prop::array::uniform2(small()),
        which in 0usize..4,
    ) {
        prop_assume!(a[0] * a[3] - a[1] * a[2] != 0);
        let p = [fixtures::square(), fixtures::pentagon(), fixtures::hexagon(), fixtures::simplex(2)][which].clone();
        let q = |x: i64| Scalar::from_int(x);
        let apply = |v: &[Scalar]| -> Vec<Scalar> {
            if v.len() == 2 {
                vec![q(a[0]) * v[0].clone() + q(a[1]) * v[1].clone() + q(t[0]), q(a[2]) * v[0].clone() + q(a[3]) * v[1].clone() + q(t[1])]
            } else {
                // the 2-simplex lives in ℝ³; shear its first two coordinates
                vec![q(a[0]) * v[0].clone() + q(a[1]) * v[1].clone() + q(t[0]), q(a[2]) * v[0].clone() + q(a[3]) * v[1].clone() + q(t[1]), v[2].clone()]
            }
        };
        let image = p.map_vertices(apply).unwrap();
        prop_assert_eq!(exact_barycenter(&image), apply(&exact_barycenter(&p)));
    }
}

#[test]
fn face_lattice_is_invariant() {
    for p in catalog() {
        let l = exposed_faces(&p, DEFAULT_FACE_CAP, Execution::Sequential).unwrap();
        let faces: std::collections::BTreeSet<_> = l.faces().iter().copied().collect();
        let g = automorphism_group(&p, DEFAULT_VERTEX_CAP).unwrap();
        for h in g.elements() {
            assert!(l.faces().iter().all(|f| faces.contains(&f.permute(&h.perm))));
        }
        assert_eq!(l, exposed_faces(&p, DEFAULT_FACE_CAP, Execution::Parallel).unwrap());
    }
}
