use proptest::prelude::*;
use vtoric::polyhedral::{linalg, Cone, Polyhedron, Vector};

fn arb_rows(dim: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 1..=5)
        .prop_map(|rows| rows.iter().map(|r| linalg::from_ints(r)).collect())
}

fn arb_cone() -> impl Strategy<Value = Cone> {
    (2usize..=4).prop_flat_map(|d| arb_rows(d).prop_map(move |rows| Cone::new(d, rows).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h_to_v_to_h(c in arb_cone()) {
        let back = Cone::from_generators(c.ambient_dim(), c.rays().to_vec(), c.lineality().to_vec()).unwrap();
        prop_assert_eq!(back.canonical_key(), c.canonical_key());
        prop_assert_eq!(back.dim(), c.dim());
    }

    #[test]
    fn double_dual(c in arb_cone()) {
        let dd = c.dual().dual();
        prop_assert_eq!(dd.canonical_key(), c.canonical_key());
        prop_assert_eq!(c.dual().dim() + c.lineality().len(), c.ambient_dim());
    }

    #[test]
    fn faces_and_relative_interiors(c in arb_cone()) {
        for f in c.faces() {
            prop_assert!(f.is_face_of(&c));
            let p = f.relint_point();
            prop_assert!(f.contains_relint(&p));
            let g = c.face_generated_by(&p).unwrap();
            prop_assert_eq!(g.canonical_key(), f.canonical_key());
        }
    }

    #[test]
    fn generators_satisfy_inequalities(c in arb_cone()) {
        for r in c.rays() {
            prop_assert!(c.contains(r));
        }
        for l in c.lineality() {
            prop_assert!(c.contains(l) && c.contains(&linalg::neg(l)));
        }
    }

    #[test]
    fn polytope_vertices(pts in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..=6)) {
        let pts: Vec<Vector> = pts.iter().map(|p| linalg::from_ints(p)).collect();
        let p = Polyhedron::from_points(2, &pts, &[]).unwrap();
        prop_assert!(p.is_bounded());
        for x in &pts {
            prop_assert!(p.contains(x));
        }
        for v in p.vertices() {
            prop_assert!(pts.contains(&v));
            prop_assert!(p.is_vertex(&v));
        }
        let q = Polyhedron::new(2, p.forms().to_vec()).unwrap();
        let mut a = p.vertices();
        let mut b = q.vertices();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn cube_face_lattice() {
    let rows: Vec<Vector> = (0..3).map(|i| linalg::unit(3, i)).collect();
    let c = Cone::new(3, rows).unwrap();
    assert_eq!(c.faces().len(), 8);
    assert!(c.is_pointed() && c.is_full_dimensional());
    assert_eq!(c.facet_cones().len(), 3);
}
