//! Properties of the Chow weight on random heights over the catalog polytopes.

use std::sync::Arc;

use proptest::prelude::*;

use toric_chow::catalog::{self, CatalogEntry};
use toric_chow::chow::{chow_weight, chow_weight_oracle, graph_solid, surrogate_weight};
use toric_chow::envelope::{concave_envelope, envelope_at_lattice, integrate_envelope, project_consistent, HeightVector};
use toric_chow::geometry::AffineFn2;
use toric_chow::io::{heights_to_json, parse_heights};
use toric_chow::polytope::{lattice_points, LatticePoint, LatticeSet, Polytope2D};
use toric_chow::symmetry::act;
use toric_chow::Rat;

/// Enough values for the largest lattice used here (`2·△₄`, 85 points).
const MAX_POINTS: usize = 85;

fn setup(id: &str, k: i64) -> (CatalogEntry, Arc<LatticeSet>) {
    let e = catalog::entry(id).unwrap();
    let l = Arc::new(lattice_points(&e.polytope, k).unwrap());
    assert!(l.len() <= MAX_POINTS);
    (e, l)
}

fn heights(l: &Arc<LatticeSet>, raw: &[(i64, i64)]) -> HeightVector {
    HeightVector::new(l.clone(), raw[..l.len()].iter().map(|&(n, d)| Rat::new(n, d)).collect()).unwrap()
}

fn raw_heights() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), MAX_POINTS)
}

fn balanced_id() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["X2", "X3", "X4"])
}

fn rat() -> impl Strategy<Value = Rat> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Rat::new(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn weight_ignores_affine_shifts(id in balanced_id(), k in 1i64..=2, raw in raw_heights(), a in (rat(), rat(), rat())) {
        let (_, l) = setup(id, k);
        let phi = heights(&l, &raw);
        let shifted = phi.add_affine(&AffineFn2::new(a.0, a.1, a.2));
        prop_assert_eq!(chow_weight(&shifted).unwrap().j, chow_weight(&phi).unwrap().j);
    }

    #[test]
    fn weight_is_group_invariant(id in balanced_id(), k in 1i64..=2, raw in raw_heights()) {
        let (e, l) = setup(id, k);
        let phi = heights(&l, &raw);
        let j = chow_weight(&phi).unwrap().j;
        for w in e.weyl.elements() {
            prop_assert_eq!(&chow_weight(&act(w, &phi).unwrap()).unwrap().j, &j);
        }
    }

    #[test]
    fn weight_is_homogeneous(id in balanced_id(), k in 1i64..=2, raw in raw_heights(), c in (0i64..=6, 1i64..=3)) {
        let (_, l) = setup(id, k);
        let phi = heights(&l, &raw);
        let c = Rat::new(c.0, c.1);
        prop_assert_eq!(chow_weight(&phi.scale(&c)).unwrap().j, &c * &chow_weight(&phi).unwrap().j);
    }

    #[test]
    fn surrogate_bounds_weight(id in prop::sample::select(vec!["X1", "X2", "X3", "X4"]), k in 1i64..=2, raw in raw_heights()) {
        let (_, l) = setup(id, k);
        let phi = heights(&l, &raw);
        let j = chow_weight(&phi).unwrap().j;
        prop_assert!(surrogate_weight(&phi).unwrap() >= j);
        let psi = project_consistent(&phi).unwrap();
        prop_assert_eq!(surrogate_weight(&psi).unwrap(), j.clone());
        prop_assert_eq!(chow_weight(&psi).unwrap().j, j);
    }

    #[test]
    fn envelope_dominates_and_is_idempotent(id in prop::sample::select(vec!["X1", "X2", "X3", "X4"]), k in 1i64..=2, raw in raw_heights()) {
        let (_, l) = setup(id, k);
        let phi = heights(&l, &raw);
        let sub = concave_envelope(&phi).unwrap();
        let psi = envelope_at_lattice(&sub);
        prop_assert!(psi.values().iter().zip(phi.values()).all(|(a, b)| a >= b));
        let again = concave_envelope(&psi).unwrap();
        prop_assert_eq!(envelope_at_lattice(&again), psi);
        prop_assert_eq!(integrate_envelope(&again), integrate_envelope(&sub));
    }

    #[test]
    fn graph_solid_matches_envelope(
        id in prop::sample::select(vec!["X1", "X2", "X3", "X4"]),
        k in 1i64..=2,
        pieces in prop::collection::vec((-4i64..=4, -4i64..=4, -4i64..=4), 1..=5),
    ) {
        let (_, l) = setup(id, k);
        let g = |p: LatticePoint| pieces.iter().map(|(a, b, c)| a * p.x + b * p.y + c).min().unwrap();
        let lo = l.points().iter().map(|&p| g(p)).min().unwrap();
        let phi = HeightVector::from_fn(l.clone(), |p| Rat::from_int(g(p) - lo));
        let solid = graph_solid(&phi).unwrap();
        prop_assert_eq!(&solid.volume, &integrate_envelope(&concave_envelope(&phi).unwrap()));
        prop_assert_eq!(Rat::from(solid.lattice_count) - l.chi(), phi.sum());
        prop_assert_eq!(chow_weight_oracle(&phi).unwrap().j, chow_weight(&phi).unwrap().j);
    }

    #[test]
    fn heights_json_round_trip(id in prop::sample::select(vec!["X1", "X2", "X3", "X4"]), k in 1i64..=2, raw in raw_heights()) {
        let (_, l) = setup(id, k);
        let phi = heights(&l, &raw);
        let json = heights_to_json(&phi);
        prop_assert_eq!(parse_heights(&json, l).unwrap(), phi);
    }

    #[test]
    fn pick_on_random_triangles(
        a in (-6i64..=6, -6i64..=6), b in (-6i64..=6, -6i64..=6), c in (-6i64..=6, -6i64..=6), k in 1i64..=4,
    ) {
        let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
        prop_assume!(cross != 0);
        let p = Polytope2D::from_pairs(&[a, b, c], "T").unwrap();
        let l = lattice_points(&p, k).unwrap();
        let kr = Rat::from_int(k);
        let pick = p.area() * &kr * &kr + Rat::new(p.boundary_count(), 2) * &kr + Rat::one();
        prop_assert_eq!(Rat::from_int(l.len() as i64), pick);
        // Brute-force count over the bounding box.
        let xs = [a.0, b.0, c.0].map(|v| v * k);
        let ys = [a.1, b.1, c.1].map(|v| v * k);
        let mut count = 0;
        for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
            for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
                if l.dilated().locate(LatticePoint::new(x, y)).is_some() {
                    count += 1;
                }
            }
        }
        prop_assert_eq!(count, l.len());
    }
}
