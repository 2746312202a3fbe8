//! Finite groups of lattice symmetries, their orbits on lattice points, and
//! orbit averaging of height vectors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::envelope::HeightVector;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::polytope::{LatticePoint, LatticeSet, Polytope2D};
use crate::rat::Rat;

/// Largest group [`group_closure`] will build.
pub const MAX_GROUP_ORDER: usize = 1000;

/// A 2×2 integer matrix acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntMatrix(pub [[i64; 2]; 2]);

impl IntMatrix {
    pub const IDENTITY: IntMatrix = IntMatrix([[1, 0], [0, 1]]);
    pub const SWAP: IntMatrix = IntMatrix([[0, 1], [1, 0]]);

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        let (a, b) = (&self.0, &o.0);
        IntMatrix([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let d = self.det();
        if d != 1 && d != -1 {
            return None;
        }
        let m = &self.0;
        Some(IntMatrix([[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]]))
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        let m = &self.0;
        LatticePoint::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y)
    }

    pub fn apply_point(&self, p: &Point2) -> Point2 {
        let m = &self.0;
        let e = |r: usize| Rat::from_int(m[r][0]) * &p.x + Rat::from_int(m[r][1]) * &p.y;
        Point2::new(e(0), e(1))
    }

    /// Smallest `n ≥ 1` with `mⁿ = I`, if it exists below `limit`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let mut acc = *self;
        for n in 1..=limit {
            if acc == IntMatrix::IDENTITY {
                return Some(n);
            }
            acc = acc.mul(self);
        }
        None
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// A finite matrix group preserving a polytope. Elements are sorted, with the
/// identity always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylGroup {
    name: String,
    generators: Vec<IntMatrix>,
    elements: Vec<IntMatrix>,
}

impl WeylGroup {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// The trivial group.
    pub fn trivial() -> WeylGroup {
        WeylGroup {
            name: "1".into(),
            generators: Vec::new(),
            elements: vec![IntMatrix::IDENTITY],
        }
    }
}

/// Closes `generators` under multiplication, checking that each generator is
/// a unimodular symmetry of `p`.
pub fn group_closure(generators: &[IntMatrix], p: &Polytope2D, name: &str) -> Result<WeylGroup> {
    for g in generators {
        if g.det().abs() != 1 {
            return Err(Error::NotASymmetry(format!("{g} has determinant {}", g.det())));
        }
        if !p.is_preserved_by(&g.0) {
            return Err(Error::NotASymmetry(format!("{g} does not preserve {}", p.label())));
        }
    }
    let mut elements: BTreeSet<IntMatrix> = BTreeSet::from([IntMatrix::IDENTITY]);
    let mut frontier = vec![IntMatrix::IDENTITY];
    while let Some(e) = frontier.pop() {
        for g in generators {
            let next = g.mul(&e);
            if elements.insert(next) {
                if elements.len() > MAX_GROUP_ORDER {
                    return Err(Error::GroupTooLarge(MAX_GROUP_ORDER));
                }
                frontier.push(next);
            }
        }
    }
    Ok(WeylGroup {
        name: name.to_string(),
        generators: generators.to_vec(),
        elements: elements.into_iter().collect(),
    })
}

/// A partition of lattice indices into group orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    /// Orbit number of each lattice index.
    pub orbit_id: Vec<usize>,
    /// Lexicographically smallest member of each orbit; orbits are numbered
    /// in increasing order of representative.
    pub representatives: Vec<usize>,
    /// Members of each orbit in increasing index order.
    pub members: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Orbits of `w` on the lattice points of `lattice`.
pub fn orbits(w: &WeylGroup, lattice: &LatticeSet) -> Result<OrbitPartition> {
    let n = lattice.len();
    let mut orbit_id = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut members = Vec::new();
    // Points are stored in lexicographic order, so the first unvisited index
    // is its orbit's minimum.
    for i in 0..n {
        if orbit_id[i] != usize::MAX {
            continue;
        }
        let id = representatives.len();
        let mut orbit = BTreeSet::new();
        for g in w.elements() {
            let img = g.apply(lattice.points()[i]);
            let j = lattice.index_of(img).ok_or(Error::OrbitOutside((img.x, img.y)))?;
            orbit.insert(j);
        }
        for &j in &orbit {
            orbit_id[j] = id;
        }
        representatives.push(i);
        members.push(orbit.into_iter().collect());
    }
    Ok(OrbitPartition { orbit_id, representatives, members })
}

/// Orbit averages of `phi`.
pub fn symmetrize(phi: &HeightVector, orbits: &OrbitPartition) -> HeightVector {
    let means: Vec<Rat> = orbits
        .members
        .iter()
        .map(|m| m.iter().map(|&i| phi.get(i)).sum::<Rat>() / Rat::from_int(m.len() as i64))
        .collect();
    let values = (0..phi.values().len()).map(|i| means[orbits.orbit_id[i]].clone()).collect();
    HeightVector::new(phi.lattice().clone(), values).expect("same lattice")
}

/// `(w·φ)(x) = φ(w⁻¹x)`.
pub fn act(w: &IntMatrix, phi: &HeightVector) -> Result<HeightVector> {
    let inv = w
        .inverse()
        .ok_or_else(|| Error::NotASymmetry(format!("{w} is not invertible over the integers")))?;
    let lattice = phi.lattice().clone();
    let lookup: HashMap<LatticePoint, usize> =
        lattice.points().iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let values = lattice
        .points()
        .iter()
        .map(|&p| {
            let q = inv.apply(p);
            lookup.get(&q).map(|&j| phi.get(j).clone()).ok_or(Error::OrbitOutside((q.x, q.y)))
        })
        .collect::<Result<Vec<_>>>()?;
    HeightVector::new(lattice, values)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::catalog;
    use crate::polytope::lattice_points;

    fn lp(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn catalog_group_orders() {
        let orders: Vec<usize> = catalog::entries().iter().map(|e| e.weyl.order()).collect();
        assert_eq!(orders, vec![2, 4, 6, 8]);
    }

    #[test]
    fn closure_is_closed_and_preserves_polytope() {
        for e in catalog::entries() {
            let els = e.weyl.elements();
            assert!(els.contains(&IntMatrix::IDENTITY));
            for a in els {
                assert_eq!(a.det().abs(), 1);
                assert!(e.polytope.is_preserved_by(&a.0));
                for b in els {
                    assert!(els.contains(&a.mul(b)));
                }
            }
        }
    }

    #[test]
    fn rotation_orders_and_sums() {
        let s3 = catalog::SIGMA3;
        let s4 = catalog::SIGMA4;
        assert_eq!(s3.order(10), Some(3));
        assert_eq!(s4.order(10), Some(4));
        for (s, ord) in [(s3, 3), (s4, 4)] {
            let mut acc = IntMatrix::IDENTITY;
            let mut sum = [[0i64; 2]; 2];
            for _ in 0..ord {
                for r in 0..2 {
                    for c in 0..2 {
                        sum[r][c] += acc.0[r][c];
                    }
                }
                acc = acc.mul(&s);
            }
            assert_eq!(sum, [[0, 0], [0, 0]]);
        }
    }

    #[test]
    fn non_symmetry_rejected() {
        let shear = IntMatrix([[1, 1], [0, 1]]);
        assert!(matches!(
            group_closure(&[shear], &catalog::delta3(), "bad"),
            Err(Error::NotASymmetry(_))
        ));
        let square = Polytope2D::from_pairs(&[(0, 0), (1, 0), (1, 1), (0, 1)], "sq").unwrap();
        assert!(matches!(
            group_closure(&[IntMatrix([[2, 0], [0, 1]])], &square, "bad"),
            Err(Error::NotASymmetry(_))
        ));
    }

    #[test]
    fn delta1_orbits() {
        let e = catalog::entry("X1").unwrap();
        let l = lattice_points(&e.polytope, 1).unwrap();
        let o = orbits(&e.weyl, &l).unwrap();
        assert_eq!(o.len(), 6);
        let pts = l.points();
        let mut sets: Vec<Vec<LatticePoint>> =
            o.members.iter().map(|m| m.iter().map(|&i| pts[i]).collect()).collect();
        sets.sort();
        let mut expected = vec![
            vec![lp(1, 2), lp(2, 1)],
            vec![lp(-3, -3)],
            vec![lp(0, 0)],
            vec![lp(1, 1)],
            vec![lp(-1, -1)],
            vec![lp(-2, -2)],
        ];
        expected.sort();
        assert_eq!(sets, expected);
    }

    #[test]
    fn delta2_and_delta4_orbits() {
        let e2 = catalog::entry("X2").unwrap();
        let l2 = lattice_points(&e2.polytope, 1).unwrap();
        let o2 = orbits(&e2.weyl, &l2).unwrap();
        assert_eq!(o2.len(), 4);
        let rep_points: Vec<LatticePoint> = o2.representatives.iter().map(|&i| l2.points()[i]).collect();
        assert_eq!(rep_points, vec![lp(-2, 0), lp(-1, 0), lp(0, -1), lp(0, 0)]);

        let e4 = catalog::entry("X4").unwrap();
        let l4 = lattice_points(&e4.polytope, 1).unwrap();
        let o4 = orbits(&e4.weyl, &l4).unwrap();
        let origin = l4.index_of(lp(0, 0)).unwrap();
        assert_eq!(o4.members[o4.orbit_id[origin]], vec![origin]);
    }

    #[test]
    fn orbit_sums_are_fixed() {
        for e in catalog::entries() {
            let l = lattice_points(&e.polytope, 2).unwrap();
            let o = orbits(&e.weyl, &l).unwrap();
            for m in &o.members {
                let s = m.iter().fold(lp(0, 0), |acc, &i| lp(acc.x + l.points()[i].x, acc.y + l.points()[i].y));
                for g in e.weyl.elements() {
                    assert_eq!(g.apply(s), s);
                }
            }
        }
    }

    #[test]
    fn symmetrize_two_point_orbit() {
        let e = catalog::entry("X1").unwrap();
        let l = Arc::new(lattice_points(&e.polytope, 1).unwrap());
        let o = orbits(&e.weyl, &l).unwrap();
        let phi = HeightVector::from_fn(l.clone(), |p| if p == lp(1, 2) { Rat::one() } else { Rat::zero() });
        let s = symmetrize(&phi, &o);
        for (i, p) in l.points().iter().enumerate() {
            let expected = if *p == lp(1, 2) || *p == lp(2, 1) { Rat::new(1, 2) } else { Rat::zero() };
            assert_eq!(s.get(i), &expected);
        }
    }

    #[test]
    fn action_is_a_left_action() {
        let e = catalog::entry("X3").unwrap();
        let l = Arc::new(lattice_points(&e.polytope, 1).unwrap());
        let phi = HeightVector::from_fn(l, |p| Rat::from_int(3 * p.x - p.y * p.y));
        for a in e.weyl.elements() {
            for b in e.weyl.elements() {
                let lhs = act(&a.mul(b), &phi).unwrap();
                let rhs = act(a, &act(b, &phi).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    proptest! {
        #[test]
        fn symmetrize_is_idempotent_linear_projection(
            a in proptest::collection::vec(-20i64..20, 25),
            b in proptest::collection::vec(-20i64..20, 25),
            c in -5i64..5,
            d in -5i64..5,
        ) {
            let e = catalog::entry("X4").unwrap();
            let l = Arc::new(lattice_points(&e.polytope, 1).unwrap());
            let o = orbits(&e.weyl, &l).unwrap();
            let phi = HeightVector::new(l.clone(), a.into_iter().map(Rat::from_int).collect()).unwrap();
            let psi = HeightVector::new(l, b.into_iter().map(Rat::from_int).collect()).unwrap();
            let s = symmetrize(&phi, &o);
            prop_assert_eq!(symmetrize(&s, &o), s.clone());
            let (c, d) = (Rat::from_int(c), Rat::from_int(d));
            let combo = phi.scale(&c).add(&psi.scale(&d));
            prop_assert_eq!(
                symmetrize(&combo, &o),
                s.scale(&c).add(&symmetrize(&psi, &o).scale(&d))
            );
            for g in e.weyl.elements() {
                prop_assert_eq!(act(g, &s).unwrap(), s.clone());
            }
        }
    }
}
