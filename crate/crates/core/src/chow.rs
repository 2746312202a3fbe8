//! The Chow weight of a height vector, the barycenter obstruction, and an
//! independent cross-check through the polytope under the envelope's graph.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::envelope::{concave_envelope, envelope_at_lattice, integrate_envelope, HeightVector};
use crate::error::{Error, Result};
use crate::geometry::{ConvexHull3, Point2, Point3};
use crate::polytope::{lattice_points, moments, LatticeSet, Polytope2D};
use crate::rat::Rat;

/// Exact average of the lattice points.
pub fn discrete_barycenter(lattice: &LatticeSet) -> Point2 {
    let n = Rat::from_int(lattice.len() as i64);
    let sx: i64 = lattice.points().iter().map(|p| p.x).sum();
    let sy: i64 = lattice.points().iter().map(|p| p.y).sum();
    Point2::new(Rat::from_int(sx) / &n, Rat::from_int(sy) / &n)
}

/// Comparison of the lattice-point average with the continuous centroid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarycenterReport {
    pub discrete: Point2,
    pub continuous: Point2,
    /// `discrete − continuous`.
    pub mismatch: Point2,
    pub passes: bool,
}

pub fn barycenter_report(lattice: &LatticeSet) -> BarycenterReport {
    let discrete = discrete_barycenter(lattice);
    let (vol, first) = moments(lattice.polytope(), lattice.k()).expect("positive dilation");
    let continuous = first.scale(&vol.recip());
    let mismatch = discrete.sub(&continuous);
    let passes = mismatch.x.is_zero() && mismatch.y.is_zero();
    BarycenterReport { discrete, continuous, mismatch, passes }
}

pub fn barycenter_test(p: &Polytope2D, k: i64) -> Result<BarycenterReport> {
    Ok(barycenter_report(&lattice_points(p, k)?))
}

/// `J(φ)` together with what it was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowWeightValue {
    pub polytope: String,
    pub k: i64,
    #[serde(rename = "J")]
    pub j: Rat,
}

impl ChowWeightValue {
    fn new(lattice: &LatticeSet, j: Rat) -> Self {
        ChowWeightValue { polytope: lattice.polytope().label(), k: lattice.k(), j }
    }
}

/// `J(φ) = (1/vol(k·P))·∫ f_φ − (1/χ(k))·Σ f_φ(x)`, the sum running over the
/// lattice points of `k·P` and using envelope values.
pub fn chow_weight(phi: &HeightVector) -> Result<ChowWeightValue> {
    let sub = concave_envelope(phi)?;
    let lattice = phi.lattice();
    let j = integrate_envelope(&sub) / lattice.volume() - envelope_at_lattice(&sub).sum() / lattice.chi();
    Ok(ChowWeightValue::new(lattice, j))
}

/// `(1/vol)·∫ f_φ − (1/χ)·Σ φ(x)` with the raw heights in the sum. It is
/// convex in `φ`, never below `J(φ)`, and agrees with `J` on consistent
/// heights.
pub fn surrogate_weight(phi: &HeightVector) -> Result<Rat> {
    let sub = concave_envelope(phi)?;
    let lattice = phi.lattice();
    Ok(integrate_envelope(&sub) / lattice.volume() - phi.sum() / lattice.chi())
}

/// Quantities of the solid `{(x, t) : x ∈ k·P, 0 ≤ t ≤ g(x)}` measured
/// directly from its 3D hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSolid {
    pub volume: Rat,
    pub lattice_count: BigInt,
}

/// Builds the solid under the graph of integral nonnegative consistent
/// heights and measures it without using the envelope code.
pub fn graph_solid(phi: &HeightVector) -> Result<GraphSolid> {
    check_oracle_input(phi)?;
    let lattice = phi.lattice();
    if phi.values().iter().all(Rat::is_zero) {
        return Ok(GraphSolid {
            volume: Rat::zero(),
            lattice_count: BigInt::from(lattice.len()),
        });
    }
    let mut pts = Vec::with_capacity(2 * lattice.len());
    for (p, v) in lattice.points().iter().zip(phi.values()) {
        let q = p.to_point();
        pts.push(Point3::lift(&q, Rat::zero()));
        if !v.is_zero() {
            pts.push(Point3::lift(&q, v.clone()));
        }
    }
    let hull = ConvexHull3::new(&pts)?;
    Ok(GraphSolid { volume: hull.volume(), lattice_count: hull.count_lattice_points() })
}

fn check_oracle_input(phi: &HeightVector) -> Result<()> {
    if !phi.is_integral() {
        return Err(Error::OraclePrecondition("heights must be integers".into()));
    }
    if phi.values().iter().any(Rat::is_negative) {
        return Err(Error::OraclePrecondition("heights must be nonnegative".into()));
    }
    if envelope_at_lattice(&concave_envelope(phi)?) != *phi {
        return Err(Error::OraclePrecondition("heights must lie on their envelope".into()));
    }
    Ok(())
}

/// Recomputes `J` from the volume and lattice content of the solid under the
/// graph, asserting `|solid ∩ ℤ³| − χ = Σ φ` and `vol(solid) = ∫ f_φ`, and
/// that the result matches [`chow_weight`].
pub fn chow_weight_oracle(phi: &HeightVector) -> Result<ChowWeightValue> {
    let solid = graph_solid(phi)?;
    let lattice = phi.lattice();
    let chi = lattice.chi();
    let lifted = Rat::from(solid.lattice_count.clone()) - &chi;
    if lifted != phi.sum() {
        return Err(Error::OracleMismatch(format!(
            "solid holds {} lattice points above the base, heights sum to {}",
            lifted,
            phi.sum()
        )));
    }
    let integral = integrate_envelope(&concave_envelope(phi)?);
    if solid.volume != integral {
        return Err(Error::OracleMismatch(format!(
            "solid volume {} differs from envelope integral {integral}",
            solid.volume
        )));
    }
    let j = &solid.volume / lattice.volume() - &lifted / &chi;
    let direct = chow_weight(phi)?;
    if direct.j != j {
        return Err(Error::OracleMismatch(format!("oracle weight {j}, envelope weight {}", direct.j)));
    }
    Ok(ChowWeightValue::new(lattice, j))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;
    use crate::envelope::project_consistent;
    use crate::geometry::AffineFn2;
    use crate::polytope::LatticePoint;

    fn lat(p: &Polytope2D, k: i64) -> Arc<LatticeSet> {
        Arc::new(lattice_points(p, k).unwrap())
    }

    fn hat_projected() -> HeightVector {
        let l = lat(&catalog::delta2(), 1);
        let hat = HeightVector::from_fn(l, |p| if p == LatticePoint::new(0, 0) { Rat::one() } else { Rat::zero() });
        project_consistent(&hat).unwrap()
    }

    #[test]
    fn delta1_barycenter() {
        let r = barycenter_test(&catalog::delta1(), 1).unwrap();
        assert!(!r.passes);
        assert_eq!(r.discrete, Point2::new(Rat::new(-2, 7), Rat::new(-2, 7)));
        assert_eq!(r.mismatch, r.discrete);
        for k in 1..=8 {
            let b = discrete_barycenter(&lattice_points(&catalog::delta1(), k).unwrap());
            let c = Rat::new(-4 * k, 9 * k * k + 3 * k + 2);
            assert_eq!(b, Point2::new(c.clone(), c));
        }
    }

    #[test]
    fn symmetric_barycenters_vanish() {
        for p in [catalog::delta2(), catalog::delta3(), catalog::delta4()] {
            for k in 1..=5 {
                let r = barycenter_test(&p, k).unwrap();
                assert!(r.passes, "{} k={k}", p.label());
                assert_eq!(r.discrete, Point2::origin());
            }
        }
    }

    #[test]
    fn weight_examples() {
        let l = lat(&catalog::delta1(), 1);
        let f = AffineFn2::new(Rat::from_int(-1), Rat::from_int(-1), Rat::zero());
        assert_eq!(chow_weight(&HeightVector::affine(l, &f)).unwrap().j, Rat::new(-4, 7));
        assert_eq!(chow_weight(&hat_projected()).unwrap().j, Rat::new(1, 21));
        let l3 = lat(&catalog::delta3(), 2);
        let g = AffineFn2::new(Rat::new(2, 3), Rat::from_int(-7), Rat::from_int(4));
        assert_eq!(chow_weight(&HeightVector::affine(l3, &g)).unwrap().j, Rat::zero());
    }

    #[test]
    fn raw_heights_use_envelope_values_in_sum() {
        let l = lat(&catalog::delta2(), 1);
        let hat = HeightVector::from_fn(l, |p| if p == LatticePoint::new(0, 0) { Rat::one() } else { Rat::zero() });
        assert_eq!(chow_weight(&hat).unwrap().j, Rat::new(1, 21));
        // 1/3 − 1/7 with the raw sum.
        assert_eq!(surrogate_weight(&hat).unwrap(), Rat::new(4, 21));
    }

    #[test]
    fn oracle_examples() {
        let l = lat(&catalog::delta2(), 1);
        let zero = HeightVector::zeros(l.clone());
        assert_eq!(chow_weight_oracle(&zero).unwrap().j, Rat::zero());
        let one = HeightVector::from_fn(l.clone(), |_| Rat::one());
        let s = graph_solid(&one).unwrap();
        assert_eq!(s.volume, l.volume());
        assert_eq!(s.lattice_count, BigInt::from(2 * l.len()));
        assert_eq!(chow_weight_oracle(&one).unwrap().j, Rat::zero());

        let twice = hat_projected().scale(&Rat::from_int(2));
        let s = graph_solid(&twice).unwrap();
        assert_eq!(s.volume, Rat::new(8, 3));
        assert_eq!(s.lattice_count, BigInt::from(11));
        assert_eq!(chow_weight_oracle(&twice).unwrap().j, Rat::new(2, 21));
    }

    #[test]
    fn oracle_rejects_bad_input() {
        let l = lat(&catalog::delta2(), 1);
        let hat = HeightVector::from_fn(l.clone(), |p| if p == LatticePoint::new(0, 0) { Rat::one() } else { Rat::zero() });
        assert!(matches!(chow_weight_oracle(&hat), Err(Error::OraclePrecondition(_))));
        let neg = HeightVector::from_fn(l, |_| Rat::from_int(-1));
        assert!(matches!(chow_weight_oracle(&neg), Err(Error::OraclePrecondition(_))));
    }
}
