//! Concave piecewise-linear envelopes of lattice height vectors.
//!
//! The envelope `f_φ` of heights `φ` on the lattice points of `k·P` is the
//! smallest concave function with `f_φ(x) ≥ φ(x)`; its domains of linearity
//! form a regular subdivision of `k·P`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{orient2d, upper_hull_3d, AffineFn2, Point2, Point3};
use crate::polytope::{LatticePoint, LatticeSet};
use crate::rat::Rat;

/// A rational value at every lattice point of a [`LatticeSet`].
#[derive(Clone, Debug)]
pub struct HeightVector {
    lattice: Arc<LatticeSet>,
    values: Vec<Rat>,
}

impl PartialEq for HeightVector {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.points() == other.lattice.points() && self.values == other.values
    }
}

impl Eq for HeightVector {}

impl HeightVector {
    pub fn new(lattice: Arc<LatticeSet>, values: Vec<Rat>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::LengthMismatch { expected: lattice.len(), got: values.len() });
        }
        Ok(HeightVector { lattice, values })
    }

    pub fn zeros(lattice: Arc<LatticeSet>) -> Self {
        let values = vec![Rat::zero(); lattice.len()];
        HeightVector { lattice, values }
    }

    pub fn from_fn(lattice: Arc<LatticeSet>, f: impl Fn(LatticePoint) -> Rat) -> Self {
        let values = lattice.points().iter().map(|&p| f(p)).collect();
        HeightVector { lattice, values }
    }

    /// The restriction of an affine function to the lattice points.
    pub fn affine(lattice: Arc<LatticeSet>, l: &AffineFn2) -> Self {
        HeightVector::from_fn(lattice, |p| l.eval(&p.to_point()))
    }

    pub fn lattice(&self) -> &Arc<LatticeSet> {
        &self.lattice
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rat> {
        self.values
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.values[i]
    }

    pub fn at(&self, p: LatticePoint) -> Option<&Rat> {
        self.lattice.index_of(p).map(|i| &self.values[i])
    }

    pub fn sum(&self) -> Rat {
        self.values.iter().sum()
    }

    pub fn min_value(&self) -> Rat {
        self.values.iter().min().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn map(&self, f: impl Fn(&Rat) -> Rat) -> HeightVector {
        HeightVector { lattice: self.lattice.clone(), values: self.values.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Rat) -> HeightVector {
        self.map(|v| v * c)
    }

    /// Pointwise sum. Both vectors must live on the same lattice.
    pub fn add(&self, other: &HeightVector) -> HeightVector {
        assert_eq!(self.values.len(), other.values.len(), "height vectors on different lattices");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        HeightVector { lattice: self.lattice.clone(), values }
    }

    pub fn add_affine(&self, l: &AffineFn2) -> HeightVector {
        self.add(&HeightVector::affine(self.lattice.clone(), l))
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(Rat::is_integer)
    }

    fn lifted(&self) -> Vec<Point3> {
        self.lattice
            .points()
            .iter()
            .zip(&self.values)
            .map(|(p, v)| Point3::lift(&p.to_point(), v.clone()))
            .collect()
    }
}

/// One cell of a regular subdivision: a counterclockwise cycle of lattice
/// indices and the affine piece of the envelope over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub affine: AffineFn2,
}

/// The cells of a concave envelope, tiling `k·P`.
#[derive(Clone, Debug)]
pub struct RegularSubdivision {
    lattice: Arc<LatticeSet>,
    cells: Vec<Cell>,
}

impl RegularSubdivision {
    pub fn lattice(&self) -> &Arc<LatticeSet> {
        &self.lattice
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Whether every cell carries the same affine function.
    pub fn is_affine(&self) -> bool {
        self.cells.windows(2).all(|w| w[0].affine == w[1].affine)
    }

    /// Canonical fan triangles `(v0, vi, vi+1)` of every cell, as lattice
    /// indices, with their areas.
    pub fn fan_triangles(&self) -> Vec<([usize; 3], Rat)> {
        let pts = self.lattice.points();
        let half = Rat::new(1, 2);
        let mut out = Vec::new();
        for cell in &self.cells {
            let v = &cell.vertices;
            for i in 1..v.len() - 1 {
                let tri = [v[0], v[i], v[i + 1]];
                let area = orient2d(&pts[tri[0]].to_point(), &pts[tri[1]].to_point(), &pts[tri[2]].to_point())
                    * &half;
                out.push((tri, area));
            }
        }
        out
    }

    /// Weights `w` with `Σ w_i ψ(x_i)` equal to the integral of the piecewise
    /// linear interpolation of `ψ` over the fan triangulation of the cells.
    /// For `ψ` the heights that induced this subdivision, this is `∫ f_ψ`;
    /// for any other `ψ` it is at most `∫ f_ψ`.
    pub fn interpolation_weights(&self) -> Vec<Rat> {
        let mut w = vec![Rat::zero(); self.lattice.len()];
        let third = Rat::new(1, 3);
        for (tri, area) in self.fan_triangles() {
            let share = &area * &third;
            for i in tri {
                w[i] += &share;
            }
        }
        w
    }
}

/// The concave envelope of `φ` as a regular subdivision, with its invariants
/// checked exactly before returning.
pub fn concave_envelope(phi: &HeightVector) -> Result<RegularSubdivision> {
    let lifted = phi.lifted();
    let facets = upper_hull_3d(&lifted)?;
    let cells: Vec<Cell> =
        facets.into_iter().map(|f| Cell { vertices: f.vertices, affine: f.affine }).collect();
    let sub = RegularSubdivision { lattice: phi.lattice.clone(), cells };
    check_subdivision(&sub, phi)?;
    Ok(sub)
}

fn check_subdivision(sub: &RegularSubdivision, phi: &HeightVector) -> Result<()> {
    let pts = sub.lattice.points();
    let covered: Rat = sub.fan_triangles().into_iter().map(|(_, a)| a).sum();
    if covered != sub.lattice.volume() {
        return Err(Error::Invariant(format!(
            "subdivision covers area {covered}, expected {}",
            sub.lattice.volume()
        )));
    }
    for cell in &sub.cells {
        for &v in &cell.vertices {
            if cell.affine.eval(&pts[v].to_point()) != phi.values[v] {
                return Err(Error::Invariant("cell vertex is not on the lifted graph".into()));
            }
        }
        for (p, h) in pts.iter().zip(&phi.values) {
            if cell.affine.eval(&p.to_point()) < *h {
                return Err(Error::Invariant(format!("cell piece lies below the height at {p}")));
            }
        }
    }
    Ok(())
}

/// `f_φ(x)`: the minimum of the cell pieces, which for a concave envelope is
/// the value of the piece over any cell containing `x`.
pub fn envelope_value(sub: &RegularSubdivision, x: &Point2) -> Result<Rat> {
    let domain = sub.lattice.dilated().vertex_points();
    let n = domain.len();
    if (0..n).any(|i| orient2d(&domain[i], &domain[(i + 1) % n], x).is_negative()) {
        return Err(Error::OutsideDomain);
    }
    Ok(sub
        .cells
        .iter()
        .map(|c| c.affine.eval(x))
        .min()
        .expect("subdivision has at least one cell"))
}

/// `∫_{k·P} f_φ`, summed over fan triangles as area times vertex mean.
pub fn integrate_envelope(sub: &RegularSubdivision) -> Rat {
    let pts = sub.lattice.points();
    let third = Rat::new(1, 3);
    let mut total = Rat::zero();
    for cell in &sub.cells {
        let v = &cell.vertices;
        let val = |i: usize| cell.affine.eval(&pts[i].to_point());
        for i in 1..v.len() - 1 {
            let area = orient2d(&pts[v[0]].to_point(), &pts[v[i]].to_point(), &pts[v[i + 1]].to_point())
                / Rat::from_int(2);
            total += area * (val(v[0]) + val(v[i]) + val(v[i + 1])) * &third;
        }
    }
    total
}

/// Envelope values at every lattice point.
pub fn envelope_at_lattice(sub: &RegularSubdivision) -> HeightVector {
    let lattice = sub.lattice.clone();
    let values = lattice
        .points()
        .iter()
        .map(|p| {
            let q = p.to_point();
            sub.cells.iter().map(|c| c.affine.eval(&q)).min().expect("nonempty")
        })
        .collect();
    HeightVector { lattice, values }
}

/// Replaces `φ` by `f_φ` restricted to the lattice points.
pub fn project_consistent(phi: &HeightVector) -> Result<HeightVector> {
    Ok(envelope_at_lattice(&concave_envelope(phi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::polytope::lattice_points;

    fn lat(p: &crate::polytope::Polytope2D, k: i64) -> Arc<LatticeSet> {
        Arc::new(lattice_points(p, k).unwrap())
    }

    fn hat() -> HeightVector {
        let l = lat(&catalog::delta2(), 1);
        HeightVector::from_fn(l, |p| if p == LatticePoint::new(0, 0) { Rat::one() } else { Rat::zero() })
    }

    #[test]
    fn zero_heights_give_one_flat_cell() {
        let phi = HeightVector::zeros(lat(&catalog::delta3(), 1));
        let sub = concave_envelope(&phi).unwrap();
        assert_eq!(sub.cells().len(), 1);
        assert_eq!(sub.cells()[0].affine, AffineFn2::zero());
    }

    #[test]
    fn hat_envelope_values() {
        let sub = concave_envelope(&hat()).unwrap();
        assert_eq!(sub.cells().len(), 4);
        let half = Rat::new(1, 2);
        assert_eq!(envelope_value(&sub, &Point2::from_ints(1, 0)).unwrap(), half);
        assert_eq!(envelope_value(&sub, &Point2::from_ints(-1, 0)).unwrap(), half);
        assert_eq!(envelope_value(&sub, &Point2::new(half.clone(), Rat::zero())).unwrap(), Rat::new(3, 4));
        assert_eq!(integrate_envelope(&sub), Rat::new(4, 3));
        assert!(matches!(envelope_value(&sub, &Point2::from_ints(3, 0)), Err(Error::OutsideDomain)));
    }

    #[test]
    fn projection_lifts_hidden_points() {
        let psi = project_consistent(&hat()).unwrap();
        assert_eq!(psi.at(LatticePoint::new(1, 0)), Some(&Rat::new(1, 2)));
        assert_eq!(psi.at(LatticePoint::new(-1, 0)), Some(&Rat::new(1, 2)));
        assert_eq!(project_consistent(&psi).unwrap(), psi);
    }

    #[test]
    fn vertex_indicator_projection() {
        // The envelope is min((x+2)/4 − y/2, (x+2)/4 + y/2), split along the
        // long diagonal.
        let l = lat(&catalog::delta2(), 1);
        let phi = HeightVector::from_fn(l, |p| if p == LatticePoint::new(2, 0) { Rat::one() } else { Rat::zero() });
        let sub = concave_envelope(&phi).unwrap();
        assert_eq!(sub.cells().len(), 2);
        let psi = envelope_at_lattice(&sub);
        assert_eq!(psi.at(LatticePoint::new(2, 0)), Some(&Rat::one()));
        assert_eq!(psi.at(LatticePoint::new(1, 0)), Some(&Rat::new(3, 4)));
        assert_eq!(psi.at(LatticePoint::new(0, 0)), Some(&Rat::new(1, 2)));
        assert_eq!(psi.at(LatticePoint::new(-1, 0)), Some(&Rat::new(1, 4)));
        assert_eq!(psi.at(LatticePoint::new(-2, 0)), Some(&Rat::zero()));
        assert_eq!(psi.at(LatticePoint::new(0, 1)), Some(&Rat::zero()));
        assert_eq!(psi, project_consistent(&phi).unwrap());
    }

    #[test]
    fn affine_heights() {
        let l = lat(&catalog::delta4(), 1);
        let f = AffineFn2::new(Rat::new(1, 3), Rat::from_int(-2), Rat::from_int(5));
        let sub = concave_envelope(&HeightVector::affine(l.clone(), &f)).unwrap();
        assert!(sub.cells().iter().all(|c| c.affine == f));
        assert_eq!(envelope_value(&sub, &Point2::new(Rat::new(1, 7), Rat::new(-2, 5))).unwrap(),
            f.eval(&Point2::new(Rat::new(1, 7), Rat::new(-2, 5))));
        let x1 = AffineFn2::new(Rat::one(), Rat::zero(), Rat::zero());
        assert_eq!(integrate_envelope(&concave_envelope(&HeightVector::affine(l, &x1)).unwrap()), Rat::zero());
    }

    #[test]
    fn constant_integrates_to_scaled_volume() {
        for p in catalog::polytopes() {
            for k in 1..=2 {
                let l = lat(&p, k);
                let c = Rat::new(-5, 3);
                let sub = concave_envelope(&HeightVector::from_fn(l.clone(), |_| c.clone())).unwrap();
                assert_eq!(integrate_envelope(&sub), &c * l.volume());
            }
        }
    }

    #[test]
    fn interpolation_weights_reproduce_integral() {
        let phi = project_consistent(&hat()).unwrap();
        let sub = concave_envelope(&phi).unwrap();
        let w = sub.interpolation_weights();
        let via_weights: Rat = w.iter().zip(phi.values()).map(|(a, b)| a * b).sum();
        assert_eq!(via_weights, integrate_envelope(&sub));
        assert_eq!(w.iter().sum::<Rat>(), sub.lattice().volume());
    }
}
