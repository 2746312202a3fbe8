//! Concave piecewise linear test functions and their random generation.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envelope::{concave_envelope, envelope_at_lattice, HeightVector};
use crate::error::Result;
use crate::geometry::{clip_halfplane, polygon_moments, AffineFn2, Point2};
use crate::polytope::{LatticePoint, LatticeSet};
use crate::rat::Rat;
use crate::symmetry::{symmetrize, OrbitPartition};

/// `g(x) = min_i ℓ_i(x)`, a concave piecewise linear function on the plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcavePl {
    pieces: Vec<AffineFn2>,
}

impl ConcavePl {
    /// Panics if `pieces` is empty.
    pub fn new(mut pieces: Vec<AffineFn2>) -> Self {
        assert!(!pieces.is_empty(), "a concave function needs at least one piece");
        pieces.sort();
        pieces.dedup();
        ConcavePl { pieces }
    }

    pub fn pieces(&self) -> &[AffineFn2] {
        &self.pieces
    }

    pub fn value(&self, p: &Point2) -> Rat {
        self.pieces.iter().map(|l| l.eval(p)).min().expect("nonempty")
    }

    pub fn at(&self, p: LatticePoint) -> Rat {
        self.value(&p.to_point())
    }

    pub fn add_constant(&self, c: &Rat) -> ConcavePl {
        let pieces = self.pieces.iter().map(|l| AffineFn2::new(l.a1.clone(), l.a2.clone(), &l.c + c)).collect();
        ConcavePl::new(pieces)
    }

    /// The region of `polygon` where piece `i` attains the minimum.
    fn region(&self, i: usize, polygon: &[Point2]) -> Vec<Point2> {
        let li = &self.pieces[i];
        let mut region = polygon.to_vec();
        for (j, lj) in self.pieces.iter().enumerate() {
            if j == i || region.len() < 3 {
                continue;
            }
            // Keep ℓ_j − ℓ_i ≥ 0.
            let h = AffineFn2::new(&lj.a1 - &li.a1, &lj.a2 - &li.a2, &lj.c - &li.c);
            region = clip_halfplane(&region, &h);
        }
        region
    }

    /// `∫ g` over a counterclockwise convex polygon.
    pub fn integrate(&self, polygon: &[Point2]) -> Rat {
        (0..self.pieces.len())
            .map(|i| {
                let (area, m) = polygon_moments(&self.region(i, polygon));
                let l = &self.pieces[i];
                &l.a1 * &m.x + &l.a2 * &m.y + &l.c * &area
            })
            .sum()
    }

    /// Whether a single piece is minimal on all of `polygon`.
    pub fn is_affine_on(&self, polygon: &[Point2]) -> bool {
        let (total, _) = polygon_moments(polygon);
        (0..self.pieces.len()).any(|i| polygon_moments(&self.region(i, polygon)).0 == total)
    }
}

/// Minimum of 3 to 6 affine functions with integer coefficients in `[−5, 5]`.
pub fn random_concave(rng: &mut ChaCha8Rng) -> ConcavePl {
    let n = rng.gen_range(3..=6);
    let mut int = || Rat::from_int(rng.gen_range(-5..=5));
    ConcavePl::new((0..n).map(|_| AffineFn2::new(int(), int(), int())).collect())
}

/// A sample from `PL(P; k)` invariant under the group of `orbits`: random
/// lattice values are averaged over orbits, replaced by their concave
/// envelope, and shifted by a constant so that the smallest value at a vertex
/// of `k·P` is zero. Returns the function with its lattice values.
pub fn lattice_sample(
    rng: &mut ChaCha8Rng,
    lattice: &Arc<LatticeSet>,
    orbits: &OrbitPartition,
) -> Result<(ConcavePl, HeightVector)> {
    let raw = random_concave(rng);
    let phi = HeightVector::from_fn(lattice.clone(), |p| raw.at(p));
    let sub = concave_envelope(&symmetrize(&phi, orbits))?;
    let g = ConcavePl::new(sub.cells().iter().map(|c| c.affine.clone()).collect());
    let values = envelope_at_lattice(&sub);
    let shift = lattice.vertex_indices().iter().map(|&i| values.get(i).clone()).min().expect("vertices");
    let shift = -shift;
    Ok((g.add_constant(&shift), values.map(|v| v + &shift)))
}
