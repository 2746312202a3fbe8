//! Exact planar and spatial primitives: points, orientation predicates, 2D
//! convex hulls, polygon areas, the upper hull of a lifted point set and a
//! general 3D hull used for volume and lattice-count cross-checks.

mod hull3d;
mod lift;

pub use hull3d::ConvexHull3;
pub use lift::{upper_hull_3d, UpperFacet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// A point of the plane. Ordering is lexicographic in `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point2 {
    pub x: Rat,
    pub y: Rat,
}

impl Point2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(Rat::from_int(x), Rat::from_int(y))
    }

    pub fn origin() -> Self {
        Point2::from_ints(0, 0)
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, s: &Rat) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, o: &Point2) -> Rat {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point2) -> Rat {
        &self.x * &o.y - &self.y * &o.x
    }
}

/// A point of space, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point3 {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl Point3 {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Self {
        Point3 { x, y, z }
    }

    pub fn lift(p: &Point2, z: Rat) -> Self {
        Point3::new(p.x.clone(), p.y.clone(), z)
    }

    pub fn xy(&self) -> Point2 {
        Point2::new(self.x.clone(), self.y.clone())
    }

    fn sub(&self, o: &Point3) -> [Rat; 3] {
        [&self.x - &o.x, &self.y - &o.y, &self.z - &o.z]
    }
}

/// `ℓ(x) = a1·x₁ + a2·x₂ + c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffineFn2 {
    pub a1: Rat,
    pub a2: Rat,
    pub c: Rat,
}

impl AffineFn2 {
    pub fn new(a1: Rat, a2: Rat, c: Rat) -> Self {
        AffineFn2 { a1, a2, c }
    }

    pub fn zero() -> Self {
        AffineFn2::new(Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn eval(&self, p: &Point2) -> Rat {
        &self.a1 * &p.x + &self.a2 * &p.y + &self.c
    }

    pub fn add(&self, o: &AffineFn2) -> AffineFn2 {
        AffineFn2::new(&self.a1 + &o.a1, &self.a2 + &o.a2, &self.c + &o.c)
    }

    pub fn scale(&self, s: &Rat) -> AffineFn2 {
        AffineFn2::new(&self.a1 * s, &self.a2 * s, &self.c * s)
    }

    /// The affine function through three lifted points with non-collinear
    /// projections.
    pub fn through(p: &Point3, q: &Point3, r: &Point3) -> Option<AffineFn2> {
        let (u, v) = (q.sub(p), r.sub(p));
        let det = &u[0] * &v[1] - &u[1] * &v[0];
        if det.is_zero() {
            return None;
        }
        // Solve a1·u0 + a2·u1 = u2 and a1·v0 + a2·v1 = v2.
        let a1 = (&u[2] * &v[1] - &u[1] * &v[2]) / &det;
        let a2 = (&u[0] * &v[2] - &u[2] * &v[0]) / &det;
        let c = &p.z - &a1 * &p.x - &a2 * &p.y;
        Some(AffineFn2::new(a1, a2, c))
    }
}

/// Twice the signed area of the triangle `(a, b, c)`; positive for a
/// counterclockwise turn.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> Rat {
    b.sub(a).cross(&c.sub(a))
}

/// `det(b−a, c−a, d−a)`; positive when `d` lies on the side of the plane
/// `(a, b, c)` that a counterclockwise (viewed from outside) face points to.
pub fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> Rat {
    let (u, v, w) = (b.sub(a), c.sub(a), d.sub(a));
    &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
        + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0])
}

/// Extreme points of `points` in counterclockwise order, starting from the
/// lexicographic minimum. Collinear boundary points are dropped. Degenerate
/// inputs return one or two points.
pub fn convex_hull_2d(points: &[Point2]) -> Result<Vec<Point2>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Ok(pts);
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !orient2d(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !orient2d(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    Ok(lower)
}

/// Shoelace area of a counterclockwise polygon. Fewer than three vertices
/// give zero.
pub fn polygon_area(vertices: &[Point2]) -> Rat {
    if vertices.len() < 3 {
        return Rat::zero();
    }
    let n = vertices.len();
    let twice: Rat = (0..n)
        .map(|i| vertices[i].cross(&vertices[(i + 1) % n]))
        .sum();
    twice / Rat::from_int(2)
}

/// Area and first moment `∫ x dx` of a counterclockwise polygon, by a fan from
/// vertex 0 (each triangle contributes area times centroid).
pub fn polygon_moments(vertices: &[Point2]) -> (Rat, Point2) {
    let mut area = Rat::zero();
    let mut moment = Point2::origin();
    if vertices.len() < 3 {
        return (area, moment);
    }
    let three = Rat::from_int(3);
    for i in 1..vertices.len() - 1 {
        let (a, b, c) = (&vertices[0], &vertices[i], &vertices[i + 1]);
        let t = orient2d(a, b, c) / Rat::from_int(2);
        let centroid = a.add(b).add(c).scale(&three.recip());
        moment = moment.add(&centroid.scale(&t));
        area += t;
    }
    (area, moment)
}

/// Whether `p` lies in the closed counterclockwise convex polygon.
pub fn in_convex_polygon(vertices: &[Point2], p: &Point2) -> bool {
    let n = vertices.len();
    (0..n).all(|i| !orient2d(&vertices[i], &vertices[(i + 1) % n], p).is_negative())
}

/// The part of a counterclockwise convex polygon where `h ≥ 0`, again
/// counterclockwise. Degenerate results (fewer than three vertices) are
/// returned as they are; they have zero area.
pub fn clip_halfplane(vertices: &[Point2], h: &AffineFn2) -> Vec<Point2> {
    let n = vertices.len();
    let mut out: Vec<Point2> = Vec::with_capacity(n + 1);
    let push = |p: Point2, out: &mut Vec<Point2>| {
        if out.last() != Some(&p) && out.first() != Some(&p) {
            out.push(p);
        }
    };
    for i in 0..n {
        let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
        let (ha, hb) = (h.eval(a), h.eval(b));
        if !ha.is_negative() {
            push(a.clone(), &mut out);
        }
        if (ha.is_negative() && hb.is_positive()) || (ha.is_positive() && hb.is_negative()) {
            let t = &ha / &(&ha - &hb);
            push(a.add(&b.sub(a).scale(&t)), &mut out);
        }
    }
    out
}
