use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{orient3d, Point3};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Full convex hull of a spatial point set, built incrementally
/// (beneath-beyond) with exact orientation tests. The boundary is kept as a
/// triangulated surface; coplanar triangles are allowed, which does not affect
/// volume or membership.
#[derive(Clone, Debug)]
pub struct ConvexHull3 {
    points: Vec<Point3>,
    /// Each face is oriented so that interior points are strictly negative
    /// under `orient3d(a, b, c, ·)`.
    faces: Vec<[usize; 3]>,
    interior: Point3,
}

impl ConvexHull3 {
    pub fn new(points: &[Point3]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let pts = points.to_vec();
        let p0 = 0;
        let p1 = (1..pts.len()).find(|&i| pts[i] != pts[p0]).ok_or(Error::Coplanar)?;
        let collinear = |i: usize| {
            let (a, b, c) = (&pts[p0], &pts[p1], &pts[i]);
            let u = [&b.x - &a.x, &b.y - &a.y, &b.z - &a.z];
            let v = [&c.x - &a.x, &c.y - &a.y, &c.z - &a.z];
            (&u[1] * &v[2] - &u[2] * &v[1]).is_zero()
                && (&u[2] * &v[0] - &u[0] * &v[2]).is_zero()
                && (&u[0] * &v[1] - &u[1] * &v[0]).is_zero()
        };
        let p2 = (0..pts.len()).find(|&i| !collinear(i)).ok_or(Error::Coplanar)?;
        let p3 = (0..pts.len())
            .find(|&i| !orient3d(&pts[p0], &pts[p1], &pts[p2], &pts[i]).is_zero())
            .ok_or(Error::Coplanar)?;
        let quarter = Rat::new(1, 4);
        let sum = |f: fn(&Point3) -> &Rat| {
            (f(&pts[p0]) + f(&pts[p1]) + f(&pts[p2]) + f(&pts[p3])) * &quarter
        };
        let interior = Point3::new(sum(|p| &p.x), sum(|p| &p.y), sum(|p| &p.z));
        let mut hull = ConvexHull3 { points: pts, faces: Vec::new(), interior };
        for [a, b, c] in [[p0, p1, p2], [p0, p1, p3], [p0, p2, p3], [p1, p2, p3]] {
            hull.push_oriented(a, b, c);
        }
        let seeds: HashSet<usize> = [p0, p1, p2, p3].into_iter().collect();
        for i in 0..hull.points.len() {
            if !seeds.contains(&i) {
                hull.insert(i);
            }
        }
        Ok(hull)
    }

    fn push_oriented(&mut self, a: usize, b: usize, c: usize) {
        let p = &self.points;
        if orient3d(&p[a], &p[b], &p[c], &self.interior).is_positive() {
            self.faces.push([a, c, b]);
        } else {
            self.faces.push([a, b, c]);
        }
    }

    fn insert(&mut self, i: usize) {
        let q = self.points[i].clone();
        let visible: Vec<bool> = self
            .faces
            .iter()
            .map(|&[a, b, c]| {
                orient3d(&self.points[a], &self.points[b], &self.points[c], &q).is_positive()
            })
            .collect();
        if !visible.iter().any(|&v| v) {
            return;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in self.faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                edges.insert(e);
            }
        }
        let mut horizon: Vec<(usize, usize)> =
            edges.iter().filter(|&&(u, v)| !edges.contains(&(v, u))).copied().collect();
        horizon.sort_unstable();
        let kept: Vec<[usize; 3]> = self
            .faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        self.faces = kept;
        for (u, v) in horizon {
            self.push_oriented(u, v, i);
        }
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    /// Exact volume: the sum of the tetrahedra spanned by each face and an
    /// interior point.
    pub fn volume(&self) -> Rat {
        let p = &self.points;
        let six = Rat::from_int(6);
        -self
            .faces
            .iter()
            .map(|&[a, b, c]| orient3d(&p[a], &p[b], &p[c], &self.interior))
            .sum::<Rat>()
            / six
    }

    /// Whether `q` lies in the closed hull.
    pub fn contains(&self, q: &Point3) -> bool {
        let p = &self.points;
        self.faces
            .iter()
            .all(|&[a, b, c]| !orient3d(&p[a], &p[b], &p[c], q).is_positive())
    }

    /// Number of integer points in the closed hull. Each integer column
    /// `(x, y)` meets the hull in an interval of heights, obtained from the
    /// face inequalities, so the cost does not grow with the hull's height.
    pub fn count_lattice_points(&self) -> BigInt {
        let p = &self.points;
        let bound = |f: fn(&Point3) -> &Rat| {
            let lo = p.iter().map(f).min().expect("nonempty").ceil();
            let hi = p.iter().map(f).max().expect("nonempty").floor();
            (lo.to_i64().expect("small"), hi.to_i64().expect("small"))
        };
        let (x0, x1) = bound(|q| &q.x);
        let (y0, y1) = bound(|q| &q.y);
        let mut count = BigInt::zero();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let base = Point3::new(x.into(), y.into(), Rat::zero());
                let up = Point3::new(x.into(), y.into(), Rat::one());
                let mut lo: Option<Rat> = None;
                let mut hi: Option<Rat> = None;
                let mut empty = false;
                // Along the column the face predicate is affine in z:
                // o(z) = o0 + slope·z, and membership requires o(z) ≤ 0.
                for &[a, b, c] in &self.faces {
                    let o0 = orient3d(&p[a], &p[b], &p[c], &base);
                    let slope = orient3d(&p[a], &p[b], &p[c], &up) - &o0;
                    if slope.is_zero() {
                        if o0.is_positive() {
                            empty = true;
                            break;
                        }
                    } else {
                        let z = -&o0 / &slope;
                        if slope.is_positive() {
                            hi = Some(hi.map_or(z.clone(), |h| h.min(z)));
                        } else {
                            lo = Some(lo.map_or(z.clone(), |l| l.max(z)));
                        }
                    }
                }
                if empty {
                    continue;
                }
                let (Some(lo), Some(hi)) = (lo, hi) else { continue };
                if lo > hi {
                    continue;
                }
                let n: BigInt = hi.floor() - lo.ceil() + 1;
                if n.is_positive() {
                    count += n;
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64, y: i64, z: i64) -> Point3 {
        Point3::new(x.into(), y.into(), z.into())
    }

    #[test]
    fn unit_cube() {
        let mut pts = Vec::new();
        for x in 0..=1 {
            for y in 0..=1 {
                for z in 0..=1 {
                    pts.push(q(x, y, z));
                }
            }
        }
        pts.push(Point3::new(Rat::new(1, 2), Rat::new(1, 2), Rat::new(1, 2)));
        let h = ConvexHull3::new(&pts).unwrap();
        assert_eq!(h.volume(), Rat::one());
        assert_eq!(h.count_lattice_points(), BigInt::from(8));
        assert!(h.contains(&Point3::new(Rat::new(1, 3), Rat::zero(), Rat::one())));
        assert!(!h.contains(&q(2, 0, 0)));
    }

    #[test]
    fn lattice_cube_with_many_coplanar_points() {
        let mut pts = Vec::new();
        for x in 0..=3 {
            for y in 0..=3 {
                for z in 0..=3 {
                    pts.push(q(x, y, z));
                }
            }
        }
        let h = ConvexHull3::new(&pts).unwrap();
        assert_eq!(h.volume(), Rat::from_int(27));
        assert_eq!(h.count_lattice_points(), BigInt::from(64));
    }

    #[test]
    fn pyramid_volume() {
        let pts = vec![q(-2, 0, 0), q(2, 0, 0), q(0, 1, 0), q(0, -1, 0), q(0, 0, 1)];
        let h = ConvexHull3::new(&pts).unwrap();
        assert_eq!(h.volume(), Rat::new(4, 3));
        assert_eq!(h.count_lattice_points(), BigInt::from(8));
    }

    #[test]
    fn column_count_matches_point_scan() {
        let pts = vec![q(-3, -1, 0), q(4, 0, 0), q(0, 5, 0), q(1, 1, 17), q(0, 2, 9), q(-1, 0, 6)];
        let h = ConvexHull3::new(&pts).unwrap();
        let mut scanned = 0;
        for x in -3..=4 {
            for y in -1..=5 {
                for z in 0..=17 {
                    if h.contains(&q(x, y, z)) {
                        scanned += 1;
                    }
                }
            }
        }
        assert_eq!(h.count_lattice_points(), BigInt::from(scanned));
    }

    #[test]
    fn coplanar_is_rejected() {
        let pts = vec![q(0, 0, 0), q(1, 0, 0), q(0, 1, 0), q(1, 1, 0)];
        assert!(matches!(ConvexHull3::new(&pts), Err(Error::Coplanar)));
    }
}
