//! Integral convex polygons: dilation, lattice-point enumeration, Pick/Ehrhart
//! counting and exact continuous moments.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull_2d, polygon_area, polygon_moments, Point2};
use crate::rat::Rat;

/// An integer point of the plane, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn to_point(self) -> Point2 {
        Point2::from_ints(self.x, self.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint::new(x, y)
    }
}

/// An integral convex polygon with extreme vertices in counterclockwise order,
/// starting at the lexicographic minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polytope2D {
    vertices: Vec<LatticePoint>,
    name: Option<String>,
}

impl Polytope2D {
    /// Normalizes the vertex order. Fails if fewer than three vertices are
    /// given, the polygon is flat, or some listed vertex is not extreme.
    pub fn new(vertices: Vec<LatticePoint>, name: Option<String>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let pts: Vec<Point2> = vertices.iter().map(|v| v.to_point()).collect();
        let hull = convex_hull_2d(&pts)?;
        if hull.len() < 3 {
            return Err(Error::InvalidPolytope("vertices are collinear".into()));
        }
        let mut distinct = vertices.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != hull.len() {
            let extra = distinct
                .iter()
                .find(|v| !hull.contains(&v.to_point()))
                .expect("some vertex is not extreme");
            return Err(Error::InvalidPolytope(format!("vertex {extra} is not extreme")));
        }
        let vertices = hull
            .iter()
            .map(|p| LatticePoint::new(p.x.to_i64().expect("integer"), p.y.to_i64().expect("integer")))
            .collect();
        Ok(Polytope2D { vertices, name })
    }

    pub fn from_pairs(pairs: &[(i64, i64)], name: &str) -> Result<Self> {
        Polytope2D::new(pairs.iter().map(|&p| p.into()).collect(), Some(name.to_string()))
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Display name, falling back to the vertex list.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => self.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""),
        }
    }

    pub fn vertex_points(&self) -> Vec<Point2> {
        self.vertices.iter().map(|v| v.to_point()).collect()
    }

    pub fn area(&self) -> Rat {
        polygon_area(&self.vertex_points())
    }

    /// Boundary lattice points: the sum over edges of the gcd of the edge vector.
    pub fn boundary_count(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                (b.x - a.x).gcd(&(b.y - a.y))
            })
            .sum()
    }

    /// `Some(on_boundary)` if `p` lies in the closed polygon.
    pub fn locate(&self, p: LatticePoint) -> Option<bool> {
        let n = self.vertices.len();
        let mut on_boundary = false;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let cross = (b.x - a.x) as i128 * (p.y - a.y) as i128
                - (b.y - a.y) as i128 * (p.x - a.x) as i128;
            if cross < 0 {
                return None;
            }
            if cross == 0 {
                on_boundary = true;
            }
        }
        Some(on_boundary)
    }

    /// Whether the integer matrix `m` (acting on column vectors) permutes the vertices.
    pub fn is_preserved_by(&self, m: &[[i64; 2]; 2]) -> bool {
        let mut img: Vec<LatticePoint> = self
            .vertices
            .iter()
            .map(|v| LatticePoint::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y))
            .collect();
        img.sort();
        let mut orig = self.vertices.clone();
        orig.sort();
        img == orig
    }
}

/// The dilation `k·P`. The name records `(P, k)`.
pub fn dilate(p: &Polytope2D, k: i64) -> Result<Polytope2D> {
    if k <= 0 {
        return Err(Error::InvalidDilation(k));
    }
    if k == 1 {
        return Ok(p.clone());
    }
    Ok(Polytope2D {
        vertices: p.vertices.iter().map(|v| LatticePoint::new(k * v.x, k * v.y)).collect(),
        name: Some(format!("{}*{k}", p.label())),
    })
}

/// The lattice points of `k·P`, in lexicographic order, with their
/// boundary/interior classification.
#[derive(Clone, Debug)]
pub struct LatticeSet {
    polytope: Polytope2D,
    dilated: Polytope2D,
    k: i64,
    points: Vec<LatticePoint>,
    boundary: Vec<bool>,
    index_of: HashMap<LatticePoint, usize>,
}

impl LatticeSet {
    pub fn k(&self) -> i64 {
        self.k
    }

    /// The undilated polytope.
    pub fn polytope(&self) -> &Polytope2D {
        &self.polytope
    }

    pub fn dilated(&self) -> &Polytope2D {
        &self.dilated
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    pub fn index_of(&self, p: LatticePoint) -> Option<usize> {
        self.index_of.get(&p).copied()
    }

    /// Indices of the vertices of `k·P`.
    pub fn vertex_indices(&self) -> Vec<usize> {
        self.dilated
            .vertices()
            .iter()
            .map(|v| self.index_of[v])
            .collect()
    }

    /// `vol(k·P)`.
    pub fn volume(&self) -> Rat {
        self.dilated.area()
    }

    /// `χ(k) = |k·P ∩ ℤ²|` as a rational.
    pub fn chi(&self) -> Rat {
        Rat::from_int(self.points.len() as i64)
    }
}

/// Enumerates `k·P ∩ ℤ²` by scanning the bounding box with an exact
/// half-plane membership test.
pub fn lattice_points(p: &Polytope2D, k: i64) -> Result<LatticeSet> {
    let dilated = dilate(p, k)?;
    let vs = dilated.vertices();
    let (x0, x1) = (vs.iter().map(|v| v.x).min().unwrap(), vs.iter().map(|v| v.x).max().unwrap());
    let (y0, y1) = (vs.iter().map(|v| v.y).min().unwrap(), vs.iter().map(|v| v.y).max().unwrap());
    let mut points = Vec::new();
    let mut boundary = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            let q = LatticePoint::new(x, y);
            if let Some(on_b) = dilated.locate(q) {
                points.push(q);
                boundary.push(on_b);
            }
        }
    }
    let index_of = points.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    Ok(LatticeSet { polytope: p.clone(), dilated, k, points, boundary, index_of })
}

/// Ehrhart data of an integral polygon: `χ(k) = vol·k² + (b/2)·k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhrhartData {
    pub vol: Rat,
    pub b: i64,
    /// Coefficients of `k⁰, k¹, k²`.
    pub chi: [Rat; 3],
}

impl EhrhartData {
    pub fn eval(&self, k: i64) -> Rat {
        let k = Rat::from_int(k);
        &self.chi[0] + &self.chi[1] * &k + &self.chi[2] * &k * &k
    }

    /// Human-readable form over a common denominator, e.g.
    /// `chi(k) = (9k^2+3k+2)/2`.
    pub fn formula(&self) -> String {
        let den = self
            .chi
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(&c.denom()));
        let scaled: Vec<Rat> = self.chi.iter().map(|c| c * Rat::from(den.clone())).collect();
        let mut body = String::new();
        for (power, c) in [(2, &scaled[2]), (1, &scaled[1]), (0, &scaled[0])] {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if body.is_empty() { "" } else { "+" };
            let mag = c.abs();
            let coef = if power > 0 && mag == Rat::one() { String::new() } else { mag.to_string() };
            let var = match power {
                2 => "k^2",
                1 => "k",
                _ => "",
            };
            body.push_str(&format!("{sign}{coef}{var}"));
        }
        if den == num_bigint::BigInt::from(1) {
            format!("chi(k) = {body}")
        } else {
            format!("chi(k) = ({body})/{den}")
        }
    }
}

/// Pick/Ehrhart data, verified against direct enumeration for `k = 1..5`.
pub fn ehrhart(p: &Polytope2D) -> Result<EhrhartData> {
    let vol = p.area();
    let b = p.boundary_count();
    let data = EhrhartData {
        chi: [Rat::one(), Rat::new(b, 2), vol.clone()],
        vol,
        b,
    };
    for k in 1..=5 {
        let set = lattice_points(p, k)?;
        if data.eval(k) != set.chi() {
            return Err(Error::PickVerificationFailed(format!(
                "k = {k}: formula gives {}, enumeration gives {}",
                data.eval(k),
                set.len()
            )));
        }
        if set.boundary_count() as i64 != k * b {
            return Err(Error::PickVerificationFailed(format!(
                "k = {k}: {} boundary points, expected {}",
                set.boundary_count(),
                k * b
            )));
        }
    }
    Ok(data)
}

/// `(vol(k·P), ∫_{k·P} x dx)`.
pub fn moments(p: &Polytope2D, k: i64) -> Result<(Rat, Point2)> {
    let d = dilate(p, k)?;
    Ok(polygon_moments(&d.vertex_points()))
}
