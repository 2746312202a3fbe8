//! Exact checks of the inequalities and closed forms behind the stability
//! arguments: trapezoid estimates for triangles and for the standard
//! triangulation, the chain of estimates for `△₂`, the closed form of the
//! `△₁` barycenter and the one-dimensional inequality for `P¹`.
//!
//! Every suite is exact. A suite fails on its first violating sample, which
//! is returned as the witness.

mod sample;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use sample::{lattice_sample, random_concave, ConcavePl};

use crate::catalog;
use crate::chow::discrete_barycenter;
use crate::error::{Error, Result};
use crate::geometry::{AffineFn2, Point2};
use crate::polytope::{lattice_points, LatticePoint, LatticeSet};
use crate::rat::Rat;
use crate::symmetry::{orbits, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimateId {
    #[serde(rename = "T-trap")]
    TTrap,
    #[serde(rename = "s-trap")]
    STrap,
    #[serde(rename = "s-trap1")]
    STrap1,
    #[serde(rename = "b+2")]
    BPlus2,
    #[serde(rename = "delta-table")]
    DeltaTable,
    #[serde(rename = "x1-closed-form")]
    X1ClosedForm,
    #[serde(rename = "p1-inequality")]
    P1Inequality,
}

impl EstimateId {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimateId::TTrap => "T-trap",
            EstimateId::STrap => "s-trap",
            EstimateId::STrap1 => "s-trap1",
            EstimateId::BPlus2 => "b+2",
            EstimateId::DeltaTable => "delta-table",
            EstimateId::X1ClosedForm => "x1-closed-form",
            EstimateId::P1Inequality => "p1-inequality",
        }
    }
}

impl std::fmt::Display for EstimateId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateStatus {
    Pass,
    Fail,
}

/// The first sample on which an estimate failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub reason: String,
    /// The offending lattice point, for pointwise checks.
    pub point: Option<[i64; 2]>,
    /// The test function as the minimum of these affine pieces.
    pub sample: Option<Vec<AffineFn2>>,
    pub lhs: Option<Rat>,
    pub rhs: Option<Rat>,
}

impl Witness {
    fn message(reason: impl Into<String>) -> Self {
        Witness { reason: reason.into(), point: None, sample: None, lhs: None, rhs: None }
    }

    fn inequality(reason: &str, g: &ConcavePl, lhs: Rat, rhs: Rat) -> Self {
        Witness {
            reason: reason.to_string(),
            point: None,
            sample: Some(g.pieces().to_vec()),
            lhs: Some(lhs),
            rhs: Some(rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimate: EstimateId,
    pub polytope: Option<String>,
    pub k: Option<i64>,
    pub samples: usize,
    pub seed: u64,
    pub status: EstimateStatus,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
    /// Only for the delta table.
    pub table: Option<DeltaScan>,
}

impl EstimateReport {
    fn new(estimate: EstimateId, polytope: Option<&str>, k: Option<i64>, samples: usize, seed: u64) -> Self {
        EstimateReport {
            estimate,
            polytope: polytope.map(str::to_string),
            k,
            samples,
            seed,
            status: EstimateStatus::Pass,
            witness: None,
            notes: Vec::new(),
            table: None,
        }
    }

    fn fail(mut self, witness: Witness) -> Self {
        self.status = EstimateStatus::Fail;
        self.witness = Some(witness);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == EstimateStatus::Pass
    }
}

/// A generator seeded from the suite seed and a per-check tag, so that suites
/// draw independent streams.
fn rng_for(seed: u64, tag: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng
}

fn points(v: &[(i64, i64)]) -> Vec<Point2> {
    v.iter().map(|&(x, y)| Point2::from_ints(x, y)).collect()
}

/// `T₀ = Conv{(0,0), (2,k−1), (0,k)}`, counterclockwise.
pub fn t0(k: i64) -> [LatticePoint; 3] {
    [LatticePoint::new(0, 0), LatticePoint::new(2, k - 1), LatticePoint::new(0, k)]
}

/// `(1/vol T)·∫_T g ≥ (g(v₁) + g(v₂) + g(v₃))/3`, with equality only when `g`
/// is affine on `T`.
pub fn check_t_trap(triangle: [LatticePoint; 3], samples: &[ConcavePl], seed: u64) -> EstimateReport {
    let mut report = EstimateReport::new(EstimateId::TTrap, None, None, samples.len(), seed);
    let mut tri: Vec<Point2> = triangle.iter().map(|p| p.to_point()).collect();
    if crate::geometry::orient2d(&tri[0], &tri[1], &tri[2]).is_negative() {
        tri.swap(1, 2);
    }
    let area = crate::geometry::polygon_area(&tri);
    if area.is_zero() {
        return report.fail(Witness::message("degenerate triangle"));
    }
    report.notes.push(format!("T = Conv{{{}, {}, {}}}", triangle[0], triangle[1], triangle[2]));
    for g in samples {
        let lhs = g.integrate(&tri) / &area;
        let rhs = tri.iter().map(|v| g.value(v)).sum::<Rat>() / Rat::from_int(3);
        if lhs < rhs {
            return report.fail(Witness::inequality("mean over T below mean at vertices", g, lhs, rhs));
        }
        if lhs == rhs && !g.is_affine_on(&tri) {
            return report.fail(Witness::inequality("equality for a function not affine on T", g, lhs, rhs));
        }
    }
    report
}

/// [`check_t_trap`] on `T₀(k)` with `count` random samples.
pub fn t_trap_suite(k: i64, count: usize, seed: u64) -> EstimateReport {
    let mut rng = rng_for(seed, 1_000 + k as u64);
    let samples: Vec<ConcavePl> = (0..count).map(|_| random_concave(&mut rng)).collect();
    let mut r = check_t_trap(t0(k), &samples, seed);
    r.k = Some(k);
    r
}

/// The standard triangulation of `k·Conv{(0,0), (3,0), (0,3)}` into unit
/// triangles, carried around by the powers of `sigma`.
pub fn basic_triangulation(k: i64, sigma: &IntMatrix, order: usize) -> Vec<[LatticePoint; 3]> {
    let n = 3 * k;
    let mut base = Vec::new();
    for i in 0..n {
        for j in 0..n - i {
            let p = |x, y| LatticePoint::new(x, y);
            base.push([p(i, j), p(i + 1, j), p(i, j + 1)]);
            if i + j < n - 1 {
                base.push([p(i + 1, j), p(i + 1, j + 1), p(i, j + 1)]);
            }
        }
    }
    let mut out = Vec::with_capacity(base.len() * order);
    let mut m = IntMatrix::IDENTITY;
    for _ in 0..order {
        out.extend(base.iter().map(|t| [m.apply(t[0]), m.apply(t[1]), m.apply(t[2])]));
        m = sigma.mul(&m);
    }
    out
}

/// `∫_{k·P} g ≥ Σ_interior g + ½·Σ_boundary g − α·g(0)` with
/// `α = (6 − ord σ)/6`, for `P = △₃` (`σ₃`, order 3) or `△₄` (`σ₄`, order 4),
/// on invariant samples vanishing at the vertices. Also checks the vertex
/// incidences of the standard triangulation: 6 at interior points other than
/// the origin, 3 at boundary points other than vertices, `ord σ` at the
/// origin.
pub fn check_s_trap(id: &str, k: i64, count: usize, seed: u64) -> Result<EstimateReport> {
    let entry = catalog::entry(id)?;
    let (sigma, order) = match entry.id {
        "X3" => (catalog::SIGMA3, 3usize),
        "X4" => (catalog::SIGMA4, 4usize),
        other => return Err(Error::UnknownPolytope(format!("{other} has no standard triangulation"))),
    };
    let mut report = EstimateReport::new(EstimateId::STrap, Some(entry.id), Some(k), count, seed);
    let alpha = Rat::new(6 - order as i64, 6);
    report.notes.push(format!("alpha = {alpha}"));
    let lattice = Arc::new(lattice_points(&entry.polytope, k)?);

    let triangles = basic_triangulation(k, &sigma, order);
    let area: Rat = triangles
        .iter()
        .map(|t| crate::geometry::polygon_area(&[t[0].to_point(), t[1].to_point(), t[2].to_point()]))
        .sum();
    if area != lattice.volume() || Rat::from_int(triangles.len() as i64) != Rat::from_int(2) * lattice.volume() {
        return Ok(report.fail(Witness::message("basic triangles do not tile the dilated polytope")));
    }
    let mut incidence = vec![0usize; lattice.len()];
    for t in &triangles {
        for v in t {
            match lattice.index_of(*v) {
                Some(i) => incidence[i] += 1,
                None => return Ok(report.fail(Witness::message(format!("triangle vertex {v} outside")))),
            }
        }
    }
    let vertices = lattice.vertex_indices();
    for (i, p) in lattice.points().iter().enumerate() {
        let expected = if *p == LatticePoint::new(0, 0) {
            Some(order)
        } else if vertices.contains(&i) {
            None
        } else if lattice.is_boundary(i) {
            Some(3)
        } else {
            Some(6)
        };
        if let Some(e) = expected {
            if incidence[i] != e {
                let mut w = Witness::message(format!("vertex of {} basic triangles, expected {e}", incidence[i]));
                w.point = Some([p.x, p.y]);
                return Ok(report.fail(w));
            }
        }
    }

    let partition = orbits(&entry.weyl, &lattice)?;
    let polygon = lattice.dilated().vertex_points();
    let origin = lattice.index_of(LatticePoint::new(0, 0)).expect("origin is a lattice point");
    let mut rng = rng_for(seed, 2_000 + 100 * order as u64 + k as u64);
    for _ in 0..count {
        let (g, values) = lattice_sample(&mut rng, &lattice, &partition)?;
        let lhs = g.integrate(&polygon);
        let mut rhs = -&alpha * values.get(origin);
        for (i, v) in values.values().iter().enumerate() {
            rhs += if lattice.is_boundary(i) { v / Rat::from_int(2) } else { v.clone() };
        }
        if lhs < rhs {
            return Ok(report.fail(Witness::inequality("integral below the weighted lattice sum", &g, lhs, rhs)));
        }
    }
    Ok(report)
}

/// `δ_k` on `k·△₂`: 1 at the origin, −1/6 at `(0, ±k)`, 1/6 at `(±2k, 0)`.
pub fn delta_k(k: i64, p: LatticePoint) -> Rat {
    match (p.x, p.y) {
        (0, 0) => Rat::one(),
        (0, y) if y.abs() == k => Rat::new(-1, 6),
        (x, 0) if x.abs() == 2 * k => Rat::new(1, 6),
        _ => Rat::zero(),
    }
}

/// `(δ̃_k − η)` on the five classes of lattice points of `k·△₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTable {
    pub k: i64,
    pub interior: Rat,
    /// `(±2i, ±(k−i))` with `i ≠ 0, 1, k`.
    pub generic_boundary: Rat,
    /// `(±2k, 0)`.
    pub long_vertex: Rat,
    /// `(±2, ±(k−1))`.
    pub next_to_short_vertex: Rat,
    /// `(0, ±k)`.
    pub short_vertex: Rat,
}

impl DeltaTable {
    pub fn closed_form(k: i64) -> Self {
        let r = |n: i64, d: i64| Rat::new(n, d);
        DeltaTable {
            k,
            interior: Rat::zero(),
            generic_boundary: r(1, 6) - r(1, 6 * k),
            long_vertex: r(1, 3) - r(1, 6 * k),
            next_to_short_vertex: r(1, 12) - r(5, 24 * k),
            short_vertex: r(1, 6) - r(5, 12 * k) - r(1, 6 * k * k),
        }
    }

    pub fn entries(&self) -> [&Rat; 5] {
        [&self.interior, &self.generic_boundary, &self.long_vertex, &self.next_to_short_vertex, &self.short_vertex]
    }

    pub fn nonnegative(&self) -> bool {
        self.entries().iter().all(|v| !v.is_negative())
    }
}

/// The coefficients `η(p)` of the lower bound assembled from the trapezoid
/// estimates on `T₀, …, T_{k−1}` and their images, with `b = 4k` and
/// `|W₂| = 4`.
fn eta(k: i64, lattice: &LatticeSet, i: usize) -> Rat {
    let p = lattice.points()[i];
    let b = Rat::from_int(4 * k);
    let w = Rat::from_int(4);
    let kr = Rat::from_int(k);
    let mut c = Rat::zero();
    if p == LatticePoint::new(0, 0) {
        c += &b / Rat::from_int(3) - &w / (Rat::from_int(3) * &kr);
    }
    if lattice.is_boundary(i) {
        c += Rat::new(2, 3);
    }
    if p.x.abs() == 2 && p.y.abs() == k - 1 {
        c += Rat::new(1, 6);
    }
    if p.x == 0 && p.y.abs() == k {
        c += Rat::new(2, 3) / &kr - Rat::new(1, 3);
    }
    (&b + Rat::from_int(2)) / (Rat::from_int(2) * &b) * c
}

/// `δ̃_k − η` computed point by point on `k·△₂` and grouped into the five
/// classes in [`DeltaTable`] order. A class without lattice points is `None`;
/// the whole result is `None` if some class is not constant. Needs `k ≥ 2` so
/// that the classes are disjoint.
pub fn delta_classes_from_definitions(k: i64) -> Result<Option<[Option<Rat>; 5]>> {
    let lattice = lattice_points(&catalog::delta2(), k)?;
    let mut classes: [Option<Rat>; 5] = Default::default();
    for (i, p) in lattice.points().iter().enumerate() {
        if *p == LatticePoint::new(0, 0) {
            continue;
        }
        let tilde = if lattice.is_boundary(i) { Rat::new(1, 2) } else { Rat::zero() } + delta_k(k, *p);
        let value = tilde - eta(k, &lattice, i);
        let class = if !lattice.is_boundary(i) {
            0
        } else if p.y == 0 {
            2
        } else if p.x == 0 {
            4
        } else if p.x.abs() == 2 {
            3
        } else {
            1
        };
        match &classes[class] {
            None => classes[class] = Some(value),
            Some(v) if *v == value => {}
            Some(_) => return Ok(None),
        }
    }
    Ok(Some(classes))
}

/// Whether every populated class of [`delta_classes_from_definitions`] equals
/// its closed form.
pub fn delta_table_matches(k: i64) -> Result<bool> {
    let Some(classes) = delta_classes_from_definitions(k)? else { return Ok(false) };
    let closed = DeltaTable::closed_form(k);
    let matches = classes.iter().zip(closed.entries()).all(|(c, e)| c.as_ref().is_none_or(|v| v == e));
    Ok(matches)
}

/// Closed forms for `k = 1..=k_max` and the least `k` from which every entry
/// stays nonnegative through `k_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaScan {
    pub rows: Vec<DeltaTable>,
    pub threshold: Option<i64>,
}

pub fn delta_scan(k_max: i64) -> DeltaScan {
    let rows: Vec<DeltaTable> = (1..=k_max).map(DeltaTable::closed_form).collect();
    let mut threshold = None;
    for row in rows.iter().rev() {
        if !row.nonnegative() {
            break;
        }
        threshold = Some(row.k);
    }
    DeltaScan { rows, threshold }
}

/// The chain of estimates for `△₂` at `k`: the sum of `δ_k`, `(s-trap1)` and
/// `(b+2)` on invariant samples, and the delta table against its
/// point-by-point definition.
pub fn check_x2_chain(k: i64, count: usize, seed: u64) -> Result<Vec<EstimateReport>> {
    if k < 1 {
        return Err(Error::InvalidDilation(k));
    }
    let entry = catalog::entry("X2")?;
    let lattice = Arc::new(lattice_points(&entry.polytope, k)?);
    let partition = orbits(&entry.weyl, &lattice)?;
    let polygon = lattice.dilated().vertex_points();
    let b = Rat::from_int(lattice.boundary_count() as i64);
    let delta: Vec<Rat> = lattice.points().iter().map(|&p| delta_k(k, p)).collect();
    let note = "delta_k(0,0) = 1, so that delta_k sums to 1 and constants give equality".to_string();

    let mut s1 = EstimateReport::new(EstimateId::STrap1, Some("X2"), Some(k), count, seed);
    s1.notes.push(note.clone());
    let mut b2 = EstimateReport::new(EstimateId::BPlus2, Some("X2"), Some(k), count, seed);
    b2.notes.push(note);
    let total: Rat = delta.iter().sum();
    if total != Rat::one() {
        let w = Witness::message(format!("delta_k sums to {total}"));
        s1 = s1.fail(w.clone());
        b2 = b2.fail(w);
    }

    let fan: Vec<Vec<Point2>> = (0..k).map(|i| points(&[(0, 0), (2 * i, k - i), (2 * i + 2, k - i - 1)])).collect();
    let t0_area = crate::geometry::polygon_area(&fan[0]);
    let order = Rat::from_int(entry.weyl.order() as i64);
    let factor = (&b + Rat::from_int(2)) * &order / (Rat::from_int(2) * &b * &t0_area);
    let mut rng = rng_for(seed, 3_000 + k as u64);
    for _ in 0..count {
        if !s1.passed() && !b2.passed() {
            break;
        }
        let (g, values) = lattice_sample(&mut rng, &lattice, &partition)?;
        let integral = g.integrate(&polygon);
        let rhs: Rat = values
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let half = if lattice.is_boundary(i) { v / Rat::from_int(2) } else { Rat::zero() };
                half + &delta[i] * v
            })
            .sum();
        let lhs1 = values.sum() - &integral;
        if s1.passed() && lhs1 > rhs {
            s1 = s1.fail(Witness::inequality("lattice sum minus integral exceeds the bound", &g, lhs1, rhs.clone()));
        }
        let lhs2 = &factor * fan.iter().map(|t| g.integrate(t)).sum::<Rat>();
        if b2.passed() && lhs2 < rhs {
            b2 = b2.fail(Witness::inequality("scaled fan integral below the bound", &g, lhs2, rhs));
        }
    }

    let mut table = EstimateReport::new(EstimateId::DeltaTable, Some("X2"), Some(k), 0, seed);
    let scan = delta_scan(50);
    if k >= 2
        && !delta_table_matches(k)? {
            table = table.fail(Witness::message("point-by-point values differ from the closed forms"));
        }
    if k >= 2 {
        let sign = if DeltaTable::closed_form(k).nonnegative() { "nonnegative" } else { "not all nonnegative" };
        table.notes.push(format!("entries at k = {k} are {sign}"));
    }
    if let Some(t) = scan.threshold {
        table.notes.push(format!("all entries nonnegative from k = {t} (scanned k = 1..50)"));
    }
    table.table = Some(scan);
    Ok(vec![s1, b2, table])
}

/// The lattice average of `k·△₁` is `4·(−k, −k)/(9k² + 3k + 2)` and
/// `χ(k) = (9k² + 3k + 2)/2` for `k = 1..=k_max`.
pub fn check_x1_closed_form(k_max: i64, seed: u64) -> Result<EstimateReport> {
    let report = EstimateReport::new(EstimateId::X1ClosedForm, Some("X1"), Some(k_max), k_max as usize, seed);
    let p = catalog::delta1();
    for k in 1..=k_max {
        let lattice = lattice_points(&p, k)?;
        let q = 9 * k * k + 3 * k + 2;
        let expected = Point2::new(Rat::new(-4 * k, q), Rat::new(-4 * k, q));
        let got = discrete_barycenter(&lattice);
        if got != expected {
            return Ok(report.fail(Witness::message(format!("k = {k}: barycenter {got:?}, expected {expected:?}"))));
        }
        if lattice.chi() != Rat::new(q, 2) {
            return Ok(report.fail(Witness::message(format!("k = {k}: {} lattice points", lattice.len()))));
        }
    }
    Ok(report)
}

/// `(1/k)·(½g(0) + g(1) + … + g(k−1) + ½g(k)) ≥ (1/(k+1))·Σ g(i)` for concave
/// `g ≥ 0` on `[0, k]`.
pub fn check_p1(k: i64, count: usize, seed: u64) -> Result<EstimateReport> {
    if k < 1 {
        return Err(Error::InvalidDilation(k));
    }
    let report = EstimateReport::new(EstimateId::P1Inequality, Some("P1"), Some(k), count, seed);
    let mut rng = rng_for(seed, 4_000 + k as u64);
    for _ in 0..count {
        let n = rng.gen_range(3..=6);
        let pieces: Vec<AffineFn2> = (0..n)
            .map(|_| AffineFn2::new(Rat::from_int(rng.gen_range(-5..=5)), Rat::zero(), Rat::from_int(rng.gen_range(-5..=5))))
            .collect();
        // Shift so that the smaller endpoint value, the minimum on [0, k], is 0.
        let g = ConcavePl::new(pieces);
        let low = g.at(LatticePoint::new(0, 0)).min(g.at(LatticePoint::new(k, 0)));
        let g = g.add_constant(&-low);
        let v: Vec<Rat> = (0..=k).map(|i| g.at(LatticePoint::new(i, 0))).collect();
        let trapezoid: Rat = v.iter().sum::<Rat>() - (&v[0] + &v[k as usize]) / Rat::from_int(2);
        let lhs = trapezoid / Rat::from_int(k);
        let rhs = v.iter().sum::<Rat>() / Rat::from_int(k + 1);
        if lhs < rhs {
            return Ok(report.fail(Witness::inequality("trapezoid mean below lattice mean", &g, lhs, rhs)));
        }
    }
    Ok(report)
}

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 9] =
    ["t-trap", "s-trap", "s-trap1", "b+2", "delta-table", "x2-chain", "x1-closed-form", "p1", "all"];

/// Default sample counts and dilations for each suite.
pub fn run_suite(name: &str, ks: Option<&[i64]>, seed: u64) -> Result<Vec<EstimateReport>> {
    let pick = |default: &[i64]| ks.map(<[i64]>::to_vec).unwrap_or_else(|| default.to_vec());
    let mut out = Vec::new();
    match name {
        "t-trap" => {
            for k in pick(&[1, 2, 3, 4, 5, 6]) {
                out.push(t_trap_suite(k, 200, seed));
            }
        }
        "s-trap" => {
            for k in pick(&[1, 2]) {
                for id in ["X3", "X4"] {
                    out.push(check_s_trap(id, k, 100, seed)?);
                }
            }
        }
        "s-trap1" | "b+2" | "delta-table" => {
            let wanted = match name {
                "s-trap1" => EstimateId::STrap1,
                "b+2" => EstimateId::BPlus2,
                _ => EstimateId::DeltaTable,
            };
            for k in pick(&[2, 3]) {
                out.extend(check_x2_chain(k, 100, seed)?.into_iter().filter(|r| r.estimate == wanted));
            }
        }
        "x2-chain" => {
            for k in pick(&[2, 3]) {
                out.extend(check_x2_chain(k, 100, seed)?);
            }
        }
        "x1-closed-form" => {
            for k in pick(&[20]) {
                out.push(check_x1_closed_form(k, seed)?);
            }
        }
        "p1" => {
            for k in pick(&(1..=12).collect::<Vec<_>>()) {
                out.push(check_p1(k, 500, seed)?);
            }
        }
        "all" => {
            for s in ["t-trap", "s-trap", "x2-chain", "x1-closed-form", "p1"] {
                out.extend(run_suite(s, ks, seed)?);
            }
        }
        other => return Err(Error::Parse(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
    Ok(out)
}
