//! Deciding Chow polystability by minimizing the Chow weight with cutting
//! planes.
//!
//! The weight `J` is homogeneous and invariant under adding affine functions
//! (once the barycenter test passes), so it is minimized over heights
//! orthogonal to the affine functions and bounded by a box.
//! `J` itself is not convex in raw heights, but the surrogate
//! `F(φ) = (1/vol)·∫ f_φ − (1/χ)·Σ φ(x)` is: it is the maximum, over
//! triangulations with lattice vertices, of the linear functions
//! `φ ↦ (1/vol)·Σ area·mean(φ) − (1/χ)·Σ φ`. It satisfies `F ≥ J`, agrees with
//! `J` on consistent heights, and has the same minimum, so Kelley's method on
//! `F` finds `min J` exactly.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chow::{barycenter_report, chow_weight, chow_weight_oracle, surrogate_weight, BarycenterReport};
use crate::envelope::{concave_envelope, envelope_at_lattice, project_consistent, HeightVector};
use crate::error::{Error, Result};
use crate::geometry::AffineFn2;
use crate::lp::{solve_lp, Constraint, LinearProgram, LpStatus, VarBound};
use crate::polytope::{lattice_points, LatticePoint, LatticeSet, Polytope2D};
use crate::rat::Rat;
use crate::symmetry::{orbits, OrbitPartition, WeylGroup};

/// Default cap on the number of cutting planes.
pub const DEFAULT_MAX_ITERS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ChowUnstableBarycenter,
    ChowPolystable,
    ChowNotPolystable,
    ChowSemistableBoundary,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ChowUnstableBarycenter => "chow_unstable_barycenter",
            Verdict::ChowPolystable => "chow_polystable",
            Verdict::ChowNotPolystable => "chow_not_polystable",
            Verdict::ChowSemistableBoundary => "chow_semistable_boundary",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One lattice value of a height vector, in report form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightEntry {
    pub x: [i64; 2],
    pub v: Rat,
}

/// A height vector with its exact Chow weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub values: Vec<HeightEntry>,
    #[serde(rename = "J")]
    pub j: Rat,
}

impl Certificate {
    pub fn from_heights(phi: &HeightVector, j: Rat) -> Self {
        let values = phi
            .lattice()
            .points()
            .iter()
            .zip(phi.values())
            .map(|(p, v)| HeightEntry { x: [p.x, p.y], v: v.clone() })
            .collect();
        Certificate { values, j }
    }

    /// Rebuilds the height vector on `lattice`; every lattice point must be
    /// listed exactly once.
    pub fn to_heights(&self, lattice: Arc<LatticeSet>) -> Result<HeightVector> {
        heights_from_entries(lattice, &self.values)
    }
}

/// Builds a height vector from `(point, value)` entries covering every
/// lattice point exactly once.
pub fn heights_from_entries(lattice: Arc<LatticeSet>, entries: &[HeightEntry]) -> Result<HeightVector> {
    let mut values: Vec<Option<Rat>> = vec![None; lattice.len()];
    for e in entries {
        let p = LatticePoint::new(e.x[0], e.x[1]);
        let i = lattice
            .index_of(p)
            .ok_or_else(|| Error::Parse(format!("point {p} is not a lattice point of the dilated polytope")))?;
        if values[i].replace(e.v.clone()).is_some() {
            return Err(Error::Parse(format!("point {p} listed twice")));
        }
    }
    let missing = values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(Error::LengthMismatch { expected: lattice.len(), got: lattice.len() - missing });
    }
    HeightVector::new(lattice, values.into_iter().map(Option::unwrap).collect())
}

/// How the reported numbers are to be read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub lattice_sum: String,
    pub j_min: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            lattice_sum: "sum over all lattice points of the dilated polytope k*P, of envelope values f(x)".into(),
            j_min: "exact minimum of J over the normalized box when the barycenter test passes; \
                    otherwise J of the affine certificate (J is then unbounded below)"
                .into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub polytope: String,
    pub k: i64,
    pub barycenter: BarycenterReport,
    pub j_min: Rat,
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    pub iterations: usize,
    pub used_weyl_reduction: bool,
    pub conventions: Conventions,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Restrict to heights invariant under the group.
    pub weyl: bool,
    pub max_iters: usize,
    /// Half-width of the box on free variables.
    pub box_bound: Rat,
    /// Seed for the random cut-soundness samples.
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { weyl: true, max_iters: DEFAULT_MAX_ITERS, box_bound: Rat::one(), seed: 0 }
    }
}

/// The normalization used by the solver. Each free variable sets the height
/// on a group of lattice points (a single point, or an orbit under the
/// symmetry reduction). Heights are required to be orthogonal to the affine
/// functions, `Σ φ(x)·(1, x₁, x₂) = 0`, and bounded by `box_bound` at every
/// lattice point. Both conditions are invariant under the symmetry group, so
/// averaging a minimizer over the group keeps it feasible and the reduced and
/// unreduced problems have the same minimum.
#[derive(Clone, Debug)]
pub struct GaugeFrame {
    pub variables: Vec<Vec<usize>>,
    /// Orthogonality rows restricted to the variables; identically zero rows
    /// are dropped.
    pub orthogonality: Vec<Vec<Rat>>,
    pub box_bound: Rat,
}

impl GaugeFrame {
    pub fn new(lattice: &LatticeSet, orbits: &OrbitPartition, box_bound: Rat) -> Self {
        let variables = orbits.members.clone();
        let pts = lattice.points();
        let rows: [fn(LatticePoint) -> i64; 3] = [|_| 1, |p| p.x, |p| p.y];
        let orthogonality = rows
            .iter()
            .map(|f| variables.iter().map(|m| Rat::from_int(m.iter().map(|&i| f(pts[i])).sum())).collect::<Vec<_>>())
            .filter(|row| row.iter().any(|v| !v.is_zero()))
            .collect();
        GaugeFrame { variables, orthogonality, box_bound }
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn expand(&self, lattice: &Arc<LatticeSet>, y: &[Rat]) -> HeightVector {
        let mut values = vec![Rat::zero(); lattice.len()];
        for (members, v) in self.variables.iter().zip(y) {
            for &i in members {
                values[i] = v.clone();
            }
        }
        HeightVector::new(lattice.clone(), values).expect("frame matches lattice")
    }

    /// Whether `y` satisfies the orthogonality rows and the box.
    pub fn admits(&self, y: &[Rat]) -> bool {
        self.orthogonality.iter().all(|row| row.iter().zip(y).map(|(a, b)| a * b).sum::<Rat>().is_zero())
            && y.iter().all(|v| v.abs() <= self.box_bound)
    }

    /// Restricts a full-lattice linear functional to the frame variables.
    fn restrict(&self, full: &[Rat]) -> Vec<Rat> {
        self.variables.iter().map(|m| m.iter().map(|&i| &full[i]).sum()).collect()
    }
}

/// A cut: the linear functional of one subdivision's fan triangulation, on
/// the full lattice and restricted to the frame.
struct Cut {
    full: Vec<Rat>,
    reduced: Vec<Rat>,
}

struct Cuts {
    lattice: Arc<LatticeSet>,
    frame: GaugeFrame,
    cuts: Vec<Cut>,
    seen: BTreeSet<Vec<Rat>>,
}

impl Cuts {
    /// Adds the cut of `φ`'s envelope; returns its value at `φ`, which equals
    /// the surrogate `F(φ)`.
    fn add_from(&mut self, phi: &HeightVector) -> Result<bool> {
        let sub = concave_envelope(phi)?;
        let vol = self.lattice.volume();
        let chi_inv = self.lattice.chi().recip();
        let full: Vec<Rat> = sub.interpolation_weights().into_iter().map(|w| w / &vol - &chi_inv).collect();
        let reduced = self.frame.restrict(&full);
        if !self.seen.insert(reduced.clone()) {
            return Ok(false);
        }
        self.cuts.push(Cut { full, reduced });
        Ok(true)
    }

    fn max_at(&self, y: &[Rat]) -> Rat {
        self.cuts
            .iter()
            .map(|c| c.reduced.iter().zip(y).map(|(a, b)| a * b).sum::<Rat>())
            .max()
            .expect("at least one cut")
    }

    /// `min_y max_r g_r·y` over the box, via the dual program
    /// `min B·Σ(u+v)` s.t. `Σλ = 1`, `Σ λ_r g_r − u + v = 0`.
    fn master(&self) -> Result<(Rat, Vec<Rat>)> {
        let (lp, n) = self.dual_program();
        let sol = solve_lp(&lp)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Invariant(format!("master program is {:?}", sol.status)));
        }
        let t = -sol.objective_value;
        let y: Vec<Rat> = sol.dual[1..=n].to_vec();
        if self.max_at(&y) != t || !self.frame.admits(&y) {
            return Err(Error::Invariant("master program dual does not attain its value".into()));
        }
        Ok((t, y))
    }

    /// A nonzero `y` with `g_r·y ≤ 0` for every cut and `E·y = 0`, scaled to
    /// the box, or `None` if only `y = 0` qualifies.
    ///
    /// That set is `{0}` exactly when the cuts together with the span of the
    /// orthogonality rows generate the whole space, that is, when some
    /// `λ ≥ 1` has `Σ λ_r g_r` in the span of the rows and the cuts and rows
    /// have full rank. An infeasible `λ` program yields `y` from its Farkas
    /// multipliers; a rank deficit yields `y` from the null space.
    fn flat_direction(&self) -> Result<Option<Vec<Rat>>> {
        let n = self.frame.dim();
        let r = self.cuts.len();
        let e = self.frame.orthogonality.len();
        let constraints = (0..n)
            .map(|j| {
                let mut row: Vec<Rat> = self.cuts.iter().map(|c| c.reduced[j].clone()).collect();
                row.extend(self.frame.orthogonality.iter().map(|o| o[j].clone()));
                Constraint::eq(row, Rat::zero())
            })
            .collect();
        let mut bounds = vec![VarBound { lo: Some(Rat::one()), hi: None }; r];
        bounds.extend(std::iter::repeat_n(VarBound::free(), e));
        let lp = LinearProgram { objective: vec![Rat::zero(); r + e], constraints, bounds };
        let sol = solve_lp(&lp)?;
        let y = match sol.status {
            LpStatus::Infeasible => {
                let farkas = sol.farkas.expect("infeasible program has a Farkas certificate");
                farkas.iter().map(|v| -v).collect()
            }
            LpStatus::Optimal => {
                let rows: Vec<Vec<Rat>> =
                    self.cuts.iter().map(|c| c.reduced.clone()).chain(self.frame.orthogonality.iter().cloned()).collect();
                match null_vector(rows, n) {
                    Some(y) => y,
                    None => return Ok(None),
                }
            }
            LpStatus::Unbounded => return Err(Error::Invariant("feasibility program is unbounded".into())),
        };
        let scale = y.iter().map(Rat::abs).max().filter(|m| m.is_positive());
        let Some(scale) = scale else {
            return Err(Error::Invariant("flat direction is zero".into()));
        };
        let y: Vec<Rat> = y.iter().map(|v| v * &self.frame.box_bound / &scale).collect();
        if self.max_at(&y).is_positive() || !self.frame.admits(&y) {
            return Err(Error::Invariant("flat direction violates a cut".into()));
        }
        Ok(Some(y))
    }

    /// Columns: `λ_r ≥ 0` per cut, `u_j, v_j ≥ 0` per variable and a free
    /// `μ_e` per orthogonality row. Row `j` reads
    /// `Σ λ_r g_rj + Σ μ_e E_ej − u_j + v_j = 0`; its multipliers are the
    /// primal heights.
    fn dual_program(&self) -> (LinearProgram, usize) {
        let n = self.frame.dim();
        let r = self.cuts.len();
        let e = self.frame.orthogonality.len();
        let b = &self.frame.box_bound;
        let cols = r + 2 * n + e;
        let mut objective = vec![Rat::zero(); cols];
        for c in objective.iter_mut().skip(r).take(2 * n) {
            *c = b.clone();
        }
        let mut simplex = vec![Rat::zero(); cols];
        for v in simplex.iter_mut().take(r) {
            *v = Rat::one();
        }
        let mut constraints = vec![Constraint::eq(simplex, Rat::one())];
        for j in 0..n {
            let mut row = vec![Rat::zero(); cols];
            for (q, cut) in self.cuts.iter().enumerate() {
                row[q] = cut.reduced[j].clone();
            }
            row[r + j] = -Rat::one();
            row[r + n + j] = Rat::one();
            for (q, orth) in self.frame.orthogonality.iter().enumerate() {
                row[r + 2 * n + q] = orth[j].clone();
            }
            constraints.push(Constraint::eq(row, Rat::zero()));
        }
        let mut bounds = vec![VarBound::nonneg(); r + 2 * n];
        bounds.extend(std::iter::repeat_n(VarBound::free(), e));
        (LinearProgram { objective, constraints, bounds }, n)
    }
}

/// A nonzero solution of `rows · y = 0` in `n` unknowns, if one exists.
fn null_vector(mut rows: Vec<Vec<Rat>>, n: usize) -> Option<Vec<Rat>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][c].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..n {
                    let d = &f * &rows[rank][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut y = vec![Rat::zero(); n];
    y[free] = Rat::one();
    for (i, &c) in pivots.iter().enumerate() {
        y[c] = -&rows[i][free];
    }
    Some(y)
}

/// Decides Chow polystability of `(P, k)` with the symmetry group `group`.
pub fn decide_stability(p: &Polytope2D, group: &WeylGroup, k: i64, opts: &SolveOptions) -> Result<StabilityReport> {
    if !opts.box_bound.is_positive() {
        return Err(Error::Invariant("box bound must be positive".into()));
    }
    let lattice = Arc::new(lattice_points(p, k)?);
    let barycenter = barycenter_report(&lattice);
    if !barycenter.passes {
        return barycenter_failure(&lattice, barycenter);
    }

    let effective = if opts.weyl { group.clone() } else { WeylGroup::trivial() };
    let partition = orbits(&effective, &lattice)?;
    let frame = GaugeFrame::new(&lattice, &partition, opts.box_bound.clone());
    let n = frame.dim();
    let mut cuts = Cuts { lattice: lattice.clone(), frame, cuts: Vec::new(), seen: BTreeSet::new() };

    cuts.add_from(&HeightVector::zeros(lattice.clone()))?;
    for i in 0..n {
        for s in [1, -1] {
            let mut y = vec![Rat::zero(); n];
            y[i] = Rat::from_int(s);
            cuts.add_from(&cuts.frame.expand(&lattice, &y))?;
        }
    }

    let mut iterations = 0;
    let mut upper: Option<Rat> = None;
    let (t, y) = loop {
        let (t, y) = cuts.master()?;
        let phi = cuts.frame.expand(&lattice, &y);
        let f = surrogate_weight(&phi)?;
        if upper.as_ref().is_none_or(|u| f < *u) {
            upper = Some(f.clone());
        }
        if f == t {
            break (t, y);
        }
        if f < t {
            return Err(Error::Invariant(format!("surrogate {f} below the cutting-plane bound {t}")));
        }
        if iterations >= opts.max_iters {
            return Err(Error::MaxIterations { iterations, lower: Box::new(t), upper: Box::new(upper.unwrap_or(f)) });
        }
        if !cuts.add_from(&phi)? {
            return Err(Error::Invariant("separating cut already present".into()));
        }
        iterations += 1;
    };

    let report = |j_min: Rat, verdict: Verdict, certificate: Option<Certificate>, iterations: usize| StabilityReport {
        polytope: p.label(),
        k,
        barycenter: barycenter.clone(),
        j_min,
        verdict,
        certificate,
        iterations,
        used_weyl_reduction: opts.weyl && !group.is_trivial(),
        conventions: Conventions::default(),
    };

    if t.is_negative() {
        let cert = project_consistent(&cuts.frame.expand(&lattice, &y))?;
        let j = chow_weight(&cert)?.j;
        if j != t {
            return Err(Error::Invariant(format!("certificate weight {j} differs from minimum {t}")));
        }
        check_cut_soundness(&cuts, opts.seed)?;
        return Ok(report(t, Verdict::ChowNotPolystable, Some(Certificate::from_heights(&cert, j)), iterations));
    }
    if t.is_positive() {
        return Err(Error::Invariant("minimum of a homogeneous weight is positive".into()));
    }

    // The minimum is zero. Look for a nonzero direction on which the cuts
    // (and then the true surrogate) vanish.
    while let Some(y) = cuts.flat_direction()? {
        let phi = cuts.frame.expand(&lattice, &y);
        let f = surrogate_weight(&phi)?;
        if f.is_zero() {
            let cert = project_consistent(&phi)?;
            let j = chow_weight(&cert)?.j;
            if !j.is_zero() {
                return Err(Error::Invariant("flat direction has nonzero weight".into()));
            }
            check_cut_soundness(&cuts, opts.seed)?;
            return Ok(report(Rat::zero(), Verdict::ChowSemistableBoundary, Some(Certificate::from_heights(&cert, j)), iterations));
        }
        if f.is_negative() {
            return Err(Error::Invariant("negative surrogate after a zero minimum".into()));
        }
        if iterations >= opts.max_iters {
            return Err(Error::MaxIterations { iterations, lower: Box::new(Rat::zero()), upper: Box::new(Rat::zero()) });
        }
        if !cuts.add_from(&phi)? {
            return Err(Error::Invariant("separating cut already present".into()));
        }
        iterations += 1;
    }
    check_cut_soundness(&cuts, opts.seed)?;
    Ok(report(Rat::zero(), Verdict::ChowPolystable, None, iterations))
}

/// Affine certificate for a failed barycenter test: among `a·x` with
/// `a ∈ {−1, 0, 1}²`, the one of smallest weight.
fn barycenter_failure(lattice: &Arc<LatticeSet>, barycenter: BarycenterReport) -> Result<StabilityReport> {
    let mut best: Option<(Rat, HeightVector)> = None;
    for a1 in [-1, 0, 1] {
        for a2 in [-1, 0, 1] {
            if a1 == 0 && a2 == 0 {
                continue;
            }
            let l = AffineFn2::new(Rat::from_int(a1), Rat::from_int(a2), Rat::zero());
            let phi = HeightVector::affine(lattice.clone(), &l);
            let j = chow_weight(&phi)?.j;
            if best.as_ref().is_none_or(|(b, _)| j < *b) {
                best = Some((j, phi));
            }
        }
    }
    let (j, phi) = best.expect("eight candidates");
    if !j.is_negative() {
        return Err(Error::Invariant("failed barycenter test without a negative affine weight".into()));
    }
    Ok(StabilityReport {
        polytope: lattice.polytope().label(),
        k: lattice.k(),
        barycenter,
        j_min: j.clone(),
        verdict: Verdict::ChowUnstableBarycenter,
        certificate: Some(Certificate::from_heights(&phi, j)),
        iterations: 0,
        used_weyl_reduction: false,
        conventions: Conventions::default(),
    })
}

/// Every cut is a lower bound for the surrogate on arbitrary heights and
/// for `J` on consistent heights.
fn check_cut_soundness(cuts: &Cuts, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lattice = &cuts.lattice;
    for _ in 0..4 {
        let values = (0..lattice.len()).map(|_| Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
        let phi = HeightVector::new(lattice.clone(), values)?;
        let f = surrogate_weight(&phi)?;
        let psi = envelope_at_lattice(&concave_envelope(&phi)?);
        let j = chow_weight(&psi)?.j;
        for cut in &cuts.cuts {
            let at = |h: &HeightVector| cut.full.iter().zip(h.values()).map(|(a, b)| a * b).sum::<Rat>();
            if at(&phi) > f || at(&psi) > j {
                return Err(Error::Invariant("cut exceeds the weight at a sample".into()));
            }
        }
    }
    Ok(())
}

/// Recomputes `J(φ)` through the envelope and, after rescaling to integral
/// nonnegative heights, through the solid under the graph.
pub fn verify_certificate(phi: &HeightVector) -> Result<Rat> {
    let j = chow_weight(phi)?.j;
    let psi = project_consistent(phi)?;
    if chow_weight(&psi)?.j != j {
        return Err(Error::CertificateInvalid("weight changes under projection".into()));
    }
    let den = psi
        .values()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, v| num_integer::Integer::lcm(&acc, &v.denom()));
    let scale = Rat::from(den);
    let scaled = psi.scale(&scale);
    let shift = scaled.min_value();
    let integral = scaled.map(|v| v - &shift);
    let oracle = chow_weight_oracle(&integral).map_err(|e| match e {
        Error::OracleMismatch(m) => Error::CertificateInvalid(m),
        other => other,
    })?;
    if oracle.j != &j * &scale {
        return Err(Error::CertificateInvalid(format!(
            "envelope gives {j}, graph solid gives {} at scale {scale}",
            oracle.j
        )));
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn frame_rows_without_symmetry() {
        let l = lattice_points(&catalog::delta3(), 1).unwrap();
        let o = orbits(&WeylGroup::trivial(), &l).unwrap();
        let f = GaugeFrame::new(&l, &o, Rat::one());
        assert_eq!(f.dim(), l.len());
        assert_eq!(f.orthogonality.len(), 3);
        let affine = HeightVector::affine(Arc::new(l), &AffineFn2::new(Rat::one(), Rat::zero(), Rat::zero()));
        assert!(!f.admits(affine.values()));
    }

    #[test]
    fn frame_keeps_only_constant_row_with_symmetry() {
        for id in ["X2", "X3", "X4"] {
            let e = catalog::entry(id).unwrap();
            let l = lattice_points(&e.polytope, 1).unwrap();
            let o = orbits(&e.weyl, &l).unwrap();
            let f = GaugeFrame::new(&l, &o, Rat::one());
            assert_eq!(f.dim(), o.len());
            assert_eq!(f.orthogonality.len(), 1, "{id}");
            let sizes: Vec<Rat> = o.members.iter().map(|m| Rat::from_int(m.len() as i64)).collect();
            assert_eq!(f.orthogonality[0], sizes);
        }
    }

    #[test]
    fn certificates_of_simple_heights() {
        let l = Arc::new(lattice_points(&catalog::delta1(), 1).unwrap());
        let f = AffineFn2::new(Rat::from_int(-1), Rat::from_int(-1), Rat::zero());
        assert_eq!(verify_certificate(&HeightVector::affine(l, &f)).unwrap(), Rat::new(-4, 7));
        let l3 = Arc::new(lattice_points(&catalog::delta3(), 1).unwrap());
        let g = AffineFn2::new(Rat::new(1, 2), Rat::from_int(3), Rat::from_int(-1));
        assert_eq!(verify_certificate(&HeightVector::affine(l3.clone(), &g)).unwrap(), Rat::zero());
        assert_eq!(verify_certificate(&HeightVector::zeros(l3)).unwrap(), Rat::zero());
    }

    #[test]
    fn delta1_reports_barycenter_failure() {
        let e = catalog::entry("X1").unwrap();
        for k in 1..=3 {
            let r = decide_stability(&e.polytope, &e.weyl, k, &SolveOptions::default()).unwrap();
            assert_eq!(r.verdict, Verdict::ChowUnstableBarycenter);
            assert_eq!(r.j_min, Rat::new(-8 * k, 9 * k * k + 3 * k + 2));
        }
    }

    #[test]
    fn small_polystable_cases() {
        for id in ["X3", "X4"] {
            let e = catalog::entry(id).unwrap();
            let r = decide_stability(&e.polytope, &e.weyl, 1, &SolveOptions::default()).unwrap();
            assert_eq!(r.verdict, Verdict::ChowPolystable, "{id}");
            assert_eq!(r.j_min, Rat::zero());
        }
    }
}
