//! Exact linear programming over the rationals.
//!
//! A dense two-phase tableau simplex. The entering column has the most
//! negative reduced cost; after a run of degenerate pivots the rule switches
//! to Bland's smallest-index rule until the objective moves again, which rules
//! out cycling. Every answer carries a
//! certificate that is checked exactly before it is returned: primal and dual
//! feasibility, complementary slackness and strong duality for optimal
//! solutions, a Farkas row combination for infeasible ones and an improving
//! ray for unbounded ones.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, relation: Relation::Le, rhs }
    }

    pub fn eq(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, relation: Relation::Eq, rhs }
    }
}

/// Bounds of one variable; `None` is infinite.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VarBound {
    pub lo: Option<Rat>,
    pub hi: Option<Rat>,
}

impl VarBound {
    pub fn free() -> Self {
        VarBound { lo: None, hi: None }
    }

    pub fn nonneg() -> Self {
        VarBound { lo: Some(Rat::zero()), hi: None }
    }

    pub fn boxed(lo: Rat, hi: Rat) -> Self {
        VarBound { lo: Some(lo), hi: Some(hi) }
    }
}

/// Minimize `objective · x` subject to the constraints and bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    /// A program with all variables free and no constraints.
    pub fn new(objective: Vec<Rat>) -> Self {
        let n = objective.len();
        LinearProgram { objective, constraints: Vec::new(), bounds: vec![VarBound::free(); n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(Error::LpDimension(format!("{} bounds for {n} variables", self.bounds.len())));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::LpDimension(format!(
                    "row {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let (Some(lo), Some(hi)) = (&b.lo, &b.hi) {
                if lo > hi {
                    return Err(Error::LpDimension(format!("variable {j} has lower bound above upper bound")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point, or a feasible point when unbounded; empty if infeasible.
    pub x: Vec<Rat>,
    pub objective_value: Rat,
    /// One multiplier per constraint with `c − Aᵀy` the reduced costs;
    /// nonpositive on `≤` rows. Only set when optimal.
    pub dual: Vec<Rat>,
    /// Infeasible: multipliers (nonnegative on `≤` rows) whose combined row
    /// `(λᵀA)·x ≤ λᵀb` has no solution inside the variable bounds.
    pub farkas: Option<Vec<Rat>>,
    /// Unbounded: a direction keeping feasibility and decreasing the objective.
    pub ray: Option<Vec<Rat>>,
}

/// How an original variable is expressed in the nonnegative internal columns.
#[derive(Clone, Debug)]
enum VarMap {
    /// `x = lo + z`.
    Shift { col: usize, lo: Rat },
    /// `x = hi − z`.
    Flip { col: usize, hi: Rat },
    /// `x = z⁺ − z⁻`.
    Split { pos: usize, neg: usize },
}

/// Consecutive degenerate pivots after which Bland's rule takes over.
const DEGENERATE_RUN: usize = 16;

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, costs: &mut [Rat], value: &mut Rat) {
        let inv = self.rows[r][c].recip();
        if inv != Rat::one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !costs[c].is_zero() {
            let f = costs[c].clone();
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                costs[j] -= delta;
            }
            *value += &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Minimizes over columns where `allowed` holds, with `costs` the reduced
    /// costs. Returns the entering column if unbounded.
    fn optimize(&mut self, costs: &mut [Rat], value: &mut Rat, allowed: &[bool]) -> Option<usize> {
        let mut degenerate = 0;
        loop {
            let candidates = (0..costs.len()).filter(|&j| allowed[j] && costs[j].is_negative());
            let entering = if degenerate >= DEGENERATE_RUN {
                candidates.min()
            } else {
                candidates.min_by(|&a, &b| costs[a].cmp(&costs[b]).then(a.cmp(&b)))
            };
            let q = entering?;
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Some(q),
                Some((r, ratio)) => {
                    degenerate = if ratio.is_zero() { degenerate + 1 } else { 0 };
                    self.pivot(r, q, costs, value);
                }
            }
        }
    }

    /// Reduced costs `c − c_B·B⁻¹A` and objective value for column costs `c`.
    fn price(&self, c: &[Rat]) -> (Vec<Rat>, Rat) {
        let mut d = c.to_vec();
        let mut value = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    d[j] -= &c[b] * v;
                }
            }
            value += &c[b] * &self.rhs[i];
        }
        (d, value)
    }
}

/// Solves `lp` exactly. Certificates are verified; a failed verification is
/// reported as [`Error::Invariant`].
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars();

    // Internal columns z ≥ 0 for the original variables.
    let mut maps = Vec::with_capacity(n);
    let mut nz = 0;
    for b in &lp.bounds {
        match (&b.lo, &b.hi) {
            (Some(lo), _) => {
                maps.push(VarMap::Shift { col: nz, lo: lo.clone() });
                nz += 1;
            }
            (None, Some(hi)) => {
                maps.push(VarMap::Flip { col: nz, hi: hi.clone() });
                nz += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: nz, neg: nz + 1 });
                nz += 2;
            }
        }
    }

    // Internal rows `a·z ≤ r` or `a·z = r`, one per user row, then one row
    // per finite range `z ≤ hi − lo`.
    let mut rows: Vec<(Vec<Rat>, Rat, Relation)> = Vec::new();
    let substitute = |coeffs: &[Rat], rhs: &Rat| -> (Vec<Rat>, Rat) {
        let mut a = vec![Rat::zero(); nz];
        let mut r = rhs.clone();
        for (j, m) in maps.iter().enumerate() {
            let c = &coeffs[j];
            if c.is_zero() {
                continue;
            }
            match m {
                VarMap::Shift { col, lo } => {
                    a[*col] = c.clone();
                    r -= c * lo;
                }
                VarMap::Flip { col, hi } => {
                    a[*col] = -c;
                    r -= c * hi;
                }
                VarMap::Split { pos, neg } => {
                    a[*pos] = c.clone();
                    a[*neg] = -c;
                }
            }
        }
        (a, r)
    };
    for con in &lp.constraints {
        let (a, r) = substitute(&con.coeffs, &con.rhs);
        rows.push((a, r, con.relation));
    }
    let user_rows = rows.len();
    for (j, b) in lp.bounds.iter().enumerate() {
        if let (Some(lo), Some(hi), VarMap::Shift { col, .. }) = (&b.lo, &b.hi, &maps[j]) {
            let mut a = vec![Rat::zero(); nz];
            a[*col] = Rat::one();
            rows.push((a, hi - lo, Relation::Le));
        }
    }

    // Columns: z, then slacks for ≤ rows, then artificials for equality rows
    // and for rows with a negative right-hand side (those rows are negated).
    let m = rows.len();
    let sign: Vec<Rat> = rows.iter().map(|(_, r, _)| if r.is_negative() { -Rat::one() } else { Rat::one() }).collect();
    let mut slack = vec![None; m];
    let mut artificial = vec![None; m];
    let mut next = nz;
    for (i, (_, _, rel)) in rows.iter().enumerate() {
        if *rel == Relation::Le {
            slack[i] = Some(next);
            next += 1;
        }
    }
    let first_art = next;
    for (i, (_, r, rel)) in rows.iter().enumerate() {
        if *rel == Relation::Eq || r.is_negative() {
            artificial[i] = Some(next);
            next += 1;
        }
    }
    let ncols = next;
    let mut tab = Tableau { rows: Vec::with_capacity(m), rhs: Vec::with_capacity(m), basis: Vec::with_capacity(m) };
    for (i, (a, r, _)) in rows.iter().enumerate() {
        let mut row = vec![Rat::zero(); ncols];
        for (j, v) in a.iter().enumerate() {
            if !v.is_zero() {
                row[j] = v * &sign[i];
            }
        }
        if let Some(s) = slack[i] {
            row[s] = sign[i].clone();
        }
        match artificial[i] {
            Some(t) => {
                row[t] = Rat::one();
                tab.basis.push(t);
            }
            None => tab.basis.push(slack[i].expect("row without artificial has a slack")),
        }
        tab.rows.push(row);
        tab.rhs.push(r * &sign[i]);
    }
    // Multiplier of user row `i` from reduced costs `d` under column costs
    // where artificials cost `art_cost`.
    let multipliers = |d: &[Rat], art_cost: &Rat| -> Vec<Rat> {
        (0..user_rows)
            .map(|i| match (slack[i], artificial[i]) {
                (Some(s), _) => -&d[s],
                (None, Some(t)) => &sign[i] * &(art_cost - &d[t]),
                (None, None) => unreachable!("every row has a slack or an artificial"),
            })
            .collect()
    };

    let all = vec![true; ncols];
    if first_art < ncols {
        let mut c1 = vec![Rat::zero(); ncols];
        for v in c1.iter_mut().skip(first_art) {
            *v = Rat::one();
        }
        let (mut d, mut value) = tab.price(&c1);
        tab.optimize(&mut d, &mut value, &all);
        if value.is_positive() {
            let farkas: Vec<Rat> = multipliers(&d, &Rat::one()).iter().map(|v| -v).collect();
            verify_farkas(lp, &farkas)?;
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                objective_value: Rat::zero(),
                dual: Vec::new(),
                farkas: Some(farkas),
                ray: None,
            });
        }
        // Drive artificials out of the basis where possible; a row with no
        // other nonzero entry is redundant and keeps its artificial at zero.
        for i in 0..m {
            if tab.basis[i] < first_art {
                continue;
            }
            if let Some(q) = (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                let mut dummy = vec![Rat::zero(); ncols];
                let mut v = Rat::zero();
                tab.pivot(i, q, &mut dummy, &mut v);
            }
        }
    }

    let mut c2 = vec![Rat::zero(); ncols];
    let mut offset = Rat::zero();
    for (j, m_) in maps.iter().enumerate() {
        let c = &lp.objective[j];
        match m_ {
            VarMap::Shift { col, lo } => {
                c2[*col] = c.clone();
                offset += c * lo;
            }
            VarMap::Flip { col, hi } => {
                c2[*col] = -c;
                offset += c * hi;
            }
            VarMap::Split { pos, neg } => {
                c2[*pos] = c.clone();
                c2[*neg] = -c;
            }
        }
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < first_art).collect();
    let (mut d, mut value) = tab.price(&c2);
    let unbounded = tab.optimize(&mut d, &mut value, &allowed);

    let mut z = vec![Rat::zero(); ncols];
    for (i, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs[i].clone();
    }
    let x = to_user(&maps, &z, true);

    if let Some(q) = unbounded {
        let mut dz = vec![Rat::zero(); ncols];
        dz[q] = Rat::one();
        for (i, &b) in tab.basis.iter().enumerate() {
            dz[b] = -&tab.rows[i][q];
        }
        let ray = to_user(&maps, &dz, false);
        verify_ray(lp, &ray)?;
        let objective_value = dot(&lp.objective, &x);
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x,
            objective_value,
            dual: Vec::new(),
            farkas: None,
            ray: Some(ray),
        });
    }

    let dual = multipliers(&d, &Rat::zero());
    let objective_value = value + offset;
    verify_optimal(lp, &x, &dual, &objective_value)?;
    Ok(LpSolution { status: LpStatus::Optimal, x, objective_value, dual, farkas: None, ray: None })
}

fn to_user(maps: &[VarMap], z: &[Rat], affine: bool) -> Vec<Rat> {
    maps.iter()
        .map(|m| match m {
            VarMap::Shift { col, lo } => {
                if affine {
                    lo + &z[*col]
                } else {
                    z[*col].clone()
                }
            }
            VarMap::Flip { col, hi } => {
                if affine {
                    hi - &z[*col]
                } else {
                    -&z[*col]
                }
            }
            VarMap::Split { pos, neg } => &z[*pos] - &z[*neg],
        })
        .collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).filter(|(u, v)| !u.is_zero() && !v.is_zero()).map(|(u, v)| u * v).sum()
}

fn fail(msg: &str) -> Error {
    Error::Invariant(format!("LP certificate check failed: {msg}"))
}

fn verify_optimal(lp: &LinearProgram, x: &[Rat], y: &[Rat], value: &Rat) -> Result<()> {
    for (j, b) in lp.bounds.iter().enumerate() {
        if b.lo.as_ref().is_some_and(|lo| x[j] < *lo) || b.hi.as_ref().is_some_and(|hi| x[j] > *hi) {
            return Err(fail("bound violated"));
        }
    }
    let mut d = lp.objective.clone();
    let mut dual_value = Rat::zero();
    for (con, yi) in lp.constraints.iter().zip(y) {
        let lhs = dot(&con.coeffs, x);
        match con.relation {
            Relation::Le => {
                if lhs > con.rhs {
                    return Err(fail("row violated"));
                }
                if yi.is_positive() {
                    return Err(fail("positive multiplier on a ≤ row"));
                }
                if !yi.is_zero() && lhs != con.rhs {
                    return Err(fail("complementary slackness on a row"));
                }
            }
            Relation::Eq => {
                if lhs != con.rhs {
                    return Err(fail("equality violated"));
                }
            }
        }
        if !yi.is_zero() {
            for (dj, a) in d.iter_mut().zip(&con.coeffs) {
                if !a.is_zero() {
                    *dj -= yi * a;
                }
            }
            dual_value += yi * &con.rhs;
        }
    }
    for (j, dj) in d.iter().enumerate() {
        let b = &lp.bounds[j];
        if dj.is_positive() {
            let lo = b.lo.as_ref().ok_or_else(|| fail("reduced cost on an unbounded side"))?;
            if x[j] != *lo {
                return Err(fail("complementary slackness on a lower bound"));
            }
            dual_value += dj * lo;
        } else if dj.is_negative() {
            let hi = b.hi.as_ref().ok_or_else(|| fail("reduced cost on an unbounded side"))?;
            if x[j] != *hi {
                return Err(fail("complementary slackness on an upper bound"));
            }
            dual_value += dj * hi;
        }
    }
    if dot(&lp.objective, x) != *value || dual_value != *value {
        return Err(fail("strong duality"));
    }
    Ok(())
}

fn verify_farkas(lp: &LinearProgram, lambda: &[Rat]) -> Result<()> {
    let n = lp.num_vars();
    let mut g = vec![Rat::zero(); n];
    let mut rhs = Rat::zero();
    for (con, l) in lp.constraints.iter().zip(lambda) {
        if con.relation == Relation::Le && l.is_negative() {
            return Err(fail("negative Farkas weight on a ≤ row"));
        }
        if l.is_zero() {
            continue;
        }
        for (gj, a) in g.iter_mut().zip(&con.coeffs) {
            *gj += l * a;
        }
        rhs += l * &con.rhs;
    }
    let mut min = Rat::zero();
    for (gj, b) in g.iter().zip(&lp.bounds) {
        if gj.is_positive() {
            min += gj * b.lo.as_ref().ok_or_else(|| fail("Farkas row unbounded below"))?;
        } else if gj.is_negative() {
            min += gj * b.hi.as_ref().ok_or_else(|| fail("Farkas row unbounded below"))?;
        }
    }
    if min <= rhs {
        return Err(fail("Farkas combination is satisfiable"));
    }
    Ok(())
}

fn verify_ray(lp: &LinearProgram, ray: &[Rat]) -> Result<()> {
    for (r, b) in ray.iter().zip(&lp.bounds) {
        if (r.is_positive() && b.hi.is_some()) || (r.is_negative() && b.lo.is_some()) {
            return Err(fail("ray leaves the variable bounds"));
        }
    }
    for con in &lp.constraints {
        let a = dot(&con.coeffs, ray);
        let ok = match con.relation {
            Relation::Le => !a.is_positive(),
            Relation::Eq => a.is_zero(),
        };
        if !ok {
            return Err(fail("ray leaves the feasible region"));
        }
    }
    if !dot(&lp.objective, ray).is_negative() {
        return Err(fail("ray does not improve the objective"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&a| r(a)).collect()
    }

    #[test]
    fn lower_bound_only() {
        let mut lp = LinearProgram::new(rv(&[1]));
        lp.bounds[0] = VarBound { lo: Some(r(3)), hi: None };
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, rv(&[3]));

        let mut lp = LinearProgram::new(rv(&[1]));
        lp.constraints.push(Constraint::le(rv(&[-1]), r(-3)));
        let s = solve_lp(&lp).unwrap();
        assert_eq!((s.x, s.objective_value, s.dual), (rv(&[3]), r(3), rv(&[-1])));
    }

    #[test]
    fn ties_enter_lowest_index() {
        let mut lp = LinearProgram::new(rv(&[-1, -1]));
        lp.constraints.push(Constraint::le(rv(&[1, 1]), r(1)));
        lp.bounds = vec![VarBound::boxed(r(0), r(1)); 2];
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective_value, r(-1));
        assert_eq!(s.x, rv(&[1, 0]));
    }

    #[test]
    fn infeasible_has_farkas_certificate() {
        let mut lp = LinearProgram::new(rv(&[1]));
        lp.constraints.push(Constraint::le(rv(&[1]), r(0)));
        lp.constraints.push(Constraint::le(rv(&[-1]), r(-1)));
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        let f = s.farkas.unwrap();
        assert!(f.iter().all(|v| !v.is_negative()));
        assert!(f.iter().any(|v| v.is_positive()));

        let mut lp = LinearProgram::new(rv(&[0]));
        lp.bounds[0] = VarBound { lo: Some(r(1)), hi: None };
        lp.constraints.push(Constraint::le(rv(&[1]), r(0)));
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_has_ray() {
        let mut lp = LinearProgram::new(rv(&[-1, 0]));
        lp.constraints.push(Constraint::le(rv(&[0, 1]), r(2)));
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
        assert!(s.ray.unwrap()[0].is_positive());
    }

    #[test]
    fn equality_rows() {
        // min x + 2y s.t. x + y = 3, x − y ≤ 1, x, y ≥ 0 → (2, 1), value 4.
        let mut lp = LinearProgram::new(rv(&[1, 2]));
        lp.constraints.push(Constraint::eq(rv(&[1, 1]), r(3)));
        lp.constraints.push(Constraint::le(rv(&[1, -1]), r(1)));
        lp.bounds = vec![VarBound::nonneg(); 2];
        let s = solve_lp(&lp).unwrap();
        assert_eq!((s.x, s.objective_value), (rv(&[2, 1]), r(4)));
    }

    #[test]
    fn malformed_dimensions() {
        let mut lp = LinearProgram::new(rv(&[1, 1]));
        lp.constraints.push(Constraint::le(rv(&[1]), r(0)));
        assert!(matches!(solve_lp(&lp), Err(Error::LpDimension(_))));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook largest-coefficient rule.
        let q = |a: i64, b: i64| Rat::new(a, b);
        let mut lp = LinearProgram::new(vec![q(-3, 4), r(150), q(-1, 50), r(6)]);
        lp.constraints.push(Constraint::le(vec![q(1, 4), r(-60), q(-1, 25), r(9)], r(0)));
        lp.constraints.push(Constraint::le(vec![q(1, 2), r(-90), q(-1, 50), r(3)], r(0)));
        lp.constraints.push(Constraint::le(vec![r(0), r(0), r(1), r(0)], r(1)));
        lp.bounds = vec![VarBound::nonneg(); 4];
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective_value, q(-1, 20));
    }
}
