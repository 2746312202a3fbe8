//! Random small LPs checked against brute-force vertex enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_chow::lp::{solve_lp, Constraint, LinearProgram, LpStatus, Relation, VarBound};
use toric_chow::Rat;

/// Solves the square system `a·x = b` by Gaussian elimination; `None` if
/// singular.
fn solve_square(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let d = &f * &a[col][j];
                    a[r][j] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

fn feasible(lp: &LinearProgram, x: &[Rat]) -> bool {
    let dot = |a: &[Rat]| a.iter().zip(x).map(|(u, v)| u * v).sum::<Rat>();
    lp.constraints.iter().all(|c| match c.relation {
        Relation::Le => dot(&c.coeffs) <= c.rhs,
        Relation::Eq => dot(&c.coeffs) == c.rhs,
    }) && lp.bounds.iter().zip(x).all(|(b, v)| {
        b.lo.as_ref().is_none_or(|lo| v >= lo) && b.hi.as_ref().is_none_or(|hi| v <= hi)
    })
}

/// Minimum of the objective over all vertices, or `None` if no vertex is
/// feasible. Requires every variable to be boxed.
fn brute_force(lp: &LinearProgram) -> Option<Rat> {
    let n = lp.num_vars();
    let mut planes: Vec<(Vec<Rat>, Rat)> =
        lp.constraints.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    for (j, b) in lp.bounds.iter().enumerate() {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        planes.push((e.clone(), b.lo.clone().unwrap()));
        planes.push((e, b.hi.clone().unwrap()));
    }
    let mut best: Option<Rat> = None;
    let mut choose = (0..n).collect::<Vec<usize>>();
    loop {
        let a = choose.iter().map(|&i| planes[i].0.clone()).collect();
        let b = choose.iter().map(|&i| planes[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(lp, &x) {
                let v: Rat = lp.objective.iter().zip(&x).map(|(c, xi)| c * xi).sum();
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        // Next combination in lexicographic order.
        let m = planes.len();
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if choose[i] < m - n + i {
                break;
            }
            if i == 0 {
                return best;
            }
        }
        choose[i] += 1;
        for j in i + 1..n {
            choose[j] = choose[j - 1] + 1;
        }
    }
}

fn random_lp(rng: &mut ChaCha8Rng, n: usize, m: usize) -> LinearProgram {
    let mut int = |lo: i64, hi: i64| Rat::from_int(rng.gen_range(lo..=hi));
    let objective = (0..n).map(|_| int(-5, 5)).collect();
    let mut constraints = Vec::new();
    for i in 0..m {
        let coeffs = (0..n).map(|_| int(-5, 5)).collect();
        let relation = if i == 0 && m > 2 { Relation::Eq } else { Relation::Le };
        constraints.push(Constraint { coeffs, relation, rhs: int(-5, 10) });
    }
    let bounds = (0..n)
        .map(|_| {
            let lo = int(-5, 0);
            let hi = &lo + int(0, 6);
            VarBound::boxed(lo, hi)
        })
        .collect();
    LinearProgram { objective, constraints, bounds }
}

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240917);
    let (mut optimal, mut infeasible) = (0, 0);
    for trial in 0..60 {
        let (n, m) = if trial < 50 { (rng.gen_range(1..=4), rng.gen_range(1..=6)) } else { (6, 10) };
        let lp = random_lp(&mut rng, n, m);
        let sol = solve_lp(&lp).unwrap();
        match brute_force(&lp) {
            Some(v) => {
                assert_eq!(sol.status, LpStatus::Optimal, "trial {trial}");
                assert_eq!(sol.objective_value, v, "trial {trial}");
                optimal += 1;
            }
            None => {
                assert_eq!(sol.status, LpStatus::Infeasible, "trial {trial}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal >= 10 && infeasible >= 1, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn solving_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let lp = random_lp(&mut rng, 4, 5);
        assert_eq!(solve_lp(&lp).unwrap(), solve_lp(&lp).unwrap());
    }
}
