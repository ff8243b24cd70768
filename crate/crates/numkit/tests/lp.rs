use ib_numkit::{lp_solve, mat_from_rows, solve_square, LpProblem, LpStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force oracle: best objective over all basic feasible points of
/// `max c.x s.t. A x <= b, E x = f, x >= 0`.
fn vertex_enum(c: &[f64], a: &[Vec<f64>], b: &[f64], e: &[Vec<f64>], f: &[f64]) -> Option<f64> {
    let n = c.len();
    // Every inequality, including x_j >= 0 written as -x_j <= 0.
    let mut rows: Vec<(Vec<f64>, f64)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    for j in 0..n {
        let mut r = vec![0.0; n];
        r[j] = -1.0;
        rows.push((r, 0.0));
    }
    let k = n - e.len();
    let mut best: Option<f64> = None;
    let m = rows.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut sys: Vec<Vec<f64>> = e.to_vec();
        let mut rhs: Vec<f64> = f.to_vec();
        for &i in &idx {
            sys.push(rows[i].0.clone());
            rhs.push(rows[i].1);
        }
        let mm = mat_from_rows(&sys, n).unwrap();
        if let Some(x) = solve_square(&mm, &nalgebra::DVector::from_vec(rhs)) {
            let feas = rows.iter().all(|(r, bb)| {
                r.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() <= bb + 1e-9
            }) && e.iter().zip(f).all(|(r, ff)| {
                (r.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() - ff).abs() < 1e-9
            });
            if feas {
                let v: f64 = c.iter().zip(x.iter()).map(|(p, q)| p * q).sum();
                best = Some(best.map_or(v, |bv: f64| bv.max(v)));
            }
        }
        // next combination
        if k == 0 {
            break;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
    best
}

#[test]
fn simple_tight_constraint() {
    let mut p = LpProblem::maximize(vec![1.0, 1.0]);
    p.leq(vec![1.0, 1.0], 1.0);
    let s = lp_solve(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert!((s.value - 1.0).abs() < 1e-12);
}

#[test]
fn infeasible_detected() {
    let mut p = LpProblem::minimize(vec![0.0]);
    p.eq(vec![1.0], 1.0).leq(vec![1.0], 0.0);
    assert_eq!(lp_solve(&p).unwrap().status, LpStatus::Infeasible);
}

#[test]
fn unbounded_detected() {
    let mut p = LpProblem::maximize(vec![1.0, 0.0]);
    p.leq(vec![-1.0, 1.0], 1.0);
    assert_eq!(lp_solve(&p).unwrap().status, LpStatus::Unbounded);
}

#[test]
fn matching_pennies_value() {
    // max v s.t. sum_a x_a P_ab >= v for every b, x in simplex, v free.
    let pm = [[1.0, -1.0], [-1.0, 1.0]];
    let mut p = LpProblem::maximize(vec![0.0, 0.0, 1.0]);
    p.set_free(2);
    for b in 0..2 {
        p.leq(vec![-pm[0][b], -pm[1][b], 1.0], 0.0);
    }
    p.eq(vec![1.0, 1.0, 0.0], 1.0);
    let s = lp_solve(&p).unwrap();
    assert!(s.value.abs() < 1e-12);
    assert!((s.point[0] - 0.5).abs() < 1e-12);
}

#[test]
fn free_and_shifted_variables() {
    // min |x - 3| style: min t s.t. t >= x - 3, t >= 3 - x, x >= 5 -> 2
    let mut p = LpProblem::minimize(vec![0.0, 1.0]);
    p.set_lower(0, 5.0).set_free(1);
    p.leq(vec![1.0, -1.0], 3.0).leq(vec![-1.0, -1.0], -3.0);
    let s = lp_solve(&p).unwrap();
    assert!((s.value - 2.0).abs() < 1e-12);
}

#[test]
fn dimension_mismatch_rejected() {
    let mut p = LpProblem::minimize(vec![1.0, 1.0]);
    p.leq(vec![1.0], 1.0);
    assert!(lp_solve(&p).is_err());
}

#[test]
fn redundant_equalities_handled() {
    let mut p = LpProblem::maximize(vec![1.0, 2.0]);
    p.eq(vec![1.0, 1.0], 1.0).eq(vec![2.0, 2.0], 2.0);
    let s = lp_solve(&p).unwrap();
    assert!((s.value - 2.0).abs() < 1e-12);
}

#[test]
fn degenerate_cycling_example_terminates() {
    // Beale's classic cycling instance under Dantzig pricing.
    let mut p = LpProblem::minimize(vec![-0.75, 150.0, -0.02, 6.0]);
    p.leq(vec![0.25, -60.0, -0.04, 9.0], 0.0)
        .leq(vec![0.5, -90.0, -0.02, 3.0], 0.0)
        .leq(vec![0.0, 0.0, 1.0, 0.0], 1.0);
    let s = lp_solve(&p).unwrap();
    assert!((s.value + 0.05).abs() < 1e-10);
}

#[test]
fn random_lps_match_vertex_enumeration_and_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..600 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=6);
        let me = if n > 1 { rng.gen_range(0..=1usize) } else { 0 };
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut a: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut b: Vec<f64> = (0..m).map(|_| rng.gen_range(-0.5..1.0)).collect();
        // Box keeps everything bounded.
        for j in 0..n {
            let mut r = vec![0.0; n];
            r[j] = 1.0;
            a.push(r);
            b.push(3.0);
        }
        let e: Vec<Vec<f64>> = (0..me)
            .map(|_| (0..n).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let f: Vec<f64> = (0..me).map(|_| rng.gen_range(0.0..1.0)).collect();
        let oracle = vertex_enum(&c, &a, &b, &e, &f);
        let mut p = LpProblem::maximize(c.clone());
        for (r, bb) in a.iter().zip(&b) {
            p.leq(r.clone(), *bb);
        }
        for (r, ff) in e.iter().zip(&f) {
            p.eq(r.clone(), *ff);
        }
        let s = lp_solve(&p).unwrap();
        match oracle {
            None => assert_eq!(s.status, LpStatus::Infeasible),
            Some(v) => {
                assert_eq!(s.status, LpStatus::Optimal);
                assert!((s.value - v).abs() < 1e-8, "lp {} vs oracle {}", s.value, v);
                // Dual: min b.u + f.w  s.t. A^T u + E^T w >= c, u >= 0, w free.
                let nu = a.len();
                let mut obj = b.clone();
                obj.extend_from_slice(&f);
                let mut d = LpProblem::minimize(obj);
                for k in 0..me {
                    d.set_free(nu + k);
                }
                for j in 0..n {
                    let mut row: Vec<f64> = a.iter().map(|r| r[j]).collect();
                    row.extend(e.iter().map(|r| r[j]));
                    d.geq(row, c[j]);
                }
                let ds = lp_solve(&d).unwrap();
                assert_eq!(ds.status, LpStatus::Optimal);
                assert!((ds.value - v).abs() < 1e-8, "dual {} vs {}", ds.value, v);
                checked += 1;
            }
        }
    }
    assert!(checked > 300);
}
