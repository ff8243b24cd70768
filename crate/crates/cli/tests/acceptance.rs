//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and fails if any criterion fails.

use std::time::{Duration, Instant};

use ib_agents::{AgentPolicy, GameUcb, IucbTrace};
use ib_certificates::{
    bound_simplex, delta_default, param_c, param_r, param_s, restrict_to_span, BoundDims,
    CertValues, SineMethod, ZBar,
};
use ib_geometry::{
    l1_dist_to_simplex, norm_eval, sine_ball, sine_bruteforce, sine_chain, sine_prob_system,
    AffineSubspace, ConvexBody, NormBlock, NormSpec,
};
use ib_model::{game_value, Scenario};
use ib_nature::{
    compatibility_audit, GreedyAdversary, LowerRAdversary, LowerSAdversary, LowerSParams,
    NaturePolicy,
};
use ib_numkit::{lp_solve, LpProblem};
use ib_scenarios::{
    dhk_torus, finite_stochastic, lower_r_scenario, lower_s_scenario, lower_s_sine_closed_form,
    pcb_desk, rot_triangle, zerosum_gap_lower_bound, zerosum_scenario,
};
use ib_sim::{
    concentration_experiment, monte_carlo, AgentKind, AgentSpec, McOutput, NatureKind, NatureSpec,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn timed(budget: Duration, f: impl FnOnce() -> Verdict) -> (bool, String) {
    let t = Instant::now();
    let v = f();
    let el = t.elapsed();
    let in_time = el < budget;
    let detail = format!(
        "{} [{:.1}s, budget {}s{}]",
        v.detail,
        el.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { ", EXCEEDED" }
    );
    (v.pass && in_time, detail)
}

fn greedy() -> NatureSpec {
    NatureSpec {
        kind: NatureKind::Greedy,
        params: json!({ "sample": true }),
    }
}

fn iucb(eta: Option<f64>) -> AgentSpec {
    let params = match eta {
        Some(e) => json!({ "eta": e }),
        None => Value::Null,
    };
    AgentSpec {
        kind: AgentKind::Iucb,
        params,
    }
}

fn run_mc(
    sc: &Scenario,
    agent: &AgentSpec,
    theta: usize,
    n: usize,
    reps: usize,
    seed: u64,
) -> McOutput {
    let f = agent.factory(sc, n).unwrap();
    let out = monte_carlo(sc, &f, &greedy(), theta, n, reps, seed).unwrap();
    assert!(out.errors().is_empty(), "{:?}", out.errors());
    out
}

// ---------------------------------------------------------------- 1

fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

/// `min Σ|y - q|` over the simplex as an explicit LP in `(q, s)`.
fn lp_projection_l1(y: &[f64]) -> f64 {
    let n = y.len();
    let mut p = LpProblem::minimize((0..2 * n).map(|i| if i < n { 0.0 } else { 1.0 }).collect());
    p.eq(
        (0..2 * n).map(|i| if i < n { 1.0 } else { 0.0 }).collect(),
        1.0,
    );
    for i in 0..n {
        let mut r = vec![0.0; 2 * n];
        r[i] = -1.0;
        r[n + i] = -1.0;
        p.leq(r.clone(), -y[i]);
        r[i] = 1.0;
        p.leq(r, y[i]);
    }
    lp_solve(&p).unwrap().value
}

fn geometry() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let hull: Vec<Vec<f64>> = (0..5).map(|_| rand_vec(&mut rng, 3)).collect();
    let specs = vec![
        (NormSpec::L1, 4),
        (NormSpec::L2, 4),
        (NormSpec::LInf, 4),
        (
            NormSpec::MaxOfBlocks {
                blocks: vec![
                    NormBlock::new(vec![0, 1], NormSpec::L2),
                    NormBlock::new(vec![2], NormSpec::L1),
                ],
            },
            3,
        ),
        (
            NormSpec::SumOfBlocks {
                blocks: vec![
                    NormBlock::new(vec![3], NormSpec::L1),
                    NormBlock::new(vec![0, 1, 2], NormSpec::LInf),
                ],
            },
            4,
        ),
        (NormSpec::PolytopeHull { vertices: hull }, 3),
    ];
    let mut axiom_fail = 0;
    for (n, d) in &specs {
        for _ in 0..1000 {
            let (u, v) = (rand_vec(&mut rng, *d), rand_vec(&mut rng, *d));
            let s: f64 = rng.gen_range(-3.0..3.0);
            let nu = norm_eval(n, &u).unwrap();
            let nv = norm_eval(n, &v).unwrap();
            let sum: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let scaled: Vec<f64> = u.iter().map(|a| s * a).collect();
            let ok = norm_eval(n, &sum).unwrap() <= nu + nv + 1e-9
                && (norm_eval(n, &scaled).unwrap() - s.abs() * nu).abs() <= 1e-9 * (1.0 + nu)
                && nu > 0.0;
            axiom_fail += usize::from(!ok);
        }
        axiom_fail += usize::from(norm_eval(n, &vec![0.0; *d]).unwrap() != 0.0);
    }
    let mut l1_err = 0.0f64;
    for k in [3usize, 5] {
        let hull = NormSpec::PolytopeHull {
            vertices: ConvexBody::simplex(k).vertices().unwrap(),
        };
        for _ in 0..50 {
            let v = rand_vec(&mut rng, k);
            l1_err = l1_err
                .max((norm_eval(&hull, &v).unwrap() - norm_eval(&NormSpec::L1, &v).unwrap()).abs());
        }
    }
    let mut dist_err = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(2..7);
        let mut y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let s: f64 = y.iter().sum();
        y[0] += 1.0 - s;
        dist_err = dist_err.max((l1_dist_to_simplex(&y).unwrap() - lp_projection_l1(&y)).abs());
    }
    verdict(
        axiom_fail == 0 && l1_err < 1e-8 && dist_err < 1e-8,
        format!("axiom violations {axiom_fail}/6000, max |hull - l1| {l1_err:.1e}, max |formula - LP| {dist_err:.1e}"),
    )
}

// ---------------------------------------------------------------- 2

const SAMPLES: usize = 4000;

fn conditional_subspace(n: usize, e: &[usize], e2: &[usize], p: f64) -> AffineSubspace {
    let mut row = vec![0.0; n];
    for &i in e {
        row[i] -= p;
        if e2.contains(&i) {
            row[i] += 1.0;
        }
    }
    AffineSubspace::from_rows(&[vec![1.0; n], row], &[1.0, 0.0], n).unwrap()
}

fn probability_system(f: usize, p: &[f64]) -> AffineSubspace {
    let n = 1 << f;
    let mut rows = vec![vec![1.0; n]];
    let mut rhs = vec![1.0];
    for i in 0..f {
        rows.push(
            (0..n)
                .map(|a| if a >> i & 1 == 1 { 1.0 - p[i] } else { -p[i] })
                .collect(),
        );
        rhs.push(0.0);
    }
    AffineSubspace::from_rows(&rows, &rhs, n).unwrap()
}

fn sines() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let n = 5;
    let mut cond_min = f64::INFINITY;
    for k in 0..5 {
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(&mut rng);
        let esize = rng.gen_range(2..=n);
        let e = labels[..esize].to_vec();
        let inner = rng.gen_range(1..esize);
        let mut e2 = e[..inner].to_vec();
        if esize < n && rng.gen_bool(0.5) {
            e2.push(labels[esize]);
        }
        let p = rng.gen_range(0.1..0.9);
        let u = conditional_subspace(n, &e, &e2, p);
        cond_min = cond_min
            .min(sine_bruteforce(&u, &ConvexBody::simplex(n), &NormSpec::L1, SAMPLES, k).unwrap());
    }
    let mut sys_margin = f64::INFINITY;
    for f in [2usize, 3] {
        for k in 0..2 {
            let p: Vec<f64> = (0..f).map(|_| rng.gen_range(0.15..0.85)).collect();
            let u = probability_system(f, &p);
            let est = sine_bruteforce(&u, &ConvexBody::simplex(1 << f), &NormSpec::L1, SAMPLES, k)
                .unwrap();
            let bound = sine_prob_system(f).unwrap();
            assert!((bound - 1.0 / f as f64).abs() < 1e-12);
            sys_margin = sys_margin.min(est - (bound - 1e-2));
        }
    }
    let mut ball_err = 0.0f64;
    for (rho, phi) in [(0.0f64, 0.3f64), (0.6, 1.0), (0.3, 2.0), (0.9, 4.0)] {
        let disk = ConvexBody::Ball {
            center: vec![1.0, 0.0, 0.0],
            axes: vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            radius: 1.0,
        };
        let line = AffineSubspace::from_rows(
            &[vec![1.0, 0.0, 0.0], vec![0.0, phi.cos(), phi.sin()]],
            &[1.0, rho],
            3,
        )
        .unwrap();
        let est = sine_bruteforce(&line, &disk, &NormSpec::L2, SAMPLES, 1).unwrap();
        let exact = sine_ball(
            &AffineSubspace::from_rows(&[vec![phi.cos(), phi.sin()]], &[rho], 2).unwrap(),
        )
        .unwrap();
        ball_err = ball_err.max((est - exact).abs());
    }
    let s1 = conditional_subspace(4, &[0, 1, 2, 3], &[0, 1], 0.4);
    let s2 = conditional_subspace(4, &[0, 1], &[0], 0.3);
    let both = s1.intersect(&s2).unwrap();
    let d = ConvexBody::simplex(4);
    let a = sine_bruteforce(&s1, &d, &NormSpec::L1, SAMPLES, 1).unwrap();
    let b = sine_bruteforce(&s2, &d, &NormSpec::L1, SAMPLES, 2).unwrap();
    let c = sine_bruteforce(&both, &d, &NormSpec::L1, SAMPLES, 3).unwrap();
    let chain = sine_chain(&[a.min(1.0), b.min(1.0)]).unwrap();
    let chain_ok = chain <= c + 1e-2 && chain == a.min(b).min(1.0);
    verdict(
        cond_min >= 0.99 && sys_margin >= 0.0 && ball_err < 5e-2 && chain_ok,
        format!(
            "cond-s min {cond_min:.4}, sys-probs margin {sys_margin:.4}, ball max err {ball_err:.4}, chain {chain:.4} <= joint {c:.4}"
        ),
    )
}

// ---------------------------------------------------------------- 3

fn r_of(sc: &Scenario) -> f64 {
    let (fam, _) = restrict_to_span(&sc.family);
    param_r(&ZBar::build(&fam, &sc.space).unwrap()).unwrap()
}

fn certificates() -> Verdict {
    let dhk = r_of(&dhk_torus(2, 8, 8).unwrap());
    let alpha = 0.1;
    let ls = lower_s_scenario(4, alpha, 4, 0).unwrap();
    let ls_r = r_of(&ls);
    let ls_s = param_s(&ls, &SineMethod::Auto).unwrap().value;
    let lr = lower_r_scenario(10.0, 1.3, 9, 9).unwrap();
    let lr_s = param_s(&lr, &SineMethod::Auto).unwrap().value;
    let lr_r = r_of(&lr);
    let pcb = pcb_desk().unwrap();
    let pcb_r = r_of(&pcb);
    let pcb_s = param_s(&pcb, &SineMethod::Auto).unwrap().value;
    let n = 2.0;
    let ok = (dhk - 2.0).abs() < 1e-3
        && (ls_r - 1.0).abs() < 1e-3
        && (0.5..=4.0).contains(&(ls_s / alpha))
        && (lr_s - 1.0).abs() < 1e-6
        && lr_r <= 11.0 + 1e-6
        && pcb_r <= 4.0 * n + 1e-6
        && (pcb_s - 1.0).abs() < 1e-9;
    verdict(
        ok,
        format!(
            "dhk R {dhk:.6}; lower_s R {ls_r:.6}, S/α {:.3} (cone form {:.3}); lower_r S {lr_s:.8}, R {lr_r:.4}; pcb R {pcb_r:.4}, S {pcb_s}",
            ls_s / alpha,
            lower_s_sine_closed_form(alpha) / alpha
        ),
    )
}

// ---------------------------------------------------------------- 4

fn model_values() -> Verdict {
    let rot = rot_triangle(24, 12).unwrap();
    let rot_err = (0..rot.family.num_hypotheses())
        .map(|t| (rot.optimal_arm(t).unwrap().1 - 1.0 / 3.0).abs())
        .fold(0.0f64, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut zs_err = 0.0f64;
    for _ in 0..20 {
        let p: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let a: f64 = rng.gen_range(0.0..1.0);
        let grid = vec![
            vec![1.0, 0.0],
            vec![a, 1.0 - a],
            vec![0.5, 0.5],
            vec![0.0, 1.0],
        ];
        let sc = zerosum_scenario(&[p.clone()], &grid).unwrap();
        for (x, xv) in grid.iter().enumerate() {
            let pure = (0..3)
                .map(|b| xv[0] * p[0][b] + xv[1] * p[1][b])
                .fold(f64::INFINITY, f64::min);
            zs_err = zs_err.max((sc.lower(x, 0).unwrap() - pure).abs());
        }
    }
    let pennies = game_value(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap().0;
    verdict(
        rot_err < 1e-6 && zs_err < 1e-8 && pennies.abs() < 1e-9,
        format!("rot max |ME* - 1/3| {rot_err:.1e}; zero-sum max err {zs_err:.1e}; pennies {pennies:.1e}"),
    )
}

// ---------------------------------------------------------------- 5

fn zerosum_default() -> (Vec<Vec<Vec<f64>>>, Vec<Vec<f64>>) {
    (
        vec![
            vec![vec![0.8, 0.6], vec![-0.6, -0.8]],
            vec![vec![-0.6, -0.8], vec![0.8, 0.6]],
        ],
        vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]],
    )
}

/// Returns (violations, cycles) of the monotonicity and shrink checks.
fn check_trace(tr: &IucbTrace) -> (usize, usize) {
    let mut bad = 0;
    let mut prev = tr.initial.clone();
    for c in &tr.cycles {
        let nested = c.before == prev && c.after.iter().all(|t| c.before.contains(t));
        let shrink = c.max_survivor_dz <= c.rho / (2.0 * (tr.d_z as f64 + 1.0)) + 1e-6;
        bad += usize::from(!(nested && shrink));
        prev = c.after.clone();
    }
    (bad, tr.cycles.len())
}

fn final_set(tr: &IucbTrace) -> &[usize] {
    tr.cycles.last().map_or(&tr.initial, |c| &c.after)
}

fn iucb_behaviour() -> Verdict {
    // (a)
    let (zp, zg) = zerosum_default();
    let zs = zerosum_scenario(&zp, &zg).unwrap();
    let cases = [
        (pcb_desk().unwrap(), 1.0, 17usize),
        (zs.clone(), 0.5, 17),
        (dhk_torus(2, 8, 8).unwrap(), 0.3, 16),
    ];
    let (mut bad, mut runs) = (0, 0);
    let mut cycles = Vec::new();
    for (sc, eta, k) in &cases {
        let mut total = 0;
        for r in 0..*k {
            let theta = r % sc.family.num_hypotheses();
            let out = run_mc(sc, &iucb(Some(*eta)), theta, 300, 1, 5000 + r as u64);
            let (b, c) = check_trace(out.traces[0].iucb.as_ref().unwrap());
            bad += b;
            total += c;
            runs += 1;
        }
        cycles.push(total);
    }
    let a_ok = bad == 0 && runs == 50 && cycles.iter().all(|c| *c > 0);

    // (b), (c)
    let pcb = pcb_desk().unwrap();
    let h = pcb.family.num_hypotheses();
    let (mut kept, mut regret_sum, mut eta) = (0, 0.0, 0.0);
    for r in 0..200 {
        let theta = r % h;
        let out = run_mc(&pcb, &iucb(None), theta, 500, 1, 9000 + r as u64);
        let tr = out.traces[0].iucb.as_ref().unwrap();
        eta = tr.eta;
        kept += usize::from(!tr.eliminated && final_set(tr).contains(&theta));
        regret_sum += *out.regrets[0].cumulative.last().unwrap();
    }
    let retention = kept as f64 / 200.0;
    let mean_regret = regret_sum / 200.0;
    let (fam, _) = restrict_to_span(&pcb.family);
    let zb = ZBar::build(&fam, &pcb.space).unwrap();
    let cert = CertValues {
        r: param_r(&zb).unwrap(),
        s: param_s(&pcb, &SineMethod::Auto).unwrap().value,
        c: param_c(&pcb.reward, &pcb.space).unwrap(),
    };
    let dims = BoundDims {
        d_z: zb.d_z(),
        d_w: zb.dim_w,
    };
    let bound = bound_simplex(&cert, &dims, 500, eta, delta_default(500), pcb.space.dim);

    // (d)
    let g = zerosum_gap_lower_bound(&zp, &zg).unwrap();
    let inc = |out: &McOutput| {
        let m = &out.summary.mean;
        (m[249], m[499] - m[249])
    };
    let (first, second) = inc(&run_mc(&zs, &iucb(Some(2.0)), 1, 500, 100, 777));
    let (tf, ts) = inc(&run_mc(&zs, &iucb(None), 1, 500, 100, 777));
    let d_ok = g >= 0.3 && first > 0.0 && second <= 0.25 * first;

    verdict(
        a_ok && retention >= 0.95 && mean_regret <= bound && d_ok,
        format!(
            "(a) {bad} violations over {runs} runs, cycles per scenario {cycles:?}; (b) retention {retention:.3} with η {eta:.2}; \
             (c) mean regret {mean_regret:.2} <= bound {bound:.3e}; (d) g̃ {g:.2}, η=2 increments {first:.2} then {second:.2} \
             (ratio {:.3}); info: recommended η gives {tf:.2} then {ts:.2}",
            second / first
        ),
    )
}

// ---------------------------------------------------------------- 6

fn concentration() -> Verdict {
    let sc = rot_triangle(24, 12).unwrap();
    let run =
        |tau| concentration_experiment(&sc, 0, &greedy(), 0, tau, 0.3, 2000, 66, 1.0).unwrap();
    let at400 = run(400);
    let bound = at400.simplex_bound.unwrap();
    let rs: Vec<_> = [50, 200, 800].into_iter().map(run).collect();
    let mono = rs
        .windows(2)
        .all(|w| w[1].rate <= w[0].rate + (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt());
    verdict(
        at400.rate <= bound && mono,
        format!(
            "τ=400 rate {} <= bound {bound:.3e}; rates at τ=50,200,800: {:.4}, {:.4}, {:.4}",
            at400.rate, rs[0].rate, rs[1].rate, rs[2].rate
        ),
    )
}

// ---------------------------------------------------------------- 7

fn adversaries() -> Verdict {
    let alpha = 0.1;
    let ls = lower_s_scenario(4, alpha, 4, 0).unwrap();
    let floor = (1.0 - alpha) / (1.0 + 2.0 * alpha);
    let mut min_p = f64::INFINITY;
    for t in 0..ls.family.num_hypotheses() {
        let mut adv = LowerSAdversary::new(LowerSParams::default());
        adv.reset(&ls, t, 3).unwrap();
        for a in &ls.family.arms {
            min_p = min_p.min(adv.prob_y_delta(&a.embedding));
        }
    }
    let lr = lower_r_scenario(10.0, 1.3, 21, 21).unwrap();
    let (mut in_mode, mut reward_err) = (0, 0.0f64);
    for t in 0..lr.family.num_hypotheses() {
        let mut adv = LowerRAdversary::new(None);
        adv.reset(&lr, t, 4).unwrap();
        let target = -adv.params.psi.cos();
        for x in 0..lr.family.num_arms() {
            let y = adv.respond(x).unwrap();
            if adv.last_step().unwrap().mode != "fallback" {
                in_mode += 1;
                reward_err = reward_err.max((lr.reward.eval(x, &y) - target).abs());
            }
        }
    }
    let mut adv = LowerSAdversary::new(LowerSParams::default());
    let audit_s = compatibility_audit(&mut adv, &ls, 2, 10_000, 4.0, 1e-9, 1)
        .unwrap()
        .passed;
    let mut adv = LowerRAdversary::new(None);
    let audit_r = compatibility_audit(&mut adv, &lr, 3, 10_000, 4.0, 1e-9, 1)
        .unwrap()
        .passed;
    verdict(
        min_p > floor && in_mode > 0 && reward_err < 1e-12 && audit_s && audit_r,
        format!(
            "min P[y_δ] {min_p:.4} > {floor:.4}; {in_mode} in-mode rewards, max |r + cos ψ| {reward_err:.1e}; audits lower_s {audit_s}, lower_r {audit_r}"
        ),
    )
}

// ---------------------------------------------------------------- 8

fn baselines() -> Verdict {
    let sc = finite_stochastic(&[0.7, 0.5, 0.4, 0.2]).unwrap();
    let ucb = AgentSpec {
        kind: AgentKind::Ucb,
        params: Value::Null,
    };
    let out = run_mc(&sc, &ucb, 0, 1000, 100, 31);
    let mean = out.summary.mean[999];
    let (a, n) = (4.0, 1000.0f64);
    let limit = 8.0 * (a * n * n.ln()).sqrt() + 3.0 * a;
    let ucb_ok = mean < limit;

    let p = vec![vec![0.6, -0.2], vec![-0.4, 0.3]];
    let game = zerosum_scenario(
        &[p.clone()],
        &[vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]],
    )
    .unwrap();
    let (v, _) = game_value(&p).unwrap();
    let horizon = 2000;
    let mut devs = Vec::new();
    let mut true_vals = Vec::new();
    for seed in 0..10u64 {
        let mut ag = GameUcb::new();
        let mut nat = GreedyAdversary::new(true);
        ag.reset(&game, horizon, seed).unwrap();
        nat.reset(&game, 0, 100 + seed).unwrap();
        for _ in 0..horizon {
            let x = ag.select_arm().unwrap();
            ag.observe(&nat.respond(x).unwrap()).unwrap();
        }
        devs.push(ag.optimistic_value().unwrap() - v);
        // the maximin strategy of the optimistic matrix, scored on the true one
        let (_, xs) = game_value(&ag.optimistic_matrix()).unwrap();
        true_vals.push(
            (0..2)
                .map(|b| xs[0] * p[0][b] + xs[1] * p[1][b])
                .fold(f64::INFINITY, f64::min),
        );
    }
    let worst = devs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let floor = (2.0 * (2.0 * 4.0 * (horizon as f64).powi(2)).ln() / horizon as f64).sqrt();
    let gucb_ok = worst <= 0.05;
    verdict(
        ucb_ok && gucb_ok,
        format!(
            "UCB mean regret {mean:.1} < {limit:.1}: {ucb_ok}; Game UCB max |optimistic - game value| {worst:.3} (<= 0.05: {gucb_ok}); \
             the bonus alone is at least {floor:.3} at T = N; info: true value of the optimistic strategy within {:.3} of {v:.3}",
            true_vals.iter().fold(0.0f64, |m, t| m.max((t - v).abs()))
        ),
    )
}

// ---------------------------------------------------------------- 9

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        json!({ "scenario": { "builder": "pcb_desk" }, "agent": { "kind": "iucb", "params": { "eta": 2.0 } },
                "nature": { "kind": "greedy" }, "theta": 5, "N": 300, "reps": 16, "seed": 4 }),
        json!({ "scenario": { "builder": "zerosum" }, "agent": { "kind": "game_ucb" },
                "nature": { "kind": "greedy" }, "theta": "sweep", "N": 200, "reps": 8, "seed": 8 }),
    ];
    let mut same = true;
    let mut files = 0;
    for (i, c) in configs.iter().enumerate() {
        let path = dir.path().join(format!("c{i}.json"));
        std::fs::write(&path, serde_json::to_string(c).unwrap()).unwrap();
        let run = |tag: &str, threads| {
            let opts = ib_cli::RunOptions {
                config: path.clone(),
                out: Some(dir.path().join(format!("{i}_{tag}"))),
                seed: None,
                threads: Some(threads),
            };
            let o = ib_cli::cmd_run(&opts).unwrap();
            assert!(o.failure.is_none());
            let mut sums: Vec<_> = o
                .paths
                .iter()
                .filter(|p| p.ends_with("summary.csv"))
                .cloned()
                .collect();
            sums.sort();
            sums.iter()
                .map(|p| std::fs::read(p).unwrap())
                .collect::<Vec<_>>()
        };
        let a = run("a", 1);
        let b = run("b", 4);
        files += a.len();
        same &= !a.is_empty() && a == b;
    }
    verdict(
        same,
        format!("{files} summary files byte-identical across reruns and thread counts"),
    )
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, Duration, fn() -> Verdict)> = vec![
        ("geometry oracles", Duration::from_secs(10), geometry),
        ("sine propositions", Duration::from_secs(120), sines),
        ("certificates", Duration::from_secs(60), certificates),
        ("model values", Duration::from_secs(60), model_values),
        ("IUCB behaviour", Duration::from_secs(600), iucb_behaviour),
        ("concentration", Duration::from_secs(120), concentration),
        ("adversary mechanics", Duration::from_secs(60), adversaries),
        ("baselines", Duration::from_secs(600), baselines),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, budget, f)) in criteria.into_iter().enumerate() {
        let (pass, detail) = timed(budget, f);
        println!(
            "criterion {}: {} - {name}: {detail}",
            k + 1,
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
