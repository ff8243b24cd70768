use ib_model::Scenario;
use ib_nature::*;
use ib_scenarios::{finite_stochastic, lower_r_scenario, lower_s_scenario, pcb_desk, rot_triangle};

fn constraint(sc: &Scenario, x: usize, theta: usize, y: &[f64]) -> Vec<f64> {
    let f = sc.family.f_matrix(x, theta).unwrap();
    (0..f.nrows())
        .map(|w| (0..f.ncols()).map(|j| f[(w, j)] * y[j]).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn greedy_on_point_sections_returns_the_point() {
    let sc = finite_stochastic(&[0.3, 0.8]).unwrap();
    let mut g = GreedyAdversary::new(false);
    g.reset(&sc, 0, 1).unwrap();
    let y = g.respond(1).unwrap();
    assert!((y[0] - 0.2).abs() < 1e-9 && (y[1] - 0.8).abs() < 1e-9);
}

#[test]
fn greedy_vertex_sampling_has_the_right_mean() {
    let sc = finite_stochastic(&[0.3, 0.8]).unwrap();
    let mut g = GreedyAdversary::new(true);
    g.reset(&sc, 0, 7).unwrap();
    let n = 20_000;
    let mut ones = 0.0;
    for _ in 0..n {
        let y = g.respond(0).unwrap();
        assert!(y == vec![1.0, 0.0] || y == vec![0.0, 1.0]);
        ones += y[1];
    }
    let p = ones / n as f64;
    let sd = (0.3 * 0.7 / n as f64).sqrt();
    assert!((p - 0.3).abs() < 4.0 * sd, "{p}");
}

#[test]
fn greedy_realises_the_lower_prevision() {
    let sc = rot_triangle(24, 12).unwrap();
    for t in [0, 5] {
        let (x, v) = sc.optimal_arm(t).unwrap();
        let mut g = GreedyAdversary::new(false);
        g.reset(&sc, t, 0).unwrap();
        let y = g.respond(x).unwrap();
        let r = sc.reward.eval(x, &y);
        assert!((r - 1.0 / 3.0).abs() < 1e-6);
        // an agent that always plays x* has zero per-round regret
        assert!((v - r).abs() < 1e-9);
    }
}

#[test]
fn fixed_mean_checks_compatibility() {
    let sc = finite_stochastic(&[0.3, 0.8]).unwrap();
    let good = vec![vec![0.7, 0.3], vec![0.2, 0.8]];
    let mut nat = FixedMeanNature::new(good.clone(), true);
    nat.reset(&sc, 0, 3).unwrap();
    let n = 10_000;
    let mut s = 0.0;
    for _ in 0..n {
        s += nat.respond(1).unwrap()[1];
    }
    let sd = (0.8 * 0.2 / n as f64).sqrt();
    assert!((s / n as f64 - 0.8).abs() < 3.0 * sd);
    let mut bad = FixedMeanNature::new(vec![vec![0.5, 0.5], vec![0.2, 0.8]], true);
    assert!(matches!(
        bad.reset(&sc, 0, 3),
        Err(NatureError::IncompatibleMean { arm: 0 })
    ));
    let mut outside = FixedMeanNature::new(vec![vec![-0.7, 1.7], vec![0.2, 0.8]], true);
    assert!(matches!(
        outside.reset(&sc, 0, 3),
        Err(NatureError::IncompatibleMean { .. })
    ));
}

#[test]
fn lower_s_two_point_mechanics() {
    let alpha = 0.1;
    let sc = lower_s_scenario(4, alpha, 4, 0).unwrap();
    let delta = 0.25;
    for t in 0..sc.family.num_hypotheses() {
        let mut adv = LowerSAdversary::new(LowerSParams { delta });
        adv.reset(&sc, t, 11).unwrap();
        for x in 0..sc.family.num_arms() {
            let xv = &sc.family.arms[x].embedding;
            let p = adv.prob_y_delta(xv);
            assert!(p > (1.0 - alpha) / (1.0 + 2.0 * alpha), "P[y_δ] = {p}");
            // y_δ and y_⊥ are on opposite sides of the hyperplane unless x is excluded
            let c = constraint(&sc, x, t, &adv.y_zero(xv));
            assert!(c[0].abs() < 1e-9);
            assert!(sc.space.body.contains(&adv.y_zero(xv), 1e-9));
            assert!(sc.space.body.contains(&adv.y_delta(xv), 1e-9));
        }
    }
    // per-round compatibility of the law actually used
    let mut adv = LowerSAdversary::new(LowerSParams { delta });
    adv.reset(&sc, 3, 5).unwrap();
    let mut saw_fallback = false;
    for n in 0..400 {
        let x = n % sc.family.num_arms();
        let y = adv.respond(x).unwrap();
        let step = adv.last_step().unwrap().clone();
        assert!(constraint(&sc, x, 3, &step.mean)[0].abs() < 1e-9);
        let r = sc.reward.eval(x, &y);
        if step.mode == "two_point" {
            assert!((r + (0.5 + delta)).abs() < 1e-12 || r.abs() < 1e-12, "{r}");
        } else {
            saw_fallback = true;
        }
    }
    assert!(saw_fallback);
}

#[test]
fn lower_s_switches_on_far_arm() {
    let sc = lower_s_scenario(4, 0.1, 0, 0).unwrap();
    // hypothesis 0 is u* = e0; arm 1 is -e0 with u*·x = -1 < -1/(1+2δ)
    let mut adv = LowerSAdversary::new(LowerSParams::default());
    adv.reset(&sc, 0, 0).unwrap();
    assert!((dot(adv.u_star(), &sc.family.arms[1].embedding) + 1.0).abs() < 1e-12);
    adv.respond(1).unwrap();
    assert_eq!(adv.last_step().unwrap().mode, "fallback");
    adv.respond(0).unwrap();
    assert_eq!(adv.last_step().unwrap().mode, "fallback");
}

#[test]
fn lower_r_probabilities_and_rewards() {
    let lambda = 10.0;
    let sc = lower_r_scenario(lambda, 1.3, 21, 21).unwrap();
    for t in 0..sc.family.num_hypotheses() {
        let mut adv = LowerRAdversary::new(None);
        adv.reset(&sc, t, 2).unwrap();
        let psi = adv.params.psi;
        for x in 0..sc.family.num_arms() {
            let xv = adv.arm(x).unwrap();
            let th = adv.theta();
            if (xv[0] * th[0] + xv[1] * th[1]).abs() > adv.params.delta {
                let p = adv.prob_plus(xv);
                assert!((0.0..=1.0).contains(&p), "p = {p}");
                let mean: Vec<f64> = adv
                    .y_plus()
                    .iter()
                    .zip(adv.y_minus())
                    .map(|(a, b)| p * a + (1.0 - p) * b)
                    .collect();
                assert!(constraint(&sc, x, t, &mean)[0].abs() < 1e-9);
                assert!((sc.reward.eval(x, &adv.y_plus()) + psi.cos()).abs() < 1e-15);
                assert!((sc.reward.eval(x, &adv.y_minus()) + psi.cos()).abs() < 1e-15);
            }
            let ys = adv.y_star(xv);
            assert!(constraint(&sc, x, t, &ys)[0].abs() < 1e-9);
            assert!(ys[0] >= 0.0 && sc.space.body.contains(&ys, 1e-9));
        }
    }
}

#[test]
fn lower_r_mode_switch_is_exact() {
    let sc = lower_r_scenario(10.0, 1.3, 21, 21).unwrap();
    let t = sc.family.num_hypotheses() / 2;
    let mut adv = LowerRAdversary::new(None);
    adv.reset(&sc, t, 9).unwrap();
    let th = adv.theta();
    let order: Vec<usize> = (0..sc.family.num_arms()).collect();
    let mut switched = false;
    for &x in &order {
        let xv = adv.arm(x).unwrap();
        let close = (xv[0] * th[0] + xv[1] * th[1]).abs() <= adv.params.delta;
        let y = adv.respond(x).unwrap();
        switched |= close;
        let mode = adv.last_step().unwrap().mode.clone();
        assert_eq!(mode == "fallback", switched, "arm {x}");
        if !switched {
            assert!((sc.reward.eval(x, &y) + adv.params.psi.cos()).abs() < 1e-15);
        }
    }
    assert!(switched);
}

#[test]
fn lower_r_rejects_bad_params() {
    let sc = lower_r_scenario(10.0, 1.3, 9, 9).unwrap();
    let mut adv = LowerRAdversary::new(Some(LowerRParams {
        psi: 1.2,
        delta: 0.001,
    }));
    assert!(matches!(
        adv.reset(&sc, 0, 0),
        Err(NatureError::InvalidParameter(_))
    ));
    let mut adv = LowerRAdversary::new(Some(LowerRParams {
        psi: 0.5,
        delta: 0.5,
    }));
    assert!(adv.reset(&sc, 0, 0).is_err());
}

#[test]
fn audits() {
    let sc = lower_s_scenario(4, 0.1, 4, 0).unwrap();
    let mut adv = LowerSAdversary::new(LowerSParams::default());
    let rep = compatibility_audit(&mut adv, &sc, 2, 10_000, 4.0, 1e-9, 1).unwrap();
    assert!(rep.passed, "{rep:?}");
    let sc = lower_r_scenario(10.0, 1.3, 9, 9).unwrap();
    let mut adv = LowerRAdversary::new(None);
    let rep = compatibility_audit(&mut adv, &sc, 3, 10_000, 4.0, 1e-9, 1).unwrap();
    assert!(rep.passed, "{rep:?}");
    let sc = pcb_desk().unwrap();
    let mut g = GreedyAdversary::new(true);
    assert!(
        compatibility_audit(&mut g, &sc, 4, 10_000, 4.0, 1e-9, 1)
            .unwrap()
            .passed
    );

    // a nature that ignores the hypothesis fails
    struct AlwaysLast;
    impl NaturePolicy for AlwaysLast {
        fn reset(&mut self, _: &Scenario, _: usize, _: u64) -> ib_nature::Result<()> {
            Ok(())
        }
        fn respond(&mut self, _: usize) -> ib_nature::Result<Vec<f64>> {
            Ok(vec![0.0, 0.0, 0.0, 1.0])
        }
        fn last_step(&self) -> Option<&StepInfo> {
            None
        }
        fn name(&self) -> &str {
            "always_last"
        }
    }
    assert!(
        !compatibility_audit(&mut AlwaysLast, &sc, 4, 1000, 4.0, 1e-9, 1)
            .unwrap()
            .passed
    );
}
