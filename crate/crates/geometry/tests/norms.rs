use ib_geometry::{
    min_norm_on_affine, norm_eval, norm_subgradient, AffineSubspace, ConvexBody, NormBlock,
    NormSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

fn specs() -> Vec<(NormSpec, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let hull: Vec<Vec<f64>> = (0..5).map(|_| rand_vec(&mut rng, 3)).collect();
    vec![
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
    ]
}

#[test]
fn norm_axioms_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (n, d) in specs() {
        for _ in 0..1000 {
            let u = rand_vec(&mut rng, d);
            let v = rand_vec(&mut rng, d);
            let s: f64 = rng.gen_range(-3.0..3.0);
            let nu = norm_eval(&n, &u).unwrap();
            let nv = norm_eval(&n, &v).unwrap();
            let sum: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let scaled: Vec<f64> = u.iter().map(|a| s * a).collect();
            assert!(norm_eval(&n, &sum).unwrap() <= nu + nv + 1e-9, "{n:?}");
            assert!(
                (norm_eval(&n, &scaled).unwrap() - s.abs() * nu).abs() <= 1e-9 * (1.0 + nu),
                "{n:?}"
            );
            assert!(nu > 0.0);
        }
        assert_eq!(norm_eval(&n, &vec![0.0; d]).unwrap(), 0.0);
    }
}

#[test]
fn subgradients_support_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (n, d) in specs() {
        for _ in 0..100 {
            let v = rand_vec(&mut rng, d);
            let g = norm_subgradient(&n, &v).unwrap();
            let gv: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!((gv - norm_eval(&n, &v).unwrap()).abs() < 1e-8, "{n:?}");
            // g·w <= ‖w‖ for any w
            for _ in 0..20 {
                let w = rand_vec(&mut rng, d);
                let gw: f64 = g.iter().zip(&w).map(|(a, b)| a * b).sum();
                assert!(gw <= norm_eval(&n, &w).unwrap() + 1e-8, "{n:?}");
            }
        }
    }
}

#[test]
fn simplex_hull_norm_is_l1() {
    let verts = ConvexBody::simplex(3).vertices().unwrap();
    let hull = NormSpec::PolytopeHull { vertices: verts };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let v = rand_vec(&mut rng, 3);
        let a = norm_eval(&hull, &v).unwrap();
        let b = norm_eval(&NormSpec::L1, &v).unwrap();
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn norm_examples() {
    assert_eq!(norm_eval(&NormSpec::L1, &[1.0, -2.0, 0.5]).unwrap(), 3.5);
    let m = NormSpec::MaxOfBlocks {
        blocks: vec![
            NormBlock::new(vec![0, 1], NormSpec::L2),
            NormBlock::new(vec![2], NormSpec::L1),
        ],
    };
    assert!((norm_eval(&m, &[3.0, 4.0, 2.0]).unwrap() - 5.0).abs() < 1e-12);
    assert!(norm_eval(&NormSpec::L1, &[1.0]).is_ok());
    assert!(norm_eval(&m, &[1.0, 2.0]).is_err());
    let bad = NormSpec::MaxOfBlocks {
        blocks: vec![NormBlock::new(vec![0, 0], NormSpec::L1)],
    };
    assert!(norm_eval(&bad, &[1.0, 1.0]).is_err());
}

#[test]
fn min_norm_examples() {
    let s = AffineSubspace::from_rows(&[vec![1.0, 1.0]], &[1.0], 2).unwrap();
    let (_, v2) = min_norm_on_affine(&NormSpec::L2, &s).unwrap();
    assert!((v2 - 0.5f64.sqrt()).abs() < 1e-9);
    let (p1, v1) = min_norm_on_affine(&NormSpec::L1, &s).unwrap();
    assert!((v1 - 1.0).abs() < 1e-9);
    assert!((p1[0] + p1[1] - 1.0).abs() < 1e-9);
    let (_, vi) = min_norm_on_affine(&NormSpec::LInf, &s).unwrap();
    assert!((vi - 0.5).abs() < 1e-9);
    assert!(AffineSubspace::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[1.0, 2.0], 2).is_err());
}

#[test]
fn min_norm_block_l2_matches_grid() {
    // MaxOfBlocks with a Euclidean block goes through cutting planes; compare
    // against a dense grid over the kernel coefficient of a line in R^3.
    let m = NormSpec::MaxOfBlocks {
        blocks: vec![
            NormBlock::new(vec![0, 1], NormSpec::L2),
            NormBlock::new(vec![2], NormSpec::L1),
        ],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let rows = vec![rand_vec(&mut rng, 3), rand_vec(&mut rng, 3)];
        let rhs = rand_vec(&mut rng, 2);
        let s = AffineSubspace::from_rows(&rows, &rhs, 3).unwrap();
        assert_eq!(s.dim(), 1);
        let (_, v) = min_norm_on_affine(&m, &s).unwrap();
        let mut best = f64::INFINITY;
        let mut c = -20.0;
        while c <= 20.0 {
            best = best.min(norm_eval(&m, &s.at(&[c])).unwrap());
            c += 1e-3;
        }
        assert!(v <= best + 1e-9);
        assert!(best - v < 2e-3);
    }
}

#[test]
fn norm_spec_json_round_trip() {
    for (n, _) in specs() {
        let s = serde_json::to_string(&n).unwrap();
        let back: NormSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, n);
    }
    let s = serde_json::to_string(&NormSpec::L1).unwrap();
    assert_eq!(s, r#"{"kind":"l1"}"#);
}
