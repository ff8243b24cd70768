use ib_numkit::{
    kernel_basis, least_squares_min_norm, mat_from_rows, rank, RealMatrix, RealVector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn m(rows: &[&[f64]]) -> RealMatrix {
    let v: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    mat_from_rows(&v, rows[0].len()).unwrap()
}

#[test]
fn kernel_examples() {
    let k = kernel_basis(&m(&[&[1.0, 1.0]]));
    assert_eq!(k.ncols(), 1);
    assert!((k[(0, 0)] + k[(1, 0)]).abs() < 1e-12);
    assert_eq!(kernel_basis(&RealMatrix::zeros(2, 2)).ncols(), 2);
    assert_eq!(kernel_basis(&RealMatrix::identity(3, 3)).ncols(), 0);
}

#[test]
fn rank_examples() {
    assert_eq!(rank(&RealMatrix::identity(3, 3)), 3);
    assert_eq!(rank(&RealMatrix::zeros(2, 3)), 0);
    assert_eq!(rank(&m(&[&[1.0, 1.0], &[1.0, 1.0]])), 1);
}

#[test]
fn min_norm_examples() {
    let x = least_squares_min_norm(&m(&[&[1.0, 1.0]]), &RealVector::from_vec(vec![1.0])).unwrap();
    assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
    let v = RealVector::from_vec(vec![0.3, -2.0, 5.0]);
    let x = least_squares_min_norm(&RealMatrix::identity(3, 3), &v).unwrap();
    assert!((x - v).amax() < 1e-12);
    let bad = least_squares_min_norm(
        &m(&[&[1.0, 1.0], &[1.0, 1.0]]),
        &RealVector::from_vec(vec![1.0, 2.0]),
    );
    assert!(bad.is_err());
}

#[test]
fn min_norm_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let a = RealMatrix::from_fn(2, 4, |_, _| rng.gen_range(-1.0..1.0));
        let b = RealVector::from_fn(2, |_, _| rng.gen_range(-1.0..1.0));
        let x = least_squares_min_norm(&a, &b).unwrap();
        // Grid over the 2-dimensional kernel around the particular solution.
        let k = kernel_basis(&a);
        let mut best = f64::INFINITY;
        let steps = 400;
        for i in 0..=steps {
            for j in 0..=steps {
                let s = -2.0 + 4.0 * i as f64 / steps as f64;
                let t = -2.0 + 4.0 * j as f64 / steps as f64;
                let y = &x + k.column(0) * s + k.column(1) * t;
                best = best.min(y.norm());
            }
        }
        assert!(x.norm() <= best + 1e-12);
        assert!(best - x.norm() < 1e-3);
    }
}

proptest! {
    #[test]
    fn kernel_is_null_and_full(rows in 1usize..4, cols in 1usize..6, seed in 0u64..1000, dup in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = RealMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0));
        if dup && rows > 1 {
            let r0 = a.row(0).clone_owned();
            a.set_row(rows - 1, &(r0 * 2.0));
        }
        let k = kernel_basis(&a);
        prop_assert!((&a * &k).amax() <= 1e-9);
        prop_assert_eq!(k.ncols(), cols - rank(&a));
        prop_assert_eq!(rank(&k), k.ncols());
    }

    #[test]
    fn min_norm_orthogonal_to_kernel(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RealMatrix::from_fn(2, 5, |_, _| rng.gen_range(-1.0..1.0));
        let b = &a * RealVector::from_fn(5, |_, _| rng.gen_range(-1.0..1.0));
        let x = least_squares_min_norm(&a, &b).unwrap();
        let k = kernel_basis(&a);
        prop_assert!((k.transpose() * &x).amax() <= 1e-8);
        prop_assert!((&a * &x - &b).amax() <= 1e-9);
    }
}
