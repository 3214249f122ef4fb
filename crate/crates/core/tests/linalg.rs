mod common;

use kuranishi_core::linalg::{kernel_basis, rref, solve, sparse_kernel, Matrix, SparseVec};
use num_traits::Zero;
use proptest::prelude::*;

fn matrix(seed: u64, rows: usize, cols: usize) -> Matrix {
    common::random_matrix(&mut common::rng(seed), rows, cols)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(seed in any::<u64>(), r in 0usize..6, c in 0usize..6) {
        let m = matrix(seed, r, c);
        let k = kernel_basis(&m);
        prop_assert_eq!(m.rank() + k.cols(), c);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn rref_is_idempotent(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let m = matrix(seed, r, c);
        let once = rref(&m);
        let twice = rref(&once.reduced);
        prop_assert_eq!(&twice.reduced, &once.reduced);
        prop_assert_eq!(once.transform.mul(&m), once.reduced);
    }

    #[test]
    fn solve_recovers_a_preimage(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let mut g = common::rng(seed);
        let m = common::random_matrix(&mut g, r, c);
        let x: Vec<_> = (0..c).map(|_| common::rat(&mut g)).collect();
        let b = m.mul_vec(&x);
        let y = solve(&m, &b).unwrap();
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn sparse_kernel_matches_dense(seed in any::<u64>(), r in 0usize..6, c in 0usize..7) {
        let m = matrix(seed, r, c);
        let cols: Vec<SparseVec> = (0..c)
            .map(|j| (0..r).filter(|&i| !m[(i, j)].is_zero()).map(|i| (i, m[(i, j)].clone())).collect())
            .collect();
        let k = sparse_kernel(&cols);
        prop_assert_eq!(k.len(), c - m.rank());
        for v in &k {
            let mut dense = vec![kuranishi_core::rational::zero(); c];
            for (j, x) in v {
                dense[*j] = x.clone();
            }
            prop_assert!(m.mul_vec(&dense).iter().all(Zero::is_zero));
        }
    }
}

#[test]
fn inverse_of_invertible() {
    let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
    let inv = m.inverse().unwrap();
    assert_eq!(m.mul(&inv), Matrix::identity(2));
    assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
}
