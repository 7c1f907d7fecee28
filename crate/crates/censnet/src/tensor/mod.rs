//! Dense and CSR sparse matrices with the kernel set the propagation rules
//! need. Everything here is a pure function of immutable inputs.

mod dense;
mod sparse;

pub use dense::{kernel_threads, DenseMatrix};
pub use sparse::SparseMatrix;

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_dims() -> impl Strategy<Value = (usize, usize, usize)> {
        (1usize..=16, 1usize..=16, 1usize..=16)
    }

    proptest! {
        // spmm agrees with a densified matmul oracle.
        #[test]
        fn spmm_matches_dense_oracle(
            (n, m, k) in arb_dims(),
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut triplets = Vec::new();
            for r in 0..n {
                for c in 0..m {
                    if rng.gen::<f64>() < 0.3 {
                        triplets.push((r, c, rng.gen_range(-2.0..2.0)));
                    }
                }
            }
            let s = SparseMatrix::<f64>::from_triplets(n, m, triplets).unwrap();
            let d_data: Vec<f64> = (0..m * k).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let d = DenseMatrix::from_vec(m, k, d_data).unwrap();
            let fast = s.spmm(&d).unwrap();
            let oracle = s.to_dense().matmul(&d).unwrap();
            prop_assert!(fast.max_abs_diff(&oracle) <= 1e-12);
        }

        // Normalized output is symmetric with entries in [0, 1].
        #[test]
        fn sym_normalize_symmetric_unit_range(n in 1usize..=10, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut triplets = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen::<f64>() < 0.4 {
                        triplets.push((u, v, 1.0));
                        triplets.push((v, u, 1.0));
                    }
                }
            }
            let a = SparseMatrix::<f64>::from_triplets(n, n, triplets).unwrap();
            let norm = a.sym_normalize(true).unwrap();
            prop_assert!(norm.is_symmetric(1e-12));
            for (_, _, v) in norm.entries() {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
        }

        // The gate product never adds entries outside the input pattern.
        #[test]
        fn masked_hadamard_preserves_pattern(n in 1usize..=8, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut triplets = Vec::new();
            for r in 0..n {
                for c in 0..n {
                    if rng.gen::<f64>() < 0.5 {
                        triplets.push((r, c, rng.gen_range(-1.0..1.0)));
                    }
                }
            }
            let s = SparseMatrix::<f64>::from_triplets(n, n, triplets).unwrap();
            let gate: Vec<f64> = (0..s.nnz()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let out = s.masked_hadamard(&gate).unwrap();
            prop_assert!(out.same_pattern(&s));
            // Dense oracle restricted to the pattern.
            let dense_gate = {
                let mut g = DenseMatrix::<f64>::zeros(n, n);
                for (k, (r, c, _)) in s.entries().enumerate() {
                    *g.at_mut(r, c) = gate[k];
                }
                g
            };
            let oracle = s.to_dense().hadamard(&dense_gate).unwrap();
            prop_assert!(out.to_dense().max_abs_diff(&oracle) <= 1e-15);
        }
    }
}
