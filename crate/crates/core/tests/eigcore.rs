use eigpert::eigcore::{
    eig_dense, eig_tridiag, gerschgorin_disks, spectral_norm, sturm_count, wilkinson_plus,
    wilkinson_split, CMatrix, DenseHermitian, SymTridiagonal, C64,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tridiag(rng: &mut impl Rng, n: usize) -> SymTridiagonal {
    let d = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let e = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SymTridiagonal::new(d, e).unwrap()
}

#[test]
fn wilkinson_top_pair_is_nearly_equal() {
    let w = wilkinson_plus(10).unwrap();
    let s = eig_tridiag(&w, true).unwrap();
    let n = s.len();
    let gap = s.values[n - 1] - s.values[n - 2];
    assert!(gap.abs() <= 1e-13, "gap {gap:e}");
    assert!((s.values[n - 1] - 10.746194182903).abs() < 1e-11);
    assert!(s.max_residual_tridiag(&w).unwrap() <= 1e-12 * 10.75);
    assert!(s.orthogonality_error().unwrap() <= 1e-12);
}

#[test]
fn split_spectrum_has_n_double_values_and_a_simple_zero() {
    for n in 2..=8 {
        let (a, _) = wilkinson_split(n).unwrap();
        let s = eig_tridiag(&a, false).unwrap();
        let mut doubles = 0;
        let mut simple = Vec::new();
        let mut i = 0;
        while i < s.len() {
            if i + 1 < s.len() && s.values[i + 1] - s.values[i] < 1e-12 {
                doubles += 1;
                i += 2;
            } else {
                simple.push(s.values[i]);
                i += 1;
            }
        }
        assert_eq!(doubles, n, "n={n}");
        assert_eq!(simple.len(), 1);
        assert!(simple[0].abs() < 1e-14);
    }
}

#[test]
fn tridiagonal_solver_agrees_with_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(1..=50);
        let t = random_tridiag(&mut rng, n);
        let st = eig_tridiag(&t, true).unwrap();
        let sd = eig_dense(&t.to_dense(), false).unwrap();
        let scale = spectral_norm(&t).unwrap().max(1.0);
        for (a, b) in st.values.iter().zip(&sd.values) {
            assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        }
        assert!(st.max_residual_tridiag(&t).unwrap() <= 1e-12 * scale);
        assert!(st.orthogonality_error().unwrap() <= 1e-12);
    }
}

#[test]
fn dense_solver_handles_complex_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.gen_range(2..=12);
        let a = DenseHermitian::from_lower_fn(n, |i, j| {
            if i == j {
                C64::new(rng.gen_range(-2.0..2.0), 0.0)
            } else {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }
        })
        .unwrap();
        let s = eig_dense(&a, true).unwrap();
        let norm = s.abs_max();
        assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(s.max_residual(&a).unwrap() <= 1e-12 * norm);
        assert!(s.orthogonality_error().unwrap() <= 1e-12);
    }
}

#[test]
fn rectangular_norm_matches_gram_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let b = CMatrix::from_fn(3, 4, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let gram = DenseHermitian::from_matrix(&b.conj_transpose().matmul(&b).unwrap()).unwrap();
        let via_gram = eig_dense(&gram, false).unwrap().max().sqrt();
        let via_dilation = spectral_norm(&b).unwrap();
        assert!((via_gram - via_dilation).abs() <= 1e-12, "{via_gram} vs {via_dilation}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sturm_count_is_monotone_and_matches_ranks(
        d in prop::collection::vec(-1.0f64..1.0, 2..20),
        seed in any::<u64>(),
        xs in prop::collection::vec(-3.0f64..3.0, 1..10),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = (0..d.len() - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let t = SymTridiagonal::new(d, e).unwrap();
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        let counts: Vec<usize> = xs.iter().map(|&x| sturm_count(&t, x)).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        let s = eig_tridiag(&t, false).unwrap();
        for (x, c) in xs.iter().zip(&counts) {
            // ranks from the converged bisection values, away from ties
            let below = s.values.iter().filter(|&&v| v < *x).count();
            let near = s.values.iter().any(|v| (v - x).abs() < 1e-10);
            if !near {
                prop_assert_eq!(below, *c);
            }
        }
    }

    #[test]
    fn eigenvalues_lie_in_gerschgorin_union(
        d in prop::collection::vec(-5.0f64..5.0, 1..30),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = (0..d.len() - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let t = SymTridiagonal::new(d, e).unwrap();
        let disks = gerschgorin_disks(&t);
        let s = eig_tridiag(&t, false).unwrap();
        for lam in &s.values {
            prop_assert!(disks.iter().any(|dk| (lam - dk.center).abs() <= dk.radius + 1e-12));
        }
    }
}
