mod common;

use common::{random_hermitian, random_unitary};
use eigpert::eigcore::{eig_dense, wilkinson_split, DenseHermitian, C64};
use eigpert::multiexp::{detect_multiple, expansion_order, first_order_eigs, log_grid, Slope};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn remainder_is_second_order_for_random_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let a = DenseHermitian::from_real_diagonal(&[1.0, 1.0, 5.0]);
    let ctx = &detect_multiple(&a, 1e-10).unwrap()[0];
    for _ in 0..10 {
        let e = random_hermitian(&mut rng, 3);
        let fit = expansion_order(ctx, &e, &log_grid(1e-2, 1e-5, 13)).unwrap();
        let Slope::Fitted(slope) = fit.slope else { panic!("generic E should not be exact") };
        assert!((1.8..=2.2).contains(&slope), "slope {slope}");
        assert!(fit.all_within_bound());
    }
}

#[test]
fn predictions_do_not_depend_on_the_eigenbasis() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let a = DenseHermitian::from_real_diagonal(&[2.0, 2.0, 2.0, -1.0, 4.0]);
    let ctx = detect_multiple(&a, 1e-10).unwrap().remove(0);
    assert_eq!(ctx.r, 3);
    for _ in 0..20 {
        let e = random_hermitian(&mut rng, 5);
        let u = random_unitary(&mut rng, 3);
        let mut rotated = ctx.clone();
        rotated.q1 = ctx.q1.matmul(&u).unwrap();
        let p = first_order_eigs(&ctx, &e, 0.1).unwrap();
        let q = first_order_eigs(&rotated, &e, 0.1).unwrap();
        for (x, y) in p.iter().zip(&q) {
            assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn simple_eigenvalue_reduces_to_rayleigh_quotient() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    let a = random_hermitian(&mut rng, 4);
    let s = eig_dense(&a, true).unwrap();
    let e = random_hermitian(&mut rng, 4);
    let vecs = s.vectors.as_ref().unwrap();
    for i in 0..4 {
        // a one-member context built by hand
        let ctx = eigpert::multiexp::MultipleEigContext {
            a: a.clone(),
            lambda0: s.values[i],
            r: 1,
            q1: vecs.submatrix(0, i, 4, 1),
            gap: 1.0,
            ranks: vec![i],
        };
        let x = vecs.column(i);
        let ex = e.as_matrix().matvec(&x);
        let rq: C64 = x.iter().zip(&ex).map(|(a, b)| a.conj() * b).sum();
        let p = first_order_eigs(&ctx, &e, 0.01).unwrap();
        assert!((p[0] - (s.values[i] + 0.01 * rq.re)).abs() <= 1e-14);
    }
}

#[test]
fn identity_pair_is_exact() {
    let a = DenseHermitian::identity(3);
    let ctx = &detect_multiple(&a, 1e-10).unwrap()[0];
    let fit = expansion_order(ctx, &DenseHermitian::identity(3), &log_grid(1e-2, 1e-5, 7)).unwrap();
    assert_eq!(fit.slope, Slope::Exact);
    assert!(fit.all_within_bound());
}

#[test]
fn split_wilkinson_has_six_double_eigenvalues() {
    let (a, _) = wilkinson_split(6).unwrap();
    let ctxs = detect_multiple(&a.to_dense(), 1e-10).unwrap();
    assert_eq!(ctxs.len(), 6);
    assert!(ctxs.iter().all(|c| c.r == 2 && c.gap > 0.0));
    for c in &ctxs {
        let resid = a.to_dense().as_matrix().matmul(&c.q1).unwrap();
        let diff = (0..c.q1.rows())
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (resid.get(i, j) - c.q1.get(i, j) * c.lambda0).norm())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-12 * 6.0);
    }
}
