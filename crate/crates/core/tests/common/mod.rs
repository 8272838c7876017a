//! Random instance builders shared by the integration tests.
#![allow(dead_code)]

use eigpert::eigcore::{eig_dense, spectral_norm, CMatrix, DenseHermitian, SymTridiagonal, C64};
use rand::Rng;

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> DenseHermitian {
    DenseHermitian::from_lower_fn(n, |i, j| {
        if i == j {
            C64::new(rng.gen_range(-1.0..1.0), 0.0)
        } else {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }
    })
    .unwrap()
}

/// Random unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    eig_dense(&random_hermitian(rng, n), true).unwrap().vectors.unwrap()
}

/// U diag(values) Uᴴ for a random unitary U.
pub fn with_spectrum(rng: &mut impl Rng, values: &[f64]) -> DenseHermitian {
    let n = values.len();
    let u = random_unitary(rng, n);
    let d = CMatrix::from_fn(n, n, |i, j| if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) });
    let m = u.matmul(&d).unwrap().matmul(&u.conj_transpose()).unwrap();
    DenseHermitian::from_matrix(&m).unwrap()
}

/// Random Hermitian matrix rescaled to spectral norm `norm`.
pub fn hermitian_with_norm(rng: &mut impl Rng, n: usize, norm: f64) -> DenseHermitian {
    let e = random_hermitian(rng, n);
    let s = spectral_norm(&e).unwrap();
    e.scale(norm / s)
}

/// Random k x m complex block rescaled to spectral norm `norm`.
pub fn block_with_norm(rng: &mut impl Rng, rows: usize, cols: usize, norm: f64) -> CMatrix {
    let b = CMatrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let s = spectral_norm(&b).unwrap();
    b.scale(norm / s)
}

/// Assembles [[a11, a21ᴴ], [a21, a22]].
pub fn assemble(a11: &DenseHermitian, a21: &CMatrix, a22: &DenseHermitian) -> DenseHermitian {
    let k = a11.n();
    let n = k + a22.n();
    DenseHermitian::from_lower_fn(n, |i, j| match (i < k, j < k) {
        (true, true) => a11.get(i, j),
        (false, false) => a22.get(i - k, j - k),
        (false, true) => a21.get(i - k, j),
        (true, false) => unreachable!(),
    })
    .unwrap()
}

/// Graded tridiagonal: |a_i| descending by a factor of at least 2, |b_i| <= 1.
pub fn graded_tridiag(rng: &mut impl Rng, n: usize) -> SymTridiagonal {
    let mut mag = 10f64.powf(rng.gen_range(1.0..2.0)) * 2f64.powi(n as i32 - 1);
    let mut d = Vec::with_capacity(n);
    for _ in 0..n {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        d.push(sign * mag);
        mag /= rng.gen_range(2.0..4.0);
    }
    let e = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SymTridiagonal::new(d, e).unwrap()
}
