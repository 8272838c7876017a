//! Symmetric tridiagonal eigensolver: Sturm bisection for eigenvalues and
//! inverse iteration for eigenvectors.

use num_complex::Complex64;

use super::dense::CMatrix;
use super::jacobi::eig_dense;
use super::spectrum::Spectrum;
use super::tridiag::{pivmin, sturm_count_with_pivmin, SymTridiagonal};
use crate::error::{Error, Result};

/// Eigenvalues closer than this fraction of ‖T‖₁ are treated as one cluster
/// and their eigenvectors are explicitly orthogonalized against each other.
const CLUSTER_REL: f64 = 1e-3;
const MAX_INVERSE_ITERATIONS: usize = 10;
const EXTRA_ITERATIONS: usize = 2;
/// Residual target for inverse iteration, relative to ‖T‖₁; an order of
/// magnitude below the public residual tolerance.
const INVIT_RESID: f64 = 1e-13;

/// Bisection stopping width near `x`: 2 ulps of |x|, floored at twice the
/// pivot threshold.
///
/// Sturm counts are backward stable with respect to relative perturbations
/// of the off-diagonals, so a relative width keeps the small eigenvalues of
/// graded matrices accurate to their own scale rather than to ‖T‖.
pub fn bisection_tolerance(t: &SymTridiagonal, x: f64) -> f64 {
    (2.0 * f64::EPSILON * x.abs()).max(2.0 * pivmin(t))
}

/// All eigenvalues (ascending) and optionally eigenvectors of `t`.
///
/// The matrix is first split at exactly-zero off-diagonals; each unreduced
/// block is solved independently and the results merged.
pub fn eig_tridiag(t: &SymTridiagonal, want_vectors: bool) -> Result<Spectrum> {
    let n = t.n();
    let mut pairs: Vec<(f64, Option<Vec<f64>>)> = Vec::with_capacity(n);
    let mut start = 0;
    for end in 1..=n {
        if end == n || t.offdiag()[end - 1] == 0.0 {
            let block = t.principal(start, end - start);
            let values = bisect_all(&block);
            if want_vectors {
                let vecs = inverse_iteration(&block, &values, start)?;
                for (lam, v) in values.into_iter().zip(vecs) {
                    let mut full = vec![0.0; n];
                    full[start..end].copy_from_slice(&v);
                    pairs.push((lam, Some(full)));
                }
            } else {
                pairs.extend(values.into_iter().map(|lam| (lam, None)));
            }
            start = end;
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = want_vectors.then(|| {
        CMatrix::from_fn(n, n, |r, c| {
            Complex64::new(pairs[c].1.as_ref().expect("vector")[r], 0.0)
        })
    });
    Ok(Spectrum { values, vectors })
}

/// Like [`eig_tridiag`], but falls back to the dense Jacobi solver on the
/// embedded matrix when inverse iteration fails to converge.
pub fn eig_tridiag_or_dense(t: &SymTridiagonal, want_vectors: bool) -> Result<Spectrum> {
    match eig_tridiag(t, want_vectors) {
        Err(Error::InverseIterationNoConvergence { .. }) => eig_dense(&t.to_dense(), want_vectors),
        other => other,
    }
}

/// Eigenvalue of rank `k` (0-based, ascending) by bisection.
pub fn bisect_eigenvalue(t: &SymTridiagonal, k: usize) -> f64 {
    assert!(k < t.n());
    let (lo, hi) = search_interval(t);
    bisect_in(t, k, lo, hi, pivmin(t))
}

fn search_interval(t: &SymTridiagonal) -> (f64, f64) {
    let (glo, ghi) = t.gerschgorin_interval();
    let pad = 2.0 * pivmin(t) + 4.0 * f64::EPSILON * glo.abs().max(ghi.abs());
    (glo - pad, ghi + pad)
}

fn bisect_in(t: &SymTridiagonal, k: usize, mut lo: f64, mut hi: f64, pmin: f64) -> f64 {
    // Invariant: count(lo) <= k < count(hi).
    loop {
        let mid = 0.5 * (lo + hi);
        let tol = (2.0 * f64::EPSILON * lo.abs().max(hi.abs())).max(2.0 * pmin);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return mid;
        }
        if sturm_count_with_pivmin(t, mid, pmin) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn bisect_all(t: &SymTridiagonal) -> Vec<f64> {
    let n = t.n();
    if n == 1 {
        return vec![t.diag()[0]];
    }
    let pmin = pivmin(t);
    let (lo, hi) = search_interval(t);
    // The previous eigenvalue, pushed down by its stopping width, is usually
    // a valid lower bracket; the count check falls back to `lo` otherwise.
    let mut out = Vec::with_capacity(n);
    let mut lower = lo;
    for k in 0..n {
        let start = if sturm_count_with_pivmin(t, lower, pmin) <= k { lower } else { lo };
        let lam = bisect_in(t, k, start, hi, pmin);
        out.push(lam);
        lower = lam - bisection_tolerance(t, lam);
    }
    out
}

/// LU factorization of a tridiagonal matrix with partial pivoting.
struct TridiagLu {
    d: Vec<f64>,
    dl: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    /// Factors `T - shift·I`; zero pivots are replaced by `tiny`.
    fn new(t: &SymTridiagonal, shift: f64, tiny: f64) -> Self {
        let n = t.n();
        let mut d: Vec<f64> = t.diag().iter().map(|a| a - shift).collect();
        let mut dl = t.offdiag().to_vec();
        let mut du = t.offdiag().to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for p in d.iter_mut() {
            if p.abs() < tiny {
                *p = tiny.copysign(*p);
            }
        }
        TridiagLu { d, dl, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * b[i + 2];
            }
            b[i] = s / self.d[i];
        }
    }
}

fn norm2(x: &[f64]) -> f64 {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    // xorshift; any vector with no tiny components works.
    let mut s: u64 = 0x9E37_79B9_7F4A_7C15 ^ (seed as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            0.5 + (s >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

/// Eigenvectors for the given (ascending) eigenvalues of an unreduced block.
/// `offset` only shapes error messages (global index of the block start).
fn inverse_iteration(t: &SymTridiagonal, values: &[f64], offset: usize) -> Result<Vec<Vec<f64>>> {
    let n = t.n();
    if n == 1 {
        return Ok(vec![vec![1.0]]);
    }
    let norm1 = (1..=n)
        .map(|i| t.a(i).abs() + t.b_abs(i - 1) + t.b_abs(i))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let ortol = CLUSTER_REL * norm1;
    let pertol = 10.0 * f64::EPSILON * norm1;
    let tiny = f64::EPSILON * norm1;
    let target = INVIT_RESID * norm1;

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    let mut cluster_start = 0;
    let mut prev_shift = f64::NEG_INFINITY;
    for (j, &lam) in values.iter().enumerate() {
        if j > 0 && lam - values[j - 1] > ortol {
            cluster_start = j;
        }
        // Distinct shifts inside a cluster steer the iterates apart.
        let shift = if j > cluster_start && lam - prev_shift < pertol {
            prev_shift + pertol
        } else {
            lam
        };
        prev_shift = shift;
        let lu = TridiagLu::new(t, shift, tiny);

        let mut x = start_vector(n, offset + j);
        let s = norm2(&x);
        x.iter_mut().for_each(|v| *v /= s);
        let mut ok = false;
        let mut extra = 0;
        for _ in 0..MAX_INVERSE_ITERATIONS + EXTRA_ITERATIONS {
            lu.solve(&mut x);
            // Two Gram-Schmidt passes against earlier cluster members.
            for _ in 0..2 {
                for prev in &vectors[cluster_start..j] {
                    let c = dot(prev, &x);
                    x.iter_mut().zip(prev).for_each(|(xi, pi)| *xi -= c * pi);
                }
            }
            let s = norm2(&x);
            if s == 0.0 || !s.is_finite() {
                x = start_vector(n, offset + j + 7919);
                let s = norm2(&x);
                x.iter_mut().for_each(|v| *v /= s);
                continue;
            }
            x.iter_mut().for_each(|v| *v /= s);
            let tx = t.matvec(&x);
            let resid = norm2(&tx.iter().zip(&x).map(|(p, q)| p - lam * q).collect::<Vec<_>>());
            if resid <= target {
                ok = true;
                // A converged residual still leaves an angle error of about
                // resid / gap; further steps shrink it to rounding level.
                if extra == EXTRA_ITERATIONS {
                    break;
                }
                extra += 1;
            }
        }
        if !ok {
            return Err(Error::InverseIterationNoConvergence { index: offset + j });
        }
        vectors.push(x);
    }
    Ok(vectors)
}

/// Eigenvector for an isolated eigenvalue `lambda` of an unreduced `t`
/// from a twisted factorization of `T - λI`.
///
/// Every component except the one at the twist row is obtained from its
/// own row equation, so component ratios are accurate relative to the
/// components themselves rather than to ‖T‖. This is the oracle for
/// questions about tiny trailing components. Eigenvalues inside a cluster
/// should use [`eig_tridiag`] instead. The result has unit 2-norm with its
/// largest component positive.
pub fn twisted_eigenvector(t: &SymTridiagonal, lambda: f64) -> Result<Vec<f64>> {
    let n = t.n();
    if t.offdiag().contains(&0.0) {
        return Err(Error::InvalidArgument("twisted eigenvector needs an unreduced matrix".into()));
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let pmin = pivmin(t);
    let guard = |v: f64| if v.abs() < pmin { pmin } else { v };
    let (d, e) = (t.diag(), t.offdiag());
    let mut fwd = vec![0.0; n];
    fwd[0] = guard(d[0] - lambda);
    for i in 1..n {
        fwd[i] = guard(d[i] - lambda - e[i - 1] * e[i - 1] / fwd[i - 1]);
    }
    let mut bwd = vec![0.0; n];
    bwd[n - 1] = guard(d[n - 1] - lambda);
    for i in (0..n - 1).rev() {
        bwd[i] = guard(d[i] - lambda - e[i] * e[i] / bwd[i + 1]);
    }
    let twist = (0..n)
        .min_by(|&i, &j| {
            let g = |r: usize| (fwd[r] + bwd[r] - (d[r] - lambda)).abs();
            g(i).total_cmp(&g(j))
        })
        .expect("n >= 1");
    let mut x = vec![0.0; n];
    x[twist] = 1.0;
    for i in (0..twist).rev() {
        x[i] = -e[i] * x[i + 1] / fwd[i];
    }
    for i in twist + 1..n {
        x[i] = -e[i - 1] * x[i - 1] / bwd[i];
    }
    let s = norm2(&x);
    let sign = if x.iter().fold(0.0f64, |m, v| if v.abs() > m.abs() { *v } else { m }) < 0.0 { -1.0 } else { 1.0 };
    x.iter_mut().for_each(|v| *v *= sign / s);
    Ok(x)
}
