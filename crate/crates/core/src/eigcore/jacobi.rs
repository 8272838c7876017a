//! Cyclic complex Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot entry with a diagonal
//! unitary, then applies the classical real rotation that annihilates it.
//! Slow (O(n³) per sweep) but accurate to a few ulps of ‖A‖, which is what
//! an oracle needs.

use super::dense::{CMatrix, DenseHermitian, C64};
use super::spectrum::Spectrum;
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 30;

/// Off-diagonal Frobenius norm, relative to ‖A‖_F, at which sweeps stop.
const CONVERGED_OFF: f64 = 1e-17;

pub fn eig_dense(a: &DenseHermitian, want_vectors: bool) -> Result<Spectrum> {
    let n = a.n();
    let mut m = a.as_matrix().clone();
    let mut v = want_vectors.then(|| {
        CMatrix::from_fn(n, n, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
    });

    let scale = m.frobenius_norm();
    let negligible = CONVERGED_OFF * scale / (n.max(1) as f64);
    if n > 1 && scale > 0.0 {
        let mut sweeps = 0;
        loop {
            let off = off_norm(&m);
            if off <= CONVERGED_OFF * scale {
                break;
            }
            if sweeps == MAX_SWEEPS {
                return Err(Error::JacobiNoConvergence { sweeps, off });
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut m, v.as_mut(), p, q, negligible);
                }
            }
            sweeps += 1;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| CMatrix::from_fn(n, n, |r, c| v.get(r, order[c])));
    Ok(Spectrum { values, vectors })
}

fn off_norm(m: &CMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(m: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize, negligible: f64) {
    let g = m.get(p, q);
    let ag = g.norm();
    if ag == 0.0 {
        return;
    }
    let zero = C64::new(0.0, 0.0);
    if ag <= negligible {
        m.set(p, q, zero);
        m.set(q, p, zero);
        return;
    }
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let theta = (aqq - app) / (2.0 * ag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = (g / ag).conj();

    // U restricted to (p, q): [[c, s], [-s·ē, c·ē]] with e the pivot phase.
    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = phase * (-s);
    let uqq = phase * c;

    let n = m.rows();
    for i in 0..n {
        let mip = m.get(i, p);
        let miq = m.get(i, q);
        m.set(i, p, mip * upp + miq * uqp);
        m.set(i, q, mip * upq + miq * uqq);
    }
    for j in 0..n {
        let mpj = m.get(p, j);
        let mqj = m.get(q, j);
        m.set(p, j, upp.conj() * mpj + uqp.conj() * mqj);
        m.set(q, j, upq.conj() * mpj + uqq.conj() * mqj);
    }
    m.set(p, q, zero);
    m.set(q, p, zero);
    m.set(p, p, C64::new(m.get(p, p).re, 0.0));
    m.set(q, q, C64::new(m.get(q, q).re, 0.0));

    if let Some(v) = v {
        for i in 0..v.rows() {
            let vip = v.get(i, p);
            let viq = v.get(i, q);
            v.set(i, p, vip * upp + viq * uqp);
            v.set(i, q, vip * upq + viq * uqq);
        }
    }
}
