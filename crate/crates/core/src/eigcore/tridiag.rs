//! Real symmetric tridiagonal matrices, Sturm counts and Gerschgorin disks.

use num_complex::Complex64;

use super::dense::DenseHermitian;
use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix stored as its diagonal and
/// off-diagonal. Off-diagonals may carry either sign; bound formulas use
/// their magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Dimension("tridiagonal matrix must have order >= 1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Dimension(format!(
                "off-diagonal length {} does not match order {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("entries must be finite".into()));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn diag_mut(&mut self) -> &mut [f64] {
        &mut self.diag
    }

    pub fn offdiag_mut(&mut self) -> &mut [f64] {
        &mut self.offdiag
    }

    /// 1-based accessors matching the usual a_i / b_i notation.
    pub fn a(&self, i: usize) -> f64 {
        self.diag[i - 1]
    }

    /// |b_i| for 1 <= i <= n-1, and 0 outside that range (absent neighbor).
    pub fn b_abs(&self, i: usize) -> f64 {
        if i == 0 || i >= self.n() {
            0.0
        } else {
            self.offdiag[i - 1].abs()
        }
    }

    pub fn to_dense(&self) -> DenseHermitian {
        let n = self.n();
        DenseHermitian::from_lower_fn(n, |i, j| {
            if i == j {
                Complex64::new(self.diag[i], 0.0)
            } else if i == j + 1 {
                Complex64::new(self.offdiag[j], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .expect("real diagonal")
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Elementwise sum of two tridiagonals of equal order.
    pub fn add(&self, other: &SymTridiagonal) -> Result<SymTridiagonal> {
        if self.n() != other.n() {
            return Err(Error::Dimension("orders differ".into()));
        }
        SymTridiagonal::new(
            self.diag.iter().zip(&other.diag).map(|(a, b)| a + b).collect(),
            self.offdiag.iter().zip(&other.offdiag).map(|(a, b)| a + b).collect(),
        )
    }

    /// Principal submatrix on 0-based rows `start..start+len`.
    pub fn principal(&self, start: usize, len: usize) -> SymTridiagonal {
        assert!(len >= 1 && start + len <= self.n());
        SymTridiagonal {
            diag: self.diag[start..start + len].to_vec(),
            offdiag: self.offdiag[start..start + len - 1].to_vec(),
        }
    }

    /// Lower and upper ends of the union of Gerschgorin disks.
    pub fn gerschgorin_interval(&self) -> (f64, f64) {
        gerschgorin_disks(self)
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                (lo.min(d.center - d.radius), hi.max(d.center + d.radius))
            })
    }

    pub fn max_abs_offdiag(&self) -> f64 {
        self.offdiag.iter().fold(0.0, |m, b| m.max(b.abs()))
    }

    pub fn is_diagonal(&self) -> bool {
        self.offdiag.iter().all(|&b| b == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: f64,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() <= self.radius
    }
}

/// Gerschgorin disks, one per row: center a_i, radius |b_{i-1}| + |b_i|.
pub fn gerschgorin_disks(t: &SymTridiagonal) -> Vec<Disk> {
    (1..=t.n())
        .map(|i| Disk {
            center: t.a(i),
            radius: t.b_abs(i - 1) + t.b_abs(i),
        })
        .collect()
}

/// Smallest pivot magnitude allowed in the Sturm recurrence.
pub(crate) fn pivmin(t: &SymTridiagonal) -> f64 {
    let bmax = t.max_abs_offdiag();
    f64::MIN_POSITIVE * (bmax * bmax).max(1.0)
}

/// Number of eigenvalues strictly less than `x`.
///
/// Runs the LDLᵀ pivot recurrence for `T - xI` and counts negative pivots.
/// A pivot that is exactly zero (or tiny) is replaced by `+pivmin`, which
/// amounts to evaluating at `x` minus an infinitesimal and keeps the count
/// strict.
pub fn sturm_count(t: &SymTridiagonal, x: f64) -> usize {
    sturm_count_with_pivmin(t, x, pivmin(t))
}

pub(crate) fn sturm_count_with_pivmin(t: &SymTridiagonal, x: f64, pmin: f64) -> usize {
    let d = t.diag();
    let e = t.offdiag();
    let mut count = 0;
    let mut q = d[0] - x;
    if q.abs() < pmin {
        q = pmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        q = (d[i] - x) - e[i - 1] * e[i - 1] / q;
        if q.abs() < pmin {
            q = pmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}
