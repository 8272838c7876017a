//! Spectral norms through the matching eigensolver.

use num_complex::Complex64;

use super::bisect::bisect_eigenvalue;
use super::dense::{CMatrix, DenseHermitian};
use super::jacobi::eig_dense;
use super::tridiag::SymTridiagonal;
use crate::error::Result;

pub trait SpectralNorm {
    /// ‖·‖₂, the largest singular value.
    fn spectral_norm(&self) -> Result<f64>;
}

impl SpectralNorm for DenseHermitian {
    fn spectral_norm(&self) -> Result<f64> {
        if self.n() == 0 || self.is_zero() {
            return Ok(0.0);
        }
        Ok(eig_dense(self, false)?.abs_max())
    }
}

impl SpectralNorm for SymTridiagonal {
    fn spectral_norm(&self) -> Result<f64> {
        // Only the two extreme eigenvalues are needed.
        let lo = bisect_eigenvalue(self, 0);
        let hi = bisect_eigenvalue(self, self.n() - 1);
        Ok(lo.abs().max(hi.abs()))
    }
}

/// σ₁ of a general (rectangular) block from the Hermitian dilation
/// `[[0, Bᴴ], [B, 0]]`, whose largest eigenvalue is σ₁(B).
impl SpectralNorm for CMatrix {
    fn spectral_norm(&self) -> Result<f64> {
        let (r, c) = (self.rows(), self.cols());
        if r == 0 || c == 0 || self.is_zero() {
            return Ok(0.0);
        }
        let dilation = DenseHermitian::from_lower_fn(r + c, |i, j| {
            // lower triangle: rows c.. hold B against columns 0..c
            if i >= c && j < c {
                self.get(i - c, j)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })?;
        Ok(eig_dense(&dilation, false)?.max())
    }
}

pub fn spectral_norm<M: SpectralNorm + ?Sized>(m: &M) -> Result<f64> {
    m.spectral_norm()
}
