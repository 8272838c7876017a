use super::dense::{CMatrix, DenseHermitian, C64};
use super::tridiag::SymTridiagonal;

/// Residual tolerance for eigenpairs, relative to ‖A‖₂.
pub const TOL_RESID: f64 = 1e-12;
/// Orthogonality tolerance for eigenvector sets, ‖VᴴV − I‖_max.
pub const TOL_ORTH: f64 = 1e-12;

/// Eigenvalues in ascending order, optionally with eigenvectors stored as
/// the columns of an n x m matrix aligned with `values`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Option<CMatrix>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Eigenvector `i` (0-based), if vectors were computed.
    pub fn vector(&self, i: usize) -> Option<Vec<C64>> {
        self.vectors.as_ref().map(|v| v.column(i))
    }

    /// Real part of eigenvector `i`; exact for tridiagonal spectra.
    pub fn real_vector(&self, i: usize) -> Option<Vec<f64>> {
        self.vector(i).map(|v| v.into_iter().map(|z| z.re).collect())
    }

    /// Largest |values[i]| − the spectral norm of the underlying matrix.
    pub fn abs_max(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// max_i ‖A v_i − λ_i v_i‖₂.
    pub fn max_residual(&self, a: &DenseHermitian) -> Option<f64> {
        let v = self.vectors.as_ref()?;
        let mut worst: f64 = 0.0;
        for (i, &lam) in self.values.iter().enumerate() {
            let x = v.column(i);
            let ax = a.as_matrix().matvec(&x);
            let r: f64 = ax
                .iter()
                .zip(&x)
                .map(|(p, q)| (p - q * lam).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        Some(worst)
    }

    /// max_i ‖T v_i − λ_i v_i‖₂ for a tridiagonal source matrix.
    pub fn max_residual_tridiag(&self, t: &SymTridiagonal) -> Option<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            let x = self.real_vector(i)?;
            let tx = t.matvec(&x);
            let r: f64 = tx
                .iter()
                .zip(&x)
                .map(|(p, q)| (p - self.values[i] * q).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        Some(worst)
    }

    /// ‖VᴴV − I‖_max.
    pub fn orthogonality_error(&self) -> Option<f64> {
        let v = self.vectors.as_ref()?;
        let m = v.cols();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in i..m {
                let dot: C64 = (0..v.rows()).map(|r| v.get(r, i).conj() * v.get(r, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        Some(worst)
    }
}
