//! Eigensolvers, norms, Gerschgorin disks and test-matrix generators.
//!
//! Everything here is self-contained and serves as the oracle against which
//! the bound modules are checked: a cyclic Jacobi solver for dense Hermitian
//! matrices and Sturm bisection with inverse iteration for real symmetric
//! tridiagonals.

mod bisect;
mod dense;
mod generators;
mod jacobi;
mod norms;
mod spectrum;
mod tridiag;

pub use bisect::{
    bisect_eigenvalue, bisection_tolerance, eig_tridiag, eig_tridiag_or_dense, twisted_eigenvector,
};
pub use dense::{BlockSplit, CMatrix, DenseHermitian, C64};
pub use generators::{aed_example_1000, wilkinson_plus, wilkinson_split};
pub use jacobi::{eig_dense, MAX_SWEEPS};
pub use norms::{spectral_norm, SpectralNorm};
pub use spectrum::{Spectrum, TOL_ORTH, TOL_RESID};
pub use tridiag::{gerschgorin_disks, sturm_count, Disk, SymTridiagonal};
