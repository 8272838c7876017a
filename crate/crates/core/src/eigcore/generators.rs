//! Named test matrices.

use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};

/// Wilkinson's matrix W⁺ of order 2n+1: diagonal (n, n-1, ..., 1, 0, 1, ..., n)
/// and unit off-diagonals.
pub fn wilkinson_plus(n: usize) -> Result<SymTridiagonal> {
    if n < 1 {
        return Err(Error::InvalidArgument("wilkinson_plus needs n >= 1".into()));
    }
    let diag = (0..=2 * n).map(|i| (i as f64 - n as f64).abs()).collect();
    SymTridiagonal::new(diag, vec![1.0; 2 * n])
}

/// Splits W⁺ of order 2n+1 as `A + E`, where `E` holds only the two unit
/// off-diagonals touching the center row and `A` is W⁺ with those zeroed.
///
/// `A` decouples into two mirror-image blocks and the scalar 0, so it has n
/// double eigenvalues and the simple eigenvalue 0.
pub fn wilkinson_split(n: usize) -> Result<(SymTridiagonal, SymTridiagonal)> {
    if n < 2 {
        return Err(Error::InvalidArgument("wilkinson_split needs n >= 2".into()));
    }
    let w = wilkinson_plus(n)?;
    let mut a_off = w.offdiag().to_vec();
    let mut e_off = vec![0.0; 2 * n];
    // 0-based off-diagonal slots n-1 and n couple the center row n.
    for slot in [n - 1, n] {
        a_off[slot] = 0.0;
        e_off[slot] = 1.0;
    }
    Ok((
        SymTridiagonal::new(w.diag().to_vec(), a_off)?,
        SymTridiagonal::new(vec![0.0; 2 * n + 1], e_off)?,
    ))
}

/// The 1000 x 1000 aggressive-early-deflation example.
///
/// Diagonal: 100, then 999, 998, ..., 2, 1; every off-diagonal is 1. Only the
/// trailing rows (diagonal roughly descending toward small target
/// eigenvalues) matter for the deflation analysis.
pub fn aed_example_1000() -> SymTridiagonal {
    let mut diag = Vec::with_capacity(1000);
    diag.push(100.0);
    diag.extend((1..=999).rev().map(f64::from));
    SymTridiagonal::new(diag, vec![1.0; 999]).expect("well-formed")
}
