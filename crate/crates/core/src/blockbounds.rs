//! Eigenvalue perturbation bounds for 2x2 block Hermitian matrices.
//!
//! For `A = [[A11, A21ᴴ], [A21, A22]]` and a Hermitian perturbation `E`
//! partitioned the same way, the bounds here control |λ_i(A) − λ_i(A+E)|
//! (eigenvalues paired by ascending rank) through a bound on the trailing
//! eigenvector block ‖x₂‖₂ along the path `A + tE`, t ∈ [0, 1]:
//!
//! ```text
//! τ_i = (‖A21‖ + ‖E21‖) / (min_j |λ_i − λ_j(A22)| − 2‖E‖)
//! |λ_i − λ̂_i| <= ‖E11‖ + 2‖E21‖ τ_i + ‖E22‖ τ_i²
//! ```
//!
//! The Weyl bound ‖E‖₂ is always available and every report carries it.

use std::fmt;

use crate::eigcore::{eig_dense, spectral_norm, BlockSplit, CMatrix, DenseHermitian, Spectrum};
use crate::error::{Error, Result};
use crate::logscalar::LogScalar;

/// Gaps at or below this multiple of max(1, ‖A‖₂) are treated as zero.
const ZERO_GAP_REL: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    Weyl,
    QuadResidual,
    Theorem1,
    MinOf,
}

impl Formula {
    pub fn tag(&self) -> &'static str {
        match self {
            Formula::Weyl => "weyl",
            Formula::QuadResidual => "quad_residual",
            Formula::Theorem1 => "theorem1",
            Formula::MinOf => "min_of",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The three terms of the block bound: ‖E11‖, 2‖E21‖τ and ‖E22‖τ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTerms {
    pub e11: f64,
    pub cross: f64,
    pub e22: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// 1-based eigenvalue rank.
    pub index: usize,
    pub formula: Formula,
    pub bound: LogScalar,
    pub tau: Option<f64>,
    /// min_j |λ_i(A) − λ_j(A22)| (or of the trailing block for the quadratic bound).
    pub gap: f64,
    pub valid: bool,
    pub terms: Option<BoundTerms>,
    /// ‖E‖₂, the Weyl fallback.
    pub weyl: f64,
}

impl BoundReport {
    /// Plain value of `bound`; +inf for the invalid sentinel.
    pub fn value(&self) -> f64 {
        self.bound.to_f64_lossy()
    }

    /// Best sound bound: min(bound, Weyl) when valid, Weyl otherwise.
    pub fn best(&self) -> f64 {
        if self.valid {
            self.value().min(self.weyl)
        } else {
            self.weyl
        }
    }

    fn weyl_only(index: usize, gap: f64, weyl: f64) -> Self {
        BoundReport {
            index,
            formula: Formula::Weyl,
            bound: LogScalar::from_f64(weyl),
            tau: None,
            gap,
            valid: true,
            terms: None,
            weyl,
        }
    }
}

/// Combines reports for the same index into the smallest valid bound.
///
/// The Weyl bound of the first report always takes part, so the result is
/// valid even when every constituent is not.
pub fn min_of(reports: &[BoundReport]) -> Result<BoundReport> {
    let first = reports
        .first()
        .ok_or_else(|| Error::InvalidArgument("min_of needs at least one report".into()))?;
    let mut best = BoundReport::weyl_only(first.index, first.gap, first.weyl);
    for r in reports {
        if r.index != first.index {
            return Err(Error::InvalidArgument("min_of over different indices".into()));
        }
        if r.valid && r.bound < best.bound {
            best.bound = r.bound;
            best.tau = r.tau;
            best.terms = r.terms;
            best.gap = r.gap;
        }
    }
    best.formula = Formula::MinOf;
    Ok(best)
}

pub fn weyl_bound(e: &DenseHermitian) -> Result<f64> {
    spectral_norm(e)
}

/// τ_i with its ingredients; `value` is `None` when the denominator is not
/// positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau {
    pub value: Option<f64>,
    pub numerator: f64,
    pub denominator: f64,
    pub gap: f64,
}

/// Spectra and norms shared by every index of one (A, E, split) instance.
#[derive(Debug, Clone)]
pub struct BlockPerturbation {
    split: BlockSplit,
    spectrum_a: Spectrum,
    spectrum_a22: Spectrum,
    norm_a: f64,
    norm_a21: f64,
    norm_e: f64,
    norm_e11: f64,
    norm_e21: f64,
    norm_e22: f64,
}

impl BlockPerturbation {
    pub fn new(a: &DenseHermitian, e: &DenseHermitian, split: BlockSplit) -> Result<Self> {
        if a.n() != e.n() {
            return Err(Error::Dimension(format!(
                "A has order {}, E has order {}",
                a.n(),
                e.n()
            )));
        }
        let spectrum_a = eig_dense(a, false)?;
        let spectrum_a22 = eig_dense(&split.block22(a)?, false)?;
        Ok(BlockPerturbation {
            split,
            norm_a: spectrum_a.abs_max(),
            spectrum_a,
            spectrum_a22,
            norm_a21: spectral_norm(&split.block21(a)?)?,
            norm_e: spectral_norm(e)?,
            norm_e11: spectral_norm(&split.block11(e)?)?,
            norm_e21: spectral_norm(&split.block21(e)?)?,
            norm_e22: spectral_norm(&split.block22(e)?)?,
        })
    }

    pub fn split(&self) -> BlockSplit {
        self.split
    }

    pub fn spectrum_a(&self) -> &Spectrum {
        &self.spectrum_a
    }

    pub fn weyl(&self) -> f64 {
        self.norm_e
    }

    /// λ_i(A) for a 1-based rank.
    pub fn eigenvalue(&self, i: usize) -> Result<f64> {
        check_index(i, self.spectrum_a.len())?;
        Ok(self.spectrum_a.values[i - 1])
    }

    /// min_j |λ_i(A) − λ_j(A22)|.
    pub fn gap(&self, i: usize) -> Result<f64> {
        let lam = self.eigenvalue(i)?;
        Ok(min_distance(lam, &self.spectrum_a22.values))
    }

    pub fn tau(&self, i: usize, refined: bool) -> Result<Tau> {
        let gap = self.gap(i)?;
        let numerator = self.norm_a21 + self.norm_e21;
        let denominator = if refined {
            gap - self.norm_e - self.norm_e22
        } else {
            gap - 2.0 * self.norm_e
        };
        let value = (denominator > 0.0).then(|| numerator / denominator);
        Ok(Tau {
            value,
            numerator,
            denominator,
            gap,
        })
    }

    pub fn theorem1(&self, i: usize, refined: bool) -> Result<BoundReport> {
        let tau = self.tau(i, refined)?;
        let t = tau.value.ok_or_else(|| {
            Error::InvalidBound(format!(
                "tau denominator {:e} is not positive for index {i}",
                tau.denominator
            ))
        })?;
        let terms = BoundTerms {
            e11: self.norm_e11,
            cross: 2.0 * self.norm_e21 * t,
            e22: self.norm_e22 * t * t,
        };
        Ok(BoundReport {
            index: i,
            formula: Formula::Theorem1,
            bound: LogScalar::from_f64(terms.e11 + terms.cross + terms.e22),
            tau: Some(t),
            gap: tau.gap,
            valid: true,
            terms: Some(terms),
            weyl: self.norm_e,
        })
    }

    /// Theorem-1 report when τ is valid, an invalid report (Weyl fallback
    /// recorded) otherwise.
    pub fn theorem1_or_invalid(&self, i: usize, refined: bool) -> Result<BoundReport> {
        match self.theorem1(i, refined) {
            Ok(r) => Ok(r),
            Err(Error::InvalidBound(_)) => Ok(BoundReport {
                index: i,
                formula: Formula::Theorem1,
                bound: LogScalar::INFINITY,
                tau: None,
                gap: self.gap(i)?,
                valid: false,
                terms: None,
                weyl: self.norm_e,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn zero_gap_tolerance(&self) -> f64 {
        ZERO_GAP_REL * self.norm_a.max(1.0)
    }
}

fn check_index(i: usize, len: usize) -> Result<()> {
    if i == 0 || i > len {
        return Err(Error::IndexOutOfRange { index: i, len });
    }
    Ok(())
}

fn min_distance(x: f64, values: &[f64]) -> f64 {
    values.iter().map(|v| (x - v).abs()).fold(f64::INFINITY, f64::min)
}

/// Quadratic residual bound for a block-diagonal `A` perturbed only in its
/// off-diagonal blocks: |λ_i(A) − λ_i(A+E)| <= ‖E‖² / min_j |λ_i(A) − λ_j(A2)|.
///
/// A zero gap yields an invalid report with an infinite bound and the Weyl
/// value recorded as fallback.
pub fn quadratic_residual_bound(
    a: &DenseHermitian,
    e_off: &DenseHermitian,
    split: BlockSplit,
    i: usize,
) -> Result<BoundReport> {
    if a.n() != e_off.n() {
        return Err(Error::Dimension("A and E orders differ".into()));
    }
    if !split.block21(a)?.is_zero() {
        return Err(Error::InvalidArgument(
            "quadratic residual bound needs block-diagonal A".into(),
        ));
    }
    if !split.block11(e_off)?.is_zero() || !split.block22(e_off)?.is_zero() {
        return Err(Error::InvalidArgument(
            "perturbation must have zero diagonal blocks".into(),
        ));
    }
    let spec = eig_dense(a, false)?;
    check_index(i, spec.len())?;
    let lam = spec.values[i - 1];
    let a2 = eig_dense(&split.block22(a)?, false)?;
    let gap = min_distance(lam, &a2.values);
    let norm_e = spectral_norm(e_off)?;
    let zero_gap = ZERO_GAP_REL * spec.abs_max().max(1.0);
    let (bound, valid) = if norm_e == 0.0 {
        (LogScalar::ZERO, true)
    } else if gap <= zero_gap {
        (LogScalar::INFINITY, false)
    } else {
        (LogScalar::from_f64(norm_e * norm_e / gap), true)
    };
    Ok(BoundReport {
        index: i,
        formula: Formula::QuadResidual,
        bound,
        tau: None,
        gap,
        valid,
        terms: None,
        weyl: norm_e,
    })
}

/// Bound on the trailing block of a unit eigenvector for eigenvalue
/// `lambda`: ‖x₂‖₂ <= ‖A21‖₂ / min_j |lambda − λ_j(A22)|.
///
/// Holds for every unit vector in the eigenspace when `lambda` is multiple.
pub fn eigvec_tail_bound(a: &DenseHermitian, split: BlockSplit, lambda: f64) -> Result<f64> {
    let a22 = eig_dense(&split.block22(a)?, false)?;
    let gap = min_distance(lambda, &a22.values);
    let scale = a22.abs_max().max(lambda.abs()).max(1.0);
    if gap <= ZERO_GAP_REL * scale {
        return Err(Error::ZeroGap(format!(
            "lambda = {lambda} is an eigenvalue of the trailing block"
        )));
    }
    let a21: CMatrix = split.block21(a)?;
    Ok(spectral_norm(&a21)? / gap)
}

pub fn tau(
    a: &DenseHermitian,
    e: &DenseHermitian,
    split: BlockSplit,
    i: usize,
    refined: bool,
) -> Result<Tau> {
    BlockPerturbation::new(a, e, split)?.tau(i, refined)
}

pub fn theorem1_bound(
    a: &DenseHermitian,
    e: &DenseHermitian,
    split: BlockSplit,
    i: usize,
    refined: bool,
) -> Result<BoundReport> {
    BlockPerturbation::new(a, e, split)?.theorem1(i, refined)
}
