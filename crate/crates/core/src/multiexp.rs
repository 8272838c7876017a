//! First-order perturbation of a multiple eigenvalue.
//!
//! If λ₀ is an eigenvalue of A of multiplicity r with orthonormal eigenbasis
//! Q1, the eigenvalues of A + εE that emanate from λ₀ are
//! λ₀ + ε·μ_i(Q1ᴴEQ1) + O(ε²). This module builds Q1 from the oracle
//! spectrum, forms the predictions and measures the order of the remainder.

use crate::eigcore::{eig_dense, spectral_norm, CMatrix, DenseHermitian};
use crate::error::{Error, Result};

/// A numerically multiple eigenvalue of `a` with its eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipleEigContext {
    pub a: DenseHermitian,
    /// Cluster mean.
    pub lambda0: f64,
    pub r: usize,
    /// n x r orthonormal basis of the eigenspace.
    pub q1: CMatrix,
    /// Distance from λ₀ to the rest of the spectrum; infinite when the
    /// cluster is the whole spectrum.
    pub gap: f64,
    /// 0-based ascending ranks of the cluster in the spectrum of `a`.
    pub ranks: Vec<usize>,
}

/// Groups the oracle spectrum into clusters of diameter <= cluster_tol·‖A‖₂
/// and returns a context for every cluster of size >= 2.
pub fn detect_multiple(a: &DenseHermitian, cluster_tol: f64) -> Result<Vec<MultipleEigContext>> {
    if !(cluster_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("cluster tolerance must be positive, got {cluster_tol}")));
    }
    let s = eig_dense(a, true)?;
    let vectors = s.vectors.as_ref().expect("vectors requested");
    let n = s.len();
    let width = cluster_tol * s.abs_max();
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && s.values[end] - s.values[start] <= width {
            end += 1;
        }
        if end - start >= 2 {
            let members = &s.values[start..end];
            let lambda0 = members.iter().sum::<f64>() / members.len() as f64;
            let below = start.checked_sub(1).map(|i| lambda0 - s.values[i]);
            let above = (end < n).then(|| s.values[end] - lambda0);
            let gap = below.into_iter().chain(above).fold(f64::INFINITY, f64::min);
            let q1 = vectors.submatrix(0, start, n, end - start);
            out.push(MultipleEigContext {
                a: a.clone(),
                lambda0,
                r: end - start,
                q1,
                gap,
                ranks: (start..end).collect(),
            });
        }
        start = end;
    }
    Ok(out)
}

/// λ₀ + ε·μ_i with μ_i the ascending eigenvalues of Q1ᴴEQ1.
pub fn first_order_eigs(ctx: &MultipleEigContext, e: &DenseHermitian, eps: f64) -> Result<Vec<f64>> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be >= 0, got {eps}")));
    }
    let m = e.compress(&ctx.q1)?;
    Ok(eig_dense(&m, false)?.values.iter().map(|mu| ctx.lambda0 + eps * mu).collect())
}

/// Remainder of the first-order prediction at one ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderPoint {
    pub eps: f64,
    /// max_i |λ_i(A + εE) − prediction_i| over the cluster ranks.
    pub error: f64,
    /// 2‖εE‖²/(g + √(g² + 4‖εE‖²)) with g = gap − 2ε‖E‖₂.
    pub quad_gap_bound: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Fitted(f64),
    /// Every error is at rounding level.
    Exact,
}

impl Slope {
    pub fn tag(&self) -> String {
        match self {
            Slope::Fitted(v) => format!("{v:.6}"),
            Slope::Exact => "exact".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub slope: Slope,
    pub points: Vec<OrderPoint>,
}

impl OrderFit {
    pub fn all_within_bound(&self) -> bool {
        self.points.iter().all(|p| p.within_bound)
    }
}

/// Quadratic-gap bound on the remainder for a perturbation of norm `x`.
pub fn quad_gap_bound(gap: f64, x: f64) -> f64 {
    if gap.is_infinite() {
        return 0.0;
    }
    2.0 * x * x / (gap + (gap * gap + 4.0 * x * x).sqrt())
}

/// Least-squares slope of log error against log ε over a descending grid.
pub fn expansion_order(ctx: &MultipleEigContext, e: &DenseHermitian, eps_grid: &[f64]) -> Result<OrderFit> {
    if eps_grid.len() < 2 {
        return Err(Error::InvalidArgument("eps grid needs at least two points".into()));
    }
    if eps_grid.iter().any(|&x| !(x > 0.0)) || eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("eps grid must be positive and strictly descending".into()));
    }
    if (eps_grid[0] / eps_grid[eps_grid.len() - 1]).log10() < 2.0 - 1e-12 {
        return Err(Error::InvalidArgument("eps grid must span at least two decades".into()));
    }
    let norm_e = spectral_norm(e)?;
    let norm_a = spectral_norm(&ctx.a)?;
    if eps_grid[0] * norm_e >= ctx.gap / 4.0 {
        return Err(Error::InvalidArgument(format!(
            "largest eps·‖E‖ = {:e} is not below gap/4 = {:e}",
            eps_grid[0] * norm_e,
            ctx.gap / 4.0
        )));
    }
    let mut points = Vec::with_capacity(eps_grid.len());
    let mut resolvable = Vec::new();
    for &eps in eps_grid {
        let pred = first_order_eigs(ctx, e, eps)?;
        let perturbed = eig_dense(&ctx.a.add_scaled(e, eps)?, false)?;
        let error = ctx
            .ranks
            .iter()
            .zip(&pred)
            .map(|(&r, p)| (perturbed.values[r] - p).abs())
            .fold(0.0, f64::max);
        let floor = 8.0 * f64::EPSILON * (norm_a + eps * norm_e);
        let x = eps * norm_e;
        let bound = quad_gap_bound(ctx.gap - 2.0 * x, x);
        points.push(OrderPoint {
            eps,
            error,
            quad_gap_bound: bound,
            within_bound: error <= bound + floor,
        });
        if error > floor {
            resolvable.push((eps.ln(), error.ln()));
        }
    }
    let slope = if resolvable.is_empty() {
        Slope::Exact
    } else if resolvable.len() < 2 {
        return Err(Error::InvalidArgument("fewer than two errors above rounding level".into()));
    } else {
        let m = resolvable.len() as f64;
        let (mx, my) = resolvable.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
        let sxy: f64 = resolvable.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = resolvable.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        Slope::Fitted(sxy / sxx)
    };
    Ok(OrderFit { slope, points })
}

/// `count` log-spaced points from `hi` down to `lo`.
pub fn log_grid(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    let (a, b) = (hi.log10(), lo.log10());
    (0..count)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1).max(1) as f64))
        .collect()
}
