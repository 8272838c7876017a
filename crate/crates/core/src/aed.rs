//! Aggressive early deflation for symmetric tridiagonal matrices.
//!
//! The trailing k x k window A2 = V D Vᵀ is diagonalized. Applying
//! diag(I, V) turns T into an arrow: the last row of the leading block is
//! coupled to every window eigenvalue through the spike t = b_{n−k}·V(1,:).
//! Window eigenvalues with a negligible spike entry are converged and can be
//! deflated even when no subdiagonal of T is small.

use crate::eigcore::{eig_tridiag, eig_tridiag_or_dense, spectral_norm, DenseHermitian, Spectrum, SymTridiagonal};
use crate::error::{Error, Result};
use crate::logscalar::LogScalar;
use crate::tribounds::{aed_best_bound, NeighborRule};

/// Window eigendecomposition and spike of one AED pass.
#[derive(Debug, Clone, PartialEq)]
pub struct AedOutcome {
    pub k: usize,
    /// b_{n−k}, the coupling between the window and the rest.
    pub coupling: f64,
    /// Window eigenvalues in decreasing order of magnitude.
    pub eigenvalues: Vec<f64>,
    /// Window eigenvectors, `vectors[i]` belonging to `eigenvalues[i]`.
    pub vectors: Vec<Vec<f64>>,
    /// t_i = b_{n−k}·V(1, i).
    pub spike: Vec<f64>,
    pub deflatable: Vec<bool>,
    pub count: usize,
    /// Absolute threshold tol·scale of the last decision, if any.
    pub threshold: Option<f64>,
}

impl AedOutcome {
    pub fn spike_norm(&self) -> f64 {
        self.spike.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn deflated_eigenvalues(&self) -> Vec<f64> {
        self.iter_deflated().map(|i| self.eigenvalues[i]).collect()
    }

    fn iter_deflated(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).filter(|&i| self.deflatable[i])
    }
}

pub fn aed_transform(t: &SymTridiagonal, k: usize) -> Result<AedOutcome> {
    let n = t.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("window size k={k} must satisfy 1 <= k <= n-1")));
    }
    let coupling = t.offdiag()[n - k - 1];
    let window = t.principal(n - k, k);
    let s = eig_tridiag_or_dense(&window, true)?;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| s.values[j].abs().total_cmp(&s.values[i].abs()));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| s.values[i]).collect();
    let vectors: Vec<Vec<f64>> = order.iter().map(|&i| s.real_vector(i).expect("vectors requested")).collect();
    let spike = vectors.iter().map(|v| coupling * v[0]).collect();
    Ok(AedOutcome {
        k,
        coupling,
        eigenvalues,
        vectors,
        spike,
        deflatable: vec![false; k],
        count: 0,
        threshold: None,
    })
}

/// Marks window eigenvalues with |t_i| <= tol·scale as deflatable.
pub fn deflation_decide(outcome: &AedOutcome, tol: f64, scale: f64) -> Result<AedOutcome> {
    if !(tol > 0.0) || !(scale > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "deflation needs tol > 0 and scale > 0, got tol={tol}, scale={scale}"
        )));
    }
    let threshold = tol * scale;
    let mut out = outcome.clone();
    out.deflatable = out.spike.iter().map(|v| v.abs() <= threshold).collect();
    out.count = out.deflatable.iter().filter(|&&d| d).count();
    out.threshold = Some(threshold);
    Ok(out)
}

/// The arrow matrix diag(I, V)ᵀ T diag(I, V), similar to `t`.
pub fn arrow_matrix(t: &SymTridiagonal, outcome: &AedOutcome) -> Result<DenseHermitian> {
    let n = t.n();
    let lead = n - outcome.k;
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..lead {
        rows[i][i] = t.diag()[i];
        if i + 1 < lead {
            rows[i][i + 1] = t.offdiag()[i];
            rows[i + 1][i] = t.offdiag()[i];
        }
    }
    for (w, (&lam, &s)) in outcome.eigenvalues.iter().zip(&outcome.spike).enumerate() {
        rows[lead + w][lead + w] = lam;
        rows[lead - 1][lead + w] = s;
        rows[lead + w][lead - 1] = s;
    }
    DenseHermitian::from_real_rows(&rows)
}

/// One deflated window eigenvalue checked against the spectrum of T.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflationCheck {
    /// Position in the outcome's magnitude ordering.
    pub window_index: usize,
    pub eigenvalue: f64,
    pub spike: f64,
    /// Window-coupling bound with the nominal constant, when admissible.
    pub bound: Option<LogScalar>,
    /// Same with the derived constant (twice `bound`).
    pub derived: Option<LogScalar>,
    /// Distance to the nearest eigenvalue of T.
    pub observed: f64,
}

impl DeflationCheck {
    /// The spike entry is a backward error: T has an eigenvalue within |t_i|.
    pub fn within_spike(&self, slack: f64) -> bool {
        self.observed <= self.spike.abs() + slack
    }
}

pub fn deflation_soundness_check(t: &SymTridiagonal, outcome: &AedOutcome) -> Result<Vec<DeflationCheck>> {
    let full = eig_tridiag(t, false)?.values;
    let alpha = outcome.coupling.abs();
    outcome
        .iter_deflated()
        .map(|i| {
            let lam = outcome.eigenvalues[i];
            let observed = full.iter().map(|v| (v - lam).abs()).fold(f64::INFINITY, f64::min);
            let bound = aed_best_bound(t, outcome.k, lam, alpha, NeighborRule::Conservative)?.map(|(_, b)| b);
            Ok(DeflationCheck {
                window_index: i,
                eigenvalue: lam,
                spike: outcome.spike[i],
                bound,
                derived: bound.map(|b| b * 2.0),
                observed,
            })
        })
        .collect()
}

/// Wilkinson shift: the eigenvalue of the trailing 2 x 2 closest to a_n.
fn wilkinson_shift(t: &SymTridiagonal) -> f64 {
    let n = t.n();
    let (a, c) = (t.diag()[n - 2], t.diag()[n - 1]);
    let b = t.offdiag()[n - 2];
    if b == 0.0 {
        return c;
    }
    let d = 0.5 * (a - c);
    let sign = if d >= 0.0 { 1.0 } else { -1.0 };
    c - b * b / (d + sign * d.hypot(b))
}

/// One implicit symmetric QR sweep with Wilkinson shift.
pub fn qr_sweep(t: &SymTridiagonal) -> Result<SymTridiagonal> {
    let n = t.n();
    if n < 2 {
        return Err(Error::InvalidArgument("qr sweep needs n >= 2".into()));
    }
    let mut d = t.diag().to_vec();
    let mut e = t.offdiag().to_vec();
    let mu = wilkinson_shift(t);
    let mut x = d[0] - mu;
    let mut z = e[0];
    for k in 0..n - 1 {
        let r = x.hypot(z);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (x / r, z / r) };
        if k > 0 {
            e[k - 1] = r;
        }
        // rotate rows/columns k and k+1: u' = c u + s v, v' = -s u + c v
        let (a, b, a2) = (d[k], e[k], d[k + 1]);
        d[k] = c * c * a + 2.0 * c * s * b + s * s * a2;
        d[k + 1] = s * s * a - 2.0 * c * s * b + c * c * a2;
        e[k] = c * s * (a2 - a) + (c * c - s * s) * b;
        if k + 2 < n {
            z = s * e[k + 1];
            e[k + 1] *= c;
            x = e[k];
        }
    }
    SymTridiagonal::new(d, e)
}

/// Householder reduction of a dense real symmetric matrix to tridiagonal
/// form. The first row and column are only touched in their coupling
/// entries, so the result can be glued below an existing tridiagonal.
fn tridiagonalize(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let m = a.len();
    for j in 0..m.saturating_sub(2) {
        let x: Vec<f64> = (j + 1..m).map(|i| a[i][j]).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        let mut v = x;
        v[0] -= alpha;
        let vn = v.iter().map(|q| q * q).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|q| *q /= vn);
        let off = j + 1;
        let len = m - off;
        let p: Vec<f64> = (0..len)
            .map(|r| (0..len).map(|c| a[off + r][off + c] * v[c]).sum())
            .collect();
        let vp: f64 = v.iter().zip(&p).map(|(a, b)| a * b).sum();
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - vp * vi).collect();
        for r in 0..len {
            for c in 0..len {
                a[off + r][off + c] -= 2.0 * (v[r] * w[c] + w[r] * v[c]);
            }
        }
        a[off][j] = alpha;
        a[j][off] = alpha;
        for i in off + 1..m {
            a[i][j] = 0.0;
            a[j][i] = 0.0;
        }
    }
    let d = (0..m).map(|i| a[i][i]).collect();
    let e = (0..m.saturating_sub(1)).map(|i| a[i + 1][i]).collect();
    (d, e)
}

/// What happened in one step of the QR + AED driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepStats {
    pub step: usize,
    /// Order of the active block when the step started.
    pub active: usize,
    pub aed_deflations: usize,
    /// Eigenvalues isolated by negligible subdiagonals.
    pub subdiag_deflations: usize,
    /// Splits at a negligible subdiagonal.
    pub splits: usize,
    /// Whether a negligible subdiagonal was present when AED ran.
    pub negligible_present: bool,
    /// Whether an AED pass ran in this step.
    pub aed_ran: bool,
    /// Whether a QR sweep was applied in this step.
    pub swept: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AedRun {
    /// Ascending eigenvalues found; partial when not converged.
    pub spectrum: Spectrum,
    pub stats: Vec<SweepStats>,
    pub sweeps: usize,
    pub converged: bool,
    /// Eigenvalues still unresolved when the sweep budget ran out.
    pub unresolved: usize,
}

impl AedRun {
    pub fn aed_total(&self) -> usize {
        self.stats.iter().map(|s| s.aed_deflations).sum()
    }

    pub fn subdiag_total(&self) -> usize {
        self.stats.iter().map(|s| s.subdiag_deflations).sum()
    }

    pub fn first_aed_pass(&self) -> Option<&SweepStats> {
        self.stats.iter().find(|s| s.aed_ran)
    }
}

fn negligible(t: &SymTridiagonal, i: usize, tol: f64) -> bool {
    let (d, e) = (t.diag(), t.offdiag());
    e[i].abs() <= tol * (d[i].abs() + d[i + 1].abs())
}

/// Tridiagonal QR iteration with AED on the bottom window of each active
/// block. Deflated eigenvalues are locked and removed; the surviving arrow
/// part is reduced back to tridiagonal form and the spikes are recomputed
/// at the next pass. The deflation threshold is tol·‖T‖₂.
pub fn run_qr_with_aed(t: &SymTridiagonal, k: usize, tol: f64, max_sweeps: usize) -> Result<AedRun> {
    if k == 0 {
        return Err(Error::InvalidArgument("window size must be >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let scale = spectral_norm(t)?.max(f64::MIN_POSITIVE);
    let mut locked = Vec::with_capacity(t.n());
    // each active block remembers whether it came from a subdiagonal split
    let mut stack = vec![(t.clone(), true)];
    let mut stats: Vec<SweepStats> = Vec::new();
    let mut sweeps = 0;
    let mut out_of_budget = false;
    let record = |stats: &mut Vec<SweepStats>, active: usize| {
        stats.push(SweepStats {
            step: stats.len(),
            active,
            aed_deflations: 0,
            subdiag_deflations: 0,
            splits: 0,
            negligible_present: false,
            aed_ran: false,
            swept: false,
        });
        stats.len() - 1
    };

    while let Some((mut block, mut from_split)) = stack.pop() {
        loop {
            let active = block.n();
            if active == 1 {
                locked.push(block.diag()[0]);
                let s = record(&mut stats, 1);
                if from_split {
                    stats[s].subdiag_deflations = 1;
                } else {
                    stats[s].aed_deflations = 1;
                }
                break;
            }
            // split off everything above the lowest negligible subdiagonal
            if let Some(i) = (0..active - 1).rev().find(|&i| negligible(&block, i, tol)) {
                stack.push((block.principal(0, i + 1), true));
                block = block.principal(i + 1, active - i - 1);
                from_split = true;
                let s = record(&mut stats, active);
                stats[s].splits = 1;
                stats[s].negligible_present = true;
                continue;
            }
            let kk = k.min(active - 1);
            let outcome = deflation_decide(&aed_transform(&block, kk)?, tol, scale)?;
            let s = record(&mut stats, active);
            stats[s].aed_ran = true;
            stats[s].negligible_present = (0..active - 1).any(|i| negligible(&block, i, tol));
            if outcome.count > 0 {
                locked.extend(outcome.deflated_eigenvalues());
                stats[s].aed_deflations = outcome.count;
                block = shrink(&block, &outcome);
                from_split = false;
                continue;
            }
            if sweeps == max_sweeps {
                out_of_budget = true;
                stack.push((block, from_split));
                break;
            }
            block = qr_sweep(&block)?;
            sweeps += 1;
            stats[s].swept = true;
        }
        if out_of_budget {
            break;
        }
    }
    let unresolved = stack.iter().map(|(b, _)| b.n()).sum();
    locked.sort_by(f64::total_cmp);
    Ok(AedRun {
        spectrum: Spectrum { values: locked, vectors: None },
        stats,
        sweeps,
        converged: !out_of_budget,
        unresolved,
    })
}

/// Removes the deflated window eigenvalues and reduces the remaining arrow
/// back to tridiagonal form.
fn shrink(block: &SymTridiagonal, outcome: &AedOutcome) -> SymTridiagonal {
    let n = block.n();
    let lead = n - outcome.k;
    let keep: Vec<usize> = (0..outcome.k).filter(|&i| !outcome.deflatable[i]).collect();
    if keep.is_empty() {
        return block.principal(0, lead);
    }
    let m = keep.len() + 1;
    let mut arrow = vec![vec![0.0; m]; m];
    arrow[0][0] = block.diag()[lead - 1];
    for (r, &i) in keep.iter().enumerate() {
        arrow[r + 1][r + 1] = outcome.eigenvalues[i];
        arrow[0][r + 1] = outcome.spike[i];
        arrow[r + 1][0] = outcome.spike[i];
    }
    let (d2, e2) = tridiagonalize(arrow);
    let mut d = block.diag()[..lead - 1].to_vec();
    d.extend(d2);
    let mut e = block.offdiag()[..lead - 1].to_vec();
    e.extend(e2);
    SymTridiagonal::new(d, e).expect("finite reduction")
}
