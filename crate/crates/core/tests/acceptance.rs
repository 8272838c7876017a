//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! runtime; the process exits nonzero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{assemble, block_with_norm, graded_tridiag, hermitian_with_norm, random_hermitian, with_spectrum};
use eigpert::aed::{aed_transform, run_qr_with_aed};
use eigpert::blockbounds::{quadratic_residual_bound, BlockPerturbation};
use eigpert::eigcore::{
    aed_example_1000, eig_dense, eig_tridiag, spectral_norm, twisted_eigenvector, wilkinson_plus, wilkinson_split,
    BlockSplit, CMatrix, DenseHermitian, SymTridiagonal,
};
use eigpert::multiexp::{detect_multiple, expansion_order, log_grid, Slope};
use eigpert::tribounds::{aed_best_bound, aed_window_bounds, decay_profile, wilkinson_gap_bound, NeighborRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn wilkinson_pair_gap() -> Outcome {
    let s = eig_tridiag(&wilkinson_plus(10).unwrap(), false).unwrap();
    let n = s.len();
    let gap = s.values[n - 1] - s.values[n - 2];
    check((1e-15..=1e-13).contains(&gap), format!("top pair gap {gap:.3e}"))
}

fn factorial_bound() -> Outcome {
    let logged = wilkinson_gap_bound(10).unwrap().to_f64().unwrap();
    let direct = (4.0 / 30.0) / (1..=8).map(|v| v as f64).product::<f64>().powi(2);
    let digits_agree = format!("{logged:.5e}") == format!("{direct:.5e}");
    let (a, e) = wilkinson_split(10).unwrap();
    let top = |t: &SymTridiagonal| eig_tridiag(t, false).unwrap().max();
    let observed = (top(&a.add(&e).unwrap()) - top(&a)).abs();
    check(
        digits_agree && format!("{logged:.2e}") == "8.20e-11" && observed <= logged,
        format!("bound {logged:.6e} (direct {direct:.6e}), observed {observed:.3e}"),
    )
}

fn window_coupling_headline() -> Outcome {
    let t = aed_example_1000();
    let rule = NeighborRule::Conservative;
    let fixed = aed_window_bounds(&t, 100, Some(88), Some(1.0), rule).unwrap();
    let min_log = fixed
        .iter()
        .filter(|b| b.lambda < 10.0)
        .filter_map(|b| b.bound)
        .map(|b| b.log10())
        .fold(f64::INFINITY, f64::min);
    let window = eig_tridiag(&t.principal(900, 100), false).unwrap().values;
    let small = window
        .iter()
        .filter(|&&lam| {
            aed_best_bound(&t, 100, lam, 1.0, rule)
                .unwrap()
                .is_some_and(|(_, b)| b.log10() <= -16.0)
        })
        .count();
    check(min_log <= -270.7 && small >= 80, format!("min log10 bound {min_log:.2}, {small} eigenvalues at <= 1e-16"))
}

fn aed_spike() -> Outcome {
    let t = aed_example_1000();
    let o = aed_transform(&t, 100).unwrap();
    let norm = spectral_norm(&t).unwrap();
    let small = o.spike.iter().filter(|v| v.abs() <= 1e-16 * norm).count();
    let dev = (o.spike_norm() - 1.0).abs();
    check(dev <= 1e-12 && small > 80, format!("|‖t‖ - 1| = {dev:.1e}, {small} spike entries <= 1e-16‖T‖"))
}

fn theorem_one_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut violations, mut worse_than_weyl, mut checked) = (0, 0, 0);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(3..=20);
        let lead = rng.gen_range(1..n);
        let l: Vec<f64> = (0..lead).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let tail: Vec<f64> = (0..n - lead).map(|_| rng.gen_range(4.0..6.0)).collect();
        let coupling = rng.gen_range(0.0..0.5);
        let a21 = block_with_norm(&mut rng, n - lead, lead, coupling);
        let a = assemble(&with_spectrum(&mut rng, &l), &a21, &with_spectrum(&mut rng, &tail));
        let norm_e = 10f64.powf(rng.gen_range(-4.0..-1.5));
        let e = hermitian_with_norm(&mut rng, n, norm_e);
        let p = BlockPerturbation::new(&a, &e, BlockSplit::new(n, n - lead).unwrap()).unwrap();
        let before = eig_dense(&a, false).unwrap().values;
        let after = eig_dense(&a.add(&e).unwrap(), false).unwrap().values;
        let i = rng.gen_range(1..=lead);
        let r = p.theorem1(i, false).unwrap();
        let observed = (before[i - 1] - after[i - 1]).abs();
        if observed > r.value() {
            violations += 1;
        }
        if r.best() > p.weyl() {
            worse_than_weyl += 1;
        }
        worst = worst.max(observed / r.value());
        checked += 1;
    }
    check(
        violations == 0 && worse_than_weyl == 0,
        format!("{checked} instances, {violations} violations, max observed/bound {worst:.3}"),
    )
}

fn quadratic_residual_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let (mut violations, mut checked) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(2..=16);
        let lead = rng.gen_range(1..n);
        let l: Vec<f64> = (0..lead).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let tail: Vec<f64> = (0..n - lead).map(|_| rng.gen_range(3.0..5.0)).collect();
        let a1 = with_spectrum(&mut rng, &l);
        let a2 = with_spectrum(&mut rng, &tail);
        let a = assemble(&a1, &CMatrix::zeros(n - lead, lead), &a2);
        let norm_e = rng.gen_range(1e-4..0.2);
        let e21 = block_with_norm(&mut rng, n - lead, lead, norm_e);
        let e = assemble(&DenseHermitian::zeros(lead), &e21, &DenseHermitian::zeros(n - lead));
        let i = rng.gen_range(1..=lead);
        let r = quadratic_residual_bound(&a, &e, BlockSplit::new(n, n - lead).unwrap(), i).unwrap();
        if !(r.valid && r.gap >= 10.0 * r.weyl) {
            return Err(format!("instance generator produced gap {} < 10‖E‖ = {}", r.gap, 10.0 * r.weyl));
        }
        let before = eig_dense(&a, false).unwrap().values;
        let after = eig_dense(&a.add(&e).unwrap(), false).unwrap().values;
        if (before[i - 1] - after[i - 1]).abs() > r.value() {
            violations += 1;
        }
        checked += 1;
    }
    check(violations == 0, format!("{checked} instances, {violations} violations"))
}

fn cubic_scaling() -> Outcome {
    let mut worst = 0.0f64;
    for &delta in &[1e-2, 1e-3] {
        for &eps in &[1e-3, 1e-4] {
            let m = |corner: f64| {
                DenseHermitian::from_real_rows(&[
                    vec![1.0, 0.0, 0.0, delta],
                    vec![0.0, 2.0, 0.0, delta],
                    vec![0.0, 0.0, 3.0, delta],
                    vec![delta, delta, delta, corner],
                ])
                .unwrap()
            };
            let s0 = eig_dense(&m(0.0), false).unwrap().values;
            let s1 = eig_dense(&m(eps), false).unwrap().values;
            for i in 1..4 {
                worst = worst.max((s0[i] - s1[i]).abs() / (eps * delta * delta));
            }
        }
    }
    check(worst <= 10.0, format!("max shift / (εδ²) = {worst:.3}"))
}

fn expansion_order_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let a = DenseHermitian::from_real_diagonal(&[1.0, 1.0, 5.0]);
    let ctx = &detect_multiple(&a, 1e-10).unwrap()[0];
    let grid = log_grid(1e-2, 1e-5, 13);
    let mut slopes = Vec::new();
    let mut within = true;
    for _ in 0..5 {
        let e = random_hermitian(&mut rng, 3);
        let fit = expansion_order(ctx, &e, &grid).unwrap();
        within &= fit.all_within_bound();
        slopes.push(match fit.slope {
            Slope::Fitted(s) => s,
            Slope::Exact => f64::NAN,
        });
    }
    let ok = within && slopes.iter().all(|s| (1.8..=2.2).contains(s));
    let list: Vec<String> = slopes.iter().map(|s| format!("{s:.3}")).collect();
    check(ok, format!("slopes [{}], all errors within bound: {within}", list.join(", ")))
}

fn oracle_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2027);
    let (mut worst_val, mut worst_res) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let n = rng.gen_range(1..=50);
        let d = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let e = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let t = SymTridiagonal::new(d, e).unwrap();
        let st = eig_tridiag(&t, true).unwrap();
        let sd = eig_dense(&t.to_dense(), false).unwrap();
        let norm = spectral_norm(&t).unwrap();
        let scale = norm.max(1.0);
        for (a, b) in st.values.iter().zip(&sd.values) {
            worst_val = worst_val.max((a - b).abs() / scale);
        }
        worst_res = worst_res.max(st.max_residual_tridiag(&t).unwrap() / norm.max(f64::MIN_POSITIVE));
    }
    check(
        worst_val <= 1e-12 && worst_res <= 1e-12,
        format!("max value gap {worst_val:.2e}·max(1,‖T‖), max residual {worst_res:.2e}·‖T‖"),
    )
}

fn decay_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2028);
    let (mut prefixes, mut violations) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(3..=30);
        let t = graded_tridiag(&mut rng, n);
        let lam = eig_tridiag(&t, false).unwrap().min();
        let x = twisted_eigenvector(&t, lam).unwrap();
        for (from, to) in [(1, n), (n, 1)] {
            let p = decay_profile(&t, lam, from, to).unwrap();
            for m in 1..=p.len() {
                prefixes += 1;
                let rhs = p.cumulative[m - 1].to_f64_lossy() * x[p.anchor_row(m) - 1].abs();
                if x[from - 1].abs() > rhs + 1e-14 {
                    violations += 1;
                }
            }
        }
    }
    check(violations == 0 && prefixes > 0, format!("{prefixes} profile prefixes, {violations} violations"))
}

fn qr_with_aed_end_to_end() -> Outcome {
    let t = aed_example_1000();
    let run = run_qr_with_aed(&t, 100, 1e-16, 5000).unwrap();
    let first = run.first_aed_pass().copied();
    let oracle = eig_tridiag(&t, false).unwrap().values;
    let norm = spectral_norm(&t).unwrap();
    let same_len = run.spectrum.len() == oracle.len();
    let worst = if same_len {
        run.spectrum.values.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / norm
    } else {
        f64::INFINITY
    };
    let (first_count, negligible) = first.map_or((0, true), |f| (f.aed_deflations, f.negligible_present));
    check(
        run.converged && first_count >= 80 && !negligible && worst <= 1e-10,
        format!(
            "first AED pass deflated {first_count} (negligible subdiagonal present: {negligible}), {} sweeps, max deviation {worst:.2e}·‖T‖",
            run.sweeps
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 Wilkinson pair gap", Duration::from_secs(1), wilkinson_pair_gap),
        ("2 factorial gap bound", Duration::from_secs(1), factorial_bound),
        ("3 window coupling bound headline", Duration::from_secs(30), window_coupling_headline),
        ("4 AED spike", Duration::from_secs(30), aed_spike),
        ("5 block bound soundness", Duration::from_secs(10), theorem_one_suite),
        ("6 quadratic residual soundness", Duration::from_secs(5), quadratic_residual_suite),
        ("7 cubic scaling", Duration::from_secs(1), cubic_scaling),
        ("8 expansion order", Duration::from_secs(5), expansion_order_check),
        ("9 oracle cross-validation", Duration::from_secs(60), oracle_cross_validation),
        ("10 decay profile soundness", Duration::from_secs(10), decay_soundness),
        ("11 QR with AED end to end", Duration::from_secs(120), qr_with_aed_end_to_end),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {detail}; {:.3}s (limit {}s{})",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", exceeded" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
