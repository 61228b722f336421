//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test -p ptwalk --test acceptance`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::fs;
use std::panic;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use ptwalk::run::sweep_parallel;
use ptwalk_core::momentum::{
    closed_form_momentum, closed_form_quasienergy, pt_phase_classify, quasienergy_hermitian,
    quasienergy_spectrum, DEFAULT_PT_TOL,
};
use ptwalk_core::operators::{dense_operator, evolve, step};
use ptwalk_core::topology::{transition_distance, winding_number, MAX_RESIDUAL};
use ptwalk_core::{
    canonical_angle, Coin, Complex64, PtTag, SweepRow, SweepSpec, WalkParams, WalkerState,
    WindingCell,
};

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(limit_s: f64, elapsed: Duration) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < limit_s, format!("runtime {s:.3}s (limit {limit_s}s)"))
}

/// 201-point α sweep over `[-π, π)` with `l1 = 1`.
fn alpha_sweep(beta: &[f64], t: &[usize], l2: f64) -> Vec<SweepRow> {
    let spec = SweepSpec {
        alpha_count: 201,
        beta_values: beta.to_vec(),
        t_values: t.to_vec(),
        l2,
        ..SweepSpec::default()
    };
    sweep_parallel(&spec).expect("valid sweep").rows
}

/// Rows at step `t`, in α order.
fn at_t(rows: &[SweepRow], t: usize) -> Vec<SweepRow> {
    rows.iter().filter(|r| r.t == t).copied().collect()
}

/// Transition lines `α ± β ≡ 0, π` crossing an α-sweep at fixed β.
fn transition_alphas(beta: f64) -> Vec<f64> {
    let mut v: Vec<f64> = [-beta, PI - beta, beta, beta - PI]
        .into_iter()
        .map(canonical_angle)
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    v
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}

fn unitarity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let params = WalkParams::hermitian(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), 50);
        let init = WalkerState::new(100, 0, Coin::Up).unwrap();
        for state in evolve(&init, &params).unwrap() {
            worst = worst.max((state.norm_sq() - 1.0).abs());
        }
    }
    let (fast, rt) = within(1.0, start.elapsed());
    outcome(
        worst < 1e-12 && fast,
        format!("max |norm - 1| = {worst:.2e} over 20 walks x 50 steps; {rt}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let params = WalkParams::new(
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..=1.0),
            1,
        )
        .unwrap();
        let mut state = WalkerState::zeros(10);
        for x in -8i64..=8 {
            for coin in [Coin::Up, Coin::Down] {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                state.set_amplitude(x, coin, z).unwrap();
            }
        }
        let dense = dense_operator(&params, 10).mul_vec(state.amplitudes());
        step(&mut state, &params).unwrap();
        for (a, b) in dense.iter().zip(state.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    let (fast, rt) = within(5.0, start.elapsed());
    outcome(
        worst < 1e-12 && fast,
        format!("max amplitude difference {worst:.2e} over 50 random walks on 21 sites; {rt}"),
    )
}

fn dispersion() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (a, b) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        for s in quasienergy_spectrum(&WalkParams::hermitian(a, b, 1), 1024).unwrap() {
            let expected = quasienergy_hermitian(a, b, closed_form_momentum(s.k));
            for eps in s.quasi_energies {
                worst = worst
                    .max((closed_form_quasienergy(eps.re) - expected).abs())
                    .max(eps.im.abs());
            }
        }
    }
    outcome(
        worst < 1e-10,
        format!("max deviation from the arccos branch {worst:.2e} over 10 x 1024 k-points"),
    )
}

fn winding_integrality() -> Outcome {
    let start = Instant::now();
    let grid: Vec<f64> = (0..64).map(|i| -PI + 2.0 * PI * i as f64 / 64.0).collect();
    let cells: Vec<(f64, f64)> = grid
        .iter()
        .flat_map(|&a| grid.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| transition_distance(a, b) >= 0.05)
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(a, b)| (winding_number(a, b, 1024), winding_number(a, b, 2048)))
        .collect();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut values = std::collections::BTreeSet::new();
    for (coarse, fine) in &results {
        match (coarse, fine) {
            (Ok(c), Ok(f)) => {
                worst = worst.max(c.residual).max(f.residual);
                values.insert(c.value);
                if c.value != f.value || c.value.abs() > 1 || c.residual >= MAX_RESIDUAL {
                    failures += 1;
                }
            }
            _ => failures += 1,
        }
    }
    let (fast, rt) = within(60.0, start.elapsed());
    // W is +1 on the α < 0 lobes and -1 on the mirrored α > 0 lobes; |W| is the phase label
    outcome(
        failures == 0 && fast,
        format!(
            "{} cells, {failures} failing, worst residual {worst:.2e}, values {values:?} (|W| in {{0, 1}}), stable 1024 -> 2048; {rt}",
            cells.len()
        ),
    )
}

fn transition_localization() -> Outcome {
    let beta = FRAC_PI_4;
    let rows = at_t(&alpha_sweep(&[beta], &[15], 1.0), 15);
    let h = 2.0 * PI / 201.0;
    let lines = transition_alphas(beta);
    // each derived line must show up as a gap-product zero on the grid
    let zeros_seen = lines.iter().all(|&z| {
        rows.iter()
            .filter(|r| (r.alpha - z).abs() <= h / 2.0 + 1e-12)
            .any(|r| {
                r.gaps
                    .is_some_and(|g| g.gap_zero * g.gap_pi <= h / 2.0 * PI)
            })
    });
    let valid: Vec<(f64, i32)> = rows
        .iter()
        .filter_map(|r| r.winding.value().map(|w| (r.alpha, w)))
        .collect();
    let jumps: Vec<f64> = valid
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| (w[0].0 + w[1].0) / 2.0)
        .collect();
    let jump_near_line = jumps
        .iter()
        .all(|&j| lines.iter().any(|&z| (j - z).abs() <= h));
    let line_has_jump = lines
        .iter()
        .all(|&z| jumps.iter().any(|&j| (j - z).abs() <= h));
    let flagged = rows
        .iter()
        .filter(|r| !matches!(r.winding, WindingCell::Winding(_)))
        .count();
    let offsets: Vec<String> = jumps
        .iter()
        .map(|&j| {
            format!(
                "{:.4}",
                lines
                    .iter()
                    .map(|&z| (j - z).abs())
                    .fold(f64::INFINITY, f64::min)
            )
        })
        .collect();
    outcome(
        zeros_seen && jump_near_line && line_has_jump && jumps.len() == lines.len(),
        format!(
            "{} jumps for {} gap zeros, jump-to-zero distances [{}] rad (cell {h:.4}), {flagged} boundary/non-convergent cells",
            jumps.len(),
            lines.len(),
            offsets.join(", ")
        ),
    )
}

fn diffusion_of(rows: &[SweepRow]) -> Vec<f64> {
    rows.iter()
        .map(|r| r.diffusion.expect("lossless rows are measurable"))
        .collect()
}

fn hermitian_curves() -> Outcome {
    let beta = FRAC_PI_4;
    let rows = alpha_sweep(&[beta], &[5, 15, 50], 1.0);
    let (d5, d15, d50) = (
        diffusion_of(&at_t(&rows, 5)),
        diffusion_of(&at_t(&rows, 15)),
        diffusion_of(&at_t(&rows, 50)),
    );
    let alphas: Vec<f64> = at_t(&rows, 15).iter().map(|r| r.alpha).collect();
    let sampled: Vec<usize> = (0..alphas.len())
        .filter(|&i| transition_distance(alphas[i], beta) >= 0.1)
        .collect();
    let violations: Vec<usize> = sampled
        .iter()
        .copied()
        .filter(|&i| !(d50[i] > d15[i] && d15[i] > d5[i]))
        .collect();
    let (slope_at, slope) = (0..alphas.len() - 1)
        .map(|i| {
            (
                (alphas[i] + alphas[i + 1]) / 2.0,
                ((d15[i + 1] - d15[i]) / (alphas[i + 1] - alphas[i])).abs(),
            )
        })
        .fold(
            (0.0, -1.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    let turning_distance = transition_distance(slope_at, beta);
    let worst = violations
        .iter()
        .map(|&i| format!("{:.3}pi", alphas[i] / PI))
        .take(4)
        .collect::<Vec<_>>()
        .join(", ");
    outcome(
        violations.is_empty() && turning_distance <= 0.1,
        format!(
            "ordering D50 > D15 > D5 violated at {}/{} sampled points [{}{}]; max |dD/dalpha| = {slope:.3} at {:.4}pi, {turning_distance:.4} rad from a transition (limit 0.1)",
            violations.len(),
            sampled.len(),
            worst,
            if violations.len() > 4 { ", ..." } else { "" },
            slope_at / PI
        ),
    )
}

fn beta_ordering() -> Outcome {
    let spec = SweepSpec {
        alpha_start: -FRAC_PI_2,
        alpha_stop: -FRAC_PI_2,
        alpha_count: 1,
        beta_values: vec![FRAC_PI_6, FRAC_PI_4, FRAC_PI_3],
        t_values: vec![15],
        ..SweepSpec::default()
    };
    let d = diffusion_of(&sweep_parallel(&spec).unwrap().rows);
    outcome(
        d[0] > d[1] && d[1] > d[2],
        format!(
            "D(pi/6) = {:.6}, D(pi/4) = {:.6}, D(pi/3) = {:.6} at alpha = -pi/2",
            d[0], d[1], d[2]
        ),
    )
}

fn pt_classification() -> Outcome {
    let start = Instant::now();
    let tag = |alpha: f64| {
        pt_phase_classify(
            &WalkParams::new(alpha, FRAC_PI_4, 1.0, 0.8, 1).unwrap(),
            1024,
            DEFAULT_PT_TOL,
        )
        .map(|p| p.tag)
    };
    let at_3pi4 = tag(-3.0 * FRAC_PI_4);
    let at_pi2 = tag(-FRAC_PI_2);
    let near_pi4: Vec<_> = [-0.02, -0.01, 0.0, 0.01, 0.02]
        .iter()
        .map(|d| tag(-FRAC_PI_4 + d))
        .collect();
    let edge_lo = tag(-PI + 0.05);
    let edge_hi = tag(-0.05);
    let pass = at_3pi4 == Ok(PtTag::BrokenPi)
        && at_pi2 == Ok(PtTag::Unbroken)
        && near_pi4
            .iter()
            .all(|t| t.as_ref().is_ok_and(|t| t.is_broken()))
        && edge_lo == Ok(PtTag::Unbroken)
        && edge_hi == Ok(PtTag::Unbroken);
    let (fast, rt) = within(5.0, start.elapsed());
    outcome(
        pass && fast,
        format!(
            "-3pi/4: {at_3pi4:?}, -pi/2: {at_pi2:?}, -pi/4 +/- 0.02: {:?}, -pi+0.05: {edge_lo:?}, -0.05: {edge_hi:?}; {rt}",
            near_pi4.iter().map(|t| t.as_ref().map(|t| t.as_str()).unwrap_or("error")).collect::<Vec<_>>()
        ),
    )
}

fn lossy_curves() -> Outcome {
    let rows = alpha_sweep(&[FRAC_PI_4], &[5, 15, 30], 0.8);
    let r15 = at_t(&rows, 15);
    let (d5, d15, d30) = (
        diffusion_of(&at_t(&rows, 5)),
        diffusion_of(&r15),
        diffusion_of(&at_t(&rows, 30)),
    );
    let broken: Vec<bool> = r15
        .iter()
        .map(|r| r.pt_tag().is_none_or(|t| t.is_broken()))
        .collect();
    let outside: Vec<usize> = (0..r15.len()).filter(|&i| !broken[i]).collect();
    let violations = outside
        .iter()
        .filter(|&&i| !(d30[i] < d15[i] && d15[i] < d5[i]))
        .count();

    let mut intervals = Vec::new();
    let mut i = 0;
    while i < broken.len() {
        if broken[i] {
            let s = i;
            while i + 1 < broken.len() && broken[i + 1] {
                i += 1;
            }
            intervals.push((s, i));
        }
        i += 1;
    }
    let extremum_in = |&(s, e): &(usize, usize)| {
        (s..=e).any(|j| {
            j > 0 && j + 1 < d15.len() && {
                let (l, c, r) = (d15[j - 1], d15[j], d15[j + 1]);
                (c > l && c > r) || (c < l && c < r)
            }
        })
    };
    let with_extremum = intervals.iter().filter(|iv| extremum_in(iv)).count();
    let spans: Vec<String> = intervals
        .iter()
        .map(|&(s, e)| format!("[{:.3}pi, {:.3}pi]", r15[s].alpha / PI, r15[e].alpha / PI))
        .collect();
    outcome(
        violations == 0 && !intervals.is_empty() && with_extremum == intervals.len(),
        format!(
            "D30 < D15 < D5 violated at {violations}/{} unbroken points; broken intervals {} with a t=15 extremum in {with_extremum}/{}",
            outside.len(),
            spans.join(" "),
            intervals.len()
        ),
    )
}

fn entropy_correlation() -> Outcome {
    let rows = alpha_sweep(&[FRAC_PI_6, FRAC_PI_4, FRAC_PI_3], &[15], 1.0);
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, beta) in [
        ("pi/6", FRAC_PI_6),
        ("pi/4", FRAC_PI_4),
        ("pi/3", FRAC_PI_3),
    ] {
        let series: Vec<&SweepRow> = rows
            .iter()
            .filter(|r| (r.beta - beta).abs() < 1e-12)
            .collect();
        let d: Vec<f64> = series.iter().map(|r| r.diffusion.unwrap()).collect();
        let s: Vec<f64> = series.iter().map(|r| r.entropy_bits.unwrap()).collect();
        let rho = spearman(&d, &s);
        pass &= series.len() == 201 && rho > 0.8;
        parts.push(format!("beta={name}: {rho:.4}"));
    }
    outcome(
        pass,
        format!(
            "Spearman rank correlation of D and S [{}], threshold 0.8 (artifact-level choice)",
            parts.join(", ")
        ),
    )
}

fn csv_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("ptwalk-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let run = |name: &str| {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_ptwalk"))
            .args([
                "--command",
                "sweep",
                "--beta",
                "1/4",
                "--t",
                "5,15,50",
                "--alpha-count",
                "201",
                "--out",
            ])
            .arg(&out)
            .status()
            .expect("binary runs");
        (status.success(), fs::read(&out).unwrap_or_default())
    };
    let (ok_a, a) = run("a.csv");
    let (ok_b, b) = run("b.csv");
    let _ = fs::remove_dir_all(&dir);
    let lines = a.iter().filter(|&&c| c == b'\n').count();
    outcome(
        ok_a && ok_b && !a.is_empty() && a == b && lines == 604,
        format!(
            "two CLI runs: {} bytes each, {lines} lines, identical = {}",
            a.len(),
            a == b
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, Check); 11] = [
        (1, "unitarity", unitarity),
        (2, "dense-operator oracle", oracle_equivalence),
        (3, "dispersion cross-check", dispersion),
        (4, "winding integrality and stability", winding_integrality),
        (5, "transition-line localization", transition_localization),
        (6, "lossless diffusion curves", hermitian_curves),
        (7, "beta ordering", beta_ordering),
        (8, "PT classification", pt_classification),
        (9, "lossy diffusion curves", lossy_curves),
        (10, "entropy-diffusion correlation", entropy_correlation),
        (11, "CSV determinism", csv_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for (n, name, check) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {n:>2} {verdict} {name} [{:.2}s]: {}",
            start.elapsed().as_secs_f64(),
            result.detail
        );
        if !result.pass {
            failed.push(n);
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
