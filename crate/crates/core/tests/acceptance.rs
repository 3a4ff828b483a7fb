//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::fs;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swipt_das::channel::derive_params;
use swipt_das::io::{csv_name, Experiment};
use swipt_das::maxmin::{MaxMinAllocation, MaxMinBranch};
use swipt_das::maxsum::{energy_limited_alphas, MaxSumAllocation};
use swipt_das::montecarlo::{run_trials, sample_trial, RunOptions, SweepPoint};
use swipt_das::rates::{compute_rates, user1_signal_rate, user2_rate};
use swipt_das::validate::{validate, BOUNDARY_MARGIN, MAX_OBJECTIVE_GAP};
use swipt_das::{
    solve_maxmin, solve_maxsum, DerivedParams, EfficiencyCurve, PowerBudget, Problem, Scheme,
    SystemConfig, User,
};

const ORACLE_INSTANCES: usize = 500;
const ORACLE_RUNTIME_LIMIT_S: f64 = 300.0;
const FIXTURE_TOL: f64 = 1e-6;
const MONOTONICITY_POINTS: usize = 10_000;
const DIRECTION_INSTANCES: usize = 1_000;
const SIGN_SLACK: f64 = 1e-9;
const EQUALIZATION_TOL: f64 = 1e-9;
const MC_TRIALS: usize = 2000;
const ALPHA_TOL: f64 = 0.02;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn oracle_equivalence(report: &mut Report) {
    let config = SystemConfig::default();
    let start = Instant::now();
    let result = validate(&config, &EfficiencyCurve::default(), ORACLE_INSTANCES);
    let elapsed = start.elapsed().as_secs_f64();
    let v = match result {
        Ok(v) => v,
        Err(e) => {
            for p in Problem::ALL {
                report.line(&format!("oracle equivalence ({p})"), false, e.to_string());
            }
            return;
        }
    };
    for p in Problem::ALL {
        let s = v.summary(p);
        let pass = s.feasible_instances == ORACLE_INSTANCES
            && s.max_gap <= MAX_OBJECTIVE_GAP
            && s.disagreements.is_empty()
            && elapsed <= ORACLE_RUNTIME_LIMIT_S;
        report.line(
            &format!("oracle equivalence ({p})"),
            pass,
            format!(
                "{} feasible of {} draws, max gap {:.2e} <= {MAX_OBJECTIVE_GAP:e}, {} disagreements with |margin| >= {BOUNDARY_MARGIN:e} (disagreeing trials {:?}), {} excluded, both problems in {elapsed:.0} s",
                s.feasible_instances,
                v.draws,
                s.max_gap,
                s.disagreements.len(),
                s.disagreements,
                s.boundary_excluded,
            ),
        );
    }
}

fn fixtures(report: &mut Report) {
    let cfg = SystemConfig {
        e_min_user1_w: 0.0,
        e_min_user2_w: 0.0,
        r_min_bpshz: 1.0,
        r_sic_bpshz: 0.5,
        ..Default::default()
    };
    let curve = EfficiencyCurve::default();
    let p = DerivedParams::effective(
        [1.0, 1.0],
        [0.0, 0.0],
        [0.0, 0.0],
        PowerBudget { p_m: 10.0, p_r: 0.0 },
    );
    // hand values: P2* = (P_m - b)/2 with b = 1; R_sum = log2(1 + 5.5/5.5) + log2(1 + 4.5)
    let ms = solve_maxsum(&p, &cfg, &curve);
    let (p2_sum, r_sum) = (4.5, 1.0 + 5.5f64.log2());
    // P2* solves x² + 2x - 10 = 0; R_fair = log2(1 + P2*)
    let mm = solve_maxmin(&p, &cfg, &curve);
    let p2_fair = -1.0 + 11f64.sqrt();
    let r_fair = (1.0 + p2_fair).log2();
    let errs = [
        (ms.p2 - p2_sum).abs(),
        (ms.objective - r_sum).abs(),
        (mm.p2 - p2_fair).abs(),
        (mm.objective - r_fair).abs(),
    ];
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    report.line(
        "hand fixtures",
        !ms.outage && !mm.outage && worst <= FIXTURE_TOL,
        format!(
            "max-sum P2* {:.9} (4.5), R_sum {:.9} ({r_sum:.9}); max-min P2* {:.9} ({p2_fair:.9}), R_fair {:.9} ({r_fair:.9}); worst error {worst:.1e} <= {FIXTURE_TOL:e}",
            ms.p2, ms.objective, mm.p2, mm.objective
        ),
    );
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn random_params(rng: &mut ChaCha8Rng) -> DerivedParams {
    let p_m = log_uniform(rng, 0.1, 100.0);
    let p_r = rng.random_range(0.0..1.0) * p_m / 6.0;
    DerivedParams::effective(
        [log_uniform(rng, 1e-3, 1e2), log_uniform(rng, 1e-3, 1e2)],
        [log_uniform(rng, 1e-3, 1e3), log_uniform(rng, 1e-3, 1e3)],
        [log_uniform(rng, 1e-6, 1.0), log_uniform(rng, 1e-6, 1.0)],
        PowerBudget { p_m, p_r },
    )
}

/// Counts finite-difference sign violations of the rate monotonicity in the
/// split ratios and in `P2`.
fn monotonicity(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut alpha_violations, mut power_violations) = (0usize, 0usize);
    for _ in 0..MONOTONICITY_POINTS {
        let p = random_params(&mut rng);
        let a1 = rng.random_range(1e-3..0.999);
        let a2 = rng.random_range(1e-3..0.999);
        let p2 = rng.random_range(1e-3..0.999) * p.p_m;
        let h = 1e-4;
        let base = compute_rates(a1, a2, p2, &p);

        let up1 = compute_rates(a1 + h, a2, p2, &p);
        let up2 = compute_rates(a1, a2 + h, p2, &p);
        let increasing = |after: f64, before: f64| after - before > -SIGN_SLACK;
        let constant = |after: f64, before: f64| (after - before).abs() <= SIGN_SLACK;
        let alpha_ok = increasing(up1.z1, base.z1)
            && increasing(up2.z2, base.z2)
            && increasing(up2.r2, base.r2)
            && constant(up2.z1, base.z1)
            && constant(up1.z2, base.z2)
            && constant(up1.r2, base.r2)
            // strictness, checked on the raw rate maps
            && user1_signal_rate(a1 + h, p2, &p, User::One) > user1_signal_rate(a1, p2, &p, User::One)
            && user2_rate(a2 + h, p2, &p) > user2_rate(a2, p2, &p);
        if !alpha_ok {
            alpha_violations += 1;
        }

        let dp = 1e-4 * p.p_m;
        let more = compute_rates(a1, a2, p2 + dp, &p);
        let power_ok = more.z1 - base.z1 < SIGN_SLACK
            && more.z2 - base.z2 < SIGN_SLACK
            && more.r2 - base.r2 > -SIGN_SLACK
            && more.z1 < base.z1
            && more.r2 > base.r2;
        if !power_ok {
            power_violations += 1;
        }
    }

    // R_sum(α, ·) is monotone on the feasible interval, rising when b1 >= b2
    let mut instances = 0;
    let mut draws = 0;
    let mut direction_violations = 0;
    while instances < DIRECTION_INSTANCES && draws < 100 * DIRECTION_INSTANCES {
        draws += 1;
        let p = random_params(&mut rng);
        let alpha = [rng.random_range(0.05..1.0), rng.random_range(0.05..1.0)];
        let alloc = MaxSumAllocation::new(alpha, &p, 1.0);
        let Ok((lo, hi)) = alloc.feasible_interval(p.p_m) else {
            continue;
        };
        if hi - lo < 1e-9 * p.p_m {
            continue;
        }
        instances += 1;
        let rising = alloc.b[0] >= alloc.b[1];
        let n = 200;
        let sums: Vec<f64> = (0..=n)
            .map(|i| compute_rates(alpha[0], alpha[1], lo + (hi - lo) * i as f64 / n as f64, &p).sum())
            .collect();
        let ok = sums.windows(2).all(|w| {
            if rising {
                w[1] >= w[0] - SIGN_SLACK
            } else {
                w[1] <= w[0] + SIGN_SLACK
            }
        });
        if !ok {
            direction_violations += 1;
        }
    }
    report.line(
        "monotonicity suite",
        alpha_violations == 0
            && power_violations == 0
            && direction_violations == 0
            && instances == DIRECTION_INSTANCES,
        format!(
            "split-ratio monotonicity {alpha_violations}/{MONOTONICITY_POINTS} violations, power monotonicity {power_violations}/{MONOTONICITY_POINTS}, sum-rate direction {direction_violations}/{instances} instances, slack {SIGN_SLACK:e}"
        ),
    );
}

fn equalization(report: &mut Report, sweep_dbm: &[f64]) {
    let curve = EfficiencyCurve::default();
    let base = SystemConfig::default();
    let (mut interior, mut worst) = (0usize, 0.0f64);
    for &dbm in sweep_dbm {
        let config = base.with_total_power(swipt_das::config::dbm_to_watts(dbm));
        for trial in 0..500 {
            let r = sample_trial(&config, trial).expect("sampling succeeds");
            let p = derive_params(&r, &config, config.das_budget()).expect("derivable");
            let Ok(alpha) = energy_limited_alphas(&p, &config, &curve) else {
                continue;
            };
            if alpha[1] == 0.0 {
                continue;
            }
            let alloc = MaxMinAllocation::new(alpha, &p, config.r_sic_bpshz);
            if let Ok((_, MaxMinBranch::Crossing)) = alloc.optimal_p2(p.p_m) {
                let s = solve_maxmin(&p, &config, &curve);
                interior += 1;
                worst = worst.max((s.rates.r1 - s.rates.r2).abs());
            }
        }
    }
    report.line(
        "max-min equalization",
        interior > 0 && worst <= EQUALIZATION_TOL,
        format!("{interior} interior optima, max |R1 - R2| = {worst:.1e} <= {EQUALIZATION_TOL:e}"),
    );
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn ordering(report: &mut Report, experiment: &Experiment) {
    let top = *experiment.sweep_w().last().expect("non-empty sweep");
    let points = run_trials(
        &experiment.config,
        &experiment.curve,
        MC_TRIALS,
        &[top],
        &RunOptions::default(),
    )
    .expect("sweep runs");
    let point = &points[0];
    let mut pass = true;
    let mut parts = Vec::new();
    for problem in Problem::ALL {
        for other in [Scheme::DasOma, Scheme::NomaOnly] {
            let (mean, se) = mean_and_se(&point.paired_differences(Scheme::DasNoma, other, problem));
            pass &= mean > 2.0 * se;
            parts.push(format!("{problem} das-noma - {other} = {mean:.4} (2 SE {:.4})", 2.0 * se));
        }
    }
    report.line(
        "scheme ordering at top power",
        pass,
        format!("{:.0} dBm, {MC_TRIALS} trials: {}", point.total_power_dbm, parts.join("; ")),
    );
}

fn das_noma_sweep(experiment: &Experiment, csi_error_var: f64) -> Vec<SweepPoint> {
    let config = SystemConfig {
        csi_error_var,
        ..experiment.config.clone()
    };
    let options = RunOptions {
        schemes: vec![Scheme::DasNoma],
        problems: Problem::ALL.to_vec(),
    };
    run_trials(&config, &experiment.curve, MC_TRIALS, &experiment.sweep_w(), &options).expect("sweep runs")
}

fn alpha_behavior(report: &mut Report, imperfect: &[SweepPoint]) {
    let mut pass = true;
    let mut parts = Vec::new();
    for problem in Problem::ALL {
        let stats: Vec<_> = imperfect
            .iter()
            .map(|pt| pt.stats_for(Scheme::DasNoma, problem).expect("run"))
            .collect();
        let ordered = stats.iter().all(|s| s.mean_alpha1 <= s.mean_alpha2);
        let mut worst_drop = f64::NEG_INFINITY;
        for w in stats.windows(2) {
            worst_drop = worst_drop
                .max(w[0].mean_alpha1 - w[1].mean_alpha1)
                .max(w[0].mean_alpha2 - w[1].mean_alpha2);
        }
        let defined = stats.iter().all(|s| s.mean_alpha1.is_finite() && s.mean_alpha2.is_finite());
        pass &= ordered && defined && worst_drop <= ALPHA_TOL;
        parts.push(format!(
            "{problem}: alpha1 <= alpha2 at all points {ordered}, largest drop {worst_drop:.4}, alpha1 {:.3} -> {:.3}, alpha2 {:.3} -> {:.3}",
            stats[0].mean_alpha1,
            stats[stats.len() - 1].mean_alpha1,
            stats[0].mean_alpha2,
            stats[stats.len() - 1].mean_alpha2,
        ));
    }
    report.line(
        "alpha behavior over the sweep",
        pass,
        format!("das-noma, {MC_TRIALS} trials, drop tolerance {ALPHA_TOL}: {}", parts.join("; ")),
    );
}

fn csi_degradation(report: &mut Report, imperfect: &[SweepPoint], perfect: &[SweepPoint]) {
    let mut pass = true;
    let mut parts = Vec::new();
    for problem in Problem::ALL {
        let mut worst = f64::INFINITY;
        for (a, b) in perfect.iter().zip(imperfect) {
            let gain = a.stats_for(Scheme::DasNoma, problem).expect("run").mean_objective
                - b.stats_for(Scheme::DasNoma, problem).expect("run").mean_objective;
            worst = worst.min(gain);
        }
        pass &= worst >= 0.0;
        parts.push(format!("{problem}: smallest gain of perfect CSI {worst:.4} bps/Hz"));
    }
    report.line(
        "imperfect-CSI degradation",
        pass,
        format!("das-noma, {MC_TRIALS} paired trials per point: {}", parts.join("; ")),
    );
}

fn determinism(report: &mut Report) {
    let dir = tempfile::tempdir().expect("temp dir");
    let config = dir.path().join("experiment.toml");
    fs::write(
        &config,
        "[sweep]\npoints_dbm = [44.0, 56.0]\nnum_trials = 24\n[solver]\ngrid_points_alpha = 101\ngrid_points_p2 = 101\n",
    )
    .expect("write config");
    let run = |threads: &str, out: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_swipt-das"))
            .arg("sweep")
            .arg(&config)
            .arg("--out")
            .arg(dir.path().join(out))
            .env("SWIPT_DAS_THREADS", threads)
            .output()
            .expect("binary runs");
        status.status.success()
    };
    let ran = run("1", "a") && run("4", "b") && run("4", "c");
    let identical = ran
        && Problem::ALL.iter().all(|&p| {
            let read = |d: &str| fs::read(dir.path().join(d).join(csv_name(p))).expect("csv exists");
            let a = read("a");
            a == read("b") && a == read("c")
        });
    report.line(
        "determinism",
        identical,
        "sweep CSVs byte-identical across runs with 1 and 4 threads".into(),
    );
}

fn main() {
    let mut report = Report { failures: 0 };
    let experiment = Experiment::defaults();

    fixtures(&mut report);
    monotonicity(&mut report);
    equalization(&mut report, &experiment.sweep_dbm);
    let imperfect = das_noma_sweep(&experiment, experiment.config.csi_error_var);
    let perfect = das_noma_sweep(&experiment, 0.0);
    alpha_behavior(&mut report, &imperfect);
    csi_degradation(&mut report, &imperfect, &perfect);
    determinism(&mut report);
    ordering(&mut report, &experiment);
    oracle_equivalence(&mut report);

    if report.failures > 0 {
        println!("{} acceptance criteria failed", report.failures);
        std::process::exit(1);
    }
}
