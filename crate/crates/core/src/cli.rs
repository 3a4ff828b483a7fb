//! Command implementations behind the `swipt-das` binary. Each returns the
//! process exit code.

use std::path::Path;

use serde::Serialize;

use crate::channel::{derive_params, DerivedParams};
use crate::error::Error;
use crate::io::{write_outputs, Experiment};
use crate::montecarlo::{run_trials, sample_trial, scheme_budget, RunOptions};
use crate::solution::{Problem, Scheme, Solution};
use crate::validate::{validate, ValidationReport, MAX_OBJECTIVE_GAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "SWIPT_DAS_THREADS";

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    EXIT_USAGE
}

/// Sizes the global thread pool from [`THREADS_ENV`] when it is set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

pub fn cmd_sweep(config_path: &Path, out_dir: &Path) -> i32 {
    let experiment = match Experiment::load(config_path) {
        Ok(e) => e,
        Err(e) => return fail(&e),
    };
    let points = match run_trials(
        &experiment.config,
        &experiment.curve,
        experiment.file.sweep.num_trials,
        &experiment.sweep_w(),
        &RunOptions::default(),
    ) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    match write_outputs(out_dir, &experiment, &points) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

fn print_report(report: &ValidationReport, seed: u64) {
    println!("seed {seed}, {} realizations drawn", report.draws);
    for problem in Problem::ALL {
        let s = report.summary(problem);
        let worst = s.worst_trial.map_or("-".to_string(), |t| t.to_string());
        println!(
            "{problem}: {} feasible, max gap {:.3e} bps/Hz (trial {worst}), {} outage disagreements, {} boundary exclusions",
            s.feasible_instances,
            s.max_gap,
            s.disagreements.len(),
            s.boundary_excluded,
        );
        if s.max_gap > MAX_OBJECTIVE_GAP {
            eprintln!(
                "{problem}: gap {:.3e} exceeds {MAX_OBJECTIVE_GAP:e} at seed {seed} trial {worst}",
                s.max_gap
            );
        }
        for t in &s.disagreements {
            eprintln!("{problem}: outage verdicts differ at seed {seed} trial {t}");
        }
    }
}

pub fn cmd_validate(config_path: &Path, num_instances: usize) -> i32 {
    let experiment = match Experiment::load(config_path) {
        Ok(e) => e,
        Err(e) => return fail(&e),
    };
    match validate(&experiment.config, &experiment.curve, num_instances) {
        Ok(report) => {
            print_report(&report, experiment.config.seed);
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Err(e) => fail(&e),
    }
}

#[derive(Debug, Serialize)]
pub struct SchemeReport {
    pub scheme: Scheme,
    pub params: DerivedParams,
    pub solutions: Vec<Solution>,
}

#[derive(Debug, Serialize)]
pub struct SingleReport {
    pub seed: u64,
    pub trial: u64,
    pub total_power_w: f64,
    pub roles_swapped: bool,
    pub schemes: Vec<SchemeReport>,
}

/// Every scheme and problem on one realization.
pub fn single_report(experiment: &Experiment, trial: u64) -> crate::Result<SingleReport> {
    let config = &experiment.config;
    let realization = sample_trial(config, trial)?;
    let schemes = Scheme::ALL
        .iter()
        .map(|&scheme| {
            let params = derive_params(&realization, config, scheme_budget(scheme, config))?;
            let solutions = Problem::ALL
                .iter()
                .map(|&problem| crate::baselines::solve(scheme, problem, &params, config, &experiment.curve))
                .collect();
            Ok(SchemeReport {
                scheme,
                params,
                solutions,
            })
        })
        .collect::<crate::Result<_>>()?;
    Ok(SingleReport {
        seed: config.seed,
        trial,
        total_power_w: config.total_power_w,
        roles_swapped: realization.roles_swapped,
        schemes,
    })
}

pub fn cmd_single(config_path: &Path, seed: Option<u64>, trial: u64, perfect_csi: bool) -> i32 {
    let mut experiment = match Experiment::load(config_path) {
        Ok(e) => e,
        Err(e) => return fail(&e),
    };
    if let Some(seed) = seed {
        experiment = experiment.with_seed(seed);
    }
    if perfect_csi {
        experiment.config.csi_error_var = 0.0;
    }
    match single_report(&experiment, trial) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}
