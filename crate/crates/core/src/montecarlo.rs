//! Seeded trial ensembles over random placements and channels.
//!
//! Each trial owns an independent ChaCha stream selected by `(seed, trial)`,
//! so results do not depend on how trials are scheduled across threads. A
//! trial's realization does not depend on the transmit power, so the same
//! draw is reused at every sweep point and by every scheme.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::solve;
use crate::channel::{derive_params, sample_channels, sample_placement, ChannelRealization};
use crate::config::{watts_to_dbm, PowerBudget, SystemConfig};
use crate::efficiency::EfficiencyCurve;
use crate::error::{Error, Result};
use crate::solution::{Problem, Scheme, Solution};

/// Random stream of one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Samples the placement and channels of trial `trial`.
pub fn sample_trial(config: &SystemConfig, trial: u64) -> Result<ChannelRealization> {
    let mut rng = trial_rng(config.seed, trial);
    loop {
        let placement = sample_placement(config, &mut rng);
        let realization = sample_channels(&placement, config, &mut rng)?;
        // a zero controller gain has probability zero; redraw if it happens
        if (0..2).all(|j| realization.path_loss[0][j] * realization.estimated_gain[0][j].norm_sqr() > 0.0) {
            return Ok(realization);
        }
    }
}

/// Power budget a scheme runs under.
pub fn scheme_budget(scheme: Scheme, config: &SystemConfig) -> PowerBudget {
    match scheme {
        Scheme::DasNoma | Scheme::DasOma => config.das_budget(),
        Scheme::NomaOnly => config.no_das_budget(),
    }
}

/// Solves every requested scheme and problem on one realization.
pub fn solve_realization(
    realization: &ChannelRealization,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
    schemes: &[Scheme],
    problems: &[Problem],
) -> Result<Vec<Solution>> {
    let mut out = Vec::with_capacity(schemes.len() * problems.len());
    for &scheme in schemes {
        let params = derive_params(realization, config, scheme_budget(scheme, config))?;
        for &problem in problems {
            out.push(solve(scheme, problem, &params, config, curve));
        }
    }
    Ok(out)
}

/// Per-trial summary of one scheme/problem solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub scheme: Scheme,
    pub problem: Problem,
    pub objective: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub p2: f64,
    pub outage: bool,
    pub e1: f64,
    pub e2: f64,
}

impl From<&Solution> for Outcome {
    fn from(s: &Solution) -> Self {
        Outcome {
            scheme: s.scheme,
            problem: s.problem,
            objective: s.objective,
            alpha1: s.alpha1,
            alpha2: s.alpha2,
            p2: s.p2,
            outage: s.outage,
            e1: s.e1,
            e2: s.e2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// Fingerprint of the realization every outcome was computed on.
    pub realization: u64,
    pub outcomes: Vec<Outcome>,
}

impl TrialRecord {
    pub fn outcome(&self, scheme: Scheme, problem: Problem) -> Option<&Outcome> {
        self.outcomes
            .iter()
            .find(|o| o.scheme == scheme && o.problem == problem)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub scheme: Scheme,
    pub problem: Problem,
    pub num_trials: usize,
    pub num_non_outage: usize,
    /// Mean objective with outage trials counted as zero.
    pub mean_objective: f64,
    /// Sample variance of the per-trial objective (outage as zero).
    pub var_objective: f64,
    pub outage_prob: f64,
    /// Means over non-outage trials; NaN when every trial was in outage.
    pub mean_alpha1: f64,
    pub mean_alpha2: f64,
    pub mean_e1: f64,
    pub mean_e2: f64,
}

/// Pairwise summation; the result depends only on the order of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1..=8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        f64::NAN
    } else {
        pairwise_sum(values) / values.len() as f64
    }
}

impl AggregateStats {
    pub fn from_outcomes<'a>(
        scheme: Scheme,
        problem: Problem,
        outcomes: impl IntoIterator<Item = &'a Outcome>,
    ) -> Self {
        let outcomes: Vec<&Outcome> = outcomes.into_iter().collect();
        let n = outcomes.len();
        let objectives: Vec<f64> = outcomes.iter().map(|o| o.objective).collect();
        let ok: Vec<&&Outcome> = outcomes.iter().filter(|o| !o.outage).collect();
        let field = |f: fn(&Outcome) -> f64| mean(&ok.iter().map(|o| f(o)).collect::<Vec<_>>());
        let mean_objective = mean(&objectives);
        let var_objective = if n > 1 {
            let dev: Vec<f64> = objectives.iter().map(|x| (x - mean_objective).powi(2)).collect();
            pairwise_sum(&dev) / (n - 1) as f64
        } else {
            0.0
        };
        AggregateStats {
            scheme,
            problem,
            num_trials: n,
            num_non_outage: ok.len(),
            mean_objective,
            var_objective,
            outage_prob: if n == 0 { f64::NAN } else { (n - ok.len()) as f64 / n as f64 },
            mean_alpha1: field(|o| o.alpha1),
            mean_alpha2: field(|o| o.alpha2),
            mean_e1: field(|o| o.e1),
            mean_e2: field(|o| o.e2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub total_power_w: f64,
    pub total_power_dbm: f64,
    pub records: Vec<TrialRecord>,
    pub stats: Vec<AggregateStats>,
}

impl SweepPoint {
    pub fn stats_for(&self, scheme: Scheme, problem: Problem) -> Option<&AggregateStats> {
        self.stats
            .iter()
            .find(|s| s.scheme == scheme && s.problem == problem)
    }

    /// Per-trial objective differences `a - b` on the shared realizations.
    pub fn paired_differences(&self, a: Scheme, b: Scheme, problem: Problem) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| Some(r.outcome(a, problem)?.objective - r.outcome(b, problem)?.objective))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub schemes: Vec<Scheme>,
    pub problems: Vec<Problem>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            schemes: Scheme::ALL.to_vec(),
            problems: Problem::ALL.to_vec(),
        }
    }
}

/// Runs `num_trials` trials at every total power in `sweep_w` and aggregates them.
pub fn run_trials(
    config: &SystemConfig,
    curve: &EfficiencyCurve,
    num_trials: usize,
    sweep_w: &[f64],
    options: &RunOptions,
) -> Result<Vec<SweepPoint>> {
    if num_trials == 0 {
        return Err(Error::config("num_trials", "must be >= 1"));
    }
    config.validate()?;
    let point_configs: Vec<SystemConfig> = sweep_w
        .iter()
        .map(|&p| {
            let c = config.with_total_power(p);
            c.validate().map(|_| c)
        })
        .collect::<Result<_>>()?;

    // per_trial[t][point]
    let per_trial: Vec<Vec<TrialRecord>> = (0..num_trials as u64)
        .into_par_iter()
        .map(|trial| {
            let realization = sample_trial(config, trial)?;
            let fingerprint = realization.fingerprint();
            point_configs
                .iter()
                .map(|cfg| {
                    let solutions =
                        solve_realization(&realization, cfg, curve, &options.schemes, &options.problems)?;
                    Ok(TrialRecord {
                        trial,
                        realization: fingerprint,
                        outcomes: solutions.iter().map(Outcome::from).collect(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut points: Vec<SweepPoint> = point_configs
        .iter()
        .map(|cfg| SweepPoint {
            total_power_w: cfg.total_power_w,
            total_power_dbm: watts_to_dbm(cfg.total_power_w),
            records: Vec::with_capacity(num_trials),
            stats: Vec::new(),
        })
        .collect();
    for trial_records in per_trial {
        for (point, record) in points.iter_mut().zip(trial_records) {
            point.records.push(record);
        }
    }
    for point in &mut points {
        for &scheme in &options.schemes {
            for &problem in &options.problems {
                let outcomes = point.records.iter().filter_map(|r| r.outcome(scheme, problem));
                point
                    .stats
                    .push(AggregateStats::from_outcomes(scheme, problem, outcomes));
            }
        }
    }
    Ok(points)
}
