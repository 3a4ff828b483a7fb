//! Closed-form solvers versus the refined brute-force oracle on sampled
//! realizations.

use serde::Serialize;

use crate::channel::{derive_params, DerivedParams, User};
use crate::config::SystemConfig;
use crate::efficiency::EfficiencyCurve;
use crate::error::{Error, Result};
use crate::maxmin::{solve_maxmin, MaxMinAllocation};
use crate::maxsum::{alpha_max, solve_maxsum};
use crate::montecarlo::sample_trial;
use crate::oracle::{grid_search, refine};
use crate::rates::{compute_rates, harvested_power};
use crate::solution::{Problem, Scheme, Solution};

/// Largest tolerated objective gap between closed form and oracle, bps/Hz.
pub const MAX_OBJECTIVE_GAP: f64 = 1e-4;
/// Instances closer than this to the feasibility boundary are left out of the
/// outage-agreement check.
pub const BOUNDARY_MARGIN: f64 = 1e-3;
/// Validation refuses grids coarser than this.
pub const MIN_GRID_POINTS: usize = 51;
/// Give up after this many draws per requested feasible instance.
const MAX_DRAWS_PER_INSTANCE: usize = 50;

/// Signed distance of an instance from the outage boundary of `problem`:
/// positive when feasible, negative in outage.
///
/// Energy headroom is relative, `(E_j(0) - Ē_j) / Ē_j`. Rate headroom is in
/// bps/Hz at the energy-limited split ratios: for max-sum the best achievable
/// `min(R1, R2)` over `P2 ∈ [0, P_m]` minus `R_min`; for max-min `Z2(P2 = 0)`
/// minus `R_sic`.
pub fn feasibility_margin(
    problem: Problem,
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> f64 {
    let mut energy = f64::INFINITY;
    for (user, floor) in [
        (User::One, config.e_min_user1_w),
        (User::Two, config.e_min_user2_w),
    ] {
        if floor > 0.0 {
            energy = energy.min((harvested_power(0.0, params, user, curve) - floor) / floor);
        }
    }
    if energy < 0.0 {
        return energy;
    }
    let alpha = [
        alpha_max(params, curve, config.e_min_user1_w, User::One, config.bisection_tol),
        alpha_max(params, curve, config.e_min_user2_w, User::Two, config.bisection_tol),
    ];
    let [Some(a1), Some(a2)] = alpha else {
        return energy.min(0.0);
    };
    let rate = match problem {
        Problem::MaxSum => {
            let crossing = MaxMinAllocation::new([a1, a2], params, 0.0).p_r;
            let p2 = crossing.clamp(0.0, params.p_m);
            compute_rates(a1, a2, p2, params).min() - config.r_min_bpshz
        }
        Problem::MaxMin => compute_rates(a1, a2, 0.0, params).z2 - config.r_sic_bpshz,
    };
    energy.min(rate)
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceCheck {
    pub trial: u64,
    pub problem: Problem,
    pub closed_form: Solution,
    pub oracle: Solution,
    pub margin: f64,
}

impl InstanceCheck {
    pub fn gap(&self) -> f64 {
        (self.closed_form.objective - self.oracle.objective).abs()
    }

    /// Outage verdicts differ on an instance clear of the boundary.
    pub fn disagrees(&self) -> bool {
        self.closed_form.outage != self.oracle.outage && self.margin.abs() >= BOUNDARY_MARGIN
    }
}

/// Compares both solvers with the oracle on one realization.
pub fn check_instance(
    trial: u64,
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> [InstanceCheck; 2] {
    Problem::ALL.map(|problem| {
        let closed_form = match problem {
            Problem::MaxSum => solve_maxsum(params, config, curve),
            Problem::MaxMin => solve_maxmin(params, config, curve),
        };
        let seed = grid_search(problem, Scheme::DasNoma, params, config, curve);
        let oracle = refine(&seed, params, config, curve, problem);
        InstanceCheck {
            trial,
            problem,
            closed_form,
            oracle,
            margin: feasibility_margin(problem, params, config, curve),
        }
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ProblemSummary {
    pub feasible_instances: usize,
    pub max_gap: f64,
    pub worst_trial: Option<u64>,
    pub boundary_excluded: usize,
    pub disagreements: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub draws: usize,
    pub max_sum: ProblemSummary,
    pub max_min: ProblemSummary,
}

impl ValidationReport {
    pub fn summary(&self, problem: Problem) -> &ProblemSummary {
        match problem {
            Problem::MaxSum => &self.max_sum,
            Problem::MaxMin => &self.max_min,
        }
    }

    pub fn passed(&self) -> bool {
        Problem::ALL.iter().all(|&p| {
            let s = self.summary(p);
            s.max_gap <= MAX_OBJECTIVE_GAP && s.disagreements.is_empty()
        })
    }
}

/// Draws trials until each problem has `num_instances` feasible ones (both
/// closed form and oracle out of outage), checking outage agreement on every draw.
pub fn validate(
    config: &SystemConfig,
    curve: &EfficiencyCurve,
    num_instances: usize,
) -> Result<ValidationReport> {
    if num_instances == 0 {
        return Err(Error::config("instances", "must be >= 1"));
    }
    config.validate()?;
    if config.grid_points_alpha < MIN_GRID_POINTS || config.grid_points_p2 < MIN_GRID_POINTS {
        return Err(Error::config(
            "grid_points_alpha",
            format!("validation needs at least {MIN_GRID_POINTS} grid points per axis"),
        ));
    }
    let mut summaries = [ProblemSummary::default(), ProblemSummary::default()];
    let max_draws = num_instances * MAX_DRAWS_PER_INSTANCE;
    let mut draws = 0;
    while summaries.iter().any(|s| s.feasible_instances < num_instances) {
        if draws == max_draws {
            return Err(Error::config(
                "total_power_dbm",
                format!("fewer than {num_instances} feasible instances in {max_draws} draws"),
            ));
        }
        let trial = draws as u64;
        draws += 1;
        let realization = sample_trial(config, trial)?;
        let params = derive_params(&realization, config, config.das_budget())?;
        for check in check_instance(trial, &params, config, curve) {
            let s = &mut summaries[check.problem as usize];
            if check.disagrees() {
                s.disagreements.push(trial);
            } else if check.closed_form.outage != check.oracle.outage {
                s.boundary_excluded += 1;
            }
            if check.closed_form.outage || check.oracle.outage || s.feasible_instances >= num_instances {
                continue;
            }
            s.feasible_instances += 1;
            let gap = check.gap();
            if gap > s.max_gap || s.worst_trial.is_none() {
                s.max_gap = s.max_gap.max(gap);
                s.worst_trial = Some(trial);
            }
        }
    }
    let [max_sum, max_min] = summaries;
    Ok(ValidationReport {
        draws,
        max_sum,
        max_min,
    })
}
