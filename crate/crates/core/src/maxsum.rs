//! Closed-form sum-rate maximization under minimum-rate and minimum-energy
//! constraints.
//!
//! Every rate grows with its user's split ratio, so each ratio sits at the
//! largest value the energy floor allows (`α_max`). With the ratios fixed,
//! `Z2 + R2` does not depend on `P2` and `Z1 + R2` is monotone in `P2` with
//! direction set by the sign of `b1 - b2`; the optimum is an end point of the
//! feasible interval `[P_R2, P_Z]`.

use serde::{Deserialize, Serialize};

use crate::channel::{DerivedParams, User};
use crate::config::SystemConfig;
use crate::efficiency::EfficiencyCurve;
use crate::rates::{compute_rates, harvested_power};
use crate::solution::{OutageReason, Problem, Scheme, Solution};

/// Bisection stops once the α bracket is narrower than this.
pub const ALPHA_BRACKET_TOL: f64 = 1e-12;

/// Largest split ratio whose harvested power still meets `e_min`, or `None`
/// when even `α = 0` falls short.
///
/// Returns the feasible end of the final bracket, so `E(α_max) >= e_min`
/// always holds. `energy_tol` (Watts) stops the search early once the
/// energy residual is that small.
pub fn alpha_max(
    params: &DerivedParams,
    curve: &EfficiencyCurve,
    e_min: f64,
    user: User,
    energy_tol: f64,
) -> Option<f64> {
    let energy = |a: f64| harvested_power(a, params, user, curve);
    if energy(1.0) >= e_min {
        return Some(1.0);
    }
    let e0 = energy(0.0);
    if e0 < e_min {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut e_lo = e0;
    while hi - lo > ALPHA_BRACKET_TOL && e_lo - e_min >= energy_tol {
        let mid = 0.5 * (lo + hi);
        let e = energy(mid);
        if e >= e_min {
            lo = mid;
            e_lo = e;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Smallest split ratios meeting a rate floor at a given `P2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaThresholds {
    /// `Z1 >= r_min` needs `α1 >= z1`.
    pub z1: f64,
    /// `Z2 >= r_min` needs `α2 >= z2`.
    pub z2: f64,
    /// `R2 >= r_min` needs `α2 >= r2`.
    pub r2: f64,
}

fn ratio_or_inf(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

/// Split-ratio thresholds of the rate floor `r_min`; `+∞` where the floor
/// cannot be met at this `p2` for any ratio.
pub fn alpha_thresholds(p2: f64, params: &DerivedParams, r_min: f64) -> AlphaThresholds {
    let k = r_min.exp2() - 1.0;
    if k == 0.0 {
        return AlphaThresholds {
            z1: 0.0,
            z2: 0.0,
            r2: 0.0,
        };
    }
    let t = r_min.exp2();
    let z = |j: usize| {
        ratio_or_inf(
            k * params.u[j],
            params.p_m + params.v[j] * params.p_r - k * params.p_eps[j] - t * p2,
        )
    };
    AlphaThresholds {
        z1: z(0),
        z2: z(1),
        r2: ratio_or_inf(k * params.u[1], p2 - k * params.p_eps[1]),
    }
}

/// Effective interference-plus-noise offset `b_j = P_ε,j + u_j / α_j`.
pub fn offset(params: &DerivedParams, alpha: f64, user: User) -> f64 {
    let j = user.index();
    if alpha > 0.0 {
        params.p_eps[j] + params.u[j] / alpha
    } else {
        f64::INFINITY
    }
}

/// `k * b` with the convention `0 * ∞ = 0` (a zero rate floor is never binding).
pub(crate) fn scaled(k: f64, b: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * b
    }
}

/// The quantities behind the max-sum power allocation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxSumAllocation {
    pub alpha: [f64; 2],
    pub b: [f64; 2],
    /// Largest `P2` keeping `Z1 >= R_min`.
    pub p_z1: f64,
    /// Largest `P2` keeping `Z2 >= R_min`.
    pub p_z2: f64,
    /// Smallest `P2` giving `R2 >= R_min`.
    pub p_r2: f64,
    pub p_z: f64,
}

impl MaxSumAllocation {
    pub fn new(alpha: [f64; 2], params: &DerivedParams, r_min: f64) -> Self {
        let b = [
            offset(params, alpha[0], User::One),
            offset(params, alpha[1], User::Two),
        ];
        let t = r_min.exp2();
        let k = t - 1.0;
        let p_z = |j: usize| (params.p_m + params.v[j] * params.p_r - scaled(k, b[j])) / t;
        let (p_z1, p_z2) = (p_z(0), p_z(1));
        MaxSumAllocation {
            alpha,
            b,
            p_z1,
            p_z2,
            p_r2: scaled(k, b[1]),
            p_z: p_z1.min(p_z2),
        }
    }

    /// The feasible `P2` interval, or the reason it is empty.
    pub fn feasible_interval(&self, p_m: f64) -> Result<(f64, f64), OutageReason> {
        if self.p_r2 > self.p_z || self.p_z.is_nan() {
            return Err(OutageReason::RateInterval);
        }
        let lo = self.p_r2.max(0.0);
        let hi = self.p_z.min(p_m);
        if lo > hi {
            return Err(OutageReason::PowerRange);
        }
        Ok((lo, hi))
    }

    /// Optimal `P2`; `b1 == b2` goes with the non-decreasing branch.
    pub fn optimal_p2(&self, p_m: f64) -> Result<f64, OutageReason> {
        let (lo, hi) = self.feasible_interval(p_m)?;
        let p2 = if self.b[0] >= self.b[1] {
            self.p_z.min(p_m)
        } else {
            self.p_r2.max(0.0)
        };
        Ok(p2.clamp(lo, hi))
    }
}

/// Energy-limited split ratios of both users, or the user whose floor is unreachable.
pub fn energy_limited_alphas(
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> Result<[f64; 2], OutageReason> {
    let a1 = alpha_max(params, curve, config.e_min_user1_w, User::One, config.bisection_tol)
        .ok_or(OutageReason::EnergyUser1)?;
    let a2 = alpha_max(params, curve, config.e_min_user2_w, User::Two, config.bisection_tol)
        .ok_or(OutageReason::EnergyUser2)?;
    Ok([a1, a2])
}

pub(crate) fn noma_point(
    scheme: Scheme,
    problem: Problem,
    alpha: [f64; 2],
    p2: f64,
    params: &DerivedParams,
    curve: &EfficiencyCurve,
) -> Solution {
    let rates = compute_rates(alpha[0], alpha[1], p2, params);
    Solution::feasible(
        scheme,
        problem,
        alpha[0],
        alpha[1],
        p2,
        rates,
        harvested_power(alpha[0], params, User::One, curve),
        harvested_power(alpha[1], params, User::Two, curve),
    )
}

pub(crate) fn solve_maxsum_as(
    scheme: Scheme,
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> Solution {
    let outage = |reason| Solution::outage(scheme, Problem::MaxSum, reason);
    let alpha = match energy_limited_alphas(params, config, curve) {
        Ok(a) => a,
        Err(reason) => return outage(reason),
    };
    let alloc = MaxSumAllocation::new(alpha, params, config.r_min_bpshz);
    match alloc.optimal_p2(params.p_m) {
        Ok(p2) => noma_point(scheme, Problem::MaxSum, alpha, p2, params, curve),
        Err(reason) => outage(reason),
    }
}

/// Sum-rate optimal split ratios and power allocation for DAS-assisted NOMA.
pub fn solve_maxsum(
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> Solution {
    solve_maxsum_as(Scheme::DasNoma, params, config, curve)
}
