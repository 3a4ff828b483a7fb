//! Closed-form max-min fairness under the SIC-reliability and energy constraints.
//!
//! With the split ratios at their energy limits, `R1 = min(Z1, Z2)` falls and
//! `R2` rises in `P2`, so the fair point is their unique crossing
//! `P_R = min(P_Z1, P_Z2)`, capped by the SIC bound `P_sic` and by `P_m`.

use serde::{Deserialize, Serialize};

use crate::channel::{DerivedParams, User};
use crate::config::SystemConfig;
use crate::efficiency::EfficiencyCurve;
use crate::maxsum::{energy_limited_alphas, noma_point, offset, scaled};
use crate::solution::{OutageReason, Problem, Scheme, Solution};

/// Positive root of `x² + B x − C = 0`, written as `2C / (B + sqrt(B² + 4C))`
/// to avoid cancellation when `C ≪ B²`.
fn positive_root(b: f64, c: f64) -> f64 {
    let disc = b * b + 4.0 * c;
    debug_assert!(disc >= 0.0, "negative discriminant {disc}");
    if c == 0.0 {
        return 0.0;
    }
    2.0 * c / (b + disc.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxMinBranch {
    /// `P2* = P_R`: the rates are equalized.
    Crossing,
    /// `P2* = min(P_sic, P_m)`: the crossing lies beyond the cap.
    Capped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxMinAllocation {
    pub alpha: [f64; 2],
    pub b: [f64; 2],
    /// Solves `Z1(P2) = R2(P2)`.
    pub p_z1: f64,
    /// Solves `Z2(P2) = R2(P2)`.
    pub p_z2: f64,
    pub p_r: f64,
    /// Largest `P2` keeping `Z2 >= R_sic`.
    pub p_sic: f64,
}

impl MaxMinAllocation {
    pub fn new(alpha: [f64; 2], params: &DerivedParams, r_sic: f64) -> Self {
        let b = [
            offset(params, alpha[0], User::One),
            offset(params, alpha[1], User::Two),
        ];
        let reach = |j: usize| params.p_m + params.v[j] * params.p_r;
        let p_z1 = positive_root(b[0] + b[1], b[1] * reach(0));
        // x² + 2 b2 x − b2 reach2 = 0
        let p_z2 = positive_root(2.0 * b[1], b[1] * reach(1));
        let t = r_sic.exp2();
        let p_sic = (reach(1) - scaled(t - 1.0, b[1])) / t;
        MaxMinAllocation {
            alpha,
            b,
            p_z1,
            p_z2,
            p_r: p_z1.min(p_z2),
            p_sic,
        }
    }

    pub fn optimal_p2(&self, p_m: f64) -> Result<(f64, MaxMinBranch), OutageReason> {
        if self.p_sic.is_nan() || self.p_sic <= 0.0 {
            return Err(OutageReason::SicThreshold);
        }
        let cap = self.p_sic.min(p_m);
        if self.p_r <= cap {
            Ok((self.p_r, MaxMinBranch::Crossing))
        } else {
            Ok((cap, MaxMinBranch::Capped))
        }
    }
}

pub(crate) fn solve_maxmin_as(
    scheme: Scheme,
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> Solution {
    let outage = |reason| Solution::outage(scheme, Problem::MaxMin, reason);
    let alpha = match energy_limited_alphas(params, config, curve) {
        Ok(a) => a,
        Err(reason) => return outage(reason),
    };
    if alpha[1] == 0.0 {
        // user 2 decodes nothing, so min(R1, R2) = 0 everywhere
        return outage(OutageReason::EnergyUser2);
    }
    let alloc = MaxMinAllocation::new(alpha, params, config.r_sic_bpshz);
    match alloc.optimal_p2(params.p_m) {
        Ok((p2, _)) => noma_point(scheme, Problem::MaxMin, alpha, p2, params, curve),
        Err(reason) => outage(reason),
    }
}

/// Max-min fair split ratios and power allocation for DAS-assisted NOMA.
pub fn solve_maxmin(
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> Solution {
    solve_maxmin_as(Scheme::DasNoma, params, config, curve)
}
