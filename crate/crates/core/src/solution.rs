use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rates::RateTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// NOMA from the controller with RRU cooperation for the weak user.
    DasNoma,
    /// NOMA from the controller alone, whole budget on the controller.
    NomaOnly,
    /// Half-band FDMA per user, RRU cooperation for the weak user.
    DasOma,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::DasNoma, Scheme::NomaOnly, Scheme::DasOma];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::DasNoma => "das-noma",
            Scheme::NomaOnly => "noma-only",
            Scheme::DasOma => "das-oma",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// Maximize `R1 + R2` subject to `min(R1, R2) >= R_min` and the energy floors.
    MaxSum,
    /// Maximize `min(R1, R2)` subject to `Z2 >= R_sic` and the energy floors.
    MaxMin,
}

impl Problem {
    pub const ALL: [Problem; 2] = [Problem::MaxSum, Problem::MaxMin];

    pub fn tag(self) -> &'static str {
        match self {
            Problem::MaxSum => "max-sum",
            Problem::MaxMin => "max-min",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Why no feasible operating point exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutageReason {
    /// `E_1(0) < Ē_1`: even harvesting everything misses the floor.
    EnergyUser1,
    EnergyUser2,
    /// `P_R2 > P_Z`: the rate floors cannot hold at the same `P2`.
    RateInterval,
    /// `[P_R2, P_Z]` misses `[0, P_m]`.
    PowerRange,
    /// `P_sic <= 0`: SIC reliability cannot be met.
    SicThreshold,
    /// Brute-force search found no feasible grid point.
    NoFeasiblePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub scheme: Scheme,
    pub problem: Problem,
    pub outage: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outage_reason: Option<OutageReason>,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Controller power for user 2; user 1 gets `P_m - p2`.
    pub p2: f64,
    pub rates: RateTuple,
    pub e1: f64,
    pub e2: f64,
    pub objective: f64,
}

impl Solution {
    pub fn outage(scheme: Scheme, problem: Problem, reason: OutageReason) -> Self {
        Solution {
            scheme,
            problem,
            outage: true,
            outage_reason: Some(reason),
            alpha1: 0.0,
            alpha2: 0.0,
            p2: 0.0,
            rates: RateTuple::default(),
            e1: 0.0,
            e2: 0.0,
            objective: 0.0,
        }
    }

    /// Objective value of `rates` under `problem`.
    pub fn objective_of(problem: Problem, rates: &RateTuple) -> f64 {
        match problem {
            Problem::MaxSum => rates.sum(),
            Problem::MaxMin => rates.min(),
        }
    }
}

impl Solution {
    /// A non-outage operating point; the objective is computed from `rates`.
    #[allow(clippy::too_many_arguments)]
    pub fn feasible(
        scheme: Scheme,
        problem: Problem,
        alpha1: f64,
        alpha2: f64,
        p2: f64,
        rates: RateTuple,
        e1: f64,
        e2: f64,
    ) -> Self {
        Solution {
            scheme,
            problem,
            outage: false,
            outage_reason: None,
            alpha1,
            alpha2,
            p2,
            rates,
            e1,
            e2,
            objective: Self::objective_of(problem, &rates),
        }
    }
}
