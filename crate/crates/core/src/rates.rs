//! Achievable rates and harvested power of the power-splitting receivers for
//! a candidate `(α1, α2, P2)`.

use serde::{Deserialize, Serialize};

use crate::channel::{DerivedParams, User};
use crate::efficiency::EfficiencyCurve;

/// Rates in bps/Hz. `z1`/`z2` are the rates of user 1's signal decoded at
/// user 1 and at user 2 (SIC stage).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateTuple {
    pub z1: f64,
    pub z2: f64,
    pub r1: f64,
    pub r2: f64,
}

impl RateTuple {
    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }

    pub fn min(&self) -> f64 {
        self.r1.min(self.r2)
    }
}

fn log_rate(alpha: f64, signal: f64, interference: f64, noise: f64) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    (1.0 + alpha * signal / (alpha * interference + noise)).log2()
}

/// Rate of user 1's signal decoded at `user`, with the controller giving `p2` to user 2.
pub fn user1_signal_rate(alpha: f64, p2: f64, params: &DerivedParams, user: User) -> f64 {
    let j = user.index();
    let p1 = params.p_m - p2;
    log_rate(
        alpha,
        p1 + params.v[j] * params.p_r,
        p2 + params.p_eps[j],
        params.u[j],
    )
}

/// Rate of user 2's own signal after SIC.
pub fn user2_rate(alpha2: f64, p2: f64, params: &DerivedParams) -> f64 {
    log_rate(alpha2, p2, params.p_eps[1], params.u[1])
}

pub fn compute_rates(alpha1: f64, alpha2: f64, p2: f64, params: &DerivedParams) -> RateTuple {
    let z1 = user1_signal_rate(alpha1, p2, params, User::One);
    let z2 = user1_signal_rate(alpha2, p2, params, User::Two);
    RateTuple {
        z1,
        z2,
        r1: z1.min(z2),
        r2: user2_rate(alpha2, p2, params),
    }
}

/// Received in-region power available to the rectifier before splitting:
/// signal plus estimation-error power. Interference and noise are not harvested.
pub fn received_signal_power(params: &DerivedParams, user: User) -> f64 {
    let j = user.index();
    params.h0_sq[j] * (params.p_m + params.p_eps[j]) + params.hq_sq[j] * params.p_r
}

pub fn rectifier_input_power(alpha: f64, params: &DerivedParams, user: User) -> f64 {
    (1.0 - alpha) * received_signal_power(params, user)
}

/// `E = η(P_RF) · P_RF`.
pub fn harvested_power(
    alpha: f64,
    params: &DerivedParams,
    user: User,
    curve: &EfficiencyCurve,
) -> f64 {
    let p_rf = rectifier_input_power(alpha, params, user);
    curve.eval(p_rf) * p_rf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PowerBudget;
    use approx::assert_relative_eq;

    fn params(u: [f64; 2], v: [f64; 2], p_eps: [f64; 2], p_m: f64, p_r: f64) -> DerivedParams {
        DerivedParams::effective(u, v, p_eps, PowerBudget { p_m, p_r })
    }

    #[test]
    fn zero_split_gives_zero_rates() {
        let p = params([1.0, 1.0], [0.5, 0.5], [0.1, 0.1], 10.0, 1.0);
        assert_eq!(compute_rates(0.0, 0.0, 3.0, &p), RateTuple::default());
    }

    #[test]
    fn z1_hand_value() {
        let p = params([1.0, 1.0], [2.0, 0.0], [0.5, 0.0], 10.0, 1.0);
        let z1 = compute_rates(0.5, 1.0, 2.0, &p).z1;
        // log2(1 + 0.5*(8+2)/(0.5*2.5+1))
        assert_relative_eq!(z1, (1.0f64 + 5.0 / 2.25).log2(), epsilon = 1e-15);
        assert_relative_eq!(z1, 1.688056, epsilon = 1e-6);
    }

    #[test]
    fn r2_hand_value() {
        let p = params([1.0, 1.0], [0.0, 0.0], [0.0, 0.0], 10.0, 0.0);
        let r = compute_rates(1.0, 1.0, 4.5, &p);
        assert_relative_eq!(r.r2, 5.5f64.log2(), epsilon = 1e-15);
        assert_relative_eq!(r.r1, r.z1.min(r.z2));
    }

    #[test]
    fn rectifier_input_examples() {
        let mut p = params([1.0, 1.0], [0.0, 0.0], [0.0, 0.0], 10.0, 0.0);
        p.h0_sq = [2.0, 2.0];
        p.hq_sq = [0.0, 0.0];
        assert_eq!(rectifier_input_power(1.0, &p, User::One), 0.0);
        assert_relative_eq!(rectifier_input_power(0.0, &p, User::One), 20.0);
        assert_relative_eq!(rectifier_input_power(0.75, &p, User::Two), 5.0);
    }

    #[test]
    fn harvested_examples() {
        let mut p = params([1.0, 1.0], [0.0, 0.0], [0.0, 0.0], 10.0, 0.0);
        p.hq_sq = [0.0, 0.0];
        let half = EfficiencyCurve::constant(0.5).unwrap();
        assert_eq!(harvested_power(1.0, &p, User::One, &half), 0.0);
        assert_relative_eq!(harvested_power(0.0, &p, User::One, &half), 5.0);
        let two_knot = EfficiencyCurve::new(vec![(0.0, 0.2), (10.0, 0.6)]).unwrap();
        p.p_m = 5.0;
        assert_relative_eq!(harvested_power(0.0, &p, User::One, &two_knot), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn harvest_non_increasing_on_dense_grid() {
        let curve = EfficiencyCurve::default_rectifier();
        for &scale in &[1e-7, 1e-5, 1e-3, 1e-2, 0.3, 5.0] {
            let mut p = params([1.0, 1.0], [0.3, 0.0], [0.01, 0.01], scale, scale / 10.0);
            p.h0_sq = [1.0, 3.0];
            for user in User::BOTH {
                let mut prev = f64::INFINITY;
                for k in 0..=10_000 {
                    let e = harvested_power(k as f64 / 10_000.0, &p, user, &curve);
                    assert!(e <= prev, "scale {scale} alpha {k}");
                    prev = e;
                }
            }
        }
    }
}
