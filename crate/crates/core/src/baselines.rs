//! Comparison schemes: NOMA without the RRUs, and OMA with RRU cooperation.
//!
//! OMA gives each user half the band. User 1's half carries the controller
//! signal at `P1` and the RRU signal at `P_r`; user 2's half carries `P2`.
//! Noise and out-of-region interference split evenly over the halves, the
//! estimation-error terms only count the transmitters active in a half, and
//! each rate carries a 1/2 pre-log. The rectifier sees both halves, so the
//! harvested power is the same as for NOMA.

use crate::channel::DerivedParams;
use crate::config::SystemConfig;
use crate::efficiency::EfficiencyCurve;
use crate::maxmin::solve_maxmin_as;
use crate::maxsum::solve_maxsum_as;
use crate::oracle;
use crate::solution::{Problem, Scheme, Solution};

fn share(part: f64, whole: f64) -> f64 {
    if whole > 0.0 {
        part / whole
    } else {
        0.0
    }
}

/// Half-band rate of user 1 when the controller spends `p1` on it.
pub fn oma_user1_rate(alpha1: f64, p1: f64, params: &DerivedParams) -> f64 {
    if alpha1 == 0.0 {
        return 0.0;
    }
    let (l0, lq) = (params.l0[0], params.lq[0]);
    let p_eps = params.p_eps[0]
        * share(l0 * p1 + lq * params.p_r, l0 * params.p_m + lq * params.p_r);
    let signal = p1 + params.v[0] * params.p_r;
    0.5 * (1.0 + alpha1 * signal / (alpha1 * p_eps + 0.5 * params.u[0])).log2()
}

/// Half-band rate of user 2 with controller power `p2`.
pub fn oma_user2_rate(alpha2: f64, p2: f64, params: &DerivedParams) -> f64 {
    if alpha2 == 0.0 {
        return 0.0;
    }
    let (l0, lq) = (params.l0[1], params.lq[1]);
    let p_eps = params.p_eps[1] * share(l0 * p2, l0 * params.p_m + lq * params.p_r);
    0.5 * (1.0 + alpha2 * p2 / (alpha2 * p_eps + 0.5 * params.u[1])).log2()
}

/// NOMA from the controller alone. `params` must be derived with the whole
/// budget on the controller (`P_r = 0`); the closed forms then apply unchanged.
pub fn solve_noma_only(
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
    problem: Problem,
) -> Solution {
    debug_assert_eq!(params.p_r, 0.0, "no-DAS parameters need P_r = 0");
    match problem {
        Problem::MaxSum => solve_maxsum_as(Scheme::NomaOnly, params, config, curve),
        Problem::MaxMin => solve_maxmin_as(Scheme::NomaOnly, params, config, curve),
    }
}

/// OMA in the DAS cell, optimized by grid search plus refinement.
pub fn solve_oma_das(
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
    problem: Problem,
) -> Solution {
    oracle::optimize(problem, Scheme::DasOma, params, config, curve)
}

/// Solves `problem` for `scheme`, given parameters derived under that
/// scheme's power budget.
pub fn solve(
    scheme: Scheme,
    problem: Problem,
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> Solution {
    match scheme {
        Scheme::DasNoma => match problem {
            Problem::MaxSum => solve_maxsum_as(scheme, params, config, curve),
            Problem::MaxMin => solve_maxmin_as(scheme, params, config, curve),
        },
        Scheme::NomaOnly => solve_noma_only(params, config, curve, problem),
        Scheme::DasOma => solve_oma_das(params, config, curve, problem),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PowerBudget;
    use crate::maxsum::MaxSumAllocation;
    use approx::assert_relative_eq;

    fn params() -> DerivedParams {
        let mut p = DerivedParams::effective(
            [0.8, 0.2],
            [1.5, 0.1],
            [0.02, 0.01],
            PowerBudget { p_m: 10.0, p_r: 1.0 },
        );
        p.l0 = [1e-3, 2e-2];
        p.lq = [5e-3, 1e-4];
        p
    }

    #[test]
    fn user1_rate_ignores_user2_power() {
        use crate::channel::{derive_params, ChannelRealization, Gain};
        let g = Gain { re: 0.9, im: 0.3 };
        let ch = ChannelRealization {
            path_loss: vec![[1e-3, 2e-2], [5e-3, 1e-4]],
            estimated_gain: vec![[g; 2], [g; 2]],
            csi_error_var: 0.01,
            interferers: vec![],
            roles_swapped: false,
        };
        let cfg = SystemConfig::default();
        let p1 = 3.0;
        // same P1, growing P2 = P_m - P1
        let rates: Vec<f64> = [0.0, 1.0, 4.0]
            .iter()
            .map(|&p2| {
                let p = derive_params(&ch, &cfg, PowerBudget { p_m: p1 + p2, p_r: 0.4 }).unwrap();
                oma_user1_rate(0.7, p1, &p)
            })
            .collect();
        for r in &rates {
            assert_relative_eq!(*r, rates[0], max_relative = 1e-12);
        }
        assert!(rates[0] > 0.0);
    }

    #[test]
    fn zero_power_to_user2() {
        let p = params();
        assert_eq!(oma_user2_rate(0.9, 0.0, &p), 0.0);
        assert!(oma_user1_rate(0.9, p.p_m, &p) > oma_user1_rate(0.9, 5.0, &p));
    }

    #[test]
    fn halved_noise_bookkeeping() {
        // perfect CSI, unit split: SINR doubles relative to full-band noise
        let mut p = params();
        p.p_eps = [0.0, 0.0];
        let (p1, p2) = (6.0, 4.0);
        let full_band_sinr = (p1 + p.v[0] * p.p_r) / p.u[0];
        assert_relative_eq!(
            oma_user1_rate(1.0, p1, &p),
            0.5 * (1.0 + 2.0 * full_band_sinr).log2(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            oma_user2_rate(1.0, p2, &p),
            0.5 * (1.0 + 2.0 * p2 / p.u[1]).log2(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn noma_only_reduces_p_z1() {
        let p = DerivedParams::effective(
            [1.0, 0.5],
            [3.0, 1.0],
            [0.1, 0.05],
            PowerBudget { p_m: 10.0, p_r: 0.0 },
        );
        let alloc = MaxSumAllocation::new([0.8, 0.9], &p, 1.0);
        let b1 = 0.1 + 1.0 / 0.8;
        assert_relative_eq!(alloc.p_z1, (10.0 - b1) / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn noma_only_is_the_closed_form_path() {
        let p = DerivedParams::effective(
            [1.0, 0.5],
            [0.0, 0.0],
            [0.1, 0.05],
            PowerBudget { p_m: 10.0, p_r: 0.0 },
        );
        let cfg = SystemConfig {
            e_min_user1_w: 0.0,
            e_min_user2_w: 0.0,
            ..Default::default()
        };
        let curve = EfficiencyCurve::default();
        for problem in Problem::ALL {
            let a = solve_noma_only(&p, &cfg, &curve, problem);
            let b = solve(Scheme::DasNoma, problem, &p, &cfg, &curve);
            assert_eq!(a.scheme, Scheme::NomaOnly);
            assert_eq!(a.objective.to_bits(), b.objective.to_bits());
            assert_eq!(a.p2.to_bits(), b.p2.to_bits());
        }
    }

    #[test]
    fn unreachable_energy_is_outage_for_all_schemes() {
        let p = params();
        let cfg = SystemConfig {
            e_min_user1_w: 1e6,
            ..Default::default()
        };
        let curve = EfficiencyCurve::default();
        for problem in Problem::ALL {
            assert!(solve_oma_das(&p, &cfg, &curve, problem).outage);
            let mut q = p.clone();
            q.p_r = 0.0;
            assert!(solve_noma_only(&q, &cfg, &curve, problem).outage);
        }
    }
}
