//! Max-sum closed form on a hand-built instance, step by step: the energy
//! limited split ratios, the feasible P2 interval and the optimum, checked
//! against the brute-force oracle.
//!
//! cargo run --release --example closed_form_maxsum

use swipt_das::config::PowerBudget;
use swipt_das::maxsum::{alpha_max, MaxSumAllocation};
use swipt_das::oracle::optimize;
use swipt_das::rates::harvested_power;
use swipt_das::{solve_maxsum, DerivedParams, EfficiencyCurve, Problem, Scheme, SystemConfig, User};

fn main() {
    let params = DerivedParams::effective(
        [0.5, 0.05],
        [2.0, 0.3],
        [0.01, 0.002],
        PowerBudget { p_m: 10.0, p_r: 0.5 },
    );
    let curve = EfficiencyCurve::default();
    let config = SystemConfig {
        e_min_user1_w: 0.5,
        e_min_user2_w: 0.5,
        r_min_bpshz: 0.5,
        ..Default::default()
    };

    let floors = [config.e_min_user1_w, config.e_min_user2_w];
    let mut alpha = [0.0; 2];
    for user in User::BOTH {
        let j = user.index();
        let e0 = harvested_power(0.0, &params, user, &curve);
        let a = alpha_max(&params, &curve, floors[j], user, config.bisection_tol)
            .expect("floor is reachable");
        alpha[j] = a;
        println!("user {}: E(0) = {e0:.4} W, floor {} W, alpha_max = {a:.6}", j + 1, floors[j]);
    }

    let alloc = MaxSumAllocation::new(alpha, &params, config.r_min_bpshz);
    match alloc.feasible_interval(params.p_m) {
        Ok((lo, hi)) => println!("feasible P2 interval [{lo:.6}, {hi:.6}] W of P_m = {}", params.p_m),
        Err(reason) => println!("no feasible P2: {reason:?}"),
    }

    let closed = solve_maxsum(&params, &config, &curve);
    let oracle = optimize(Problem::MaxSum, Scheme::DasNoma, &params, &config, &curve);
    for (name, s) in [("closed form", &closed), ("oracle", &oracle)] {
        println!(
            "{name:>11}: alpha = ({:.6}, {:.6}), P2 = {:.6} W, R1 = {:.6}, R2 = {:.6}, sum = {:.6} bps/Hz",
            s.alpha1, s.alpha2, s.p2, s.rates.r1, s.rates.r2, s.objective
        );
    }
    println!("gap {:.2e} bps/Hz", closed.objective - oracle.objective);
}
