//! Max-min closed form on a hand-built instance: the rate crossing, the SIC
//! cap and which of the two sets the optimum, checked against the oracle.
//!
//! cargo run --release --example closed_form_maxmin -- [r_sic]

use swipt_das::config::PowerBudget;
use swipt_das::maxmin::MaxMinAllocation;
use swipt_das::oracle::optimize;
use swipt_das::{solve_maxmin, DerivedParams, EfficiencyCurve, Problem, Scheme, SystemConfig};

fn main() {
    let r_sic: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.0);
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
        r_sic_bpshz: r_sic,
        ..Default::default()
    };

    let closed = solve_maxmin(&params, &config, &curve);
    if closed.outage {
        println!("outage: {:?}", closed.outage_reason);
        return;
    }
    let alloc = MaxMinAllocation::new([closed.alpha1, closed.alpha2], &params, r_sic);
    println!("alpha = ({:.6}, {:.6})", closed.alpha1, closed.alpha2);
    println!("Z1 = R2 at P2 = {:.6} W", alloc.p_z1);
    println!("Z2 = R2 at P2 = {:.6} W", alloc.p_z2);
    println!("SIC cap P2 <= {:.6} W (R_sic = {r_sic})", alloc.p_sic);
    let (_, branch) = alloc.optimal_p2(params.p_m).expect("closed form is feasible");
    println!("branch {branch:?}");

    let oracle = optimize(Problem::MaxMin, Scheme::DasNoma, &params, &config, &curve);
    for (name, s) in [("closed form", &closed), ("oracle", &oracle)] {
        println!(
            "{name:>11}: P2 = {:.6} W, R1 = {:.6}, R2 = {:.6}, Z2 = {:.6}, min = {:.6} bps/Hz",
            s.p2, s.rates.r1, s.rates.r2, s.rates.z2, s.objective
        );
    }
}
