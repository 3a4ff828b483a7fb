//! Closed forms against the brute-force oracle on sampled realizations.
//! Prints the agreement summary and the worst instance of each problem.
//!
//! cargo run --release --example oracle_check -- [instances] [total_power_dbm]

use swipt_das::channel::derive_params;
use swipt_das::config::dbm_to_watts;
use swipt_das::montecarlo::sample_trial;
use swipt_das::validate::{check_instance, validate};
use swipt_das::{EfficiencyCurve, Problem, SystemConfig};

fn main() -> swipt_das::Result<()> {
    let mut args = std::env::args().skip(1);
    let instances: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let dbm: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(40.0);
    let config = SystemConfig::default().with_total_power(dbm_to_watts(dbm));
    let curve = EfficiencyCurve::default();

    let report = validate(&config, &curve, instances)?;
    println!("{} realizations drawn at {dbm} dBm", report.draws);
    for problem in Problem::ALL {
        let s = report.summary(problem);
        println!(
            "{problem}: {} feasible, max gap {:.2e} bps/Hz, {} disagreements, {} near the boundary",
            s.feasible_instances,
            s.max_gap,
            s.disagreements.len(),
            s.boundary_excluded
        );
        let Some(trial) = s.worst_trial else { continue };
        let params = derive_params(&sample_trial(&config, trial)?, &config, config.das_budget())?;
        let check = &check_instance(trial, &params, &config, &curve)[problem as usize];
        for (name, sol) in [("closed form", &check.closed_form), ("oracle", &check.oracle)] {
            println!(
                "  trial {trial} {name:>11}: alpha = ({:.6}, {:.6}), P2 = {:.6}, objective {:.9}",
                sol.alpha1, sol.alpha2, sol.p2, sol.objective
            );
        }
    }
    println!("{}", if report.passed() { "agreement" } else { "MISMATCH" });
    Ok(())
}
