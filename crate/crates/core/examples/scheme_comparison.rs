//! All three schemes and both problems on one channel realization.
//!
//! cargo run --release --example scheme_comparison -- [trial] [total_power_dbm]

use swipt_das::baselines::solve;
use swipt_das::channel::derive_params;
use swipt_das::config::dbm_to_watts;
use swipt_das::montecarlo::{sample_trial, scheme_budget};
use swipt_das::{EfficiencyCurve, Problem, Scheme, SystemConfig};

fn main() -> swipt_das::Result<()> {
    let mut args = std::env::args().skip(1);
    let trial: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let dbm: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(50.0);
    let config = SystemConfig::default().with_total_power(dbm_to_watts(dbm));
    let curve = EfficiencyCurve::default();
    let realization = sample_trial(&config, trial)?;

    println!("seed {} trial {trial}, P = {dbm} dBm", config.seed);
    for scheme in Scheme::ALL {
        let params = derive_params(&realization, &config, scheme_budget(scheme, &config))?;
        println!("{scheme}: P_m = {:.3} W, P_r = {:.3} W, RRU {}", params.p_m, params.p_r, params.q);
        for problem in Problem::ALL {
            let s = solve(scheme, problem, &params, &config, &curve);
            if s.outage {
                println!("  {problem:>7}: outage ({:?})", s.outage_reason.expect("outage has a reason"));
            } else {
                println!(
                    "  {problem:>7}: objective {:.4}, R = ({:.4}, {:.4}), alpha = ({:.4}, {:.4})",
                    s.objective, s.rates.r1, s.rates.r2, s.alpha1, s.alpha2
                );
            }
        }
    }
    Ok(())
}
