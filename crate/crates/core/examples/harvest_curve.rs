//! The rectifier efficiency curve and the harvested power it produces as the
//! power-splitting ratio grows, for one realization.
//!
//! cargo run --release --example harvest_curve -- [curve-file]

use swipt_das::channel::derive_params;
use swipt_das::montecarlo::sample_trial;
use swipt_das::rates::harvested_power;
use swipt_das::{EfficiencyCurve, SystemConfig, User};

fn main() -> swipt_das::Result<()> {
    let curve = match std::env::args().nth(1) {
        Some(path) => EfficiencyCurve::load(path.as_ref())?,
        None => EfficiencyCurve::default(),
    };
    println!("{:>12} {:>10}", "input W", "efficiency");
    for &(p, eta) in curve.knots() {
        println!("{p:>12.3e} {eta:>10.3}");
    }

    let config = SystemConfig::default();
    let params = derive_params(&sample_trial(&config, 0)?, &config, config.das_budget())?;
    println!();
    println!("trial 0 at {} W total, floors {} W", config.total_power_w, config.e_min_user1_w);
    println!("{:>6} {:>12} {:>12}", "alpha", "E1 W", "E2 W");
    for k in 0..=10 {
        let alpha = k as f64 / 10.0;
        println!(
            "{alpha:>6.1} {:>12.4e} {:>12.4e}",
            harvested_power(alpha, &params, User::One, &curve),
            harvested_power(alpha, &params, User::Two, &curve)
        );
    }
    Ok(())
}
