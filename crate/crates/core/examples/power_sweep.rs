//! Monte Carlo sweep over the total power budget, all three schemes, both
//! problems. Prints one table per problem and optionally writes the CSVs.
//!
//! cargo run --release --example power_sweep -- [trials] [experiment.toml] [output-dir]

use std::path::PathBuf;

use swipt_das::io::{write_outputs, Experiment};
use swipt_das::montecarlo::{run_trials, RunOptions};
use swipt_das::{Problem, Scheme};

fn main() -> swipt_das::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);
    let mut experiment = match args.next() {
        Some(path) => Experiment::load(path.as_ref())?,
        None => Experiment::defaults(),
    };
    let out: Option<PathBuf> = args.next().map(PathBuf::from);

    experiment.file.sweep.num_trials = trials;
    let points = run_trials(
        &experiment.config,
        &experiment.curve,
        trials,
        &experiment.sweep_w(),
        &RunOptions::default(),
    )?;

    for problem in Problem::ALL {
        println!("{problem}, {trials} trials per point");
        println!(
            "{:>6}  {:>10} {:>10} {:>10}   {:>7} {:>7}   {:>6}",
            "P dBm", "das-noma", "noma-only", "das-oma", "alpha1", "alpha2", "outage"
        );
        for (point, dbm) in points.iter().zip(&experiment.sweep_dbm) {
            let mean = |s| point.stats_for(s, problem).map_or(f64::NAN, |st| st.mean_objective);
            let das = point.stats_for(Scheme::DasNoma, problem).expect("scheme was run");
            println!(
                "{dbm:>6.1}  {:>10.4} {:>10.4} {:>10.4}   {:>7.4} {:>7.4}   {:>6.3}",
                mean(Scheme::DasNoma),
                mean(Scheme::NomaOnly),
                mean(Scheme::DasOma),
                das.mean_alpha1,
                das.mean_alpha2,
                das.outage_prob,
            );
        }
        println!();
    }

    if let Some(dir) = out {
        for path in write_outputs(&dir, &experiment, &points)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
