//! Draws placements and channels and summarizes what the solvers see:
//! controller gains, the selected RRU, interference, and how often the
//! placed users swap roles after fading.
//!
//! cargo run --release --example channel_sampling -- [trials]

use swipt_das::channel::{derive_params, sample_placement, select_rru};
use swipt_das::config::watts_to_dbm;
use swipt_das::montecarlo::{sample_trial, trial_rng};
use swipt_das::SystemConfig;

fn main() -> swipt_das::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1000);
    let config = SystemConfig::default();

    let placement = sample_placement(&config, &mut trial_rng(config.seed, 0));
    let [weak, strong] = placement.users;
    println!(
        "trial 0 placement: weak user {:.2} m and strong user {:.2} m from the controller",
        weak.norm(),
        strong.norm()
    );

    let mut swapped = 0;
    let mut rru_hits = vec![0usize; config.num_rrus + 1];
    let mut gain_db = [0.0; 2];
    let mut interference_dbm = [0.0; 2];
    for t in 0..trials {
        let r = sample_trial(&config, t)?;
        swapped += r.roles_swapped as usize;
        rru_hits[select_rru(&r)] += 1;
        let p = derive_params(&r, &config, config.das_budget())?;
        for j in 0..2 {
            gain_db[j] += 10.0 * p.h0_sq[j].log10();
            interference_dbm[j] += watts_to_dbm(p.sigma_f_sq[j]);
        }
    }
    let n = trials as f64;
    println!("{trials} trials, seed {}", config.seed);
    println!("roles swapped in {:.1}% of trials", 100.0 * swapped as f64 / n);
    for j in 0..2 {
        println!(
            "user {}: mean controller gain {:.1} dB, mean interference {:.1} dBm",
            j + 1,
            gain_db[j] / n,
            interference_dbm[j] / n
        );
    }
    println!("noise power {:.1} dBm", watts_to_dbm(config.noise_power_w()));
    for (q, hits) in rru_hits.iter().enumerate().skip(1) {
        println!("RRU {q} selected {:.1}%", 100.0 * *hits as f64 / n);
    }
    Ok(())
}
