//! Power splitting and NOMA power allocation for SWIPT in a distributed
//! antenna cell under imperfect CSI.
//!
//! The closed-form solvers ([`maxsum`], [`maxmin`]) are checked against a
//! brute-force [`oracle`]; [`montecarlo`] runs seeded trial ensembles over
//! random placements and compares them with the [`baselines`].

pub mod baselines;
pub mod channel;
pub mod cli;
pub mod config;
pub mod efficiency;
pub mod error;
pub mod io;
pub mod maxmin;
pub mod maxsum;
pub mod montecarlo;
pub mod oracle;
pub mod rates;
pub mod solution;
pub mod validate;

pub use channel::{derive_params, sample_channels, sample_placement, DerivedParams, User};
pub use config::{PowerBudget, SystemConfig};
pub use efficiency::EfficiencyCurve;
pub use error::{Error, Result};
pub use maxmin::solve_maxmin;
pub use maxsum::solve_maxsum;
pub use rates::{compute_rates, RateTuple};
pub use solution::{OutageReason, Problem, Scheme, Solution};
