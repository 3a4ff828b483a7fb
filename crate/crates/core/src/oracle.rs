//! Brute-force search over `(α1, α2, P2)`.
//!
//! Verifies the closed forms and optimizes the OMA baseline, which has none.
//! The search is exact over the Cartesian grid but avoids the `G³` loop: user
//! 1's split only enters the objective through `A = Z1` (NOMA) or `A = R1`
//! (OMA), and the objective is non-decreasing in `A` and saturates at a
//! threshold fixed by `(α2, P2)`. For every `(α2, P2)` pair the best `α1` is
//! therefore found with a prefix maximum and a binary search.
//!
//! Ties go to the lexicographically smallest grid index `(α1, α2, P2)`, so
//! results never depend on evaluation order.

use serde::{Deserialize, Serialize};

use crate::baselines::{oma_user1_rate, oma_user2_rate};
use crate::channel::{DerivedParams, User};
use crate::config::SystemConfig;
use crate::efficiency::EfficiencyCurve;
use crate::rates::{harvested_power, user1_signal_rate, user2_rate, RateTuple};
use crate::solution::{OutageReason, Problem, Scheme, Solution};

/// Slack on rate constraints, bps/Hz.
pub const RATE_SLACK: f64 = 1e-9;

/// Number of refinement rounds; each shrinks the search span by [`REFINE_SHRINK`].
pub const REFINE_ROUNDS: u32 = 5;
pub const REFINE_SHRINK: f64 = 10.0;
/// Candidate points on each side of the current coordinate per scan.
pub const REFINE_POINTS_PER_SIDE: i32 = 100;
const REFINE_MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateModel {
    /// Superposition with SIC at user 2.
    Noma,
    /// Half band per user, no SIC.
    Oma,
}

impl RateModel {
    pub fn for_scheme(scheme: Scheme) -> Self {
        match scheme {
            Scheme::DasNoma | Scheme::NomaOnly => RateModel::Noma,
            Scheme::DasOma => RateModel::Oma,
        }
    }
}

/// Objective and constraint evaluation for one instance.
pub struct Evaluator<'a> {
    pub params: &'a DerivedParams,
    pub config: &'a SystemConfig,
    pub curve: &'a EfficiencyCurve,
    pub problem: Problem,
    pub model: RateModel,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        problem: Problem,
        scheme: Scheme,
        params: &'a DerivedParams,
        config: &'a SystemConfig,
        curve: &'a EfficiencyCurve,
    ) -> Self {
        Evaluator {
            params,
            config,
            curve,
            problem,
            model: RateModel::for_scheme(scheme),
        }
    }

    /// User 1's own-decoding rate: `Z1` for NOMA, `R1` for OMA.
    fn side1(&self, alpha1: f64, p2: f64) -> f64 {
        match self.model {
            RateModel::Noma => user1_signal_rate(alpha1, p2, self.params, User::One),
            RateModel::Oma => oma_user1_rate(alpha1, self.params.p_m - p2, self.params),
        }
    }

    /// `(cap on R1 set by user 2, R2)`; the cap is `Z2` for NOMA and absent for OMA.
    fn side2(&self, alpha2: f64, p2: f64) -> (f64, f64) {
        match self.model {
            RateModel::Noma => (
                user1_signal_rate(alpha2, p2, self.params, User::Two),
                user2_rate(alpha2, p2, self.params),
            ),
            RateModel::Oma => (f64::INFINITY, oma_user2_rate(alpha2, p2, self.params)),
        }
    }

    fn side1_ok(&self, a: f64) -> bool {
        match self.problem {
            Problem::MaxSum => a >= self.config.r_min_bpshz - RATE_SLACK,
            Problem::MaxMin => true,
        }
    }

    fn side2_ok(&self, cap: f64, r2: f64) -> bool {
        let r_min = self.config.r_min_bpshz - RATE_SLACK;
        match (self.problem, self.model) {
            (Problem::MaxSum, RateModel::Noma) => cap >= r_min && r2 >= r_min,
            (Problem::MaxSum, RateModel::Oma) => r2 >= r_min,
            (Problem::MaxMin, RateModel::Noma) => cap >= self.config.r_sic_bpshz - RATE_SLACK,
            (Problem::MaxMin, RateModel::Oma) => true,
        }
    }

    fn energy(&self, alpha: f64, user: User) -> f64 {
        harvested_power(alpha, self.params, user, self.curve)
    }

    fn energy_ok(&self, alpha: f64, user: User) -> bool {
        let floor = match user {
            User::One => self.config.e_min_user1_w,
            User::Two => self.config.e_min_user2_w,
        };
        self.energy(alpha, user) >= floor - self.config.bisection_tol
    }

    fn objective(&self, a: f64, cap: f64, r2: f64) -> f64 {
        let r1 = a.min(cap);
        match self.problem {
            Problem::MaxSum => r1 + r2,
            Problem::MaxMin => r1.min(r2),
        }
    }

    /// Value of `A` beyond which the objective stops growing.
    fn saturation(&self, cap: f64, r2: f64) -> f64 {
        match self.problem {
            Problem::MaxSum => cap,
            Problem::MaxMin => cap.min(r2),
        }
    }

    pub fn rates(&self, alpha1: f64, alpha2: f64, p2: f64) -> RateTuple {
        let a = self.side1(alpha1, p2);
        let (cap, r2) = self.side2(alpha2, p2);
        let r1 = a.min(cap);
        match self.model {
            RateModel::Noma => RateTuple { z1: a, z2: cap, r1, r2 },
            // no SIC stage: z2 mirrors r1
            RateModel::Oma => RateTuple { z1: a, z2: a, r1, r2 },
        }
    }

    /// Objective at a point, or `None` if it violates a constraint.
    pub fn evaluate(&self, alpha1: f64, alpha2: f64, p2: f64) -> Option<f64> {
        let in_box = (0.0..=1.0).contains(&alpha1)
            && (0.0..=1.0).contains(&alpha2)
            && (0.0..=self.params.p_m).contains(&p2);
        if !in_box || !self.energy_ok(alpha1, User::One) || !self.energy_ok(alpha2, User::Two) {
            return None;
        }
        let a = self.side1(alpha1, p2);
        let (cap, r2) = self.side2(alpha2, p2);
        (self.side1_ok(a) && self.side2_ok(cap, r2)).then(|| self.objective(a, cap, r2))
    }

    /// Sum of every rate component; breaks objective ties during refinement so
    /// that idle split ratios keep climbing toward their energy limits.
    fn secondary(&self, alpha1: f64, alpha2: f64, p2: f64) -> f64 {
        let a = self.side1(alpha1, p2);
        let (cap, r2) = self.side2(alpha2, p2);
        let cap = if cap.is_finite() { cap } else { 0.0 };
        a + cap + r2
    }

    pub fn solution(&self, scheme: Scheme, alpha1: f64, alpha2: f64, p2: f64) -> Solution {
        Solution::feasible(
            scheme,
            self.problem,
            alpha1,
            alpha2,
            p2,
            self.rates(alpha1, alpha2, p2),
            self.energy(alpha1, User::One),
            self.energy(alpha2, User::Two),
        )
    }
}

fn grid(points: usize, upper: f64) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { upper } else { upper * i as f64 / last })
        .collect()
}

/// Best feasible grid point, with its grid indices `(α1, α2, P2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBest {
    pub objective: f64,
    pub index: (usize, usize, usize),
    pub point: (f64, f64, f64),
}

/// Exhaustive search over the configured grid; `None` when no grid point is feasible.
pub fn grid_best(eval: &Evaluator) -> Option<GridBest> {
    let alphas = grid(eval.config.grid_points_alpha, 1.0);
    let p2s = grid(eval.config.grid_points_p2, eval.params.p_m);
    let e1_ok: Vec<bool> = alphas.iter().map(|&a| eval.energy_ok(a, User::One)).collect();
    let e2_ok: Vec<bool> = alphas.iter().map(|&a| eval.energy_ok(a, User::Two)).collect();
    if !e1_ok.iter().any(|&b| b) || !e2_ok.iter().any(|&b| b) {
        return None;
    }

    let mut best: Option<GridBest> = None;
    let mut side1 = vec![f64::NEG_INFINITY; alphas.len()];
    let mut prefix_max = vec![f64::NEG_INFINITY; alphas.len()];
    for (k, &p2) in p2s.iter().enumerate() {
        let mut running = f64::NEG_INFINITY;
        for (i, &a1) in alphas.iter().enumerate() {
            let a = if e1_ok[i] { eval.side1(a1, p2) } else { f64::NEG_INFINITY };
            side1[i] = if eval.side1_ok(a) { a } else { f64::NEG_INFINITY };
            running = running.max(side1[i]);
            prefix_max[i] = running;
        }
        if running == f64::NEG_INFINITY {
            continue;
        }
        for (i2, &a2) in alphas.iter().enumerate() {
            if !e2_ok[i2] {
                continue;
            }
            let (cap, r2) = eval.side2(a2, p2);
            if !eval.side2_ok(cap, r2) {
                continue;
            }
            let target = eval.saturation(cap, r2).min(running);
            let i1 = prefix_max.partition_point(|&m| m < target);
            let objective = eval.objective(side1[i1], cap, r2);
            let index = (i1, i2, k);
            let better = match &best {
                None => true,
                Some(b) => objective > b.objective || (objective == b.objective && index < b.index),
            };
            if better {
                best = Some(GridBest {
                    objective,
                    index,
                    point: (alphas[i1], a2, p2),
                });
            }
        }
    }
    best
}

/// Grid search for `problem` under `scheme`'s rate model.
pub fn grid_search(
    problem: Problem,
    scheme: Scheme,
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> Solution {
    let eval = Evaluator::new(problem, scheme, params, config, curve);
    match grid_best(&eval) {
        Some(GridBest {
            point: (a1, a2, p2),
            ..
        }) => eval.solution(scheme, a1, a2, p2),
        None => Solution::outage(scheme, problem, OutageReason::NoFeasiblePoint),
    }
}

/// Local coordinate search around a feasible seed on successively finer
/// grids. Never lowers the objective; an infeasible or outage seed is
/// returned unchanged.
pub fn refine(
    seed: &Solution,
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
    problem: Problem,
) -> Solution {
    if seed.outage {
        return seed.clone();
    }
    let eval = Evaluator::new(problem, seed.scheme, params, config, curve);
    let mut x = [seed.alpha1, seed.alpha2, seed.p2];
    let Some(mut f) = eval.evaluate(x[0], x[1], x[2]) else {
        return seed.clone();
    };
    let mut g = eval.secondary(x[0], x[1], x[2]);
    let upper = [1.0, 1.0, params.p_m];
    let base = [
        1.0 / (config.grid_points_alpha - 1) as f64,
        1.0 / (config.grid_points_alpha - 1) as f64,
        params.p_m / (config.grid_points_p2 - 1) as f64,
    ];

    for round in 0..REFINE_ROUNDS {
        let span_scale = REFINE_SHRINK.powi(round as i32);
        for _ in 0..REFINE_MAX_SWEEPS {
            let mut moved = false;
            for c in 0..3 {
                let step = base[c] / span_scale / REFINE_POINTS_PER_SIDE as f64;
                let origin = x[c];
                let mut best: Option<(f64, f64, f64)> = None;
                for i in -REFINE_POINTS_PER_SIDE..=REFINE_POINTS_PER_SIDE {
                    if i == 0 {
                        continue;
                    }
                    let v = (origin + i as f64 * step).clamp(0.0, upper[c]);
                    if v == origin {
                        continue;
                    }
                    let mut y = x;
                    y[c] = v;
                    let Some(fy) = eval.evaluate(y[0], y[1], y[2]) else {
                        continue;
                    };
                    let gy = eval.secondary(y[0], y[1], y[2]);
                    let (bf, bg) = best.map_or((f, g), |(_, bf, bg)| (bf, bg));
                    if fy > bf || (fy == bf && gy > bg) {
                        best = Some((v, fy, gy));
                    }
                }
                if let Some((v, fy, gy)) = best {
                    x[c] = v;
                    f = fy;
                    g = gy;
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }
    eval.solution(seed.scheme, x[0], x[1], x[2])
}

/// Grid search followed by [`refine`].
pub fn optimize(
    problem: Problem,
    scheme: Scheme,
    params: &DerivedParams,
    config: &SystemConfig,
    curve: &EfficiencyCurve,
) -> Solution {
    let seed = grid_search(problem, scheme, params, config, curve);
    refine(&seed, params, config, curve, problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PowerBudget;
    use crate::maxmin::solve_maxmin;
    use crate::maxsum::solve_maxsum;
    use approx::assert_relative_eq;

    /// Plain triple loop over the grid.
    fn naive_best(eval: &Evaluator) -> Option<f64> {
        let alphas = grid(eval.config.grid_points_alpha, 1.0);
        let p2s = grid(eval.config.grid_points_p2, eval.params.p_m);
        let mut best: Option<f64> = None;
        for &a1 in &alphas {
            for &a2 in &alphas {
                for &p2 in &p2s {
                    if let Some(v) = eval.evaluate(a1, a2, p2) {
                        if best.is_none_or(|b| v > b) {
                            best = Some(v);
                        }
                    }
                }
            }
        }
        best
    }

    fn fixture_config() -> SystemConfig {
        SystemConfig {
            e_min_user1_w: 0.0,
            e_min_user2_w: 0.0,
            r_min_bpshz: 1.0,
            r_sic_bpshz: 0.5,
            grid_points_alpha: 201,
            grid_points_p2: 201,
            ..Default::default()
        }
    }

    fn fixture_params() -> DerivedParams {
        DerivedParams::effective(
            [1.0, 1.0],
            [0.0, 0.0],
            [0.0, 0.0],
            PowerBudget { p_m: 10.0, p_r: 0.0 },
        )
    }

    // grid spacing 1/200 at G = 201
    const EPS_GRID: f64 = 0.02;

    #[test]
    fn grid_matches_hand_fixtures() {
        let (p, cfg, curve) = (fixture_params(), fixture_config(), EfficiencyCurve::default());
        let s = grid_search(Problem::MaxSum, Scheme::DasNoma, &p, &cfg, &curve);
        assert!(!s.outage);
        assert!((s.objective - 3.4594).abs() <= EPS_GRID, "{}", s.objective);
        let s = grid_search(Problem::MaxMin, Scheme::DasNoma, &p, &cfg, &curve);
        assert!((s.objective - 1.7297).abs() <= EPS_GRID, "{}", s.objective);
    }

    #[test]
    fn grid_outage_on_unreachable_energy() {
        let (p, curve) = (fixture_params(), EfficiencyCurve::default());
        let cfg = SystemConfig {
            e_min_user2_w: 1e3,
            ..fixture_config()
        };
        for problem in Problem::ALL {
            let s = grid_search(problem, Scheme::DasNoma, &p, &cfg, &curve);
            assert!(s.outage);
            assert_eq!(s.outage_reason, Some(OutageReason::NoFeasiblePoint));
        }
    }

    #[test]
    fn reduced_search_equals_triple_loop() {
        let curve = EfficiencyCurve::default_rectifier();
        let cfg = SystemConfig {
            grid_points_alpha: 21,
            grid_points_p2: 17,
            e_min_user1_w: 1e-3,
            e_min_user2_w: 2e-3,
            ..fixture_config()
        };
        let instances = [
            DerivedParams::effective([0.4, 0.05], [1.2, 0.1], [0.01, 0.001], PowerBudget { p_m: 3.0, p_r: 0.3 }),
            DerivedParams::effective([2.0, 0.3], [0.5, 0.0], [0.1, 0.0], PowerBudget { p_m: 8.0, p_r: 0.5 }),
            DerivedParams::effective([0.1, 0.1], [0.0, 0.0], [0.0, 0.0], PowerBudget { p_m: 1.0, p_r: 0.0 }),
        ];
        for p in &instances {
            for problem in Problem::ALL {
                for scheme in [Scheme::DasNoma, Scheme::DasOma] {
                    let eval = Evaluator::new(problem, scheme, p, &cfg, &curve);
                    let fast = grid_best(&eval).map(|b| b.objective);
                    assert_eq!(fast, naive_best(&eval), "{problem} {scheme}");
                }
            }
        }
    }

    #[test]
    fn refine_never_worse_and_matches_closed_form() {
        let (p, cfg, curve) = (fixture_params(), fixture_config(), EfficiencyCurve::default());
        let seed = grid_search(Problem::MaxSum, Scheme::DasNoma, &p, &cfg, &curve);
        let r = refine(&seed, &p, &cfg, &curve, Problem::MaxSum);
        assert!(r.objective >= seed.objective);
        assert_relative_eq!(r.objective, solve_maxsum(&p, &cfg, &curve).objective, epsilon = 1e-4);

        let seed = grid_search(Problem::MaxMin, Scheme::DasNoma, &p, &cfg, &curve);
        let r = refine(&seed, &p, &cfg, &curve, Problem::MaxMin);
        assert!(r.objective >= seed.objective);
        assert_relative_eq!(r.objective, solve_maxmin(&p, &cfg, &curve).objective, epsilon = 1e-4);
    }

    #[test]
    fn refine_at_closed_form_is_stationary() {
        let (p, cfg, curve) = (fixture_params(), fixture_config(), EfficiencyCurve::default());
        for (problem, cf) in [
            (Problem::MaxSum, solve_maxsum(&p, &cfg, &curve)),
            (Problem::MaxMin, solve_maxmin(&p, &cfg, &curve)),
        ] {
            let r = refine(&cf, &p, &cfg, &curve, problem);
            assert!(r.objective >= cf.objective);
            assert!(r.objective - cf.objective <= 1e-6);
        }
    }

    #[test]
    fn refine_keeps_boundary_seed_feasible() {
        // seed exactly on the Z1 = R_min boundary
        let (p, cfg, curve) = (fixture_params(), fixture_config(), EfficiencyCurve::default());
        let eval = Evaluator::new(Problem::MaxSum, Scheme::DasNoma, &p, &cfg, &curve);
        let seed = eval.solution(Scheme::DasNoma, 1.0, 1.0, 4.5);
        let r = refine(&seed, &p, &cfg, &curve, Problem::MaxSum);
        assert!(eval.evaluate(r.alpha1, r.alpha2, r.p2).is_some());
        assert!(r.rates.min() >= cfg.r_min_bpshz - RATE_SLACK);
    }
}
