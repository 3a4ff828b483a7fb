//! Cell geometry, fading with imperfect CSI, RRU selection and the reduction
//! of one channel draw to the effective parameters used by the solvers.
//!
//! Layout: the target controller sits at the origin with `S` RRUs equally
//! spaced on a ring. The strong user (user 2) is area-uniform in a small disk
//! around the center, the weak user (user 1) area-uniform in an annulus near
//! the edge. `L` interfering regions sit on a ring of radius
//! `interferer_distance_factor * region_radius`; each has the same RRU ring
//! and one active RRU drawn per trial.
//!
//! The true fast fading is `g = ĝ + ε` with `ε ~ CN(0, σ_ε²)` and
//! `ĝ ~ CN(0, 1 - σ_ε²)`, so `E|g|² = 1`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::{PowerBudget, SystemConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn polar(radius: f64, angle: f64) -> Self {
        Point {
            x: radius * angle.cos(),
            y: radius * angle.sin(),
        }
    }

    pub fn offset(self, other: Point) -> Self {
        Point {
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// The two NOMA users of the cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum User {
    /// Weak (cell-edge) user, assisted by RRU `q`.
    One,
    /// Strong (cell-center) user, performs SIC.
    Two,
}

impl User {
    pub const BOTH: [User; 2] = [User::One, User::Two];

    pub fn index(self) -> usize {
        match self {
            User::One => 0,
            User::Two => 1,
        }
    }
}

/// Path-loss `d^-β` of a link of length `distance`.
pub fn path_loss(distance: f64, beta: f64) -> Result<f64> {
    if distance.is_nan() || distance <= 0.0 {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok(distance.powf(-beta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub controller: Point,
    pub rrus: Vec<Point>,
    /// `[user 1 (weak), user 2 (strong)]` as placed.
    pub users: [Point; 2],
    pub interferer_controllers: Vec<Point>,
    /// The RRU `q_k` sharing the band in each interfering region.
    pub interferer_active_rrus: Vec<Point>,
}

fn rru_ring(center: Point, config: &SystemConfig) -> impl Iterator<Item = Point> + '_ {
    let s = config.num_rrus;
    (0..s).map(move |k| {
        center.offset(Point::polar(
            config.rru_ring_radius,
            2.0 * PI * k as f64 / s as f64,
        ))
    })
}

/// Draws one placement. Consumes the stream in a fixed order: strong user,
/// weak user, then one active-RRU index per interfering region.
pub fn sample_placement<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Placement {
    let radius = config.region_radius;
    let rrus: Vec<Point> = rru_ring(Point::ORIGIN, config).collect();

    // area-uniform: r = R sqrt(U)
    let strong = {
        let r_max = config.strong_user_max_norm_radius * radius;
        let u: f64 = rng.random();
        let theta = 2.0 * PI * rng.random::<f64>();
        Point::polar(r_max * u.sqrt(), theta)
    };
    let weak = {
        let lo = config.weak_user_norm_radius_lo * radius;
        let hi = config.weak_user_norm_radius_hi * radius;
        let u: f64 = rng.random();
        let theta = 2.0 * PI * rng.random::<f64>();
        Point::polar((lo * lo + u * (hi * hi - lo * lo)).sqrt(), theta)
    };

    let l = config.num_interfering_regions;
    let mut interferer_controllers = Vec::with_capacity(l);
    let mut interferer_active_rrus = Vec::with_capacity(l);
    for k in 0..l {
        let center = Point::polar(
            config.interferer_distance_factor * radius,
            2.0 * PI * k as f64 / l as f64,
        );
        let active = rng.random_range(0..config.num_rrus);
        let site = rru_ring(center, config)
            .nth(active)
            .expect("active index within ring");
        interferer_controllers.push(center);
        interferer_active_rrus.push(site);
    }

    Placement {
        controller: Point::ORIGIN,
        rrus,
        users: [weak, strong],
        interferer_controllers,
        interferer_active_rrus,
    }
}

/// Estimated fast-fading coefficient `ĝ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gain {
    pub re: f64,
    pub im: f64,
}

impl Gain {
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Path losses of the two transmitters of one interfering region that share
/// the band: its controller and its active RRU. Per user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfererLinks {
    pub controller: [f64; 2],
    pub active_rru: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    /// `path_loss[i][j]`: transmitter `i` (0 = controller, 1..=S RRUs) to user `j+1`.
    pub path_loss: Vec<[f64; 2]>,
    pub estimated_gain: Vec<[Gain; 2]>,
    pub csi_error_var: f64,
    pub interferers: Vec<InterfererLinks>,
    /// Set when the sampled fading made the placed edge user the stronger one
    /// and the user labels were exchanged.
    pub roles_swapped: bool,
}

/// Draws path losses and CSI estimates for every in-region link. Users are
/// relabeled afterwards so that `|ĥ_{0,1}|² <= |ĥ_{0,2}|²`.
pub fn sample_channels<R: Rng + ?Sized>(
    placement: &Placement,
    config: &SystemConfig,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let var = config.csi_error_var;
    if !(0.0..1.0).contains(&var) {
        return Err(Error::config(
            "csi_error_var",
            "must lie in [0, 1); at 1 the estimate carries no information",
        ));
    }
    let beta = config.path_loss_exponent;
    let dmin = config.min_distance;
    let pl = |a: Point, b: Point| path_loss(a.distance(b).max(dmin), beta);
    let per_user = |tx: Point| -> Result<[f64; 2]> {
        Ok([pl(tx, placement.users[0])?, pl(tx, placement.users[1])?])
    };

    let transmitters = std::iter::once(placement.controller).chain(placement.rrus.iter().copied());
    let path_loss = transmitters.map(per_user).collect::<Result<Vec<_>>>()?;

    // each complex component has variance (1 - σ_ε²)/2
    let scale = ((1.0 - var) / 2.0).sqrt();
    let mut draw = || Gain {
        re: scale * rng.sample::<f64, _>(StandardNormal),
        im: scale * rng.sample::<f64, _>(StandardNormal),
    };
    let estimated_gain = (0..path_loss.len())
        .map(|_| [draw(), draw()])
        .collect::<Vec<_>>();

    let interferers = placement
        .interferer_controllers
        .iter()
        .zip(&placement.interferer_active_rrus)
        .map(|(&c, &r)| {
            Ok(InterfererLinks {
                controller: per_user(c)?,
                active_rru: per_user(r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut realization = ChannelRealization {
        path_loss,
        estimated_gain,
        csi_error_var: var,
        interferers,
        roles_swapped: false,
    };
    realization.assign_roles();
    Ok(realization)
}

impl ChannelRealization {
    pub fn num_rrus(&self) -> usize {
        self.path_loss.len() - 1
    }

    /// `|ĥ_{i,j}|² = L_{i,j} |ĝ_{i,j}|²`.
    pub fn estimated_power(&self, tx: usize, user: User) -> f64 {
        let j = user.index();
        self.path_loss[tx][j] * self.estimated_gain[tx][j].norm_sqr()
    }

    /// Swaps the user labels if the controller link of user 1 is the stronger one.
    pub fn assign_roles(&mut self) {
        if self.estimated_power(0, User::One) > self.estimated_power(0, User::Two) {
            for row in &mut self.path_loss {
                row.swap(0, 1);
            }
            for row in &mut self.estimated_gain {
                row.swap(0, 1);
            }
            for links in &mut self.interferers {
                links.controller.swap(0, 1);
                links.active_rru.swap(0, 1);
            }
            self.roles_swapped = !self.roles_swapped;
        }
    }

    /// Stable fingerprint of the realization, used to check that paired
    /// schemes saw the same draw.
    pub fn fingerprint(&self) -> u64 {
        // FNV-1a over the raw bits
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |v: f64| {
            for b in v.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for (pl, g) in self.path_loss.iter().zip(&self.estimated_gain) {
            for j in 0..2 {
                eat(pl[j]);
                eat(g[j].re);
                eat(g[j].im);
            }
        }
        for links in &self.interferers {
            for j in 0..2 {
                eat(links.controller[j]);
                eat(links.active_rru[j]);
            }
        }
        eat(self.csi_error_var);
        h
    }
}

/// 1-based index of the largest entry; ties go to the lowest index.
pub fn strongest_index(powers: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &p) in powers.iter().enumerate() {
        match best {
            Some((_, b)) if p <= b => {}
            _ => best = Some((i, p)),
        }
    }
    best.map(|(i, _)| i + 1)
}

/// The cooperating RRU `q`: the one with the strongest estimated channel to user 1.
pub fn select_rru(realization: &ChannelRealization) -> usize {
    let powers: Vec<f64> = (1..=realization.num_rrus())
        .map(|p| realization.estimated_power(p, User::One))
        .collect();
    strongest_index(&powers).expect("at least one RRU")
}

/// Average power `σ_{f_j}²` received by `user` from the interfering regions.
pub fn interference_variance(links: &[InterfererLinks], budget: PowerBudget, user: User) -> f64 {
    let j = user.index();
    links
        .iter()
        .map(|l| l.controller[j] * budget.p_m + l.active_rru[j] * budget.p_r)
        .sum()
}

/// Effective per-realization quantities consumed by the rate and energy
/// expressions. Arrays are indexed `[user 1, user 2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// `|ĥ_{0,j}|²`
    pub h0_sq: [f64; 2],
    /// `|ĥ_{q,j}|²`
    pub hq_sq: [f64; 2],
    /// `(σ_{f_j}² + σ_n²) / |ĥ_{0,j}|²`, Watts.
    pub u: [f64; 2],
    /// `|ĥ_{q,j}|² / |ĥ_{0,j}|²`
    pub v: [f64; 2],
    /// `(L_{0,j} P_m + L_{q,j} P_r) σ_ε² / |ĥ_{0,j}|²`, Watts.
    pub p_eps: [f64; 2],
    pub sigma_f_sq: [f64; 2],
    pub sigma_n_sq: f64,
    /// Path losses `L_{0,j}` and `L_{q,j}`.
    pub l0: [f64; 2],
    pub lq: [f64; 2],
    pub csi_error_var: f64,
    pub p_m: f64,
    pub p_r: f64,
    /// Selected RRU, 1-based.
    pub q: usize,
}

/// Reduces a realization to the solver inputs under the given power budget.
pub fn derive_params(
    realization: &ChannelRealization,
    config: &SystemConfig,
    budget: PowerBudget,
) -> Result<DerivedParams> {
    let q = select_rru(realization);
    let sigma_n_sq = config.noise_power_w();
    let var = realization.csi_error_var;

    let mut p = DerivedParams {
        h0_sq: [0.0; 2],
        hq_sq: [0.0; 2],
        u: [0.0; 2],
        v: [0.0; 2],
        p_eps: [0.0; 2],
        sigma_f_sq: [0.0; 2],
        sigma_n_sq,
        l0: [0.0; 2],
        lq: [0.0; 2],
        csi_error_var: var,
        p_m: budget.p_m,
        p_r: budget.p_r,
        q,
    };
    for user in User::BOTH {
        let j = user.index();
        let h0 = realization.estimated_power(0, user);
        if h0 <= 0.0 {
            return Err(Error::DegenerateChannel { user: j + 1 });
        }
        let hq = realization.estimated_power(q, user);
        let l0 = realization.path_loss[0][j];
        let lq = realization.path_loss[q][j];
        let sigma_f = interference_variance(&realization.interferers, budget, user);
        p.h0_sq[j] = h0;
        p.hq_sq[j] = hq;
        p.l0[j] = l0;
        p.lq[j] = lq;
        p.sigma_f_sq[j] = sigma_f;
        p.u[j] = (sigma_f + sigma_n_sq) / h0;
        p.v[j] = hq / h0;
        p.p_eps[j] = (l0 * budget.p_m + lq * budget.p_r) * var / h0;
    }
    Ok(p)
}

impl DerivedParams {
    /// Hand-built instance from the effective quantities alone: unit
    /// controller gains, noise and interference folded into `u`.
    pub fn effective(u: [f64; 2], v: [f64; 2], p_eps: [f64; 2], budget: PowerBudget) -> Self {
        DerivedParams {
            h0_sq: [1.0; 2],
            hq_sq: v,
            u,
            v,
            p_eps,
            sigma_f_sq: u,
            sigma_n_sq: 0.0,
            l0: [1.0; 2],
            lq: v,
            csi_error_var: 0.0,
            p_m: budget.p_m,
            p_r: budget.p_r,
            q: 1,
        }
    }

    pub fn budget(&self) -> PowerBudget {
        PowerBudget {
            p_m: self.p_m,
            p_r: self.p_r,
        }
    }
}
