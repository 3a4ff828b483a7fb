//! System parameters in SI units (Watts, meters, Hz).
//!
//! Powers given in dBm are converted once, at the file boundary
//! (see [`crate::io`]); everything in here is linear.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts dBm to Watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts Watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Number of RRUs in each region.
    pub num_rrus: usize,
    /// Number of dominant interfering regions around the target region.
    pub num_interfering_regions: usize,
    pub region_radius: f64,
    pub rru_local_radius: f64,
    /// Distance of the RRU sites from the region center.
    pub rru_ring_radius: f64,
    /// Center distance of the interfering controllers, in units of `region_radius`.
    pub interferer_distance_factor: f64,
    /// Lower clamp on transmitter-user distances.
    pub min_distance: f64,
    pub path_loss_exponent: f64,
    pub bandwidth_hz: f64,
    pub noise_density_dbm_hz: f64,
    /// Total power budget `P = P_m + S * P_r` of one region.
    pub total_power_w: f64,
    /// Share of `P` given to the controller; the remainder is split equally among the RRUs.
    pub controller_power_ratio: f64,
    pub csi_error_var: f64,
    pub r_min_bpshz: f64,
    pub r_sic_bpshz: f64,
    pub e_min_user1_w: f64,
    pub e_min_user2_w: f64,
    pub strong_user_max_norm_radius: f64,
    pub weak_user_norm_radius_lo: f64,
    pub weak_user_norm_radius_hi: f64,
    pub grid_points_alpha: usize,
    pub grid_points_p2: usize,
    pub bisection_tol: f64,
    pub seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        let region_radius = 20.0;
        SystemConfig {
            num_rrus: 6,
            num_interfering_regions: 6,
            region_radius,
            rru_local_radius: region_radius / 3.0,
            rru_ring_radius: 2.0 * region_radius / 3.0,
            interferer_distance_factor: 2.0,
            min_distance: 0.5,
            path_loss_exponent: 2.5,
            bandwidth_hz: 5e6,
            noise_density_dbm_hz: -90.0,
            total_power_w: dbm_to_watts(40.0),
            // P_m = 10 P_r with S = 6
            controller_power_ratio: 10.0 / 16.0,
            csi_error_var: 0.001,
            r_min_bpshz: 1.0,
            r_sic_bpshz: 0.5,
            e_min_user1_w: 0.01,
            e_min_user2_w: 0.01,
            strong_user_max_norm_radius: 0.3,
            weak_user_norm_radius_lo: 0.8,
            weak_user_norm_radius_hi: 1.0,
            // fine enough that the grid certifies feasible P2 intervals a few
            // milli-bps/Hz wide; see the validate module
            grid_points_alpha: 1001,
            grid_points_p2: 2001,
            bisection_tol: 1e-12,
            seed: 0x5317_da5e,
        }
    }
}

/// Transmit powers of the controller and of each RRU.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBudget {
    pub p_m: f64,
    pub p_r: f64,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        fn finite(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(field, format!("must be finite, got {v}")))
            }
        }
        for (field, v) in [
            ("region_radius", self.region_radius),
            ("rru_local_radius", self.rru_local_radius),
            ("rru_ring_radius", self.rru_ring_radius),
            ("interferer_distance_factor", self.interferer_distance_factor),
            ("min_distance", self.min_distance),
            ("path_loss_exponent", self.path_loss_exponent),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_density_dbm_hz", self.noise_density_dbm_hz),
            ("total_power_w", self.total_power_w),
            ("controller_power_ratio", self.controller_power_ratio),
            ("csi_error_var", self.csi_error_var),
            ("r_min_bpshz", self.r_min_bpshz),
            ("r_sic_bpshz", self.r_sic_bpshz),
            ("e_min_user1_w", self.e_min_user1_w),
            ("e_min_user2_w", self.e_min_user2_w),
            ("bisection_tol", self.bisection_tol),
        ] {
            finite(field, v)?;
        }

        if self.num_rrus == 0 {
            return Err(Error::config("num_rrus", "need at least one RRU"));
        }
        if self.region_radius <= 0.0 {
            return Err(Error::config("region_radius", "must be > 0"));
        }
        if !(self.rru_local_radius > 0.0 && self.rru_local_radius < self.region_radius) {
            return Err(Error::config(
                "rru_local_radius",
                "must lie strictly between 0 and region_radius",
            ));
        }
        if self.rru_ring_radius < 0.0 {
            return Err(Error::config("rru_ring_radius", "must be >= 0"));
        }
        if self.interferer_distance_factor <= 0.0 {
            return Err(Error::config("interferer_distance_factor", "must be > 0"));
        }
        if self.min_distance <= 0.0 {
            return Err(Error::config("min_distance", "must be > 0"));
        }
        if self.path_loss_exponent <= 0.0 {
            return Err(Error::config("path_loss_exponent", "must be > 0"));
        }
        if self.bandwidth_hz <= 0.0 {
            return Err(Error::config("bandwidth_hz", "must be > 0"));
        }
        if self.total_power_w <= 0.0 {
            return Err(Error::config("total_power_w", "must be > 0"));
        }
        if !(self.controller_power_ratio > 0.0 && self.controller_power_ratio <= 1.0) {
            return Err(Error::config(
                "controller_power_ratio",
                format!("must lie in (0, 1], got {}", self.controller_power_ratio),
            ));
        }
        if !(0.0..1.0).contains(&self.csi_error_var) {
            return Err(Error::config(
                "csi_error_var",
                "must lie in [0, 1); at 1 the estimate carries no information",
            ));
        }
        if self.r_min_bpshz < 0.0 {
            return Err(Error::config("r_min_bpshz", "must be >= 0"));
        }
        if self.r_sic_bpshz < 0.0 {
            return Err(Error::config("r_sic_bpshz", "must be >= 0"));
        }
        if self.e_min_user1_w < 0.0 {
            return Err(Error::config("e_min_user1_w", "must be >= 0"));
        }
        if self.e_min_user2_w < 0.0 {
            return Err(Error::config("e_min_user2_w", "must be >= 0"));
        }
        let (s, lo, hi) = (
            self.strong_user_max_norm_radius,
            self.weak_user_norm_radius_lo,
            self.weak_user_norm_radius_hi,
        );
        if !(0.0 <= s && s < lo && lo < hi && hi <= 1.0) {
            return Err(Error::config(
                "strong_user_max_norm_radius",
                format!("need 0 <= strong ({s}) < weak_lo ({lo}) < weak_hi ({hi}) <= 1"),
            ));
        }
        if self.grid_points_alpha < 2 {
            return Err(Error::config("grid_points_alpha", "must be >= 2"));
        }
        if self.grid_points_p2 < 2 {
            return Err(Error::config("grid_points_p2", "must be >= 2"));
        }
        if self.bisection_tol <= 0.0 {
            return Err(Error::config("bisection_tol", "must be > 0"));
        }
        Ok(())
    }

    /// Controller and per-RRU powers of the DAS schemes.
    pub fn das_budget(&self) -> PowerBudget {
        let p_m = self.controller_power_ratio * self.total_power_w;
        let p_r = (self.total_power_w - p_m) / self.num_rrus as f64;
        PowerBudget { p_m, p_r }
    }

    /// The whole budget on the controller, RRUs silent.
    pub fn no_das_budget(&self) -> PowerBudget {
        PowerBudget {
            p_m: self.total_power_w,
            p_r: 0.0,
        }
    }

    /// Thermal noise power over the full band, in Watts.
    pub fn noise_power_w(&self) -> f64 {
        dbm_to_watts(self.noise_density_dbm_hz) * self.bandwidth_hz
    }

    pub fn with_total_power(&self, total_power_w: f64) -> Self {
        SystemConfig {
            total_power_w,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_is_valid() {
        SystemConfig::default().validate().unwrap();
    }

    #[test]
    fn budget_sums_to_total() {
        let cfg = SystemConfig::default();
        let b = cfg.das_budget();
        assert_relative_eq!(
            b.p_m + cfg.num_rrus as f64 * b.p_r,
            cfg.total_power_w,
            max_relative = 1e-15
        );
        assert_relative_eq!(b.p_m, 10.0 * b.p_r, max_relative = 1e-12);
    }

    #[test]
    fn noise_power_unit_conversion() {
        // -90 dBm/Hz = 1e-12 W/Hz over 5 MHz
        let cfg = SystemConfig::default();
        assert_relative_eq!(cfg.noise_power_w(), 5e-6, max_relative = 1e-12);
    }

    #[test]
    fn dbm_round_trip() {
        assert_relative_eq!(dbm_to_watts(30.0), 1.0);
        assert_relative_eq!(watts_to_dbm(dbm_to_watts(46.0)), 46.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_ratio_and_names_field() {
        let cfg = SystemConfig {
            controller_power_ratio: 1.2,
            ..Default::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("controller_power_ratio"));
    }

    #[test]
    fn rejects_unit_csi_error() {
        let cfg = SystemConfig {
            csi_error_var: 1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_unordered_radii() {
        let cfg = SystemConfig {
            weak_user_norm_radius_lo: 0.2,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
