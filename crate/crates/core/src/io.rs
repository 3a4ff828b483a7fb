//! Experiment files and result emission.
//!
//! An experiment file is TOML with the sections `geometry`, `channel`,
//! `power`, `constraints`, `solver`, `sweep` and `harvester`; every key is
//! optional and falls back to [`SystemConfig::default`]. Powers are in dBm
//! (use `-inf` for a zero energy floor). The JSON sidecar written next to the
//! CSVs holds the same structure fully resolved, and loads back as an
//! experiment file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{dbm_to_watts, watts_to_dbm, SystemConfig};
use crate::efficiency::EfficiencyCurve;
use crate::error::{Error, Result};
use crate::montecarlo::SweepPoint;
use crate::solution::{Problem, Scheme};

pub const CSV_COLUMNS: [&str; 11] = [
    "power_dbm",
    "scheme",
    "mean_objective_bpshz",
    "outage_prob",
    "mean_alpha1",
    "mean_alpha2",
    "mean_e1_w",
    "mean_e2_w",
    "num_trials",
    "num_non_outage",
    "var_objective",
];

pub const SIDECAR_NAME: &str = "run.json";

pub fn csv_name(problem: Problem) -> String {
    format!("{}.csv", problem.tag())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Geometry {
    pub num_rrus: usize,
    pub num_interfering_regions: usize,
    pub region_radius_m: f64,
    pub rru_local_radius_m: f64,
    pub rru_ring_radius_m: f64,
    pub interferer_distance_factor: f64,
    pub min_distance_m: f64,
    pub strong_user_max_norm_radius: f64,
    pub weak_user_norm_radius_lo: f64,
    pub weak_user_norm_radius_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Channel {
    pub path_loss_exponent: f64,
    pub bandwidth_hz: f64,
    pub noise_density_dbm_hz: f64,
    pub csi_error_var: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Power {
    /// Total budget for `single` and `validate`; `sweep` uses the sweep section.
    pub total_power_dbm: f64,
    pub controller_power_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constraints {
    pub r_min_bpshz: f64,
    pub r_sic_bpshz: f64,
    #[serde(with = "extended_float")]
    pub e_min_user1_dbm: f64,
    #[serde(with = "extended_float")]
    pub e_min_user2_dbm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Solver {
    pub grid_points_alpha: usize,
    pub grid_points_p2: usize,
    pub bisection_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub start_dbm: f64,
    pub stop_dbm: f64,
    pub step_dbm: f64,
    /// Explicit sweep points; overrides start/stop/step when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_dbm: Option<Vec<f64>>,
    pub num_trials: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Harvester {
    /// `(input_power_w, efficiency)` pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knots: Option<Vec<(f64, f64)>>,
    /// Two-column table, relative to the experiment file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentFile {
    pub seed: u64,
    pub geometry: Geometry,
    pub channel: Channel,
    pub power: Power,
    pub constraints: Constraints,
    pub solver: Solver,
    pub sweep: Sweep,
    pub harvester: Harvester,
}

impl Default for ExperimentFile {
    fn default() -> Self {
        let mut f =
            Self::from_config(&SystemConfig::default(), &Sweep::default(), &EfficiencyCurve::default());
        // exact dBm values instead of a W -> dBm round trip
        f.power.total_power_dbm = 40.0;
        f.constraints.e_min_user1_dbm = 10.0;
        f.constraints.e_min_user2_dbm = 10.0;
        f
    }
}

impl Default for Geometry {
    fn default() -> Self {
        ExperimentFile::default().geometry
    }
}

impl Default for Channel {
    fn default() -> Self {
        ExperimentFile::default().channel
    }
}

impl Default for Power {
    fn default() -> Self {
        ExperimentFile::default().power
    }
}

impl Default for Constraints {
    fn default() -> Self {
        ExperimentFile::default().constraints
    }
}

impl Default for Solver {
    fn default() -> Self {
        ExperimentFile::default().solver
    }
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            // below about 40 dBm the 10 mW floors put nearly every placement in outage
            start_dbm: 40.0,
            stop_dbm: 60.0,
            step_dbm: 2.0,
            points_dbm: None,
            num_trials: 2000,
        }
    }
}

impl ExperimentFile {
    fn from_config(c: &SystemConfig, sweep: &Sweep, curve: &EfficiencyCurve) -> Self {
        ExperimentFile {
            seed: c.seed,
            geometry: Geometry {
                num_rrus: c.num_rrus,
                num_interfering_regions: c.num_interfering_regions,
                region_radius_m: c.region_radius,
                rru_local_radius_m: c.rru_local_radius,
                rru_ring_radius_m: c.rru_ring_radius,
                interferer_distance_factor: c.interferer_distance_factor,
                min_distance_m: c.min_distance,
                strong_user_max_norm_radius: c.strong_user_max_norm_radius,
                weak_user_norm_radius_lo: c.weak_user_norm_radius_lo,
                weak_user_norm_radius_hi: c.weak_user_norm_radius_hi,
            },
            channel: Channel {
                path_loss_exponent: c.path_loss_exponent,
                bandwidth_hz: c.bandwidth_hz,
                noise_density_dbm_hz: c.noise_density_dbm_hz,
                csi_error_var: c.csi_error_var,
            },
            power: Power {
                total_power_dbm: watts_to_dbm(c.total_power_w),
                controller_power_ratio: c.controller_power_ratio,
            },
            constraints: Constraints {
                r_min_bpshz: c.r_min_bpshz,
                r_sic_bpshz: c.r_sic_bpshz,
                e_min_user1_dbm: watts_to_dbm(c.e_min_user1_w),
                e_min_user2_dbm: watts_to_dbm(c.e_min_user2_w),
            },
            solver: Solver {
                grid_points_alpha: c.grid_points_alpha,
                grid_points_p2: c.grid_points_p2,
                bisection_tol: c.bisection_tol,
            },
            sweep: sweep.clone(),
            harvester: Harvester {
                knots: Some(curve.knots().to_vec()),
                curve_file: None,
            },
        }
    }

    pub fn system_config(&self) -> SystemConfig {
        let g = &self.geometry;
        SystemConfig {
            num_rrus: g.num_rrus,
            num_interfering_regions: g.num_interfering_regions,
            region_radius: g.region_radius_m,
            rru_local_radius: g.rru_local_radius_m,
            rru_ring_radius: g.rru_ring_radius_m,
            interferer_distance_factor: g.interferer_distance_factor,
            min_distance: g.min_distance_m,
            path_loss_exponent: self.channel.path_loss_exponent,
            bandwidth_hz: self.channel.bandwidth_hz,
            noise_density_dbm_hz: self.channel.noise_density_dbm_hz,
            total_power_w: dbm_to_watts(self.power.total_power_dbm),
            controller_power_ratio: self.power.controller_power_ratio,
            csi_error_var: self.channel.csi_error_var,
            r_min_bpshz: self.constraints.r_min_bpshz,
            r_sic_bpshz: self.constraints.r_sic_bpshz,
            e_min_user1_w: dbm_to_watts(self.constraints.e_min_user1_dbm),
            e_min_user2_w: dbm_to_watts(self.constraints.e_min_user2_dbm),
            strong_user_max_norm_radius: g.strong_user_max_norm_radius,
            weak_user_norm_radius_lo: g.weak_user_norm_radius_lo,
            weak_user_norm_radius_hi: g.weak_user_norm_radius_hi,
            grid_points_alpha: self.solver.grid_points_alpha,
            grid_points_p2: self.solver.grid_points_p2,
            bisection_tol: self.solver.bisection_tol,
            seed: self.seed,
        }
    }

    /// Sweep points in dBm.
    pub fn sweep_dbm(&self) -> Result<Vec<f64>> {
        let s = &self.sweep;
        if let Some(points) = &s.points_dbm {
            if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
                return Err(Error::config("points_dbm", "need at least one finite point"));
            }
            return Ok(points.clone());
        }
        if !(s.step_dbm > 0.0 && s.start_dbm.is_finite() && s.stop_dbm >= s.start_dbm) {
            return Err(Error::config(
                "step_dbm",
                format!(
                    "need step > 0 and stop >= start, got start {} stop {} step {}",
                    s.start_dbm, s.stop_dbm, s.step_dbm
                ),
            ));
        }
        let n = ((s.stop_dbm - s.start_dbm) / s.step_dbm + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| s.start_dbm + i as f64 * s.step_dbm).collect())
    }
}

/// JSON has no infinities, so non-finite values travel as the strings
/// `"inf"`, `"-inf"` and `"nan"`.
mod extended_float {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string().to_lowercase())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => t
                .parse()
                .map_err(|_| de::Error::custom(format!("expected a number, got `{t}`"))),
        }
    }
}

/// A loaded experiment: the parsed file plus everything resolved from it.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub file: ExperimentFile,
    pub config: SystemConfig,
    pub curve: EfficiencyCurve,
    pub sweep_dbm: Vec<f64>,
}

impl Experiment {
    /// Validates `file`; a relative `curve_file` is looked up under `base_dir`.
    pub fn resolve(mut file: ExperimentFile, base_dir: &Path) -> Result<Self> {
        let config = file.system_config();
        config.validate()?;
        if file.sweep.num_trials == 0 {
            return Err(Error::config("num_trials", "must be >= 1"));
        }
        let sweep_dbm = file.sweep_dbm()?;
        let curve = match (file.harvester.knots.take(), file.harvester.curve_file.take()) {
            (Some(_), Some(_)) => {
                return Err(Error::config("harvester", "give either knots or curve_file, not both"))
            }
            (Some(knots), None) => EfficiencyCurve::new(knots)?,
            (None, Some(path)) => EfficiencyCurve::load(&base_dir.join(path))?,
            (None, None) => EfficiencyCurve::default(),
        };
        // the resolved file always carries the curve inline
        file.harvester.knots = Some(curve.knots().to_vec());
        Ok(Experiment {
            file,
            config,
            curve,
            sweep_dbm,
        })
    }

    pub fn defaults() -> Self {
        Self::resolve(ExperimentFile::default(), Path::new(".")).expect("defaults are valid")
    }

    /// Reads an experiment file. `.json` files are parsed as a sidecar,
    /// anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let parse_err = |reason: String| Error::Parse {
            path: path.to_path_buf(),
            reason,
        };
        let file = if path.extension().is_some_and(|e| e == "json") {
            let sidecar: Sidecar = serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?;
            sidecar.experiment
        } else {
            toml::from_str(&text).map_err(|e| parse_err(e.to_string()))?
        };
        Self::resolve(file, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn sweep_w(&self) -> Vec<f64> {
        self.sweep_dbm.iter().map(|&p| dbm_to_watts(p)).collect()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.file.seed = seed;
        self.config.seed = seed;
        self
    }
}

/// Metadata written next to the CSVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub seed: u64,
    /// How outage trials enter `mean_objective_bpshz`.
    pub outage_objective: String,
    /// Which trials the alpha and harvested-power means average over.
    pub conditional_means: String,
    pub schemes: Vec<Scheme>,
    pub files: Vec<String>,
    pub experiment: ExperimentFile,
}

impl Sidecar {
    pub fn new(experiment: &Experiment) -> Self {
        Sidecar {
            seed: experiment.config.seed,
            outage_objective: "counted as zero".into(),
            conditional_means: "non-outage trials only; nan when every trial is in outage".into(),
            schemes: Scheme::ALL.to_vec(),
            files: Problem::ALL.iter().map(|&p| csv_name(p)).collect(),
            experiment: experiment.file.clone(),
        }
    }
}

/// Formats `x` with 9 significant digits, locale-free, `nan` for NaN.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Writes one problem's aggregate rows, sweep-point major, schemes in [`Scheme::ALL`] order.
pub fn write_csv<W: std::io::Write>(
    out: W,
    points: &[SweepPoint],
    sweep_dbm: &[f64],
    problem: Problem,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for (point, &dbm) in points.iter().zip(sweep_dbm) {
        for scheme in Scheme::ALL {
            let Some(s) = point.stats_for(scheme, problem) else {
                continue;
            };
            w.write_record([
                format_sig9(dbm),
                scheme.tag().to_string(),
                format_sig9(s.mean_objective),
                format_sig9(s.outage_prob),
                format_sig9(s.mean_alpha1),
                format_sig9(s.mean_alpha2),
                format_sig9(s.mean_e1),
                format_sig9(s.mean_e2),
                s.num_trials.to_string(),
                s.num_non_outage.to_string(),
                format_sig9(s.var_objective),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Writes both CSVs and the sidecar into `dir`, creating it if needed.
/// Returns the written paths.
pub fn write_outputs(dir: &Path, experiment: &Experiment, points: &[SweepPoint]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for problem in Problem::ALL {
        let path = dir.join(csv_name(problem));
        let mut buf = Vec::new();
        write_csv(&mut buf, points, &experiment.sweep_dbm, problem).map_err(|e| Error::Parse {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        write_file(&path, &buf)?;
        written.push(path);
    }
    let path = dir.join(SIDECAR_NAME);
    let json = serde_json::to_string_pretty(&Sidecar::new(experiment)).expect("sidecar serializes");
    write_file(&path, json.as_bytes())?;
    written.push(path);
    Ok(written)
}
