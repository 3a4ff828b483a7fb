//! RF-to-DC conversion efficiency `η(P_in)` as a piecewise-linear table.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct EfficiencyCurve {
    knots: Vec<(f64, f64)>,
}

impl EfficiencyCurve {
    /// Builds a curve from `(input_power_w, efficiency)` knots.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Curve("need at least two knots".into()));
        }
        for &(p, e) in &knots {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::Curve(format!("input power {p} must be finite and >= 0")));
            }
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::Curve(format!("efficiency {e} outside [0, 1]")));
            }
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Curve("input powers must be strictly increasing".into()));
        }
        Ok(EfficiencyCurve { knots })
    }

    /// Constant efficiency over all input powers.
    pub fn constant(efficiency: f64) -> Result<Self> {
        Self::new(vec![(0.0, efficiency), (1.0, efficiency)])
    }

    /// Default low-power rectifier table (1 µW .. 100 mW). Not a measured
    /// device; swap in a curve file for absolute figures.
    pub fn default_rectifier() -> Self {
        EfficiencyCurve {
            knots: vec![
                (1e-6, 0.05),
                (1e-5, 0.15),
                (1e-4, 0.30),
                (1e-3, 0.45),
                (1e-2, 0.55),
                (1e-1, 0.60),
            ],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.knots.windows(2).all(|w| w[1].1 >= w[0].1)
    }

    /// Linear interpolation, clamped to the end knots.
    pub fn eval(&self, input_power_w: f64) -> f64 {
        let k = &self.knots;
        let (first, last) = (k[0], k[k.len() - 1]);
        if input_power_w <= first.0 {
            return first.1;
        }
        if input_power_w >= last.0 {
            return last.1;
        }
        // first knot with power > input
        let i = k.partition_point(|&(p, _)| p <= input_power_w);
        let (p0, e0) = k[i - 1];
        let (p1, e1) = k[i];
        e0 + (e1 - e0) * (input_power_w - p0) / (p1 - p0)
    }

    /// Parses a two-column text table: `watts efficiency` per line,
    /// whitespace- or comma-separated, `#` starts a comment.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut knots = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(format!("line {}: expected 2 columns, found {}", n + 1, cols.len()));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| format!("line {}: `{s}`: {e}", n + 1))
            };
            knots.push((parse(cols[0])?, parse(cols[1])?));
        }
        Self::new(knots).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|reason| Error::Parse {
            path: path.to_path_buf(),
            reason,
        })
    }
}

impl Default for EfficiencyCurve {
    fn default() -> Self {
        Self::default_rectifier()
    }
}

impl TryFrom<Vec<(f64, f64)>> for EfficiencyCurve {
    type Error = Error;

    fn try_from(knots: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(knots)
    }
}

impl From<EfficiencyCurve> for Vec<(f64, f64)> {
    fn from(curve: EfficiencyCurve) -> Self {
        curve.knots
    }
}
