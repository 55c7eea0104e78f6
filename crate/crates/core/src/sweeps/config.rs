use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chain::{ChainSpec, DisorderMode, SiteMask};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    DisorderDiag,
    DisorderOffdiag,
    DisorderBoth,
    DephasingGamma,
    BoundaryField,
}

impl SweepAxis {
    pub fn disorder_mode(self) -> Option<DisorderMode> {
        match self {
            SweepAxis::DisorderDiag => Some(DisorderMode::Diagonal),
            SweepAxis::DisorderOffdiag => Some(DisorderMode::OffDiagonal),
            SweepAxis::DisorderBoth => Some(DisorderMode::Both),
            SweepAxis::DephasingGamma | SweepAxis::BoundaryField => None,
        }
    }

    pub fn is_disorder(self) -> bool {
        self.disorder_mode().is_some()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::DisorderDiag => "disorder_diag",
            SweepAxis::DisorderOffdiag => "disorder_offdiag",
            SweepAxis::DisorderBoth => "disorder_both",
            SweepAxis::DephasingGamma => "dephasing_gamma",
            SweepAxis::BoundaryField => "boundary_field",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            SweepAxis::DisorderDiag,
            SweepAxis::DisorderOffdiag,
            SweepAxis::DisorderBoth,
            SweepAxis::DephasingGamma,
            SweepAxis::BoundaryField,
        ];
        all.into_iter()
            .find(|a| a.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown sweep axis {s:?}")))
    }
}

fn default_realizations() -> usize {
    1000
}

fn default_dt() -> f64 {
    super::DEFAULT_DT
}

fn default_diag_sites() -> SiteMask {
    SiteMask::Boundary
}

/// One sweep over `axis` on top of the chain `base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: ChainSpec,
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    /// Disorder realizations per grid point; deterministic axes use one.
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Peak-search horizon; `None` picks the axis default.
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub record_bulk: bool,
    /// Sites carrying diagonal disorder.
    #[serde(default = "default_diag_sites")]
    pub diag_sites: SiteMask,
}

impl SweepConfig {
    pub fn new(base: ChainSpec, axis: SweepAxis, grid: Vec<f64>) -> Self {
        SweepConfig {
            base,
            axis,
            grid,
            realizations: default_realizations(),
            master_seed: 0,
            t_max: None,
            dt: default_dt(),
            record_bulk: false,
            diag_sites: default_diag_sites(),
        }
    }

    pub fn with_realizations(mut self, r: usize) -> Self {
        self.realizations = r;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = Some(t_max);
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_record_bulk(mut self, on: bool) -> Self {
        self.record_bulk = on;
        self
    }

    pub fn with_diag_sites(mut self, sites: SiteMask) -> Self {
        self.diag_sites = sites;
        self
    }

    /// Realizations actually run per grid point.
    pub fn effective_realizations(&self) -> usize {
        if self.axis.is_disorder() {
            self.realizations
        } else {
            1
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        let bad = |msg: String| Err(Error::Config(msg));
        if self.grid.is_empty() {
            return bad("sweep grid is empty".into());
        }
        if self.grid.iter().any(|v| !v.is_finite()) || self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("sweep grid must be finite and strictly increasing".into());
        }
        if self.realizations == 0 {
            return bad("realizations must be at least 1".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("t_max = {t} must be positive"));
            }
        }
        match self.axis {
            SweepAxis::DephasingGamma if self.grid[0] < 0.0 => bad("dephasing rates must be >= 0".into()),
            a if a.is_disorder() && self.grid[0] < 0.0 => bad("disorder strengths must be >= 0".into()),
            _ => {
                self.diag_sites.sites(self.base.n)?;
                Ok(())
            }
        }
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// Statistics at one grid value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub mean_peak: f64,
    /// Sample standard deviation over realizations (0 for a single one).
    pub std_peak: f64,
    pub count: usize,
    pub excluded: usize,
    pub mean_peak_time: f64,
    pub max_bulk: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub master_seed: u64,
    pub config_hash: String,
}

impl SweepResult {
    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean_peak).collect()
    }
}
