use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chain::{ChainSpec, Protocol, SiteMask};
use crate::effective::HOPPING_FACTOR;
use crate::qcore::Spin;
use crate::sweeps::{SweepAxis, SweepConfig, DEFAULT_DT};
use crate::{Error, Result};

/// Contents of a `--config` file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub chain: ChainSection,
    #[serde(default)]
    pub evolve: EvolveSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub effective: EffectiveSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    pub protocol: Option<Protocol>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub spin: Option<Spin>,
    pub delta: Option<f64>,
    #[serde(rename = "Delta")]
    pub big_delta: Option<f64>,
    #[serde(alias = "B")]
    pub boundary_field: Option<f64>,
    pub bulk_field: Option<f64>,
    pub gamma: Option<f64>,
    pub dephasing_sites: Option<SiteMask>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSection {
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
}

/// Either an explicit list or `{ start, stop, points }`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::List(v) => Ok(v.clone()),
            GridSpec::Range { start, stop, points } => match points {
                0 => Err(Error::Config("grid needs at least one point".into())),
                1 => Ok(vec![*start]),
                p => Ok((0..*p)
                    .map(|k| start + (stop - start) * k as f64 / (p - 1) as f64)
                    .collect()),
            },
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Option<SweepAxis>,
    pub grid: Option<GridSpec>,
    pub realizations: Option<usize>,
    pub master_seed: Option<u64>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub record_bulk: Option<bool>,
    pub diag_sites: Option<SiteMask>,
    /// Run the sweep for each listed protocol (default: the chain's).
    pub protocols: Option<Vec<Protocol>>,
    /// Run the sweep for each listed strong coupling; one output file each.
    #[serde(rename = "Delta_values")]
    pub big_delta_values: Option<Vec<f64>>,
    pub b_min: Option<f64>,
    pub b_max: Option<f64>,
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveSection {
    /// Bulk sites between the boundary qubits (default `N - 2`).
    pub n_chain: Option<usize>,
    pub convention_factor: Option<f64>,
    /// Boundary splitting `ω` (default: the boundary field).
    pub omega: Option<f64>,
    /// Bulk on-site energy `Ω` (default 0).
    pub big_omega: Option<f64>,
    /// Boundary hopping `λ` override (default: factor × δ).
    pub lambda_hop: Option<f64>,
    pub gamma: Option<f64>,
    /// Also run the full P2 chain and compare peak times.
    pub compare_full: Option<bool>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Command-line overrides for `[chain]`.
#[derive(Clone, Debug, Default)]
pub struct ChainOverrides {
    pub protocol: Option<Protocol>,
    pub n: Option<usize>,
    pub spin: Option<Spin>,
    pub delta: Option<f64>,
    pub big_delta: Option<f64>,
    pub boundary_field: Option<f64>,
    pub gamma: Option<f64>,
}

fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("missing required key `{key}` (set it in the config file or on the command line)")))
}

impl ChainSection {
    pub fn resolve(&self, o: &ChainOverrides) -> Result<ChainSpec> {
        let protocol = required(o.protocol.or(self.protocol), "chain.protocol")?;
        let n = required(o.n.or(self.n), "chain.N")?;
        let spin = required(o.spin.or(self.spin), "chain.spin")?;
        let mut spec = ChainSpec::new(protocol, n, spin);
        spec.weak = o.delta.or(self.delta).unwrap_or(spec.weak);
        spec.strong = o.big_delta.or(self.big_delta).unwrap_or(spec.strong);
        spec.boundary_field = o.boundary_field.or(self.boundary_field).unwrap_or(0.0);
        spec.bulk_field = self.bulk_field.unwrap_or(0.0);
        spec.gamma = o.gamma.or(self.gamma).unwrap_or(0.0);
        if let Some(mask) = &self.dephasing_sites {
            spec.dephasing_sites = mask.clone();
        }
        spec.validate().map_err(|e| Error::Config(format!("[chain]: {e}")))?;
        Ok(spec)
    }
}

/// Resolved `evolve` settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolveSettings {
    pub chain: ChainSpec,
    pub t_max: f64,
    pub dt: f64,
}

impl EvolveSettings {
    pub fn resolve(file: &FileConfig, o: &ChainOverrides) -> Result<Self> {
        let chain = file.chain.resolve(o)?;
        let t_max = file
            .evolve
            .t_max
            .unwrap_or_else(|| crate::sweeps::default_horizon(&chain));
        let dt = file.evolve.dt.unwrap_or(DEFAULT_DT);
        if !(t_max > 0.0 && dt > 0.0 && t_max.is_finite() && dt.is_finite()) {
            return Err(Error::Config(format!("[evolve]: t_max = {t_max}, dt = {dt}")));
        }
        Ok(EvolveSettings { chain, t_max, dt })
    }
}

/// Resolved `sweep` settings: one [`SweepConfig`] per (Δ, protocol).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSettings {
    pub runs: Vec<SweepConfig>,
    pub big_delta_values: Vec<f64>,
    pub b_range: (f64, f64),
    pub tol: f64,
}

impl SweepSettings {
    pub fn resolve(file: &FileConfig, o: &ChainOverrides, seed: Option<u64>, axis_default: Option<SweepAxis>) -> Result<Self> {
        let base = file.chain.resolve(o)?;
        let s = &file.sweep;
        let axis = required(s.axis.or(axis_default), "sweep.axis")?;
        let grid = match &s.grid {
            Some(g) => g.values()?,
            None if axis == SweepAxis::BoundaryField => GridSpec::Range {
                start: s.b_min.unwrap_or(0.0),
                stop: s.b_max.unwrap_or(6.0),
                points: 61,
            }
            .values()?,
            None => return Err(Error::Config("missing required key `sweep.grid`".into())),
        };
        let protocols = s.protocols.clone().unwrap_or_else(|| vec![base.protocol]);
        let big_deltas = s.big_delta_values.clone().unwrap_or_else(|| vec![base.strong]);
        let mut runs = Vec::new();
        for &big in &big_deltas {
            for &p in &protocols {
                let mut chain = base.clone();
                chain.protocol = p;
                chain.strong = big;
                if p == Protocol::P1 {
                    chain.boundary_field = 0.0;
                }
                let mut cfg = SweepConfig::new(chain, axis, grid.clone());
                if let Some(r) = s.realizations {
                    cfg.realizations = r;
                }
                cfg.master_seed = seed.or(s.master_seed).unwrap_or(0);
                cfg.t_max = s.t_max.or(file.evolve.t_max);
                cfg.dt = s.dt.or(file.evolve.dt).unwrap_or(DEFAULT_DT);
                cfg.record_bulk = s.record_bulk.unwrap_or(false);
                if let Some(sites) = &s.diag_sites {
                    cfg.diag_sites = sites.clone();
                }
                cfg.validate().map_err(|e| match e {
                    Error::Config(m) => Error::Config(format!("[sweep]: {m}")),
                    other => Error::Config(format!("[sweep]: {other}")),
                })?;
                runs.push(cfg);
            }
        }
        Ok(SweepSettings {
            runs,
            big_delta_values: big_deltas,
            b_range: (s.b_min.unwrap_or(0.0), s.b_max.unwrap_or(6.0)),
            tol: s.tol.unwrap_or(1e-3),
        })
    }
}

/// Resolved `effective` settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffectiveSettings {
    pub chain: ChainSpec,
    pub n_chain: usize,
    pub convention_factor: f64,
    pub omega: f64,
    pub big_omega: f64,
    pub lambda_hop: f64,
    pub gamma: f64,
    pub compare_full: bool,
    pub t_max: Option<f64>,
    pub dt: f64,
}

impl EffectiveSettings {
    pub fn resolve(file: &FileConfig, o: &ChainOverrides) -> Result<Self> {
        let chain = file.chain.resolve(o)?;
        let e = &file.effective;
        let factor = e.convention_factor.unwrap_or(HOPPING_FACTOR);
        Ok(EffectiveSettings {
            n_chain: e.n_chain.unwrap_or(chain.n - 2),
            convention_factor: factor,
            omega: e.omega.unwrap_or(chain.boundary_field),
            big_omega: e.big_omega.unwrap_or(chain.bulk_field),
            lambda_hop: e.lambda_hop.unwrap_or(factor * chain.weak),
            gamma: e.gamma.unwrap_or(chain.gamma),
            compare_full: e.compare_full.unwrap_or(false),
            t_max: e.t_max,
            dt: e.dt.unwrap_or(DEFAULT_DT),
            chain,
        })
    }
}
