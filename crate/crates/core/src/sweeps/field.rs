use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{SweepAxis, SweepConfig};
use super::single::{default_horizon, unitary_peak};
use crate::chain::{build_hamiltonian, initial_state, Protocol};
use crate::dynamics::{time_grid, UnitaryPropagator};
use crate::measures::{golden_section_max, ChainObserver, PeakRecord};
use crate::qcore::Basis;
use crate::{Error, Result};

/// Fewest coarse points used by [`optimize_boundary_field`].
pub const MIN_COARSE_POINTS: usize = 41;

const DEFAULT_COARSE_POINTS: usize = 61;
const FLAT_TOL: f64 = 1e-6;

/// Negativity over time (rows) and boundary field (columns).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldScan {
    pub times: Vec<f64>,
    pub fields: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub config_hash: String,
}

impl FieldScan {
    pub fn shape(&self) -> (usize, usize) {
        (self.times.len(), self.fields.len())
    }

    /// Largest cell as `(value, time, field)`.
    pub fn max(&self) -> (f64, f64, f64) {
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for (row, &t) in self.values.iter().zip(&self.times) {
            for (&v, &b) in row.iter().zip(&self.fields) {
                if v > best.0 {
                    best = (v, t, b);
                }
            }
        }
        best
    }
}

fn check_field_axis(cfg: &SweepConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.axis != SweepAxis::BoundaryField {
        return Err(Error::Config(format!("axis {} is not boundary_field", cfg.axis)));
    }
    if cfg.base.protocol != Protocol::P2 {
        return Err(Error::Config("boundary-field scans apply to P2".into()));
    }
    if cfg.base.gamma != 0.0 {
        return Err(Error::Config("boundary-field scans run unitary dynamics; set gamma = 0".into()));
    }
    Ok(())
}

/// Evolves once per field in `cfg.grid` and records the negativity at every
/// output time.
pub fn scan_boundary_field(cfg: &SweepConfig) -> Result<FieldScan> {
    check_field_axis(cfg)?;
    let times = time_grid(cfg.t_max.unwrap_or_else(|| default_horizon(&cfg.base)), cfg.dt)?;
    let columns: Vec<Result<Vec<f64>>> = cfg
        .grid
        .par_iter()
        .map(|&b| {
            let spec = cfg.base.clone().with_boundary_field(b);
            let basis = Basis::Sector(spec.sector()?);
            let h = build_hamiltonian(&spec, &basis, None)?;
            let prop = UnitaryPropagator::new(&h)?;
            let amps = prop.amplitudes(&initial_state(&spec)?)?;
            let observer = ChainObserver::negativity_only(&basis)?;
            times
                .iter()
                .map(|&t| observer.negativity(&prop.state_at(&amps, t)))
                .collect()
        })
        .collect();
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    let values = (0..times.len())
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    Ok(FieldScan {
        times,
        fields: cfg.grid.clone(),
        values,
        config_hash: cfg.hash(),
    })
}

/// Best boundary field and its peak.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldOptimum {
    pub field: f64,
    pub peak: PeakRecord,
    /// Objective varied by less than 1e-6 over the coarse grid.
    pub flat: bool,
    /// Coarse scan as `(B, peak negativity)`.
    pub coarse: Vec<(f64, f64)>,
}

/// Coarse scan over `b_range` (at least [`MIN_COARSE_POINTS`] points, more
/// if `cfg.grid` is longer) followed by golden-section refinement of the
/// peak-over-time negativity. Ties go to the smaller field.
pub fn optimize_boundary_field(cfg: &SweepConfig, b_range: (f64, f64), tol: f64) -> Result<FieldOptimum> {
    check_field_axis(cfg)?;
    let (lo, hi) = b_range;
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::Config(format!("field range [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("field tolerance {tol} must be positive")));
    }
    let times = time_grid(cfg.t_max.unwrap_or_else(|| default_horizon(&cfg.base)), cfg.dt)?;
    let peak_at = |b: f64| -> Result<PeakRecord> {
        let spec = cfg.base.clone().with_boundary_field(b);
        Ok(unitary_peak(&spec, None, &times, false)?.0)
    };

    if hi == lo {
        let peak = peak_at(lo)?;
        return Ok(FieldOptimum {
            field: lo,
            peak,
            flat: false,
            coarse: vec![(lo, peak.value)],
        });
    }

    let n = DEFAULT_COARSE_POINTS.max(cfg.grid.len()).max(MIN_COARSE_POINTS);
    let fields: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let values: Vec<Result<f64>> = fields.par_iter().map(|&b| Ok(peak_at(b)?.value)).collect();
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let coarse: Vec<(f64, f64)> = fields.iter().copied().zip(values.iter().copied()).collect();

    let (vmin, vmax) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if vmax - vmin < FLAT_TOL {
        return Ok(FieldOptimum {
            field: lo,
            peak: peak_at(lo)?,
            flat: true,
            coarse,
        });
    }

    let mut k = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[k] {
            k = i;
        }
    }
    let a = fields[k.saturating_sub(1)];
    let b = fields[(k + 1).min(n - 1)];
    let (b_ref, v_ref) = golden_section_max(|x| Ok(peak_at(x)?.value), a, b, tol)?;
    let field = if v_ref > values[k] { b_ref } else { fields[k] };
    Ok(FieldOptimum {
        field,
        peak: peak_at(field)?,
        flat: false,
        coarse,
    })
}
