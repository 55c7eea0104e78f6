//! Parameter sweeps: disorder Monte Carlo, dephasing-rate scans and
//! boundary-field scans with optimization.
//!
//! Every result is a pure function of the [`SweepConfig`]. Realization `r` at
//! grid index `g` draws its disorder from a stream seeded by
//! `(master_seed, g, r)` (see [`crate::rng`]), and per-point statistics are
//! accumulated in realization order, so thread count and scheduling never
//! change the output.

mod config;
mod dephasing;
mod disorder;
mod field;
mod single;

pub use config::{SweepAxis, SweepConfig, SweepPoint, SweepResult};
pub use dephasing::run_dephasing_sweep;
pub use disorder::{run_disorder_sweep, MAX_EXCLUDED_FRACTION};
pub use field::{optimize_boundary_field, scan_boundary_field, FieldOptimum, FieldScan, MIN_COARSE_POINTS};
pub use single::{
    clean_peak, clean_run, default_horizon, evolve_to, lindblad_peak, run_with_disorder, unitary_peak, CleanRun, DEFAULT_DT,
    FALLBACK_HORIZON,
};

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mut s = CompensatedSum::default();
    values.iter().for_each(|&v| s.add(v));
    let mean = s.value() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut q = CompensatedSum::default();
    values.iter().for_each(|&v| q.add((v - mean) * (v - mean)));
    (mean, (q.value() / (values.len() - 1) as f64).sqrt())
}
