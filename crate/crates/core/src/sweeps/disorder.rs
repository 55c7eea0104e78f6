use rayon::prelude::*;

use super::config::{SweepConfig, SweepPoint, SweepResult};
use super::single::{clean_peak, default_horizon, unitary_peak};
use super::mean_std;
use crate::chain::{draw_disorder, Disorder};
use crate::dynamics::time_grid;
use crate::measures::PeakRecord;
use crate::{rng, Error, Result};

/// Largest tolerated fraction of failed realizations per grid point.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.01;

/// Monte Carlo over static disorder.
///
/// Every realization draws site offsets for the configured diagonal sites
/// followed by `N-1` bond offsets from its own stream; the axis decides
/// which of them enter the Hamiltonian. Without an explicit `t_max` the
/// horizon is twice the clean peak time.
pub fn run_disorder_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let mode = cfg
        .axis
        .disorder_mode()
        .ok_or_else(|| Error::Config(format!("axis {} is not a disorder axis", cfg.axis)))?;
    let spec = &cfg.base;
    if spec.gamma != 0.0 {
        return Err(Error::Config("disorder sweeps run unitary dynamics; set gamma = 0".into()));
    }
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => 2.0 * clean_peak(spec, default_horizon(spec), cfg.dt)?.time,
    };
    let times = time_grid(t_max, cfg.dt)?;
    let n_diag = cfg.diag_sites.sites(spec.n)?.len();
    let n_bonds = spec.n - 1;
    let reps = cfg.effective_realizations();

    let jobs: Vec<(usize, usize)> = (0..cfg.grid.len())
        .flat_map(|g| (0..reps).map(move |r| (g, r)))
        .collect();
    let outcomes: Vec<Result<(PeakRecord, Option<f64>)>> = jobs
        .par_iter()
        .map(|&(g, r)| {
            let seed = rng::stream_seed(cfg.master_seed, g as u64, r as u64);
            let realization = draw_disorder(seed, cfg.grid[g], n_diag, n_bonds)?;
            let disorder = Disorder::new(mode, realization).with_diag_sites(cfg.diag_sites.clone());
            unitary_peak(spec, Some(&disorder), &times, cfg.record_bulk)
        })
        .collect();

    let mut points = Vec::with_capacity(cfg.grid.len());
    for (g, chunk) in outcomes.chunks(reps).enumerate() {
        let mut values = Vec::with_capacity(reps);
        let mut peak_times = Vec::with_capacity(reps);
        let mut max_bulk: Option<f64> = None;
        let mut excluded = 0;
        let mut first_error = None;
        for outcome in chunk {
            match outcome {
                Ok((peak, bulk)) => {
                    values.push(peak.value);
                    peak_times.push(peak.time);
                    if let Some(b) = bulk {
                        max_bulk = Some(max_bulk.map_or(*b, |m: f64| m.max(*b)));
                    }
                }
                Err(e) => {
                    excluded += 1;
                    first_error.get_or_insert_with(|| e.to_string());
                }
            }
        }
        if excluded as f64 > MAX_EXCLUDED_FRACTION * reps as f64 {
            return Err(Error::TooManyFailures {
                point: cfg.grid[g],
                excluded,
                requested: reps,
                first: first_error.unwrap_or_default(),
            });
        }
        let (mean_peak, std_peak) = mean_std(&values);
        let (mean_peak_time, _) = mean_std(&peak_times);
        points.push(SweepPoint {
            axis_value: cfg.grid[g],
            mean_peak,
            std_peak: if cfg.grid[g] == 0.0 { 0.0 } else { std_peak },
            count: values.len(),
            excluded,
            mean_peak_time,
            max_bulk,
        });
    }
    Ok(SweepResult {
        axis: cfg.axis,
        points,
        master_seed: cfg.master_seed,
        config_hash: cfg.hash(),
    })
}
