use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::{Error, Result};

/// Time tolerance of golden-section refinement.
pub const PEAK_TIME_TOL: f64 = 1e-3;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximum of the normalized negativity over a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakRecord {
    pub value: f64,
    pub time: f64,
    pub refined: bool,
}

/// Golden-section maximization of `f` on `[a, b]` down to width `tol`.
///
/// Returns the best point seen. Ties keep the earlier abscissa.
pub fn golden_section_max<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::InvalidArgument(format!("golden-section bracket [{a}, {b}]")));
    }
    let (mut lo, mut hi) = (a, b);
    let mut best = (f64::INFINITY, f64::NEG_INFINITY);
    let consider = |x: f64, v: f64, best: &mut (f64, f64)| {
        if v > best.1 || (v == best.1 && x < best.0) {
            *best = (x, v);
        }
    };
    if hi - lo <= tol {
        let x = 0.5 * (lo + hi);
        let v = f(x)?;
        consider(x, v, &mut best);
        return Ok(best);
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    consider(x1, f1, &mut best);
    consider(x2, f2, &mut best);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
            consider(x1, f1, &mut best);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
            consider(x2, f2, &mut best);
        }
    }
    Ok(best)
}

/// Peak of a sampled series, optionally refined between the neighbouring
/// grid points of the grid maximum.
pub fn peak_of_series(
    times: &[f64],
    values: &[f64],
    refine: Option<&mut dyn FnMut(f64) -> Result<f64>>,
) -> Result<PeakRecord> {
    if times.is_empty() || times.len() != values.len() {
        return Err(Error::InvalidArgument("peak search needs a non-empty series".into()));
    }
    let mut k = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[k] {
            k = i;
        }
    }
    let mut peak = PeakRecord {
        value: values[k],
        time: times[k],
        refined: false,
    };
    if let Some(f) = refine {
        let lo = times[k.saturating_sub(1)];
        let hi = times[(k + 1).min(times.len() - 1)];
        if hi > lo {
            let (t, v) = golden_section_max(|t| f(t), lo, hi, PEAK_TIME_TOL)?;
            if v > peak.value {
                peak.value = v;
                peak.time = t;
            }
        }
        peak.refined = true;
    }
    Ok(peak)
}

/// Peak normalized negativity of a trajectory.
pub fn peak_scan(traj: &Trajectory, refine: Option<&mut dyn FnMut(f64) -> Result<f64>>) -> Result<PeakRecord> {
    if traj.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    peak_of_series(&traj.times, &traj.negativity(), refine)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_peaks_at_start() {
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.1).collect();
        let values = vec![0.4; 10];
        let mut f = |_: f64| Ok(0.4);
        let p = peak_of_series(&times, &values, Some(&mut f)).unwrap();
        assert_eq!(p.time, 0.0);
        assert_eq!(p.value, 0.4);
    }

    #[test]
    fn sin_squared_refines_to_half_pi() {
        let times: Vec<f64> = (0..=30).map(|k| k as f64 * 0.1).collect();
        let values: Vec<f64> = times.iter().map(|t| t.sin().powi(2)).collect();
        let mut f = |t: f64| Ok(t.sin().powi(2));
        let p = peak_of_series(&times, &values, Some(&mut f)).unwrap();
        assert!((p.time - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
        assert!(p.refined);
        assert!(p.value >= values.iter().cloned().fold(0.0, f64::max));
    }

    #[test]
    fn empty_rejected() {
        assert!(peak_of_series(&[], &[], None).is_err());
    }
}
