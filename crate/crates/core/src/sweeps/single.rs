use nalgebra::DMatrix;

use crate::chain::{build_hamiltonian, initial_state, ChainSpec, Disorder, Protocol};
use crate::dynamics::{
    evolve_lindblad, evolve_unitary, LindbladOptions, LindbladPropagator, Observer, QuantumState, Trajectory,
    UnitaryPropagator,
};
use crate::effective::{trimer_eta, HOPPING_FACTOR};
use crate::measures::{peak_of_series, peak_scan, populations, ChainObserver, PeakRecord};
use crate::qcore::Basis;
use crate::{Result, C64};

/// Fallback horizon when no entangling-time estimate exists.
pub const FALLBACK_HORIZON: f64 = 60.0;

/// Default output spacing.
pub const DEFAULT_DT: f64 = 0.02;

/// Peak-search horizon: four times the trimer estimate for P1, otherwise
/// [`FALLBACK_HORIZON`] (both in `1/δ`).
pub fn default_horizon(spec: &ChainSpec) -> f64 {
    if spec.protocol == Protocol::P1 {
        if let Ok(t) = trimer_eta(spec.strong, spec.weak, HOPPING_FACTOR) {
            if t.t_e.is_finite() {
                return (4.0 * t.t_e).max(FALLBACK_HORIZON / spec.weak);
            }
        }
    }
    FALLBACK_HORIZON / spec.weak
}

/// Full trajectory and refined peak of one clean or dephased run.
#[derive(Clone, Debug)]
pub struct CleanRun {
    pub spec: ChainSpec,
    pub trajectory: Trajectory,
    pub peak: PeakRecord,
}

/// Evolves `spec` (unitary when `γ = 0`, Lindblad otherwise) recording
/// negativity, populations and, for s = 1/2, fidelity to `|ψ+>`.
pub fn clean_run(spec: &ChainSpec, t_max: f64, dt: f64) -> Result<CleanRun> {
    run_with_disorder(spec, None, t_max, dt)
}

pub fn run_with_disorder(spec: &ChainSpec, disorder: Option<&Disorder>, t_max: f64, dt: f64) -> Result<CleanRun> {
    let times = crate::dynamics::time_grid(t_max, dt)?;
    let h = build_hamiltonian(spec, &Basis::Sector(spec.sector()?), disorder)?;
    let psi0 = initial_state(spec)?;
    let observer = ChainObserver::for_spec(spec)?;
    if spec.gamma == 0.0 {
        let trajectory = evolve_unitary(&h, &psi0, &times, &observer, false)?;
        let prop = UnitaryPropagator::new(&h)?;
        let amps = prop.amplitudes(&psi0)?;
        let mut refine = |t: f64| observer.negativity(&prop.state_at(&amps, t));
        let peak = peak_scan(&trajectory, Some(&mut refine))?;
        Ok(CleanRun {
            spec: spec.clone(),
            trajectory,
            peak,
        })
    } else {
        let mask = spec.dephasing_sites.sites(spec.n)?;
        let opts = LindbladOptions {
            keep_states: true,
            ..Default::default()
        };
        let mut trajectory = evolve_lindblad(&h, &psi0, spec.gamma, &mask, &times, &observer, &opts)?;
        let states = trajectory.states.take().unwrap_or_default();
        let prop = LindbladPropagator::with_options(&h, spec.gamma, &mask, &opts)?;
        let k = argmax(&trajectory.negativity());
        let start = k.saturating_sub(1);
        let (t0, rho0) = (times[start], states[start].to_density());
        let basis = h.basis().clone();
        let mut refine = |t: f64| {
            let mut step = 0.0;
            let rho = prop.advance(&rho0, t0, t, &mut step)?;
            observer.negativity(&QuantumState::density_unchecked(basis.clone(), rho))
        };
        let peak = peak_scan(&trajectory, Some(&mut refine))?;
        Ok(CleanRun {
            spec: spec.clone(),
            trajectory,
            peak,
        })
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut k = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[k] {
            k = i;
        }
    }
    k
}

/// Peak negativity and, when `track_bulk`, the largest bulk population of a
/// unitary run. Only the negativity is evaluated at each grid time.
pub fn unitary_peak(
    spec: &ChainSpec,
    disorder: Option<&Disorder>,
    times: &[f64],
    track_bulk: bool,
) -> Result<(PeakRecord, Option<f64>)> {
    let basis = Basis::Sector(spec.sector()?);
    let h = build_hamiltonian(spec, &basis, disorder)?;
    let psi0 = initial_state(spec)?;
    let observer = ChainObserver::negativity_only(&basis)?;
    let prop = UnitaryPropagator::new(&h)?;
    let amps = prop.amplitudes(&psi0)?;
    let mut values = Vec::with_capacity(times.len());
    let mut max_bulk = f64::NEG_INFINITY;
    for &t in times {
        let state = prop.state_at(&amps, t);
        values.push(observer.negativity(&state)?);
        if track_bulk {
            max_bulk = max_bulk.max(populations(&state).bulk);
        }
    }
    let mut refine = |t: f64| observer.negativity(&prop.state_at(&amps, t));
    let peak = peak_of_series(times, &values, Some(&mut refine))?;
    Ok((peak, track_bulk.then_some(max_bulk)))
}

/// Dephased counterpart of [`unitary_peak`]; steps the master equation
/// through `times`, keeping the state just before the running maximum for
/// refinement.
pub fn lindblad_peak(spec: &ChainSpec, times: &[f64], track_bulk: bool) -> Result<(PeakRecord, Option<f64>)> {
    let basis = Basis::Sector(spec.sector()?);
    let h = build_hamiltonian(spec, &basis, None)?;
    let mask = spec.dephasing_sites.sites(spec.n)?;
    let opts = LindbladOptions::default();
    let prop = LindbladPropagator::with_options(&h, spec.gamma, &mask, &opts)?;
    let observer = ChainObserver::negativity_only(&basis)?;
    let mut rho = initial_state(spec)?.to_density();
    let mut t = times[0];
    if t > 0.0 {
        let mut step = 0.0;
        rho = prop.advance(&rho, 0.0, t, &mut step)?;
    }
    let mut step = 0.0;
    let mut values = Vec::with_capacity(times.len());
    let mut max_bulk = f64::NEG_INFINITY;
    let mut best = f64::NEG_INFINITY;
    let mut prev: (f64, DMatrix<C64>) = (t, rho.clone());
    let mut bracket_start = prev.clone();
    for &target in times {
        if target > t {
            let next = prop.advance(&rho, t, target, &mut step)?;
            prev = (t, std::mem::replace(&mut rho, next));
            t = target;
        }
        crate::dynamics::check_positivity(&rho, t, opts.positivity_tol)?;
        let state = QuantumState::density_unchecked(basis.clone(), rho.clone());
        let obs = observer.observe(&state)?;
        if obs.negativity > best {
            best = obs.negativity;
            bracket_start = prev.clone();
        }
        values.push(obs.negativity);
        if track_bulk {
            max_bulk = max_bulk.max(populations(&state).bulk);
        }
    }
    let (t0, rho0) = bracket_start;
    let mut refine = |tt: f64| {
        let mut h_step = 0.0;
        let r = prop.advance(&rho0, t0, tt, &mut h_step)?;
        observer.negativity(&QuantumState::density_unchecked(basis.clone(), r))
    };
    let peak = peak_of_series(times, &values, Some(&mut refine))?;
    Ok((peak, track_bulk.then_some(max_bulk)))
}

/// Refined peak of a clean chain within `t_max` on a `dt` grid.
pub fn clean_peak(spec: &ChainSpec, t_max: f64, dt: f64) -> Result<PeakRecord> {
    let times = crate::dynamics::time_grid(t_max, dt)?;
    if spec.gamma == 0.0 {
        Ok(unitary_peak(spec, None, &times, false)?.0)
    } else {
        Ok(lindblad_peak(spec, &times, false)?.0)
    }
}

/// State of `spec` at time `t` (unitary when `γ = 0`).
pub fn evolve_to(spec: &ChainSpec, disorder: Option<&Disorder>, t: f64) -> Result<QuantumState> {
    let basis = Basis::Sector(spec.sector()?);
    let h = build_hamiltonian(spec, &basis, disorder)?;
    let psi0 = initial_state(spec)?;
    if spec.gamma == 0.0 {
        return UnitaryPropagator::new(&h)?.evolve(&psi0, t);
    }
    let mask = spec.dephasing_sites.sites(spec.n)?;
    let prop = LindbladPropagator::new(&h, spec.gamma, &mask)?;
    let mut step = 0.0;
    let rho = prop.advance(&psi0.to_density(), 0.0, t, &mut step)?;
    Ok(QuantumState::density_unchecked(basis, rho).at_time(t))
}
