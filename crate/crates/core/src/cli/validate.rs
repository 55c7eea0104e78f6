use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::chain::{build_hamiltonian, ChainSpec, Protocol};
use crate::dynamics::{
    evolve_lindblad, evolve_unitary, LindbladOptions, LindbladPropagator, Observables, QuantumState, UnitaryPropagator,
};
use crate::linalg;
use crate::measures::{bell_psi_plus, negativity, raw_negativity, EndPairState};
use crate::qcore::{Basis, Operator, Spin};
use crate::{Result, C64};

/// Outcome of one analytic check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seconds: f64,
    pub note: Option<String>,
}

/// Deliberate defects for negative-control runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FaultInjection {
    pub flip_dissipator: bool,
}

fn blank(_: &QuantumState) -> Result<Observables> {
    Ok(Observables {
        negativity: 0.0,
        fidelity: None,
        populations: None,
    })
}

fn check(name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<f64>) -> CheckResult {
    let start = Instant::now();
    let (error, note) = match f() {
        Ok(e) => (e, None),
        Err(e) => (f64::INFINITY, Some(e.to_string())),
    };
    CheckResult {
        name,
        error,
        tolerance,
        passed: error <= tolerance,
        seconds: start.elapsed().as_secs_f64(),
        note,
    }
}

fn uniform_chain(n: usize, spin: Spin) -> ChainSpec {
    // P2 with Δ = δ = 1 is a uniform chain; fields make the sectors non-trivial.
    ChainSpec::new(Protocol::P2, n, spin)
        .with_couplings(1.0, 1.0)
        .with_boundary_field(0.7)
}

fn rabi() -> Result<f64> {
    let basis = Basis::full(2, Spin::HALF);
    let mut m = DMatrix::zeros(4, 4);
    let (a, b) = (basis.index_of(&[0, 1]).unwrap(), basis.index_of(&[1, 0]).unwrap());
    // J = 1 bond: <01|H|10> = J/2.
    m[(a, b)] = C64::new(0.5, 0.0);
    m[(b, a)] = C64::new(0.5, 0.0);
    let h = Operator::dense(basis.clone(), m)?;
    let psi0 = QuantumState::product(basis, &[0, 1])?;
    let prop = UnitaryPropagator::new(&h)?;
    let mut worst = 0.0f64;
    for k in 0..=100 {
        let t = 0.1 * k as f64;
        let p = prop.evolve(&psi0, t)?.as_pure().expect("pure")[b].norm_sqr();
        worst = worst.max((p - (t / 2.0).sin().powi(2)).abs());
    }
    Ok(worst)
}

fn single_qubit_dephasing(fault: FaultInjection) -> Result<f64> {
    let basis = Basis::full(1, Spin::HALF);
    let h = Operator::dense(basis.clone(), DMatrix::zeros(2, 2))?;
    let psi = DVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
    let rho0 = QuantumState::pure(basis, psi)?;
    let gamma = 0.8;
    let times: Vec<f64> = (0..=40).map(|k| 0.1 * k as f64).collect();
    let opts = LindbladOptions {
        keep_states: true,
        check_positivity: false,
        fault_flip_dissipator: fault.flip_dissipator,
        ..Default::default()
    };
    let traj = evolve_lindblad(&h, &rho0, gamma, &[1], &times, &blank, &opts)?;
    let c0 = rho0.to_density()[(0, 1)];
    let mut worst = 0.0f64;
    for (t, s) in times.iter().zip(traj.states.expect("kept")) {
        let expect = c0 * (-gamma * t / 2.0).exp();
        worst = worst.max((s.as_density().expect("density")[(0, 1)] - expect).norm());
    }
    Ok(worst)
}

fn werner() -> Result<f64> {
    let psi = bell_psi_plus();
    let mut worst = 0.0f64;
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let rho = (&psi * psi.adjoint()) * C64::new(p, 0.0) + DMatrix::identity(4, 4) * C64::new((1.0 - p) / 4.0, 0.0);
        let pair = EndPairState::new(rho, 2)?;
        let raw = ((3.0 * p - 1.0) / 4.0).max(0.0);
        worst = worst.max((raw_negativity(&pair) - raw).abs());
        worst = worst.max((negativity(&pair) - 2.0 * raw).abs());
    }
    Ok(worst)
}

fn sector_vs_full() -> Result<f64> {
    let mut worst = 0.0f64;
    for spin in [Spin::HALF, Spin::ONE] {
        for n in [3, 4] {
            let spec = uniform_chain(n, spin);
            let sector = Basis::Sector(spec.sector()?);
            let full = Basis::full(n, spin);
            let hs = build_hamiltonian(&spec, &sector, None)?;
            let hf = build_hamiltonian(&spec, &full, None)?;
            let levels = spec.initial_levels();
            let ps = UnitaryPropagator::new(&hs)?;
            let pf = UnitaryPropagator::new(&hf)?;
            let s0 = QuantumState::product(sector, &levels)?;
            let f0 = QuantumState::product(full, &levels)?;
            for t in [0.5, 3.0, 17.0] {
                let a = ps.evolve(&s0, t)?.to_full()?;
                let b = pf.evolve(&f0, t)?;
                let diff = a.as_pure().expect("pure") - b.as_pure().expect("pure");
                worst = worst.max(diff.camax());
            }
        }
    }
    Ok(worst)
}

fn p1_chain(gamma: f64) -> Result<(Operator, QuantumState, Vec<f64>)> {
    let spec = ChainSpec::new(Protocol::P1, 7, Spin::HALF).with_gamma(gamma);
    let basis = Basis::Sector(spec.sector()?);
    let h = build_hamiltonian(&spec, &basis, None)?;
    let psi0 = QuantumState::product(basis, &spec.initial_levels())?;
    let times: Vec<f64> = (0..=25).map(|k| k as f64).collect();
    Ok((h, psi0, times))
}

fn trace_drift() -> Result<f64> {
    let (h, psi0, times) = p1_chain(0.3)?;
    let opts = LindbladOptions {
        keep_states: true,
        ..Default::default()
    };
    let mask: Vec<usize> = (1..=7).collect();
    let l = evolve_lindblad(&h, &psi0, 0.3, &mask, &times, &blank, &opts)?;
    Ok(l.states
        .expect("kept")
        .iter()
        .map(|s| (s.norm_or_trace() - 1.0).abs())
        .fold(0.0, f64::max))
}

/// Schrödinger-picture Runge–Kutta at `γ = 0` against the eigenbasis
/// propagator, so the two sides share no code path.
fn lindblad_vs_unitary() -> Result<f64> {
    let (h, psi0, times) = p1_chain(0.0)?;
    let u = evolve_unitary(&h, &psi0, &times, &blank, true)?;
    let prop = LindbladPropagator::new(&h, 0.0, &[])?;
    let mut rho = psi0.to_density();
    let (mut t, mut step, mut worst) = (0.0, 0.0, 0.0f64);
    for (target, state) in times.iter().zip(u.states.expect("kept")) {
        rho = prop.advance_direct(&rho, t, *target, &mut step)?;
        t = *target;
        worst = worst.max(linalg::max_abs(&(&rho - state.to_density())));
    }
    Ok(worst)
}

/// Runs the analytic oracle suite.
pub fn validation_suite(fault: FaultInjection) -> Vec<CheckResult> {
    vec![
        check("two-site Rabi sin^2(t/2)", 1e-8, rabi),
        check("single-qubit dephasing e^(-gamma t/2)", 1e-6, || single_qubit_dephasing(fault)),
        check("Werner negativity closed form", 1e-9, werner),
        check("sector vs full evolution (N <= 4)", 1e-8, sector_vs_full),
        check("Lindblad trace drift", 1e-7, trace_drift),
        check("gamma = 0 Lindblad vs unitary", 1e-6, lindblad_vs_unitary),
    ]
}
