use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::rk::{self, StepControl};
use crate::dynamics::{Observables, QuantumState, Trajectory};
use crate::measures::{negativity, EndPairState};
use crate::qcore::{Basis, Spin};
use crate::{Error, Result, C64};

const RESONANCE_GUARD: f64 = 1e-9;

/// Bulk mode `k` of the single-excitation band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersiveMode {
    pub k: usize,
    /// `E_k = Ω + 2Δ cos(kπ/(N+1))`
    pub energy: f64,
    /// `λ̄_k = λ √(2/(N+1)) sin(kπ/(N+1))`
    pub coupling: f64,
    /// `ζ_k = ω - E_k`
    pub detuning: f64,
}

/// Boundary qubits coupled with strength `λ` to an `N`-site hopping chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersiveParams {
    pub n_chain: usize,
    pub delta_hop: f64,
    pub lambda_hop: f64,
    /// Boundary splitting `ω`.
    pub omega: f64,
    /// Bulk on-site energy `Ω`.
    pub big_omega: f64,
    pub modes: Vec<DispersiveMode>,
}

impl DispersiveParams {
    /// Builds the mode table in hopping units.
    pub fn new(n_chain: usize, delta_hop: f64, lambda_hop: f64, omega: f64, big_omega: f64) -> Result<Self> {
        if n_chain == 0 {
            return Err(Error::InvalidArgument("dispersive model needs N_chain >= 1".into()));
        }
        if ![delta_hop, lambda_hop, omega, big_omega].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("dispersive parameters must be finite".into()));
        }
        let np1 = (n_chain + 1) as f64;
        let norm = (2.0 / np1).sqrt();
        let mut modes = Vec::with_capacity(n_chain);
        for k in 1..=n_chain {
            let q = k as f64 * PI / np1;
            let energy = big_omega + 2.0 * delta_hop * q.cos();
            let detuning = omega - energy;
            if detuning.abs() <= RESONANCE_GUARD {
                return Err(Error::Resonance { mode: k, detuning });
            }
            modes.push(DispersiveMode {
                k,
                energy,
                coupling: lambda_hop * norm * q.sin(),
                detuning,
            });
        }
        Ok(DispersiveParams {
            n_chain,
            delta_hop,
            lambda_hop,
            omega,
            big_omega,
            modes,
        })
    }
}

/// Maps chain couplings to hopping units: `Δ_hop = fΔ`, `λ = fδ`, `ω = B`, `Ω = 0`.
///
/// The XX term `J(S^x S^x + S^y S^y)` hops a single excitation with
/// amplitude `J/2`, hence the default factor `f = 1/2`.
pub fn dispersive_params(n_chain: usize, big_delta: f64, delta: f64, b: f64, factor: f64) -> Result<DispersiveParams> {
    DispersiveParams::new(n_chain, factor * big_delta, factor * delta, b, 0.0)
}

/// A mode sum together with its terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSum {
    pub value: f64,
    pub contributions: Vec<f64>,
}

impl ModeSum {
    fn from_terms(contributions: Vec<f64>) -> Self {
        ModeSum {
            value: contributions.iter().sum(),
            contributions,
        }
    }
}

/// `χ = Σ_k λ̄_k² / ζ_k`.
pub fn chi(params: &DispersiveParams) -> ModeSum {
    ModeSum::from_terms(
        params
            .modes
            .iter()
            .map(|m| m.coupling * m.coupling / m.detuning)
            .collect(),
    )
}

/// Emitter-receiver exchange `Σ_k (-1)^(k-1) λ̄_k² / ζ_k`.
///
/// The receiver couples to mode `k` with the mode's parity at site N, so
/// the second-order exchange alternates in sign. For `N_chain = 1` this
/// equals [`chi`].
pub fn exchange_chi(params: &DispersiveParams) -> ModeSum {
    ModeSum::from_terms(
        params
            .modes
            .iter()
            .map(|m| {
                let sign = if m.k % 2 == 1 { 1.0 } else { -1.0 };
                sign * m.coupling * m.coupling / m.detuning
            })
            .collect(),
    )
}

/// Renormalized decay `Γ = γ Σ_k λ̄_k² / ζ_k²`.
pub fn gamma_eff(params: &DispersiveParams, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma = {gamma}")));
    }
    Ok(gamma
        * params
            .modes
            .iter()
            .map(|m| (m.coupling / m.detuning).powi(2))
            .sum::<f64>())
}

/// Leakage estimate `N (πδ / 2Δ)²`.
pub fn mean_bulk_excitation(n_chain: usize, delta: f64, big_delta: f64) -> Result<f64> {
    if !(big_delta > 0.0) {
        return Err(Error::InvalidArgument(format!("Delta = {big_delta}")));
    }
    Ok(n_chain as f64 * (PI * delta / (2.0 * big_delta)).powi(2))
}

/// `min_k |ζ_k| / λ̄_k` divided by `N_chain`; above 1 the second-order
/// description is trustworthy.
pub fn validity_margin(params: &DispersiveParams, n_chain: usize) -> f64 {
    let ratio = params
        .modes
        .iter()
        .map(|m| {
            if m.coupling == 0.0 {
                f64::INFINITY
            } else {
                m.detuning.abs() / m.coupling.abs()
            }
        })
        .fold(f64::INFINITY, f64::min);
    ratio / n_chain as f64
}

/// `π / (4|χ|)`, where the effective pair is maximally entangled.
pub fn entangling_time(chi: f64) -> Result<f64> {
    if chi == 0.0 || !chi.is_finite() {
        return Err(Error::InvalidArgument(format!("no entangling time for chi = {chi}")));
    }
    Ok(PI / (4.0 * chi.abs()))
}

/// Integrates the effective two-qubit master equation
///
/// ```text
/// dρ/dt = -i[χ(S⁺_e S⁻_r + S⁻_e S⁺_r), ρ] + Γ/2 Σ_j (2 S⁻_j ρ S⁺_j - {S⁺_j S⁻_j, ρ})
/// ```
///
/// on the pair indexed `l_e * 2 + l_r` (level 0 is the excited state).
pub fn evolve_effective_pair(chi: f64, big_gamma: f64, rho0: &DMatrix<C64>, times: &[f64]) -> Result<Trajectory> {
    if !(big_gamma >= 0.0 && big_gamma.is_finite()) || !chi.is_finite() {
        return Err(Error::InvalidArgument(format!("chi = {chi}, Gamma = {big_gamma}")));
    }
    let first = EndPairState::new(rho0.clone(), 2)?;
    let basis = Basis::full(2, Spin::HALF);
    QuantumState::density(basis.clone(), rho0.clone())?;
    if times.is_empty() || times[0] < 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("times must start at t >= 0 and increase strictly".into()));
    }

    let one = C64::new(1.0, 0.0);
    let mut lower_e = DMatrix::<C64>::zeros(4, 4);
    let mut lower_r = DMatrix::<C64>::zeros(4, 4);
    for le in 0..2 {
        for lr in 0..2 {
            // S⁻ moves level 0 -> level 1.
            if le == 0 {
                lower_e[(2 + lr, lr)] = one;
            }
            if lr == 0 {
                lower_r[(le * 2 + 1, le * 2)] = one;
            }
        }
    }
    let hop = &lower_e.adjoint() * &lower_r;
    let h = (&hop + hop.adjoint()) * C64::new(chi, 0.0);
    let jumps = [lower_e, lower_r];
    let number: Vec<DMatrix<C64>> = jumps.iter().map(|l| l.adjoint() * l).collect();
    let half_gamma = C64::new(0.5 * big_gamma, 0.0);
    let rhs = |_: f64, rho: &DMatrix<C64>| {
        let mut out = (&h * rho - rho * &h) * C64::new(0.0, -1.0);
        if big_gamma > 0.0 {
            for (l, nn) in jumps.iter().zip(&number) {
                let term = l * rho * l.adjoint() * C64::new(2.0, 0.0) - nn * rho - rho * nn;
                out += term * half_gamma;
            }
        }
        out
    };

    let ctl = StepControl {
        rtol: 1e-10,
        atol: 1e-12,
        max_rejections: 60,
    };
    let mut rho = rho0.clone();
    let mut t = 0.0;
    let mut step = 0.0;
    let mut records = Vec::with_capacity(times.len());
    let mut states = Vec::with_capacity(times.len());
    for &target in times {
        rho = rk::integrate(&rhs, &rho, t, target, &mut step, ctl)?;
        t = target;
        let pair = if t == 0.0 { first.clone() } else { EndPairState::new(rho.clone(), 2)? };
        records.push(Observables {
            negativity: negativity(&pair),
            fidelity: None,
            populations: None,
        });
        states.push(QuantumState::density(basis.clone(), rho.clone())?.at_time(t));
    }
    Ok(Trajectory {
        times: times.to_vec(),
        records,
        states: Some(states),
    })
}
