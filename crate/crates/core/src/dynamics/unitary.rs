use nalgebra::{DMatrix, DVector};

use super::state::{check_times, Observer, QuantumState, Trajectory};
use crate::linalg;
use crate::qcore::{Basis, Operator};
use crate::{Error, Result, C64};

const HERMITIAN_TOL: f64 = 1e-12;

/// `exp(-iHt)` through the eigendecomposition of `H`.
#[derive(Clone, Debug)]
pub struct UnitaryPropagator {
    basis: Basis,
    energies: Vec<f64>,
    modes: DMatrix<C64>,
}

impl UnitaryPropagator {
    pub fn new(h: &Operator) -> Result<Self> {
        let deviation = h.hermitian_deviation();
        if deviation >= HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let (energies, modes) = linalg::eigh(&h.to_dense());
        Ok(UnitaryPropagator {
            basis: h.basis().clone(),
            energies,
            modes,
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Eigenbasis amplitudes `V^dagger ψ0` of a pure state.
    pub fn amplitudes(&self, psi0: &QuantumState) -> Result<DVector<C64>> {
        if psi0.basis() != &self.basis {
            return Err(Error::BasisMismatch(format!(
                "state basis {:?} vs Hamiltonian basis {:?}",
                psi0.basis(),
                self.basis
            )));
        }
        let psi = psi0
            .as_pure()
            .ok_or_else(|| Error::InvalidState("unitary propagation needs a pure state".into()))?;
        Ok(self.modes.adjoint() * psi)
    }

    /// `ψ(t)` from eigenbasis amplitudes.
    pub fn vector_at(&self, amplitudes: &DVector<C64>, t: f64) -> DVector<C64> {
        let phased = DVector::from_iterator(
            amplitudes.len(),
            amplitudes
                .iter()
                .zip(&self.energies)
                .map(|(c, &e)| c * C64::from_polar(1.0, -e * t)),
        );
        &self.modes * phased
    }

    pub fn state_at(&self, amplitudes: &DVector<C64>, t: f64) -> QuantumState {
        QuantumState::pure_unchecked(self.basis.clone(), self.vector_at(amplitudes, t)).at_time(t)
    }

    pub fn evolve(&self, psi0: &QuantumState, t: f64) -> Result<QuantumState> {
        let c = self.amplitudes(psi0)?;
        Ok(self.state_at(&c, t))
    }
}

/// Evolves `psi0` under `h` and records `observer` at every time.
pub fn evolve_unitary(
    h: &Operator,
    psi0: &QuantumState,
    times: &[f64],
    observer: &dyn Observer,
    keep_states: bool,
) -> Result<Trajectory> {
    check_times(times)?;
    let prop = UnitaryPropagator::new(h)?;
    let amplitudes = prop.amplitudes(psi0)?;
    let mut records = Vec::with_capacity(times.len());
    let mut states = keep_states.then(|| Vec::with_capacity(times.len()));
    for &t in times {
        let state = if t == 0.0 {
            psi0.clone().at_time(0.0)
        } else {
            prop.state_at(&amplitudes, t)
        };
        records.push(observer.observe(&state)?);
        if let Some(states) = states.as_mut() {
            states.push(state);
        }
    }
    Ok(Trajectory {
        times: times.to_vec(),
        records,
        states,
    })
}
