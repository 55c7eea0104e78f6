use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::qcore::Basis;
use crate::{Error, Result, C64};

const PURE_NORM_TOL: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-7;
const HERMITIAN_TOL: f64 = 1e-9;
const POSITIVITY_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub enum StateData {
    Pure(DVector<C64>),
    Density(DMatrix<C64>),
}

/// A pure state or density matrix tagged with its basis and time.
#[derive(Clone, Debug)]
pub struct QuantumState {
    data: StateData,
    basis: Basis,
    time: f64,
}

impl QuantumState {
    pub fn pure(basis: Basis, psi: DVector<C64>) -> Result<Self> {
        if psi.len() != basis.dim() {
            return Err(Error::ShapeMismatch(format!(
                "state of length {} for basis of dimension {}",
                psi.len(),
                basis.dim()
            )));
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::InvalidState(format!("|psi| = {norm}")));
        }
        Ok(QuantumState {
            data: StateData::Pure(psi),
            basis,
            time: 0.0,
        })
    }

    /// Validated density matrix: unit trace, Hermitian, positive to -1e-7.
    pub fn density(basis: Basis, rho: DMatrix<C64>) -> Result<Self> {
        if rho.nrows() != basis.dim() || rho.ncols() != basis.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} density matrix for basis of dimension {}",
                rho.nrows(),
                rho.ncols(),
                basis.dim()
            )));
        }
        let tr = linalg::trace(&rho);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let herm = linalg::hermitian_deviation(&rho);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:.3e})")));
        }
        let min = linalg::eigvalsh(&rho).first().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self::density_unchecked(basis, rho))
    }

    pub(crate) fn density_unchecked(basis: Basis, rho: DMatrix<C64>) -> Self {
        QuantumState {
            data: StateData::Density(rho),
            basis,
            time: 0.0,
        }
    }

    pub(crate) fn pure_unchecked(basis: Basis, psi: DVector<C64>) -> Self {
        QuantumState {
            data: StateData::Pure(psi),
            basis,
            time: 0.0,
        }
    }

    /// Product state with the given local levels.
    pub fn product(basis: Basis, levels: &[u8]) -> Result<Self> {
        let idx = basis
            .index_of(levels)
            .ok_or_else(|| Error::InvalidState(format!("levels {levels:?} not in basis {basis:?}")))?;
        let mut psi = DVector::zeros(basis.dim());
        psi[idx] = C64::new(1.0, 0.0);
        Self::pure(basis, psi)
    }

    pub fn at_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn data(&self) -> &StateData {
        &self.data
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.data, StateData::Pure(_))
    }

    pub fn as_pure(&self) -> Option<&DVector<C64>> {
        match &self.data {
            StateData::Pure(v) => Some(v),
            StateData::Density(_) => None,
        }
    }

    pub fn as_density(&self) -> Option<&DMatrix<C64>> {
        match &self.data {
            StateData::Density(m) => Some(m),
            StateData::Pure(_) => None,
        }
    }

    /// `ρ` for either representation.
    pub fn to_density(&self) -> DMatrix<C64> {
        match &self.data {
            StateData::Pure(v) => v * v.adjoint(),
            StateData::Density(m) => m.clone(),
        }
    }

    pub fn into_density_state(self) -> QuantumState {
        let rho = self.to_density();
        QuantumState {
            data: StateData::Density(rho),
            basis: self.basis,
            time: self.time,
        }
    }

    /// `‖ψ‖` for pure states, `Re tr ρ` for density matrices.
    pub fn norm_or_trace(&self) -> f64 {
        match &self.data {
            StateData::Pure(v) => v.norm(),
            StateData::Density(m) => linalg::trace(m).re,
        }
    }

    /// Occupation probabilities of the basis states.
    pub fn probabilities(&self) -> Vec<f64> {
        match &self.data {
            StateData::Pure(v) => v.iter().map(|z| z.norm_sqr()).collect(),
            StateData::Density(m) => (0..m.nrows()).map(|i| m[(i, i)].re).collect(),
        }
    }

    /// Expectation value of an operator diagonal in this basis.
    pub fn expectation_diagonal(&self, diag: &[f64]) -> f64 {
        self.probabilities().iter().zip(diag).map(|(p, d)| p * d).sum()
    }

    /// Embeds a sector-supported state into the full product space.
    pub fn to_full(&self) -> Result<QuantumState> {
        let Basis::Sector(sector) = &self.basis else {
            return Ok(self.clone());
        };
        let full = Basis::full(sector.n(), sector.spin());
        let dim = full.dim();
        let place = |i: usize| sector.full_index(i) as usize;
        let data = match &self.data {
            StateData::Pure(v) => {
                let mut out = DVector::zeros(dim);
                for (i, z) in v.iter().enumerate() {
                    out[place(i)] = *z;
                }
                StateData::Pure(out)
            }
            StateData::Density(m) => {
                let mut out = DMatrix::zeros(dim, dim);
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        out[(place(i), place(j))] = m[(i, j)];
                    }
                }
                StateData::Density(out)
            }
        };
        Ok(QuantumState {
            data,
            basis: full,
            time: self.time,
        })
    }
}

/// Per-site quanta `n_i = <S_i^z> + s` and their bulk sum over sites 2..N-1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Populations {
    pub per_site: Vec<f64>,
    pub bulk: f64,
}

/// Observables recorded at one output time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// Normalized end-to-end negativity.
    pub negativity: f64,
    pub fidelity: Option<f64>,
    pub populations: Option<Populations>,
}

/// Turns a state into an observable record.
pub trait Observer {
    fn observe(&self, state: &QuantumState) -> Result<Observables>;
}

impl<F> Observer for F
where
    F: Fn(&QuantumState) -> Result<Observables>,
{
    fn observe(&self, state: &QuantumState) -> Result<Observables> {
        self(state)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub records: Vec<Observables>,
    pub states: Option<Vec<QuantumState>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn negativity(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.negativity).collect()
    }

    /// Largest bulk population over the run, if populations were recorded.
    pub fn max_bulk_population(&self) -> Option<f64> {
        self.records
            .iter()
            .map(|r| r.populations.as_ref().map(|p| p.bulk))
            .try_fold(f64::NEG_INFINITY, |acc, b| b.map(|b| acc.max(b)))
    }
}

/// `0, dt, 2dt, ...` up to `t_max` (inclusive when it lands on the grid).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("time grid t_max = {t_max}, dt = {dt}")));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if times[0] < 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "times must start at t >= 0 and increase strictly".into(),
        ));
    }
    Ok(())
}
