use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_unitary, QuantumState, Trajectory};
use crate::measures::ChainObserver;
use crate::qcore::{sector_basis, Basis, Operator, Spin};
use crate::{Error, Result, C64};

/// Three-site reduction A-B-C of the strongly dimerized P1 chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrimerParams {
    pub delta_hop: f64,
    pub small_delta_hop: f64,
    pub eta: f64,
    /// First entanglement peak `π / (2√2 η)`.
    pub t_e: f64,
    /// Full transfer `2 t_E`.
    pub t_f: f64,
}

impl TrimerParams {
    /// True when `η = 0` and both times are infinite.
    pub fn is_degenerate(&self) -> bool {
        self.eta == 0.0
    }
}

/// `η = (Δ'/2) √(1 + 3x² - √(1 + 6x² + x⁴))` with `x = δ'/Δ'` and primes
/// denoting the convention factor applied.
pub fn trimer_eta(big_delta: f64, delta: f64, factor: f64) -> Result<TrimerParams> {
    if !(big_delta > 0.0 && big_delta.is_finite()) || !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("Delta = {big_delta}, delta = {delta}")));
    }
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::InvalidArgument(format!("convention factor {factor}")));
    }
    let big = factor * big_delta;
    let small = factor * delta;
    let x2 = (small / big).powi(2);
    // 1 + 3x² - √(1 + 6x² + x⁴), rationalized to avoid cancellation.
    let inner = 8.0 * x2 * x2 / (1.0 + 3.0 * x2 + (1.0 + 6.0 * x2 + x2 * x2).sqrt());
    let eta = 0.5 * big * inner.sqrt();
    let t_e = if eta > 0.0 {
        PI / (2.0 * std::f64::consts::SQRT_2 * eta)
    } else {
        f64::INFINITY
    };
    Ok(TrimerParams {
        delta_hop: big,
        small_delta_hop: small,
        eta,
        t_e,
        t_f: 2.0 * t_e,
    })
}

/// Single-excitation sector of three spin-1/2 sites, ordered A, B, C.
pub fn trimer_basis() -> Result<Basis> {
    Ok(Basis::Sector(sector_basis(3, Spin::HALF, -1)?))
}

/// Exact evolution under `[[0,η,0],[η,0,η],[0,η,0]]`.
///
/// Records the A–C negativity and site populations (`per_site[2]` is the
/// probability of finding the excitation on C).
pub fn trimer_evolve(eta: f64, psi0: &DVector<C64>, times: &[f64]) -> Result<Trajectory> {
    if psi0.len() != 3 {
        return Err(Error::ShapeMismatch(format!("trimer state of length {}", psi0.len())));
    }
    let basis = trimer_basis()?;
    let e = C64::new(eta, 0.0);
    let z = C64::new(0.0, 0.0);
    let h = Operator::dense(basis.clone(), DMatrix::from_row_slice(3, 3, &[z, e, z, e, z, e, z, e, z]))?;
    let state = QuantumState::pure(basis.clone(), psi0.clone())?;
    let observer = ChainObserver::negativity_only(&basis)?.with_populations(true);
    evolve_unitary(&h, &state, times, &observer, true)
}
