//! Reduced models for cross-checking the full simulations.
//!
//! * Dispersive regime: boundary qubits detuned from every bulk mode couple
//!   through virtual excitations with strength `χ`; dephasing is renormalized
//!   to `Γ`.
//! * Trimer: the strongly dimerized P1 chain reduces to three sites coupled
//!   by `η`.
//!
//! Chain couplings are converted to single-excitation hopping amplitudes by
//! a convention factor, `1/2` by default ([`HOPPING_FACTOR`]).

mod dispersive;
mod trimer;

pub use dispersive::{
    chi, dispersive_params, entangling_time, evolve_effective_pair, exchange_chi, gamma_eff,
    mean_bulk_excitation, validity_margin, DispersiveMode, DispersiveParams, ModeSum,
};
pub use trimer::{trimer_basis, trimer_eta, trimer_evolve, TrimerParams};

/// Hopping amplitude per unit XX coupling.
pub const HOPPING_FACTOR: f64 = 0.5;
