//! Time evolution of pure states and density matrices.
//!
//! Pure states evolve exactly through the eigendecomposition of the
//! (sector-blocked) Hamiltonian. Density matrices follow the dephasing master
//! equation
//!
//! ```text
//! dρ/dt = -i[H, ρ] + γ Σ_j (S_j^z ρ S_j^z - ½{(S_j^z)², ρ})
//! ```
//!
//! integrated with an adaptive Dormand–Prince 5(4) scheme.

mod lindblad;
pub(crate) mod rk;
mod state;
mod unitary;

pub use lindblad::{dephasing_rates, evolve_lindblad, lindblad_rhs, LindbladOptions, LindbladPropagator};
pub use state::{time_grid, Observables, Observer, Populations, QuantumState, StateData, Trajectory};
pub use unitary::{evolve_unitary, UnitaryPropagator};

pub(crate) use lindblad::check_positivity;
