//! Entanglement generation in finite spin-s XX chains.
//!
//! `spinlab` simulates two protocols for building end-to-end entanglement in a
//! chain of `N` spins:
//!
//! * **P1**, a staggered chain of strong (`Δ`) and weak (`δ`) bonds started with
//!   both end spins flipped, and
//! * **P2**, a dual-port chain with weak end bonds, a uniform strong bulk and
//!   tuned boundary fields, started with only the sender flipped.
//!
//! The crate is organised bottom-up:
//!
//! | module | contents |
//! |---|---|
//! | [`qcore`] | spin matrices, tensor embedding, magnetization sectors |
//! | [`chain`] | chain specs, couplings, Hamiltonians, initial states, disorder |
//! | [`dynamics`] | exact unitary propagation and Lindblad dephasing |
//! | [`measures`] | end-pair reduction, negativity, fidelity, populations, peaks |
//! | [`effective`] | dispersive and trimer reduced models |
//! | [`sweeps`] | disorder Monte Carlo, dephasing sweeps, boundary-field scans |
//! | [`cli`] | config files, CSV/JSON writers and the `spinlab` command |
//!
//! Energies are measured in units of the weak coupling `δ` and times in `1/δ`.
//! Every Hamiltonian conserves total `S^z`, so all dynamics run inside the
//! magnetization sector of the initial state.
//!
//! ```no_run
//! use spinlab::prelude::*;
//!
//! let spec = ChainSpec::new(Protocol::P1, 7, Spin::HALF);
//! let run = spinlab::sweeps::clean_run(&spec, 40.0, 0.02).unwrap();
//! println!("peak {:.3} at t = {:.2}", run.peak.value, run.peak.time);
//! ```

pub mod chain;
pub mod cli;
pub mod dynamics;
pub mod effective;
mod error;
pub mod linalg;
pub mod measures;
pub mod qcore;
pub mod rng;
pub mod sweeps;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

pub mod prelude {
    pub use crate::chain::{
        build_hamiltonian, coupling_pattern, draw_disorder, initial_state, ChainSpec,
        Disorder, DisorderMode, DisorderRealization, Protocol, SiteMask,
    };
    pub use crate::dynamics::{
        evolve_lindblad, evolve_unitary, time_grid, LindbladOptions, Observables, QuantumState,
        Trajectory, UnitaryPropagator,
    };
    pub use crate::measures::{
        fidelity, negativity, peak_scan, populations, reduce_end_pair, rz_correct, ChainObserver,
        EndPairState, PeakRecord,
    };
    pub use crate::qcore::{Basis, Operator, SectorBasis, Spin};
    pub use crate::sweeps::{SweepAxis, SweepConfig, SweepResult};
    pub use crate::{Error, Result, C64};
}
