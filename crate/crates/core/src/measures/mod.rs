//! Observables of the end pair and the chain: reduced end-pair state,
//! normalized negativity, Uhlmann fidelity, excitation populations and peak
//! detection.
//!
//! The negativity is normalized by `(d-1)/2`, its value on a maximally
//! entangled pair of `d`-level sites, so every spin reaches 1 at most.

mod fidelity;
mod observer;
mod pair;
mod peak;

pub use fidelity::{fidelity, fidelity_pure};
pub use observer::{populations, ChainObserver};
pub use pair::{bell_psi_plus, negativity, raw_negativity, reduce_end_pair, rz_correct, EndPairMap, EndPairState};
pub use peak::{golden_section_max, peak_of_series, peak_scan, PeakRecord, PEAK_TIME_TOL};
