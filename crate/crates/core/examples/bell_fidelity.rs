//! End-pair state at the negativity peak for s = 1/2.
//!
//! P1 lands on |ψ+⟩ directly; P2 needs an R_z(−π/2) phase on the last site.

use spinlab::prelude::*;
use spinlab::sweeps::{clean_peak, evolve_to};

fn main() -> Result<()> {
    let p1 = ChainSpec::new(Protocol::P1, 7, Spin::HALF);
    let p2 = ChainSpec::new(Protocol::P2, 7, Spin::HALF).with_boundary_field(3.39);
    for spec in [p1, p2] {
        let peak = clean_peak(&spec, 30.0, 0.02)?;
        let state = evolve_to(&spec, None, peak.time)?;
        let observer = ChainObserver::for_spec(&spec)?;
        let pair = observer.end_pair(&state)?;
        let raw = observer.pair_fidelity(&pair, None)?;
        let corrected = observer.pair_fidelity(&pair, Some(-std::f64::consts::FRAC_PI_2))?;
        println!(
            "{}: peak {:.5} at t = {:.3}; F(ψ+) = {:.5}, after R_z(-π/2) = {:.5}",
            spec.protocol, peak.value, peak.time, raw, corrected
        );
    }
    Ok(())
}
