//! Trimer and dispersive effective descriptions against full simulations.

use spinlab::effective::{
    chi, dispersive_params, entangling_time, exchange_chi, mean_bulk_excitation, trimer_eta,
    validity_margin, HOPPING_FACTOR,
};
use spinlab::prelude::*;
use spinlab::sweeps::clean_peak;

fn main() -> Result<()> {
    let trimer = trimer_eta(10.0, 1.0, HOPPING_FACTOR)?;
    let p1 = clean_peak(&ChainSpec::new(Protocol::P1, 7, Spin::HALF), 40.0, 0.02)?;
    println!(
        "trimer: eta = {:.6}, t_E = {:.3}; full P1 peak at t = {:.3}",
        trimer.eta, trimer.t_e, p1.time
    );
    println!("P2 bulk excitation estimate (N_chain = 5): {:.4}", mean_bulk_excitation(5, 1.0, 10.0)?);

    let (big_delta, b) = (20.0, 18.0);
    let params = dispersive_params(3, big_delta, 1.0, b, HOPPING_FACTOR)?;
    for m in &params.modes {
        println!(
            "  mode {}: E = {:>8.4}, coupling = {:.4}, detuning = {:>8.4}",
            m.k, m.energy, m.coupling, m.detuning
        );
    }
    let x = exchange_chi(&params).value;
    let tau = entangling_time(x)?;
    let spec = ChainSpec::new(Protocol::P2, 5, Spin::HALF)
        .with_couplings(big_delta, 1.0)
        .with_boundary_field(b);
    let full = clean_peak(&spec, 1.6 * tau, 0.05)?;
    println!(
        "dispersive: margin {:.2}, chi = {:.5}, exchange chi = {:.5}",
        validity_margin(&params, 3),
        chi(&params).value,
        x
    );
    println!(
        "  predicted pi/(4|chi|) = {:.2}, full P2 peak {:.4} at t = {:.2}",
        tau, full.value, full.time
    );
    Ok(())
}
