//! Effective models against values recomputed here from the closed forms.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3};

use spinlab::effective::{
    chi, dispersive_params, entangling_time, evolve_effective_pair, exchange_chi, gamma_eff, mean_bulk_excitation,
    trimer_eta, trimer_evolve, validity_margin, DispersiveParams, HOPPING_FACTOR,
};
use spinlab::prelude::*;
use spinlab::sweeps::evolve_to;

/// Band energies, couplings and detunings straight from the cosine/sine forms.
fn oracle_modes(n: usize, delta_hop: f64, lambda: f64, omega: f64, big_omega: f64) -> Vec<(f64, f64, f64)> {
    (1..=n)
        .map(|k| {
            let q = k as f64 * PI / (n as f64 + 1.0);
            let e = big_omega + 2.0 * delta_hop * q.cos();
            let c = lambda * (2.0 / (n as f64 + 1.0)).sqrt() * q.sin();
            (e, c, omega - e)
        })
        .collect()
}

fn oracle_chi(n: usize, delta_hop: f64, lambda: f64, omega: f64) -> f64 {
    oracle_modes(n, delta_hop, lambda, omega, 0.0).iter().map(|(_, c, z)| c * c / z).sum()
}

/// η from the unrationalized square-root form.
fn oracle_eta(big: f64, small: f64) -> f64 {
    let x = small / big;
    0.5 * big * (1.0 + 3.0 * x * x - (1.0 + 6.0 * x * x + x.powi(4)).sqrt()).sqrt()
}

#[test]
fn band_energies_for_five_modes() {
    let p = DispersiveParams::new(5, 5.0, 0.5, 3.7, 0.0).unwrap();
    let energies: Vec<f64> = p.modes.iter().map(|m| m.energy).collect();
    let expected = [8.660254037844, 5.0, 0.0, -5.0, -8.660254037844];
    for (e, x) in energies.iter().zip(expected) {
        assert!((e - x).abs() < 5e-4, "{e} vs {x}");
    }
    for (m, (e, c, z)) in p.modes.iter().zip(oracle_modes(5, 5.0, 0.5, 3.7, 0.0)) {
        assert!((m.energy - e).abs() < 1e-12);
        assert!((m.coupling - c).abs() < 1e-12);
        assert!((m.detuning - z).abs() < 1e-12);
    }
}

#[test]
fn chi_five_mode_sum() {
    let p = DispersiveParams::new(5, 5.0, 0.5, 3.7, 0.0).unwrap();
    let value = chi(&p).value;
    assert!((value - oracle_chi(5, 5.0, 0.5, 3.7)).abs() < 1e-14);
    assert!((value - -0.0208850360848).abs() < 1e-12);
    assert!((value - -0.0209).abs() < 5e-5);
}

#[test]
fn single_mode_chi_and_gamma() {
    let p = DispersiveParams::new(1, 4.0, 0.3, 2.5, 0.4).unwrap();
    assert_eq!(p.modes[0].energy, 0.4 + 2.0 * 4.0 * (PI / 2.0).cos());
    assert!((p.modes[0].coupling - 0.3).abs() < 1e-15);
    let zeta = 2.5 - p.modes[0].energy;
    assert!((chi(&p).value - 0.09 / zeta).abs() < 1e-15);
    assert!((exchange_chi(&p).value - chi(&p).value).abs() < 1e-15);
    assert!((gamma_eff(&p, 0.2).unwrap() - 0.2 * 0.09 / (zeta * zeta)).abs() < 1e-15);
}

#[test]
fn even_chain_at_band_centre_cancels() {
    for n in [2, 4, 6] {
        let p = DispersiveParams::new(n, 3.0, 0.5, 0.7, 0.7).unwrap();
        assert!(chi(&p).value.abs() < 1e-14, "N_chain = {n}");
    }
}

#[test]
fn zero_coupling_gives_zero_chi_and_gamma() {
    let p = DispersiveParams::new(5, 5.0, 0.0, 18.0, 0.0).unwrap();
    assert_eq!(chi(&p).value, 0.0);
    assert_eq!(gamma_eff(&p, 0.5).unwrap(), 0.0);
    assert!(validity_margin(&p, 5).is_infinite());
    assert!(entangling_time(0.0).is_err());
}

#[test]
fn gamma_is_linear_in_the_bare_rate() {
    let p = DispersiveParams::new(5, 5.0, 0.5, 13.0, 0.0).unwrap();
    let g = gamma_eff(&p, 0.1).unwrap();
    assert!((gamma_eff(&p, 0.2).unwrap() - 2.0 * g).abs() < 1e-15);
    assert_eq!(gamma_eff(&p, 0.0).unwrap(), 0.0);
}

#[test]
fn bulk_excitation_estimate() {
    assert!((mean_bulk_excitation(7, 1.0, 10.0).unwrap() - 0.172718077019).abs() < 1e-11);
    assert!((mean_bulk_excitation(7, 1.0, 10.0).unwrap() - 7.0 * (PI / 20.0).powi(2)).abs() < 1e-15);
    assert_eq!(mean_bulk_excitation(5, 0.0, 10.0).unwrap(), 0.0);
    let one = mean_bulk_excitation(1, 1.0, 10.0).unwrap();
    assert!((mean_bulk_excitation(6, 1.0, 10.0).unwrap() - 6.0 * one).abs() < 1e-15);
}

#[test]
fn validity_margin_outside_the_band() {
    let p = DispersiveParams::new(5, 10.0, 0.5, 25.0, 0.0).unwrap();
    let direct = oracle_modes(5, 10.0, 0.5, 25.0, 0.0)
        .iter()
        .map(|(_, c, z)| z.abs() / c)
        .fold(f64::INFINITY, f64::min)
        / 5.0;
    let margin = validity_margin(&p, 5);
    assert!((margin - direct).abs() < 1e-12);
    assert!((margin - 10.6410161514).abs() < 1e-9);
    let doubled = DispersiveParams::new(5, 10.0, 1.0, 25.0, 0.0).unwrap();
    assert!((validity_margin(&doubled, 5) - margin / 2.0).abs() < 1e-12);
}

#[test]
fn convention_factor_maps_main_text_couplings() {
    let p = dispersive_params(3, 20.0, 1.0, 18.0, HOPPING_FACTOR).unwrap();
    assert_eq!(p.delta_hop, 10.0);
    assert_eq!(p.lambda_hop, 0.5);
    assert_eq!(p.omega, 18.0);
    assert_eq!(p.big_omega, 0.0);
    assert!(matches!(
        DispersiveParams::new(3, 5.0, 0.5, 0.0, 0.0),
        Err(Error::Resonance { mode: 2, .. })
    ));
}

#[test]
fn trimer_eta_raw_formula() {
    let p = trimer_eta(10.0, 1.0, 1.0).unwrap();
    // The unrationalized form cancels to ~1e-12 relative.
    assert!((p.eta / oracle_eta(10.0, 1.0) - 1.0).abs() < 1e-10);
    assert!((p.eta - 0.0985422185553).abs() < 1e-12);
    assert!((p.t_f - 2.0 * p.t_e).abs() < 1e-12);
}

#[test]
fn trimer_eta_weak_coupling_limit() {
    let p = trimer_eta(20.0, 1.0, 1.0).unwrap();
    assert!((p.eta / (1.0 / 20.0) - 1.0).abs() < 0.01);
    let tiny = trimer_eta(1.0, 1e-5, 1.0).unwrap();
    assert!((tiny.eta / 1e-10 - 1.0).abs() < 1e-6);
}

#[test]
fn trimer_entangling_time_with_hopping_factor() {
    let p = trimer_eta(10.0, 1.0, HOPPING_FACTOR).unwrap();
    assert!((p.t_e - 22.5).abs() / 22.5 < 0.01);
    assert!((p.eta / oracle_eta(5.0, 0.5) - 1.0).abs() < 1e-10);
}

#[test]
fn trimer_spectrum_and_transfer() {
    let eta = 0.07;
    let m = Matrix3::new(0.0, eta, 0.0, eta, 0.0, eta, 0.0, eta, 0.0);
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().cloned().collect();
    vals.sort_by(f64::total_cmp);
    let r2 = std::f64::consts::SQRT_2 * eta;
    for (v, x) in vals.iter().zip([-r2, 0.0, r2]) {
        assert!((v - x).abs() < 1e-14);
    }

    let psi0 = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
    let t_full = PI / (std::f64::consts::SQRT_2 * eta);
    let times: Vec<f64> = (0..=40).map(|k| t_full * k as f64 / 20.0).collect();
    let traj = trimer_evolve(eta, &psi0, &times).unwrap();
    for (t, rec) in times.iter().zip(&traj.records) {
        // Populations count flips: the excitation on C is level 0 there.
        let p_c = rec.populations.as_ref().unwrap().per_site[2];
        let expect = (eta * t / std::f64::consts::SQRT_2).sin().powi(4);
        assert!((p_c - expect).abs() < 1e-10, "t = {t}: {p_c} vs {expect}");
    }
    assert!((traj.records[20].populations.as_ref().unwrap().per_site[2] - 1.0).abs() < 1e-10);
    let first = traj.states.as_ref().unwrap()[0].as_pure().unwrap().clone();
    assert_eq!(first, psi0);
}

#[test]
fn p1_chain_revives_at_full_transfer_time() {
    let spec = ChainSpec::new(Protocol::P1, 7, Spin::HALF);
    let t_f = trimer_eta(spec.strong, spec.weak, HOPPING_FACTOR).unwrap().t_f;
    let state = evolve_to(&spec, None, t_f).unwrap();
    let idx = state.basis().index_of(&spec.initial_levels()).unwrap();
    let p = state.probabilities()[idx];
    assert!(p >= 0.95, "revival probability {p}");
}

fn excited_receiver() -> DMatrix<C64> {
    // |1_e 0_r⟩: emitter excited (level 0), receiver in ground (level 1).
    let mut rho = DMatrix::zeros(4, 4);
    rho[(1, 1)] = C64::new(1.0, 0.0);
    rho
}

#[test]
fn effective_pair_is_maximally_entangled_at_tau() {
    for chi_value in [0.011, -0.03] {
        let tau = entangling_time(chi_value).unwrap();
        assert!((tau - PI / (4.0 * chi_value.abs())).abs() < 1e-12);
        let traj = evolve_effective_pair(chi_value, 0.0, &excited_receiver(), &[0.0, tau]).unwrap();
        assert!(traj.records[0].negativity.abs() < 1e-12);
        assert!((traj.records[1].negativity - 1.0).abs() < 1e-6, "{}", traj.records[1].negativity);
    }
}

#[test]
fn effective_pair_with_decay() {
    let rho0 = excited_receiver();
    let times: Vec<f64> = (0..=10).map(|k| 5.0 * k as f64).collect();
    let still = evolve_effective_pair(0.0, 0.0, &rho0, &times).unwrap();
    for s in still.states.as_ref().unwrap() {
        assert!(spinlab::linalg::max_abs(&(s.to_density() - &rho0)) < 1e-12);
    }
    let lossy = evolve_effective_pair(0.02, 0.01, &rho0, &times).unwrap();
    let states = lossy.states.as_ref().unwrap();
    let excited = |rho: &DMatrix<C64>| rho[(0, 0)].re * 2.0 + rho[(1, 1)].re + rho[(2, 2)].re;
    let mut last = f64::INFINITY;
    for s in states {
        let rho = s.to_density();
        assert!((spinlab::linalg::trace(&rho).re - 1.0).abs() < 1e-9);
        let n = excited(&rho);
        assert!(n <= last + 1e-12);
        last = n;
    }
    assert!(last < 1.0);
}
