use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use spinlab::chain::DisorderMode;
use spinlab::dynamics::{lindblad_rhs, LindbladPropagator, UnitaryPropagator};
use spinlab::effective::{chi, gamma_eff, DispersiveParams};
use spinlab::linalg;
use spinlab::measures::{fidelity, golden_section_max, negativity, peak_of_series};
use spinlab::prelude::*;
use spinlab::qcore::sector_basis;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

fn normalized(v: Vec<C64>) -> DVector<C64> {
    let v = DVector::from_vec(v);
    let n = v.norm();
    v / C64::new(n, 0.0)
}

fn pure_state(d: usize) -> impl Strategy<Value = DVector<C64>> {
    complex_vec(d * d).prop_filter("non-zero", |v| v.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3).prop_map(normalized)
}

fn hermitian(d: usize) -> impl Strategy<Value = DMatrix<C64>> {
    complex_vec(d * d).prop_map(move |v| {
        let a = DMatrix::from_vec(d, d, v);
        (&a + a.adjoint()) * C64::new(0.5, 0.0)
    })
}

fn density(d: usize) -> impl Strategy<Value = DMatrix<C64>> {
    complex_vec(d * d).prop_filter("non-zero", |v| v.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3).prop_map(move |v| {
        let a = DMatrix::from_vec(d, d, v);
        let rho = &a * a.adjoint();
        let tr = linalg::trace(&rho);
        rho / tr
    })
}

fn unitary_from(h: &DMatrix<C64>) -> DMatrix<C64> {
    let (vals, vecs) = linalg::eigh(h);
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(vals.len(), vals.iter().map(|&e| C64::from_polar(1.0, e))));
    &vecs * phases * vecs.adjoint()
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

fn schmidt_negativity(psi: &DVector<C64>, d: usize) -> f64 {
    // Coefficient matrix c[i, j] with psi index i*d + j; singular values are the Schmidt weights.
    let c = DMatrix::from_fn(d, d, |i, j| psi[i * d + j]);
    let s = c.svd(false, false).singular_values;
    let sum: f64 = s.iter().sum();
    ((sum * sum - 1.0) / 2.0) / ((d as f64 - 1.0) / 2.0)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn negativity_is_local_unitary_invariant(
        psi in pure_state(3),
        ha in hermitian(3),
        hb in hermitian(3),
    ) {
        let pair = EndPairState::from_pure(&psi, 3).unwrap();
        let u = kron(&unitary_from(&ha), &unitary_from(&hb));
        let rotated = EndPairState::from_pure(&(u * &psi), 3).unwrap();
        prop_assert!((negativity(&pair) - negativity(&rotated)).abs() < 1e-9);
    }

    #[test]
    fn negativity_matches_schmidt_formula(psi2 in pure_state(2), psi3 in pure_state(3), psi4 in pure_state(4)) {
        for (psi, d) in [(psi2, 2), (psi3, 3), (psi4, 4)] {
            let pair = EndPairState::from_pure(&psi, d).unwrap();
            prop_assert!((negativity(&pair) - schmidt_negativity(&psi, d)).abs() < 1e-9);
        }
    }

    #[test]
    fn product_states_have_zero_negativity(a in complex_vec(3), b in complex_vec(3)) {
        let a = DVector::from_vec(a);
        let b = DVector::from_vec(b);
        prop_assume!(a.norm() > 1e-3 && b.norm() > 1e-3);
        let psi = a.kronecker(&b);
        let psi = &psi / C64::new(psi.norm(), 0.0);
        let pair = EndPairState::from_pure(&psi, 3).unwrap();
        prop_assert!(negativity(&pair).abs() < 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(rho in density(4), sigma in density(4)) {
        let f = fidelity(&rho, &sigma).unwrap();
        let g = fidelity(&sigma, &rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f - g).abs() < 1e-9);
        prop_assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-7);
        let dist = linalg::max_abs(&(&rho - &sigma));
        if dist > 1e-3 {
            prop_assert!(f < 1.0 - 1e-7);
        }
    }

    #[test]
    fn refined_peak_never_below_grid_max(
        amps in prop::collection::vec(0.1f64..1.0, 3),
        freqs in prop::collection::vec(0.2f64..3.0, 3),
        dt in 0.05f64..0.4,
    ) {
        let f = |t: f64| -> f64 {
            amps.iter().zip(&freqs).map(|(a, w)| a * (w * t).sin().powi(2)).sum()
        };
        let times: Vec<f64> = (0..=(20.0 / dt) as usize).map(|k| k as f64 * dt).collect();
        let values: Vec<f64> = times.iter().map(|&t| f(t)).collect();
        let grid_max = values.iter().cloned().fold(f64::MIN, f64::max);
        let mut refine = |t: f64| Ok(f(t));
        let peak = peak_of_series(&times, &values, Some(&mut refine)).unwrap();
        prop_assert!(peak.value >= grid_max);
        let plain = peak_of_series(&times, &values, None).unwrap();
        prop_assert_eq!(plain.value, grid_max);
    }

    #[test]
    fn golden_section_finds_parabola_vertex(c in -3.0f64..3.0) {
        let (x, fx) = golden_section_max(|x| Ok(-(x - c) * (x - c)), -4.0, 4.0, 1e-6).unwrap();
        prop_assert!((x - c).abs() < 1e-5);
        prop_assert!(fx <= 0.0);
    }

    #[test]
    fn hamiltonians_are_hermitian_and_conserve_magnetization(
        seed in any::<u64>(),
        strength in 0.0f64..2.0,
        spin_pick in 0usize..2,
        mode_pick in 0usize..3,
    ) {
        let spin = [Spin::HALF, Spin::ONE][spin_pick];
        let mode = [DisorderMode::Diagonal, DisorderMode::OffDiagonal, DisorderMode::Both][mode_pick];
        let spec = ChainSpec::new(Protocol::P2, 4, spin).with_boundary_field(1.3);
        let basis = Basis::full(4, spin);
        let dis = Disorder::new(mode, draw_disorder(seed, strength, 2, 3).unwrap());
        let h = build_hamiltonian(&spec, &basis, Some(&dis)).unwrap();
        prop_assert!(h.hermitian_deviation() < 1e-12);
        prop_assert!(h.total_sz_commutator_norm() < 1e-10);
    }

    #[test]
    fn diagonal_disorder_touches_only_the_diagonal(seed in any::<u64>(), strength in 0.01f64..2.0) {
        let spec = ChainSpec::new(Protocol::P1, 7, Spin::HALF);
        let basis = Basis::Sector(spec.sector().unwrap());
        let clean = build_hamiltonian(&spec, &basis, None).unwrap().to_dense();
        let draw = draw_disorder(seed, strength, 2, 6).unwrap();
        let diag = build_hamiltonian(&spec, &basis, Some(&Disorder::new(DisorderMode::Diagonal, draw.clone()))).unwrap().to_dense();
        let off = build_hamiltonian(&spec, &basis, Some(&Disorder::new(DisorderMode::OffDiagonal, draw))).unwrap().to_dense();
        for i in 0..clean.nrows() {
            for j in 0..clean.ncols() {
                if i == j {
                    prop_assert_eq!(off[(i, j)], clean[(i, j)]);
                } else {
                    prop_assert_eq!(diag[(i, j)], clean[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn disorder_draws_are_bounded_and_reproducible(seed in any::<u64>(), n_diag in 0usize..8, n_bonds in 0usize..8) {
        let a = draw_disorder(seed, 1.0, n_diag, n_bonds).unwrap();
        let b = draw_disorder(seed, 1.0, n_diag, n_bonds).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.diag.iter().chain(&a.offdiag).all(|x| (-0.5..=0.5).contains(x)));
    }

    #[test]
    fn magnetization_is_conserved_by_both_propagators(
        amps in complex_vec(16),
        big_delta in 1.0f64..10.0,
        b in 0.0f64..4.0,
        t in 0.1f64..5.0,
    ) {
        prop_assume!(amps.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3);
        let spec = ChainSpec::new(Protocol::P2, 4, Spin::HALF).with_couplings(big_delta, 1.0).with_boundary_field(b);
        let basis = Basis::full(4, Spin::HALF);
        let h = build_hamiltonian(&spec, &basis, None).unwrap();
        let psi0 = QuantumState::pure(basis.clone(), normalized(amps)).unwrap();
        let sz = basis.total_sz_diagonal();
        let m0 = psi0.expectation_diagonal(&sz);
        let u = UnitaryPropagator::new(&h).unwrap().evolve(&psi0, t).unwrap();
        prop_assert!((u.expectation_diagonal(&sz) - m0).abs() < 1e-8);
        let prop = LindbladPropagator::new(&h, 0.3, &[1, 2, 3, 4]).unwrap();
        let mut step = 0.0;
        let rho = prop.advance(&psi0.to_density(), 0.0, t, &mut step).unwrap();
        let m_rho: f64 = (0..16).map(|i| rho[(i, i)].re * sz[i]).sum();
        prop_assert!((m_rho - m0).abs() < 1e-8);
    }

    #[test]
    fn dephasing_never_increases_purity(rho in density(8), gamma in 0.05f64..2.0) {
        let basis = Basis::full(3, Spin::HALF);
        let h = Operator::dense(basis, DMatrix::zeros(8, 8)).unwrap();
        let prop = LindbladPropagator::new(&h, gamma, &[1, 2, 3]).unwrap();
        let purity = |r: &DMatrix<C64>| linalg::trace(&(r * r)).re;
        let mut current = rho;
        let mut last = purity(&current);
        let mut step = 0.0;
        for k in 0..10 {
            let t0 = 0.2 * k as f64;
            current = prop.advance(&current, t0, t0 + 0.2, &mut step).unwrap();
            let p = purity(&current);
            prop_assert!(p <= last + 1e-10);
            last = p;
        }
    }

    #[test]
    fn lindblad_generator_is_hermitian_and_traceless(rho in density(7), gamma in 0.0f64..1.0) {
        let spec = ChainSpec::new(Protocol::P2, 7, Spin::HALF);
        let basis = Basis::Sector(spec.sector().unwrap());
        let h = build_hamiltonian(&spec, &basis, None).unwrap();
        let d = lindblad_rhs(&h, &rho, gamma, &[1, 2, 3, 4, 5, 6, 7]).unwrap();
        prop_assert!(linalg::hermitian_deviation(&d) < 1e-12);
        prop_assert!(linalg::trace(&d).norm() < 1e-12);
    }

    #[test]
    fn chi_is_odd_and_gamma_even_about_band_centre(
        n_chain in 1usize..8,
        delta_hop in 0.5f64..10.0,
        lambda in 0.01f64..1.0,
        big_omega in -2.0f64..2.0,
        offset in 0.1f64..30.0,
        gamma in 0.0f64..1.0,
    ) {
        let omega = big_omega + offset;
        let up = DispersiveParams::new(n_chain, delta_hop, lambda, omega, big_omega);
        let down = DispersiveParams::new(n_chain, delta_hop, lambda, 2.0 * big_omega - omega, big_omega);
        prop_assume!(up.is_ok() && down.is_ok());
        let (up, down) = (up.unwrap(), down.unwrap());
        prop_assume!(up.modes.iter().all(|m| m.detuning.abs() > 1e-3));
        let (cu, cd) = (chi(&up).value, chi(&down).value);
        prop_assert!((cu + cd).abs() <= 1e-9 * cu.abs().max(1.0));
        let (gu, gd) = (gamma_eff(&up, gamma).unwrap(), gamma_eff(&down, gamma).unwrap());
        prop_assert!((gu - gd).abs() <= 1e-9 * gu.abs().max(1.0));
        prop_assert!(gu >= 0.0);
    }

    #[test]
    fn dispersive_modes_are_mirror_symmetric(n_chain in 1usize..10, delta_hop in 0.1f64..10.0, lambda in 0.0f64..1.0, big_omega in -3.0f64..3.0) {
        let p = DispersiveParams::new(n_chain, delta_hop, lambda, big_omega + 100.0, big_omega).unwrap();
        for k in 0..n_chain {
            let (a, b) = (&p.modes[k], &p.modes[n_chain - 1 - k]);
            prop_assert!((a.coupling - b.coupling).abs() < 1e-12);
            prop_assert!(((a.energy - big_omega) + (b.energy - big_omega)).abs() < 1e-9);
        }
    }
}

#[test]
fn sector_spectra_union_is_the_full_spectrum() {
    for spin in [Spin::HALF, Spin::ONE] {
        for n in [3usize, 4] {
            let spec = ChainSpec::new(Protocol::P2, n, spin).with_couplings(2.0, 1.0).with_boundary_field(0.9);
            let full = build_hamiltonian(&spec, &Basis::full(n, spin), None).unwrap();
            let mut expected = full.eigenvalues().unwrap();
            let mut union = Vec::new();
            let two_s = spin.two_s() as i64;
            for two_m in (-(two_s * n as i64)..=two_s * n as i64).step_by(2) {
                let sector = sector_basis(n, spin, two_m).unwrap();
                let h = build_hamiltonian(&spec, &Basis::Sector(sector), None).unwrap();
                union.extend(h.eigenvalues().unwrap());
            }
            expected.sort_by(f64::total_cmp);
            union.sort_by(f64::total_cmp);
            assert_eq!(expected.len(), union.len());
            for (a, b) in expected.iter().zip(&union) {
                assert!((a - b).abs() < 1e-9, "s={spin} N={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn p1_chain_is_mirror_symmetric() {
    let spec = ChainSpec::new(Protocol::P1, 7, Spin::ONE);
    let basis = Basis::Sector(spec.sector().unwrap());
    let h = build_hamiltonian(&spec, &basis, None).unwrap().to_dense();
    let mirror: Vec<usize> = (0..basis.dim())
        .map(|i| {
            let mut levels = basis.levels(i);
            levels.reverse();
            basis.index_of(&levels).unwrap()
        })
        .collect();
    for i in 0..basis.dim() {
        for j in 0..basis.dim() {
            assert_eq!(h[(i, j)], h[(mirror[i], mirror[j])]);
        }
    }
}
