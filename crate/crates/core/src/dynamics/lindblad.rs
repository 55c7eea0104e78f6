use nalgebra::DMatrix;

use super::rk::{self, StepControl};
use super::state::{check_times, Observer, QuantumState, Trajectory};
use crate::linalg;
use crate::qcore::{Basis, Operator};
use crate::{Error, Result, C64};

/// Integrator and safety settings for [`evolve_lindblad`].
#[derive(Clone, Debug)]
pub struct LindbladOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Consecutive rejected steps tolerated before giving up.
    pub max_rejections: usize,
    /// Most negative eigenvalue accepted at output times.
    pub positivity_tol: f64,
    pub check_positivity: bool,
    pub keep_states: bool,
    /// Flips the sign of the dissipator. Only for fault-injection checks.
    #[doc(hidden)]
    pub fault_flip_dissipator: bool,
}

impl Default for LindbladOptions {
    fn default() -> Self {
        LindbladOptions {
            rtol: 1e-8,
            atol: 1e-10,
            max_rejections: 60,
            positivity_tol: 1e-6,
            check_positivity: true,
            keep_states: false,
            fault_flip_dissipator: false,
        }
    }
}

/// Element-wise dephasing rates: `D_ab = -γ/2 Σ_j (m_j(a) - m_j(b))²` over
/// the masked sites (1-based). Since every `S_j^z` is diagonal, the
/// dissipator acts on `ρ` as `D ∘ ρ`.
pub fn dephasing_rates(basis: &Basis, gamma: f64, sites: &[usize]) -> Result<DMatrix<f64>> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma = {gamma}")));
    }
    let n = basis.n_sites();
    let dim = basis.dim();
    let mut rates = DMatrix::zeros(dim, dim);
    if gamma == 0.0 {
        return Ok(rates);
    }
    for &site in sites {
        if site == 0 || site > n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        let m = basis.site_sz_diagonal(site);
        for b in 0..dim {
            for a in 0..dim {
                let diff = m[a] - m[b];
                rates[(a, b)] -= 0.5 * gamma * diff * diff;
            }
        }
    }
    Ok(rates)
}

/// Right-hand side `-i[H, ρ] + γ Σ_j (S_j^z ρ S_j^z - ½{(S_j^z)², ρ})`.
pub fn lindblad_rhs(h: &Operator, rho: &DMatrix<C64>, gamma: f64, mask: &[usize]) -> Result<DMatrix<C64>> {
    let prop = LindbladPropagator::new(h, gamma, mask)?;
    prop.check_shape(rho)?;
    Ok(prop.rhs(rho))
}

/// Reusable master-equation integrator for one Hamiltonian and mask.
///
/// Steps are taken in the interaction picture of `H`, so the integrator
/// only resolves the dissipative part: `γ = 0` reduces to exact unitary
/// evolution and the local error scales with `γ`.
#[derive(Clone, Debug)]
pub struct LindbladPropagator {
    basis: Basis,
    h: DMatrix<C64>,
    energies: Vec<f64>,
    modes: DMatrix<C64>,
    rates: DMatrix<f64>,
    dissipative: bool,
    control: StepControl,
}

impl LindbladPropagator {
    pub fn new(h: &Operator, gamma: f64, mask: &[usize]) -> Result<Self> {
        Self::with_options(h, gamma, mask, &LindbladOptions::default())
    }

    pub fn with_options(h: &Operator, gamma: f64, mask: &[usize], opts: &LindbladOptions) -> Result<Self> {
        let deviation = h.hermitian_deviation();
        if deviation >= 1e-12 {
            return Err(Error::NotHermitian { deviation });
        }
        let mut rates = dephasing_rates(h.basis(), gamma, mask)?;
        if opts.fault_flip_dissipator {
            rates.neg_mut();
        }
        let dense = h.to_dense();
        let (energies, modes) = linalg::eigh(&dense);
        let dissipative = rates.iter().any(|&r| r != 0.0);
        Ok(LindbladPropagator {
            basis: h.basis().clone(),
            h: dense,
            energies,
            modes,
            rates,
            dissipative,
            control: StepControl {
                rtol: opts.rtol,
                atol: opts.atol,
                max_rejections: opts.max_rejections,
            },
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    fn check_shape(&self, rho: &DMatrix<C64>) -> Result<()> {
        let dim = self.h.nrows();
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} density matrix against {dim}x{dim} Hamiltonian",
                rho.nrows(),
                rho.ncols()
            )));
        }
        Ok(())
    }

    pub fn rhs(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let hr = &self.h * rho;
        let rh = rho * &self.h;
        let minus_i = C64::new(0.0, -1.0);
        let mut out = (hr - rh) * minus_i;
        out.zip_zip_apply(rho, &self.rates, |o, r, d| *o += r * d);
        out
    }

    /// Integrates [`Self::rhs`] directly in the Schrödinger picture. Kept as
    /// an independent route for cross-checks.
    pub(crate) fn advance_direct(&self, rho: &DMatrix<C64>, t0: f64, t1: f64, step: &mut f64) -> Result<DMatrix<C64>> {
        self.check_shape(rho)?;
        let f = |_: f64, r: &DMatrix<C64>| self.rhs(r);
        rk::integrate(&f, rho, t0, t1, step, self.control)
    }

    /// `e^{-iΛτ} σ e^{iΛτ}` in the eigenbasis of `H`.
    fn rotate(&self, sigma: &DMatrix<C64>, tau: f64) -> DMatrix<C64> {
        let phases: Vec<C64> = self.energies.iter().map(|&e| C64::from_polar(1.0, -e * tau)).collect();
        DMatrix::from_fn(sigma.nrows(), sigma.ncols(), |a, b| sigma[(a, b)] * phases[a] * phases[b].conj())
    }

    /// Dissipator in the interaction picture at time `τ` after the frame origin.
    fn interaction_rhs(&self, tau: f64, sigma: &DMatrix<C64>) -> DMatrix<C64> {
        let rho_e = self.rotate(sigma, tau);
        let mut rho = &self.modes * rho_e * self.modes.adjoint();
        rho.zip_apply(&self.rates, |r, d| *r *= d);
        let back = self.modes.adjoint() * rho * &self.modes;
        self.rotate(&back, -tau)
    }

    /// Advances `ρ(t0)` to `ρ(t1)`; `step` carries the adaptive step size.
    pub fn advance(&self, rho: &DMatrix<C64>, t0: f64, t1: f64, step: &mut f64) -> Result<DMatrix<C64>> {
        self.check_shape(rho)?;
        let span = t1 - t0;
        if span < 0.0 || !span.is_finite() {
            return Err(Error::InvalidArgument(format!("cannot advance from t = {t0} to t = {t1}")));
        }
        let mut sigma = self.modes.adjoint() * rho * &self.modes;
        if self.dissipative && span > 0.0 {
            let f = |tau: f64, s: &DMatrix<C64>| self.interaction_rhs(tau, s);
            sigma = rk::integrate(&f, &sigma, 0.0, span, step, self.control)?;
        }
        let mut out = &self.modes * self.rotate(&sigma, span) * self.modes.adjoint();
        // Restore exact Hermiticity lost to rounding in the basis changes.
        let adj = out.adjoint();
        out += adj;
        out *= C64::new(0.5, 0.0);
        Ok(out)
    }
}

/// Integrates the dephasing master equation and records `observer` at
/// every time. A pure `rho0` is promoted to a density matrix.
pub fn evolve_lindblad(
    h: &Operator,
    rho0: &QuantumState,
    gamma: f64,
    mask: &[usize],
    times: &[f64],
    observer: &dyn Observer,
    opts: &LindbladOptions,
) -> Result<Trajectory> {
    check_times(times)?;
    if rho0.basis() != h.basis() {
        return Err(Error::BasisMismatch(format!(
            "state basis {:?} vs Hamiltonian basis {:?}",
            rho0.basis(),
            h.basis()
        )));
    }
    let prop = LindbladPropagator::with_options(h, gamma, mask, opts)?;
    let basis = h.basis().clone();
    let mut rho = rho0.to_density();
    let mut t = 0.0;
    let mut step = 0.0;
    let mut records = Vec::with_capacity(times.len());
    let mut states = opts.keep_states.then(|| Vec::with_capacity(times.len()));
    for &target in times {
        rho = prop.advance(&rho, t, target, &mut step)?;
        t = target;
        if opts.check_positivity {
            check_positivity(&rho, t, opts.positivity_tol)?;
        }
        let state = QuantumState::density_unchecked(basis.clone(), rho.clone()).at_time(t);
        records.push(observer.observe(&state)?);
        if let Some(states) = states.as_mut() {
            states.push(state);
        }
    }
    Ok(Trajectory {
        times: times.to_vec(),
        records,
        states,
    })
}

pub(crate) fn check_positivity(rho: &DMatrix<C64>, time: f64, tol: f64) -> Result<()> {
    let min = linalg::eigvalsh(rho).first().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::Positivity {
            time,
            min_eigenvalue: min,
        });
    }
    Ok(())
}
