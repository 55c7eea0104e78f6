use nalgebra::DVector;

use super::fidelity::fidelity_pure;
use super::pair::{bell_psi_plus, negativity, rz_correct, EndPairMap, EndPairState};
use crate::chain::{ChainSpec, Protocol};
use crate::dynamics::{Observables, Observer, Populations, QuantumState};
use crate::qcore::{Basis, Spin};
use crate::{Error, Result, C64};

/// Per-site quanta `n_i = <S_i^z> + s` and the bulk sum over sites 2..N-1.
pub fn populations(state: &QuantumState) -> Populations {
    let basis = state.basis();
    let n = basis.n_sites();
    let two_s = basis.spin().two_s() as f64;
    let probs = state.probabilities();
    let mut per_site = vec![0.0; n];
    let mut buf = vec![0u8; n];
    for (i, p) in probs.iter().enumerate() {
        if *p == 0.0 {
            continue;
        }
        basis.levels_into(i, &mut buf);
        for (acc, &l) in per_site.iter_mut().zip(&buf) {
            *acc += p * (two_s - l as f64);
        }
    }
    let bulk = per_site[1..n - 1].iter().sum();
    Populations { per_site, bulk }
}

/// Standard chain observables for one basis.
///
/// Negativity is always recorded. Fidelity to `|ψ+>` (s = 1/2 only) can be
/// switched on with an optional R_z correction angle on site N.
#[derive(Clone, Debug)]
pub struct ChainObserver {
    basis: Basis,
    map: EndPairMap,
    fidelity: Option<Option<f64>>,
    populations: bool,
}

impl ChainObserver {
    pub fn negativity_only(basis: &Basis) -> Result<Self> {
        Ok(ChainObserver {
            basis: basis.clone(),
            map: EndPairMap::new(basis)?,
            fidelity: None,
            populations: false,
        })
    }

    /// Negativity, populations and, for s = 1/2, fidelity to `|ψ+>`
    /// (with the `-π/2` correction for P2).
    pub fn for_spec(spec: &ChainSpec) -> Result<Self> {
        let basis = Basis::Sector(spec.sector()?);
        let mut obs = Self::negativity_only(&basis)?.with_populations(true);
        if spec.spin == Spin::HALF {
            let angle = (spec.protocol == Protocol::P2).then_some(-std::f64::consts::FRAC_PI_2);
            obs = obs.with_fidelity(angle)?;
        }
        Ok(obs)
    }

    pub fn with_populations(mut self, on: bool) -> Self {
        self.populations = on;
        self
    }

    pub fn with_fidelity(mut self, rz_angle: Option<f64>) -> Result<Self> {
        if self.map.d() != 2 {
            return Err(Error::InvalidArgument("fidelity to |psi+> needs s = 1/2".into()));
        }
        self.fidelity = Some(rz_angle);
        Ok(self)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn end_pair(&self, state: &QuantumState) -> Result<EndPairState> {
        if state.basis() != &self.basis {
            return Err(Error::BasisMismatch(format!(
                "observer built for {:?}, state in {:?}",
                self.basis,
                state.basis()
            )));
        }
        self.map.reduce(state)
    }

    pub fn negativity(&self, state: &QuantumState) -> Result<f64> {
        Ok(negativity(&self.end_pair(state)?))
    }

    /// Fidelity of the (corrected) end pair to `|ψ+>`.
    pub fn pair_fidelity(&self, pair: &EndPairState, rz_angle: Option<f64>) -> Result<f64> {
        let target: DVector<C64> = bell_psi_plus();
        match rz_angle {
            Some(angle) => fidelity_pure(rz_correct(pair, angle)?.rho(), &target),
            None => fidelity_pure(pair.rho(), &target),
        }
    }
}

impl Observer for ChainObserver {
    fn observe(&self, state: &QuantumState) -> Result<Observables> {
        let pair = self.end_pair(state)?;
        let fidelity = match self.fidelity {
            Some(angle) => Some(self.pair_fidelity(&pair, angle)?),
            None => None,
        };
        Ok(Observables {
            negativity: negativity(&pair),
            fidelity,
            populations: self.populations.then(|| populations(state)),
        })
    }
}
