use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::dynamics::{QuantumState, StateData};
use crate::linalg;
use crate::qcore::Basis;
use crate::{Error, Result, C64};

/// Reduced density matrix of sites 1 and N, indexed `l_1 * d + l_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndPairState {
    rho: DMatrix<C64>,
    d: usize,
}

impl EndPairState {
    pub fn new(rho: DMatrix<C64>, d: usize) -> Result<Self> {
        if d < 2 || rho.nrows() != d * d || rho.ncols() != d * d {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for a pair of dimension-{d} sites",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let tr = linalg::trace(&rho);
        if (tr.re - 1.0).abs() > 1e-7 || tr.im.abs() > 1e-7 {
            return Err(Error::InvalidState(format!("pair trace {tr}")));
        }
        if linalg::hermitian_deviation(&rho) > 1e-9 {
            return Err(Error::InvalidState("pair matrix is not Hermitian".into()));
        }
        Ok(EndPairState { rho, d })
    }

    /// Pair state of a pure two-site vector.
    pub fn from_pure(psi: &DVector<C64>, d: usize) -> Result<Self> {
        Self::new(psi * psi.adjoint(), d)
    }

    pub fn rho(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Partial transpose on the site-1 factor.
    pub fn partial_transpose(&self) -> DMatrix<C64> {
        let d = self.d;
        DMatrix::from_fn(d * d, d * d, |r, c| {
            let (a, b) = (r / d, r % d);
            let (ap, bp) = (c / d, c % d);
            self.rho[(ap * d + b, a * d + bp)]
        })
    }
}

/// Groups basis states by their bulk configuration so that the partial
/// trace over sites 2..N-1 becomes a sum of small outer products.
#[derive(Clone, Debug)]
pub struct EndPairMap {
    d: usize,
    /// Per group: `(pair index, basis index)`.
    groups: Vec<Vec<(usize, usize)>>,
}

impl EndPairMap {
    pub fn new(basis: &Basis) -> Result<Self> {
        let n = basis.n_sites();
        if n < 3 {
            return Err(Error::InvalidArgument(format!("end-pair reduction needs N >= 3, got {n}")));
        }
        let d = basis.spin().dim();
        let mut buf = vec![0u8; n];
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
        for i in 0..basis.dim() {
            basis.levels_into(i, &mut buf);
            let pair = buf[0] as usize * d + buf[n - 1] as usize;
            let key = buf[1..n - 1].to_vec();
            let g = *index.entry(key).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push((pair, i));
        }
        Ok(EndPairMap { d, groups })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn reduce(&self, state: &QuantumState) -> Result<EndPairState> {
        let dd = self.d * self.d;
        let mut rho = DMatrix::<C64>::zeros(dd, dd);
        match state.data() {
            StateData::Pure(psi) => {
                for group in &self.groups {
                    for &(p, i) in group {
                        let a = psi[i];
                        if a == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for &(q, j) in group {
                            rho[(p, q)] += a * psi[j].conj();
                        }
                    }
                }
            }
            StateData::Density(m) => {
                for group in &self.groups {
                    for &(p, i) in group {
                        for &(q, j) in group {
                            rho[(p, q)] += m[(i, j)];
                        }
                    }
                }
            }
        }
        Ok(EndPairState { rho, d: self.d })
    }
}

/// Traces out sites 2..N-1. Sector states are reduced in place.
pub fn reduce_end_pair(state: &QuantumState, n: usize, d: usize) -> Result<EndPairState> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("end-pair reduction needs N >= 3, got {n}")));
    }
    let basis = state.basis();
    if basis.n_sites() != n || basis.spin().dim() != d {
        return Err(Error::BasisMismatch(format!(
            "state on {} sites of dimension {}, expected N = {n}, d = {d}",
            basis.n_sites(),
            basis.spin().dim()
        )));
    }
    EndPairMap::new(basis)?.reduce(state)
}

/// Unnormalized negativity `Σ (|ε| - ε)/2` of the partial transpose.
pub fn raw_negativity(pair: &EndPairState) -> f64 {
    linalg::eigvalsh(&pair.partial_transpose())
        .into_iter()
        .filter(|&e| e < -1e-12)
        .map(|e| -e)
        .sum()
}

/// Negativity divided by its maximally entangled value `(d-1)/2`.
pub fn negativity(pair: &EndPairState) -> f64 {
    raw_negativity(pair) / ((pair.d as f64 - 1.0) / 2.0)
}

/// `(|0_1 1_N> + |1_1 0_N>)/√2` in pair indexing (`|1>` is level 0).
pub fn bell_psi_plus() -> DVector<C64> {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    DVector::from_vec(vec![C64::new(0.0, 0.0), h, h, C64::new(0.0, 0.0)])
}

/// Applies `exp(-i·angle·σ_z/2)` to the site-N qubit.
pub fn rz_correct(pair: &EndPairState, angle: f64) -> Result<EndPairState> {
    if pair.d != 2 {
        return Err(Error::InvalidArgument(format!("R_z correction needs qubits, got d = {}", pair.d)));
    }
    // σ_z = +1 on level 0 (m = +1/2).
    let phase = [C64::from_polar(1.0, -angle / 2.0), C64::from_polar(1.0, angle / 2.0)];
    let rho = DMatrix::from_fn(4, 4, |r, c| pair.rho[(r, c)] * phase[r % 2] * phase[c % 2].conj());
    Ok(EndPairState { rho, d: 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{sector_basis, Spin};

    fn bell(d: usize) -> DVector<C64> {
        let mut v = DVector::zeros(d * d);
        for k in 0..d {
            v[k * d + k] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        }
        v
    }

    #[test]
    fn maximally_entangled_pairs_are_one() {
        let p = EndPairState::from_pure(&bell_psi_plus(), 2).unwrap();
        assert!((negativity(&p) - 1.0).abs() < 1e-12);
        let q = EndPairState::from_pure(&bell(3), 3).unwrap();
        assert!((raw_negativity(&q) - 1.0).abs() < 1e-12);
        assert!((negativity(&q) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_pair_is_zero() {
        let mut v = DVector::zeros(4);
        v[3] = C64::new(1.0, 0.0);
        assert_eq!(negativity(&EndPairState::from_pure(&v, 2).unwrap()), 0.0);
    }

    #[test]
    fn werner_state() {
        // Partial transpose eigenvalues: (1-3p)/4 once, (1+p)/4 three times.
        let p = 0.5;
        let psi = bell_psi_plus();
        let rho = (&psi * psi.adjoint()) * C64::new(p, 0.0) + DMatrix::identity(4, 4) * C64::new((1.0 - p) / 4.0, 0.0);
        let pair = EndPairState::new(rho, 2).unwrap();
        assert!((raw_negativity(&pair) - 0.125).abs() < 1e-12);
        assert!((negativity(&pair) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn product_state_reduces_to_projector() {
        let basis = Basis::full(5, Spin::HALF);
        let s = QuantumState::product(basis, &[0, 1, 1, 1, 0]).unwrap();
        let pair = reduce_end_pair(&s, 5, 2).unwrap();
        assert!((pair.rho()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((linalg::trace(pair.rho()).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_ends_with_ground_bulk() {
        let sector = sector_basis(4, Spin::HALF, -2).unwrap();
        let basis = Basis::Sector(sector);
        let mut psi = DVector::zeros(basis.dim());
        psi[basis.index_of(&[0, 1, 1, 1]).unwrap()] = C64::new(0.5f64.sqrt(), 0.0);
        psi[basis.index_of(&[1, 1, 1, 0]).unwrap()] = C64::new(0.5f64.sqrt(), 0.0);
        let s = QuantumState::pure(basis, psi).unwrap();
        let pair = reduce_end_pair(&s, 4, 2).unwrap();
        let expect = bell_psi_plus() * bell_psi_plus().adjoint();
        assert!(linalg::max_abs(&(pair.rho() - expect)) < 1e-12);
    }

    #[test]
    fn short_chain_rejected() {
        let s = QuantumState::product(Basis::full(2, Spin::HALF), &[0, 1]).unwrap();
        assert!(reduce_end_pair(&s, 2, 2).is_err());
    }

    #[test]
    fn rz_composes() {
        let psi = DVector::from_vec(vec![
            C64::new(0.1, 0.2),
            C64::new(0.5, -0.1),
            C64::new(-0.3, 0.4),
            C64::new(0.2, 0.0),
        ]);
        let psi = &psi / C64::new(psi.norm(), 0.0);
        let p = EndPairState::from_pure(&psi, 2).unwrap();
        let half = -std::f64::consts::FRAC_PI_2;
        let twice = rz_correct(&rz_correct(&p, half).unwrap(), half).unwrap();
        let once = rz_correct(&p, 2.0 * half).unwrap();
        assert!(linalg::max_abs(&(twice.rho() - once.rho())) < 1e-12);
        assert!((negativity(&p) - negativity(&once)).abs() < 1e-12);
        let q = EndPairState::from_pure(&bell(3), 3).unwrap();
        assert!(rz_correct(&q, half).is_err());
    }
}
