use nalgebra::{DMatrix, DVector};

use crate::linalg;
use crate::{Error, Result, C64};

const PURITY_TOL: f64 = 1e-10;
const CLIP: f64 = -1e-10;

fn is_pure(m: &DMatrix<C64>) -> bool {
    let purity: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    (purity - 1.0).abs() < PURITY_TOL
}

/// Uhlmann fidelity `tr √(√ρ σ √ρ)`.
///
/// When either argument is pure this reduces to `√tr(ρσ)`.
pub fn fidelity(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> Result<f64> {
    if rho.shape() != sigma.shape() || rho.nrows() != rho.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "fidelity between {:?} and {:?} matrices",
            rho.shape(),
            sigma.shape()
        )));
    }
    let f = if is_pure(rho) || is_pure(sigma) {
        let overlap: C64 = rho.iter().zip(sigma.transpose().iter()).map(|(a, b)| a * b).sum();
        overlap.re.max(0.0).sqrt()
    } else {
        let root = linalg::hermitian_function(rho, |v| if v > CLIP { v.max(0.0).sqrt() } else { f64::NAN });
        let inner = &root * sigma * &root;
        let inner = (&inner + inner.adjoint()) * C64::new(0.5, 0.0);
        linalg::eigvalsh(&inner).into_iter().map(|v| v.max(0.0).sqrt()).sum()
    };
    if f.is_nan() {
        return Err(Error::InvalidState("fidelity input has a negative eigenvalue".into()));
    }
    Ok(f.min(1.0))
}

/// `√⟨ψ|ρ|ψ⟩` for a normalized target vector.
pub fn fidelity_pure(rho: &DMatrix<C64>, psi: &DVector<C64>) -> Result<f64> {
    if rho.nrows() != psi.len() || rho.ncols() != psi.len() {
        return Err(Error::ShapeMismatch(format!(
            "fidelity between {:?} matrix and length-{} vector",
            rho.shape(),
            psi.len()
        )));
    }
    let value = (psi.adjoint() * rho * psi)[(0, 0)].re;
    Ok(value.max(0.0).sqrt().min(1.0))
}
