//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::C64;

/// Hermitian eigendecomposition with eigenvalues in ascending order.
///
/// Matrices without imaginary parts go through the real symmetric solver,
/// which is several times faster and covers every Hamiltonian built in the
/// product basis.
pub fn eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let (values, vectors) = if m.iter().all(|z| z.im == 0.0) {
        let real = m.map(|z| z.re);
        let eig = real.symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let eig = m.clone().symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    (sorted_values, sorted_vectors)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    let mut values: Vec<f64> = if m.iter().all(|z| z.im == 0.0) {
        m.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        m.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    values
}

/// `max |A - A^dagger|` over all entries.
pub fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn trace(m: &DMatrix<C64>) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &DMatrix<C64>, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
    let (values, vectors) = eigh(m);
    let scaled = DVector::from_iterator(values.len(), values.iter().map(|&v| C64::new(f(v), 0.0)));
    let mut left = vectors.clone();
    for (mut col, s) in left.column_iter_mut().zip(scaled.iter()) {
        col *= *s;
    }
    left * vectors.adjoint()
}
