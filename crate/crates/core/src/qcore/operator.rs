use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{Basis, SectorBasis};
use crate::linalg;
use crate::{Error, Result, C64};

/// Full-space operators above this dimension are stored sparse.
pub const DENSE_LIMIT: usize = 1024;

const HERMITIAN_TOL: f64 = 1e-12;
const COMMUTE_TOL: f64 = 1e-10;

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl CsrMatrix {
    /// Builds a square matrix, summing duplicate entries and dropping exact zeros.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut rows: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in triplets {
            *rows[r].entry(c).or_insert(C64::new(0.0, 0.0)) += v;
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                if v != C64::new(0.0, 0.0) {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn mul_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        DVector::from_iterator(
            self.dim,
            (0..self.dim).map(|r| self.row(r).map(|(c, a)| a * v[c]).sum::<C64>()),
        )
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }

    fn matmul(&self, other: &CsrMatrix) -> CsrMatrix {
        let mut triplets = Vec::new();
        for r in 0..self.dim {
            let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    *acc.entry(c).or_insert(C64::new(0.0, 0.0)) += a * b;
                }
            }
            triplets.extend(acc.into_iter().map(|(c, v)| (r, c, v)));
        }
        CsrMatrix::from_triplets(self.dim, triplets)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Storage {
    Dense(DMatrix<C64>),
    Sparse(CsrMatrix),
}

/// Complex square matrix tagged with the basis it acts on.
#[derive(Clone, Debug)]
pub struct Operator {
    basis: Basis,
    storage: Storage,
    hermitian: bool,
}

impl Operator {
    pub fn dense(basis: Basis, m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() != basis.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for a basis of dimension {}",
                m.nrows(),
                m.ncols(),
                basis.dim()
            )));
        }
        Ok(Operator {
            basis,
            storage: Storage::Dense(m),
            hermitian: false,
        })
    }

    /// Assembles from `(row, col, value)` entries; duplicates are summed.
    /// Storage is dense up to [`DENSE_LIMIT`] and sparse above.
    pub fn from_triplets(basis: Basis, triplets: Vec<(usize, usize, C64)>) -> Self {
        let dim = basis.dim();
        let storage = if dim <= DENSE_LIMIT {
            let mut m = DMatrix::zeros(dim, dim);
            for (r, c, v) in triplets {
                m[(r, c)] += v;
            }
            Storage::Dense(m)
        } else {
            Storage::Sparse(CsrMatrix::from_triplets(dim, triplets))
        };
        Operator {
            basis,
            storage,
            hermitian: false,
        }
    }

    pub fn identity(basis: Basis) -> Self {
        let dim = basis.dim();
        Operator::from_triplets(basis, (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect())
            .with_hermitian_flag_unchecked()
    }

    fn with_hermitian_flag_unchecked(mut self) -> Self {
        self.hermitian = true;
        self
    }

    /// Sets the Hermitian flag after checking `max |A - A^dagger| < 1e-12`.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let deviation = self.hermitian_deviation();
        if deviation >= HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        match &self.storage {
            Storage::Dense(m) => m[(r, c)],
            Storage::Sparse(m) => m.get(r, c),
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(m) => m.to_dense(),
        }
    }

    /// Calls `f(row, col, value)` for every stored nonzero entry.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(usize, usize, C64)) {
        match &self.storage {
            Storage::Dense(m) => {
                for c in 0..m.ncols() {
                    for r in 0..m.nrows() {
                        let v = m[(r, c)];
                        if v != C64::new(0.0, 0.0) {
                            f(r, c, v);
                        }
                    }
                }
            }
            Storage::Sparse(m) => {
                for r in 0..m.dim() {
                    for (c, v) in m.row(r) {
                        f(r, c, v);
                    }
                }
            }
        }
    }

    pub fn mul_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        match &self.storage {
            Storage::Dense(m) => m * v,
            Storage::Sparse(m) => m.mul_vec(v),
        }
    }

    pub fn hermitian_deviation(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => linalg::hermitian_deviation(m),
            Storage::Sparse(m) => {
                let mut worst = 0.0f64;
                for r in 0..m.dim() {
                    for (c, v) in m.row(r) {
                        worst = worst.max((v - m.get(c, r).conj()).norm());
                    }
                }
                worst
            }
        }
    }

    fn check_same_basis(&self, other: &Operator) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(format!(
                "{:?} vs {:?}",
                self.basis, other.basis
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        self.check_same_basis(other)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a.matmul(b)),
            _ => Storage::Dense(self.to_dense() * other.to_dense()),
        };
        Ok(Operator {
            basis: self.basis.clone(),
            storage,
            hermitian: false,
        })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_same_basis(other)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => Storage::Dense(a + b),
            _ => {
                let mut triplets = Vec::new();
                self.for_each_nonzero(|r, c, v| triplets.push((r, c, v)));
                other.for_each_nonzero(|r, c, v| triplets.push((r, c, v)));
                Storage::Sparse(CsrMatrix::from_triplets(self.dim(), triplets))
            }
        };
        Ok(Operator {
            basis: self.basis.clone(),
            storage,
            hermitian: false,
        })
    }

    pub fn scale(&self, factor: C64) -> Operator {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m * factor),
            Storage::Sparse(m) => {
                let mut triplets = Vec::with_capacity(m.nnz());
                for r in 0..m.dim() {
                    triplets.extend(m.row(r).map(|(c, v)| (r, c, v * factor)));
                }
                Storage::Sparse(CsrMatrix::from_triplets(m.dim(), triplets))
            }
        };
        Operator {
            basis: self.basis.clone(),
            storage,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        ab.add(&ba.scale(C64::new(-1.0, 0.0)))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        let mut worst = 0.0f64;
        self.for_each_nonzero(|_, _, v| worst = worst.max(v.norm()));
        worst
    }

    /// Entry-wise max norm of `[A, D]` for a diagonal `D`.
    pub fn commutator_norm_with_diagonal(&self, diag: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        self.for_each_nonzero(|r, c, v| {
            worst = worst.max((v * (diag[c] - diag[r])).norm());
        });
        worst
    }

    /// Entry-wise max norm of `[A, sum_i S_i^z]`.
    pub fn total_sz_commutator_norm(&self) -> f64 {
        self.commutator_norm_with_diagonal(&self.basis.total_sz_diagonal())
    }

    /// Eigenvalues (ascending) of a Hermitian operator, via the dense form.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let deviation = self.hermitian_deviation();
        if deviation >= HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(linalg::eigvalsh(&self.to_dense()))
    }
}

/// Lifts a single-site operator to site `site` (1-based) of an `n`-site chain.
pub fn embed_site(op: &Operator, site: usize, n: usize) -> Result<Operator> {
    if site == 0 || site > n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    let spin = op.basis().spin();
    let d = spin.dim();
    if op.dim() != d || op.basis().n_sites() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "expected a single-site operator of dimension {d}, got dimension {}",
            op.dim()
        )));
    }
    let left = d.pow((site - 1) as u32);
    let right = d.pow((n - site) as u32);
    let mut local = Vec::new();
    op.for_each_nonzero(|r, c, v| local.push((r, c, v)));
    let mut triplets = Vec::with_capacity(local.len() * left * right);
    for l in 0..left {
        for &(r, c, v) in &local {
            let row_base = (l * d + r) * right;
            let col_base = (l * d + c) * right;
            for x in 0..right {
                triplets.push((row_base + x, col_base + x, v));
            }
        }
    }
    let out = Operator::from_triplets(Basis::full(n, spin), triplets);
    Ok(if op.is_hermitian() {
        out.with_hermitian_flag_unchecked()
    } else {
        out
    })
}

/// Restricts a full-space operator to a magnetization sector.
///
/// Fails unless the operator commutes with total `S^z` to 1e-10, or `force`
/// is set because the caller knows it is block diagonal.
pub fn project_to_sector(op: &Operator, sector: &Arc<SectorBasis>, force: bool) -> Result<Operator> {
    let Basis::Full { n, spin } = op.basis() else {
        return Err(Error::BasisMismatch("projection needs a full-space operator".into()));
    };
    if *n != sector.n() || *spin != sector.spin() {
        return Err(Error::BasisMismatch(format!(
            "operator on N = {n}, s = {spin} vs sector on N = {}, s = {}",
            sector.n(),
            sector.spin()
        )));
    }
    if !force {
        let norm = op.total_sz_commutator_norm();
        if norm >= COMMUTE_TOL {
            return Err(Error::NotBlockDiagonal { norm });
        }
    }
    let dim = sector.dim();
    let mut triplets = Vec::new();
    match op.storage() {
        Storage::Dense(m) => {
            for i in 0..dim {
                for j in 0..dim {
                    let v = m[(sector.full_index(i) as usize, sector.full_index(j) as usize)];
                    if v != C64::new(0.0, 0.0) {
                        triplets.push((i, j, v));
                    }
                }
            }
        }
        Storage::Sparse(m) => {
            for i in 0..dim {
                for (c, v) in m.row(sector.full_index(i) as usize) {
                    if let Some(j) = sector.index_of_full(c as u64) {
                        triplets.push((i, j, v));
                    }
                }
            }
        }
    }
    let out = Operator::from_triplets(Basis::Sector(sector.clone()), triplets);
    Ok(Operator {
        hermitian: op.is_hermitian(),
        ..out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{sector_basis, spin_matrices, Spin};

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn embed_kronecker_order() {
        let m = spin_matrices(Spin::HALF);
        let z1 = embed_site(&m.sz, 1, 2).unwrap().to_dense();
        let diag: Vec<f64> = (0..4).map(|i| z1[(i, i)].re).collect();
        assert_eq!(diag, vec![0.5, 0.5, -0.5, -0.5]);
    }

    #[test]
    fn embed_identity_is_identity() {
        let id = Operator::identity(Basis::full(1, Spin::ONE));
        for site in 1..=3 {
            let e = embed_site(&id, site, 3).unwrap();
            let dense = e.to_dense();
            assert_eq!(dense, DMatrix::identity(27, 27));
        }
    }

    #[test]
    fn embed_site_rejects_bad_site() {
        let m = spin_matrices(Spin::HALF);
        assert!(matches!(embed_site(&m.sz, 0, 2), Err(Error::SiteOutOfRange { .. })));
        assert!(matches!(embed_site(&m.sz, 3, 2), Err(Error::SiteOutOfRange { .. })));
    }

    #[test]
    fn hop_moves_flip_from_site_two_to_site_one() {
        // |01> = site 1 down, site 2 up (levels [1, 0]); S+_1 S-_2 |01> = |10>
        let m = spin_matrices(Spin::HALF);
        let hop = embed_site(&m.splus, 1, 2)
            .unwrap()
            .matmul(&embed_site(&m.sminus, 2, 2).unwrap())
            .unwrap();
        let basis = Basis::full(2, Spin::HALF);
        let mut psi = DVector::zeros(4);
        psi[basis.index_of(&[1, 0]).unwrap()] = re(1.0);
        let out = hop.mul_vec(&psi);
        let target = basis.index_of(&[0, 1]).unwrap();
        for i in 0..4 {
            let expected = if i == target { 1.0 } else { 0.0 };
            assert!((out[i] - re(expected)).norm() < 1e-15);
        }
    }

    #[test]
    fn embedded_operators_on_distinct_sites_commute() {
        let m = spin_matrices(Spin::ONE);
        let ops = [&m.sx, &m.sy, &m.sz, &m.splus];
        for a in ops {
            for b in ops {
                let ea = embed_site(a, 1, 3).unwrap();
                let eb = embed_site(b, 3, 3).unwrap();
                assert_eq!(ea.commutator(&eb).unwrap().max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn sparse_storage_above_limit() {
        let m = spin_matrices(Spin::THREE_HALVES);
        let big = embed_site(&m.sz, 2, 6).unwrap();
        assert!(big.is_sparse());
        assert_eq!(big.dim(), 4096);
        let small = embed_site(&m.sz, 2, 5).unwrap();
        assert!(!small.is_sparse());
    }

    #[test]
    fn projection_of_two_site_xx_bond() {
        let m = spin_matrices(Spin::HALF);
        let xx = embed_site(&m.sx, 1, 2).unwrap().matmul(&embed_site(&m.sx, 2, 2).unwrap()).unwrap();
        let yy = embed_site(&m.sy, 1, 2).unwrap().matmul(&embed_site(&m.sy, 2, 2).unwrap()).unwrap();
        let h = xx.add(&yy).unwrap();
        let sector = sector_basis(2, Spin::HALF, 0).unwrap();
        let block = project_to_sector(&h, &sector, false).unwrap().to_dense();
        let expected = DMatrix::from_row_slice(2, 2, &[re(0.0), re(0.5), re(0.5), re(0.0)]);
        assert!(linalg::max_abs(&(block - expected)) < 1e-15);
    }

    #[test]
    fn projection_rejects_non_conserving_operator() {
        let m = spin_matrices(Spin::HALF);
        let x1 = embed_site(&m.sx, 1, 2).unwrap();
        let sector = sector_basis(2, Spin::HALF, 0).unwrap();
        assert!(matches!(
            project_to_sector(&x1, &sector, false),
            Err(Error::NotBlockDiagonal { .. })
        ));
        assert!(project_to_sector(&x1, &sector, true).is_ok());
    }

    #[test]
    fn projection_of_identity() {
        let id = Operator::identity(Basis::full(3, Spin::ONE));
        let sector = sector_basis(3, Spin::ONE, 0).unwrap();
        let p = project_to_sector(&id, &sector, false).unwrap().to_dense();
        assert_eq!(p, DMatrix::identity(sector.dim(), sector.dim()));
    }

    #[test]
    fn hermitian_flag_is_verified() {
        let m = spin_matrices(Spin::HALF);
        assert!(m.sx.clone().into_hermitian().is_ok());
        assert!(matches!(
            m.splus.clone().into_hermitian(),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sparse_and_dense_agree() {
        let m = spin_matrices(Spin::HALF);
        let dense_sum = embed_site(&m.splus, 1, 3)
            .unwrap()
            .add(&embed_site(&m.sz, 3, 3).unwrap())
            .unwrap();
        let triplets = {
            let mut t = Vec::new();
            dense_sum.for_each_nonzero(|r, c, v| t.push((r, c, v)));
            t
        };
        let csr = CsrMatrix::from_triplets(8, triplets);
        assert_eq!(csr.to_dense(), dense_sum.to_dense());
        let v = DVector::from_fn(8, |i, _| C64::new(i as f64, 1.0 - i as f64));
        assert_eq!(csr.mul_vec(&v), dense_sum.mul_vec(&v));
    }
}
