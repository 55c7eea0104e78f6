use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex};

use super::Spin;
use crate::{Error, Result};

/// Canonical enumeration of the product states with a fixed total `S^z`.
///
/// States are stored as level sequences in lexicographic order, which is the
/// same as increasing full-space index.
pub struct SectorBasis {
    n: usize,
    spin: Spin,
    two_m: i64,
    levels: Vec<u8>,
    full_index: Vec<u64>,
}

impl SectorBasis {
    fn enumerate(n: usize, spin: Spin, quanta: usize) -> Self {
        let d = spin.dim();
        let two_s = spin.two_s() as usize;
        let mut levels = Vec::new();
        let mut full_index = Vec::new();
        let mut current = vec![0u8; n];

        fn visit(
            site: usize,
            remaining: usize,
            n: usize,
            d: usize,
            two_s: usize,
            current: &mut [u8],
            levels: &mut Vec<u8>,
            full_index: &mut Vec<u64>,
        ) {
            if site == n {
                if remaining == 0 {
                    levels.extend_from_slice(current);
                    let idx = current.iter().fold(0u64, |acc, &l| acc * d as u64 + u64::from(l));
                    full_index.push(idx);
                }
                return;
            }
            let sites_after = n - site - 1;
            for level in 0..d {
                let q = two_s - level;
                if q > remaining || remaining - q > sites_after * two_s {
                    continue;
                }
                current[site] = level as u8;
                visit(site + 1, remaining - q, n, d, two_s, current, levels, full_index);
            }
        }

        visit(0, quanta, n, d, two_s, &mut current, &mut levels, &mut full_index);
        let two_m = 2 * quanta as i64 - (n * two_s) as i64;
        SectorBasis {
            n,
            spin,
            two_m,
            levels,
            full_index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// Twice the total magnetization.
    pub fn two_m(&self) -> i64 {
        self.two_m
    }

    pub fn total_m(&self) -> f64 {
        self.two_m as f64 / 2.0
    }

    /// Total quanta above the all-down state.
    pub fn quanta(&self) -> usize {
        ((self.n as i64 * i64::from(self.spin.two_s()) + self.two_m) / 2) as usize
    }

    pub fn dim(&self) -> usize {
        self.full_index.len()
    }

    /// Levels of state `i`, one per site.
    pub fn state(&self, i: usize) -> &[u8] {
        &self.levels[i * self.n..(i + 1) * self.n]
    }

    /// `m_i` values of state `i`.
    pub fn m_values(&self, i: usize) -> Vec<f64> {
        self.state(i).iter().map(|&l| self.spin.m(l as usize)).collect()
    }

    pub fn full_index(&self, i: usize) -> u64 {
        self.full_index[i]
    }

    pub fn index_of(&self, levels: &[u8]) -> Option<usize> {
        if levels.len() != self.n {
            return None;
        }
        let d = self.spin.dim() as u64;
        let key = levels.iter().fold(0u64, |acc, &l| acc * d + u64::from(l));
        self.full_index.binary_search(&key).ok()
    }

    pub fn index_of_full(&self, full: u64) -> Option<usize> {
        self.full_index.binary_search(&full).ok()
    }
}

impl fmt::Debug for SectorBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SectorBasis")
            .field("n", &self.n)
            .field("spin", &self.spin)
            .field("two_m", &self.two_m)
            .field("dim", &self.dim())
            .finish()
    }
}

type SectorKey = (usize, u32, i64);

static SECTOR_CACHE: LazyLock<Mutex<HashMap<SectorKey, Arc<SectorBasis>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Sector of total magnetization `two_m / 2`. Results are cached per
/// `(N, spin, total_m)`.
pub fn sector_basis(n: usize, spin: Spin, two_m: i64) -> Result<Arc<SectorBasis>> {
    let total_twice = n as i64 * i64::from(spin.two_s());
    let empty = || Error::EmptySector {
        n,
        two_s: spin.two_s(),
        two_m,
    };
    if n == 0 || two_m.abs() > total_twice || (two_m + total_twice) % 2 != 0 {
        return Err(empty());
    }
    let key = (n, spin.two_s(), two_m);
    if let Some(hit) = SECTOR_CACHE.lock().expect("sector cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let quanta = ((two_m + total_twice) / 2) as usize;
    let basis = Arc::new(SectorBasis::enumerate(n, spin, quanta));
    SECTOR_CACHE
        .lock()
        .expect("sector cache poisoned")
        .entry(key)
        .or_insert_with(|| basis.clone());
    Ok(basis)
}

/// Sector holding `quanta` excitations above the all-down state.
pub fn sector_basis_for_quanta(n: usize, spin: Spin, quanta: usize) -> Result<Arc<SectorBasis>> {
    let two_m = 2 * quanta as i64 - n as i64 * i64::from(spin.two_s());
    sector_basis(n, spin, two_m)
}

/// Basis tag carried by operators and states.
#[derive(Clone, Debug)]
pub enum Basis {
    /// Full product space of `n` sites, dimension `d^n`.
    Full { n: usize, spin: Spin },
    Sector(Arc<SectorBasis>),
}

impl Basis {
    pub fn full(n: usize, spin: Spin) -> Self {
        Basis::Full { n, spin }
    }

    pub fn sector(sector: Arc<SectorBasis>) -> Self {
        Basis::Sector(sector)
    }

    pub fn n_sites(&self) -> usize {
        match self {
            Basis::Full { n, .. } => *n,
            Basis::Sector(s) => s.n(),
        }
    }

    pub fn spin(&self) -> Spin {
        match self {
            Basis::Full { spin, .. } => *spin,
            Basis::Sector(s) => s.spin(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Full { n, spin } => spin.dim().pow(*n as u32),
            Basis::Sector(s) => s.dim(),
        }
    }

    pub fn is_sector(&self) -> bool {
        matches!(self, Basis::Sector(_))
    }

    pub fn as_sector(&self) -> Option<&Arc<SectorBasis>> {
        match self {
            Basis::Sector(s) => Some(s),
            Basis::Full { .. } => None,
        }
    }

    /// Writes the levels of basis state `i` into `out` (length `n`).
    pub fn levels_into(&self, i: usize, out: &mut [u8]) {
        match self {
            Basis::Full { n, spin } => {
                let d = spin.dim();
                let mut rest = i;
                for site in (0..*n).rev() {
                    out[site] = (rest % d) as u8;
                    rest /= d;
                }
            }
            Basis::Sector(s) => out.copy_from_slice(s.state(i)),
        }
    }

    pub fn levels(&self, i: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.n_sites()];
        self.levels_into(i, &mut out);
        out
    }

    pub fn index_of(&self, levels: &[u8]) -> Option<usize> {
        match self {
            Basis::Full { n, spin } => {
                if levels.len() != *n || levels.iter().any(|&l| l as usize >= spin.dim()) {
                    return None;
                }
                let d = spin.dim();
                Some(levels.iter().fold(0usize, |acc, &l| acc * d + l as usize))
            }
            Basis::Sector(s) => s.index_of(levels),
        }
    }

    /// Diagonal of `sum_i S_i^z` in this basis.
    pub fn total_sz_diagonal(&self) -> Vec<f64> {
        let spin = self.spin();
        let mut buf = vec![0u8; self.n_sites()];
        (0..self.dim())
            .map(|i| {
                self.levels_into(i, &mut buf);
                buf.iter().map(|&l| spin.m(l as usize)).sum()
            })
            .collect()
    }

    /// Diagonal of `S_site^z` (1-based site).
    pub fn site_sz_diagonal(&self, site: usize) -> Vec<f64> {
        let spin = self.spin();
        let mut buf = vec![0u8; self.n_sites()];
        (0..self.dim())
            .map(|i| {
                self.levels_into(i, &mut buf);
                spin.m(buf[site - 1] as usize)
            })
            .collect()
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Basis::Full { n: a, spin: sa }, Basis::Full { n: b, spin: sb }) => a == b && sa == sb,
            (Basis::Sector(a), Basis::Sector(b)) => {
                Arc::ptr_eq(a, b) || (a.n() == b.n() && a.spin() == b.spin() && a.two_m() == b.two_m())
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_zero_magnetization() {
        let b = sector_basis(2, Spin::HALF, 0).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.m_values(0), vec![0.5, -0.5]);
        assert_eq!(b.m_values(1), vec![-0.5, 0.5]);
    }

    #[test]
    fn single_flip_sector_of_seven() {
        let b = sector_basis(7, Spin::HALF, -5).unwrap();
        assert_eq!(b.dim(), 7);
        assert_eq!(b.quanta(), 1);
        assert_eq!(b.total_m(), -2.5);
    }

    #[test]
    fn sector_dimensions_are_complete() {
        let spin = Spin::ONE;
        let n = 3;
        let total: usize = (-6..=6)
            .step_by(2)
            .map(|two_m| sector_basis(n, spin, two_m).unwrap().dim())
            .sum();
        assert_eq!(total, 27);
        // spin-3/2 pairs: 2M ranges over odd and even values alike
        let total: usize = (-6..=6)
            .map(|two_m| sector_basis(2, Spin::THREE_HALVES, two_m).map(|b| b.dim()).unwrap_or(0))
            .sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn unattainable_sector_is_an_error() {
        assert!(matches!(
            sector_basis(2, Spin::HALF, 1),
            Err(Error::EmptySector { .. })
        ));
        assert!(sector_basis(2, Spin::HALF, 4).is_err());
    }

    #[test]
    fn states_are_canonical_and_consistent() {
        let b = sector_basis(4, Spin::ONE, 0).unwrap();
        for i in 0..b.dim() {
            let sum: f64 = b.m_values(i).iter().sum();
            assert_eq!(sum, 0.0);
            assert_eq!(b.index_of(b.state(i)), Some(i));
            if i > 0 {
                assert!(b.state(i - 1) < b.state(i));
            }
        }
    }

    #[test]
    fn cache_returns_same_instance() {
        let a = sector_basis(5, Spin::HALF, 1).unwrap();
        let b = sector_basis(5, Spin::HALF, 1).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn full_basis_levels_round_trip() {
        let b = Basis::full(3, Spin::ONE);
        for i in 0..b.dim() {
            assert_eq!(b.index_of(&b.levels(i)), Some(i));
        }
        assert_eq!(b.levels(1), vec![0, 0, 1]);
    }
}
