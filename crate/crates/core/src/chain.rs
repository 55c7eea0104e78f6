//! Chain descriptions, coupling patterns, Hamiltonians and initial states.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = sum_i J_i (S_i^x S_{i+1}^x + S_i^y S_{i+1}^y) + sum_i B_i S_i^z
//! ```
//!
//! assembled directly in a product basis (full or sector) from the hopping
//! form `J_i/2 (S_i^+ S_{i+1}^- + h.c.)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::QuantumState;
use crate::qcore::spin::{lower_coefficient, raise_coefficient};
use crate::qcore::{sector_basis, Basis, Operator, SectorBasis, Spin};
use crate::{rng, Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    /// Staggered chain, both ends flipped.
    #[serde(alias = "p1")]
    P1,
    /// Dual-port chain with boundary fields, sender flipped.
    #[serde(alias = "p2")]
    P2,
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p1" => Ok(Protocol::P1),
            "p2" => Ok(Protocol::P2),
            other => Err(Error::InvalidArgument(format!("unknown protocol {other:?}"))),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::P1 => "P1",
            Protocol::P2 => "P2",
        })
    }
}

/// A set of (1-based) sites.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "SiteMaskRepr", into = "SiteMaskRepr")]
pub enum SiteMask {
    #[default]
    All,
    /// Sites 1 and N.
    Boundary,
    Sites(Vec<usize>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SiteMaskRepr {
    Named(String),
    List(Vec<usize>),
}

impl TryFrom<SiteMaskRepr> for SiteMask {
    type Error = String;

    fn try_from(repr: SiteMaskRepr) -> std::result::Result<Self, String> {
        match repr {
            SiteMaskRepr::Named(name) => match name.as_str() {
                "all" => Ok(SiteMask::All),
                "boundary" => Ok(SiteMask::Boundary),
                other => Err(format!("unknown site set {other:?} (use \"all\", \"boundary\" or a list)")),
            },
            SiteMaskRepr::List(sites) => Ok(SiteMask::Sites(sites)),
        }
    }
}

impl From<SiteMask> for SiteMaskRepr {
    fn from(mask: SiteMask) -> Self {
        match mask {
            SiteMask::All => SiteMaskRepr::Named("all".into()),
            SiteMask::Boundary => SiteMaskRepr::Named("boundary".into()),
            SiteMask::Sites(s) => SiteMaskRepr::List(s),
        }
    }
}

impl SiteMask {
    /// Resolved site list for an `n`-site chain, ascending and duplicate-free.
    pub fn sites(&self, n: usize) -> Result<Vec<usize>> {
        let mut sites = match self {
            SiteMask::All => (1..=n).collect(),
            SiteMask::Boundary => vec![1, n],
            SiteMask::Sites(list) => list.clone(),
        };
        sites.sort_unstable();
        sites.dedup();
        if let Some(&bad) = sites.iter().find(|&&s| s == 0 || s > n) {
            return Err(Error::SiteOutOfRange { site: bad, n });
        }
        Ok(sites)
    }
}

fn default_weak() -> f64 {
    1.0
}

fn default_strong() -> f64 {
    10.0
}

/// One chain instance. Field names match the config file keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub spin: Spin,
    pub protocol: Protocol,
    /// Weak coupling `δ`.
    #[serde(rename = "delta", default = "default_weak")]
    pub weak: f64,
    /// Strong coupling `Δ`.
    #[serde(rename = "Delta", default = "default_strong")]
    pub strong: f64,
    /// Field on sites 1 and N.
    #[serde(default)]
    pub boundary_field: f64,
    #[serde(default)]
    pub bulk_field: f64,
    /// Dephasing rate `γ`.
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub dephasing_sites: SiteMask,
}

impl ChainSpec {
    /// Defaults: `δ = 1`, `Δ = 10`, no fields, no dephasing.
    pub fn new(protocol: Protocol, n: usize, spin: Spin) -> Self {
        ChainSpec {
            n,
            spin,
            protocol,
            weak: default_weak(),
            strong: default_strong(),
            boundary_field: 0.0,
            bulk_field: 0.0,
            gamma: 0.0,
            dephasing_sites: SiteMask::All,
        }
    }

    pub fn with_couplings(mut self, strong: f64, weak: f64) -> Self {
        self.strong = strong;
        self.weak = weak;
        self
    }

    pub fn with_boundary_field(mut self, b: f64) -> Self {
        self.boundary_field = b;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_dephasing_sites(mut self, mask: SiteMask) -> Self {
        self.dephasing_sites = mask;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidChain(msg));
        if self.n < 3 {
            return bad(format!("N = {} (need at least 3 sites)", self.n));
        }
        if !(self.weak > 0.0 && self.weak.is_finite()) || !(self.strong > 0.0 && self.strong.is_finite()) {
            return bad(format!("couplings must be positive (delta = {}, Delta = {})", self.weak, self.strong));
        }
        if self.weak > self.strong {
            return bad(format!("delta = {} exceeds Delta = {}", self.weak, self.strong));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma = {} must be non-negative", self.gamma));
        }
        if !self.boundary_field.is_finite() || !self.bulk_field.is_finite() {
            return bad("fields must be finite".into());
        }
        self.dephasing_sites.sites(self.n)?;
        self.couplings()?;
        Ok(())
    }

    pub fn couplings(&self) -> Result<Vec<f64>> {
        coupling_pattern(self.protocol, self.n, self.strong, self.weak)
    }

    /// Clean on-site fields `B_i`, one per site.
    pub fn fields(&self) -> Vec<f64> {
        let mut fields = vec![self.bulk_field; self.n];
        fields[0] = self.boundary_field;
        fields[self.n - 1] = self.boundary_field;
        fields
    }

    /// Local levels of the initial product state (level 0 = `m = +s`).
    pub fn initial_levels(&self) -> Vec<u8> {
        let ground = (self.spin.dim() - 1) as u8;
        let mut levels = vec![ground; self.n];
        levels[0] = 0;
        if self.protocol == Protocol::P1 {
            levels[self.n - 1] = 0;
        }
        levels
    }

    /// Magnetization sector holding the initial state.
    pub fn sector(&self) -> Result<Arc<SectorBasis>> {
        let two_s = i64::from(self.spin.two_s());
        let two_m = self
            .initial_levels()
            .iter()
            .map(|&l| two_s - 2 * i64::from(l))
            .sum();
        sector_basis(self.n, self.spin, two_m)
    }

    /// Hamiltonian restricted to the sector of the initial state.
    pub fn sector_hamiltonian(&self, disorder: Option<&Disorder>) -> Result<Operator> {
        build_hamiltonian(self, &Basis::Sector(self.sector()?), disorder)
    }
}

/// Bond strengths `J_1 .. J_{N-1}`.
///
/// P2 is `[δ, Δ, ..., Δ, δ]`. P1 places weak bonds at both ends and around each
/// strong dimer, mirror-symmetric about the central site; it closes only for
/// `N ≡ 3 (mod 4)`, e.g. `N = 7 → [δ, Δ, δ, δ, Δ, δ]`.
pub fn coupling_pattern(protocol: Protocol, n: usize, strong: f64, weak: f64) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::InvalidChain(format!("N = {n} (need at least 3 sites)")));
    }
    match protocol {
        Protocol::P2 => {
            let mut j = vec![strong; n - 1];
            j[0] = weak;
            j[n - 2] = weak;
            Ok(j)
        }
        Protocol::P1 => {
            if n % 4 != 3 {
                return Err(Error::InvalidChain(format!(
                    "P1 needs N ≡ 3 (mod 4) for a mirror-symmetric dimer pattern, got N = {n}"
                )));
            }
            let half: Vec<f64> = (0..(n - 1) / 2)
                .map(|i| if i % 2 == 0 { weak } else { strong })
                .collect();
            Ok(half.iter().chain(half.iter().rev()).copied().collect())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DisorderMode {
    #[default]
    None,
    /// Random on-site fields `E δ d_j S_j^z`.
    Diagonal,
    /// Random bonds `J_i → J_i + E d_i δ`.
    OffDiagonal,
    Both,
}

impl DisorderMode {
    pub fn has_diagonal(self) -> bool {
        matches!(self, DisorderMode::Diagonal | DisorderMode::Both)
    }

    pub fn has_off_diagonal(self) -> bool {
        matches!(self, DisorderMode::OffDiagonal | DisorderMode::Both)
    }
}

/// One draw of static disorder; entries lie in `[-0.5, 0.5]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub seed: u64,
    pub strength: f64,
}

/// Draws `n_diag` site offsets then `n_bonds` bond offsets from the stream
/// keyed by `seed`.
pub fn draw_disorder(seed: u64, strength: f64, n_diag: usize, n_bonds: usize) -> Result<DisorderRealization> {
    if !(strength >= 0.0 && strength.is_finite()) {
        return Err(Error::InvalidArgument(format!("disorder strength {strength} must be >= 0")));
    }
    let mut stream = rng::stream(seed);
    let diag = (0..n_diag).map(|_| stream.random_range(-0.5..=0.5)).collect();
    let offdiag = (0..n_bonds).map(|_| stream.random_range(-0.5..=0.5)).collect();
    Ok(DisorderRealization {
        diag,
        offdiag,
        seed,
        strength,
    })
}

/// Disorder applied on top of a clean chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Disorder {
    pub mode: DisorderMode,
    pub realization: DisorderRealization,
    /// Sites receiving diagonal offsets; the default is `{1, N}`.
    pub diag_sites: SiteMask,
}

impl Disorder {
    pub fn new(mode: DisorderMode, realization: DisorderRealization) -> Self {
        Disorder {
            mode,
            realization,
            diag_sites: SiteMask::Boundary,
        }
    }

    pub fn with_diag_sites(mut self, sites: SiteMask) -> Self {
        self.diag_sites = sites;
        self
    }
}

/// Builds `H` for `spec` in `basis`, optionally disordered.
pub fn build_hamiltonian(spec: &ChainSpec, basis: &Basis, disorder: Option<&Disorder>) -> Result<Operator> {
    spec.validate()?;
    if basis.n_sites() != spec.n || basis.spin() != spec.spin {
        return Err(Error::BasisMismatch(format!(
            "chain has N = {}, s = {}; basis has N = {}, s = {}",
            spec.n,
            spec.spin,
            basis.n_sites(),
            basis.spin()
        )));
    }
    let n = spec.n;
    let mut couplings = spec.couplings()?;
    let mut fields = spec.fields();

    if let Some(dis) = disorder {
        let r = &dis.realization;
        let scale = r.strength * spec.weak;
        if dis.mode.has_diagonal() {
            let sites = dis.diag_sites.sites(n)?;
            if r.diag.len() != sites.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} diagonal offsets for {} disordered sites",
                    r.diag.len(),
                    sites.len()
                )));
            }
            for (&site, &d) in sites.iter().zip(&r.diag) {
                fields[site - 1] += scale * d;
            }
        }
        if dis.mode.has_off_diagonal() {
            if r.offdiag.len() != n - 1 {
                return Err(Error::ShapeMismatch(format!(
                    "{} bond offsets for {} bonds",
                    r.offdiag.len(),
                    n - 1
                )));
            }
            for (j, &d) in couplings.iter_mut().zip(&r.offdiag) {
                *j += scale * d;
            }
        }
    }

    let spin = spec.spin;
    let top = spin.dim() - 1;
    let dim = basis.dim();
    let mut triplets = Vec::with_capacity(dim * n);
    let mut levels = vec![0u8; n];
    let mut target = vec![0u8; n];
    for a in 0..dim {
        basis.levels_into(a, &mut levels);
        let diag: f64 = levels
            .iter()
            .zip(&fields)
            .map(|(&l, &b)| b * spin.m(l as usize))
            .sum();
        if diag != 0.0 {
            triplets.push((a, a, C64::new(diag, 0.0)));
        }
        for (bond, &j) in couplings.iter().enumerate() {
            let (left, right) = (levels[bond] as usize, levels[bond + 1] as usize);
            // S+_i S-_{i+1}: raise the left site, lower the right one.
            if j == 0.0 || left == 0 || right == top {
                continue;
            }
            target.copy_from_slice(&levels);
            target[bond] -= 1;
            target[bond + 1] += 1;
            let b = basis
                .index_of(&target)
                .expect("hopping conserves magnetization");
            let v = C64::new(0.5 * j * (raise_coefficient(spin, left) * lower_coefficient(spin, right)), 0.0);
            triplets.push((b, a, v));
            triplets.push((a, b, v));
        }
    }
    Operator::from_triplets(basis.clone(), triplets).into_hermitian()
}

/// Initial product state in its magnetization sector.
///
/// `|1>` is the fully flipped `m = +s` state and `|0>` is `m = -s`.
pub fn initial_state(spec: &ChainSpec) -> Result<QuantumState> {
    spec.validate()?;
    let sector = spec.sector()?;
    QuantumState::product(Basis::Sector(sector), &spec.initial_levels())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{embed_site, project_to_sector, spin_matrices};

    #[test]
    fn p2_pattern() {
        assert_eq!(
            coupling_pattern(Protocol::P2, 7, 10.0, 1.0).unwrap(),
            vec![1.0, 10.0, 10.0, 10.0, 10.0, 1.0]
        );
    }

    #[test]
    fn p1_patterns_are_mirror_symmetric() {
        assert_eq!(
            coupling_pattern(Protocol::P1, 7, 10.0, 1.0).unwrap(),
            vec![1.0, 10.0, 1.0, 1.0, 10.0, 1.0]
        );
        let j11 = coupling_pattern(Protocol::P1, 11, 10.0, 1.0).unwrap();
        assert_eq!(j11, vec![1.0, 10.0, 1.0, 10.0, 1.0, 1.0, 10.0, 1.0, 10.0, 1.0]);
        let rev: Vec<f64> = j11.iter().rev().copied().collect();
        assert_eq!(j11, rev);
        assert_eq!(coupling_pattern(Protocol::P1, 3, 10.0, 1.0).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn p1_rejects_incompatible_length() {
        for n in [4, 5, 6, 8, 9] {
            assert!(coupling_pattern(Protocol::P1, n, 10.0, 1.0).is_err(), "N = {n}");
        }
        assert!(coupling_pattern(Protocol::P2, 2, 10.0, 1.0).is_err());
    }

    #[test]
    fn two_site_bond_spectrum() {
        // Oracle: XX bond couples |01>,|10> with element 1/2 -> {-1/2, 0, 0, 1/2}.
        let m = spin_matrices(Spin::HALF);
        let h = embed_site(&m.sx, 1, 2)
            .unwrap()
            .matmul(&embed_site(&m.sx, 2, 2).unwrap())
            .unwrap()
            .add(
                &embed_site(&m.sy, 1, 2)
                    .unwrap()
                    .matmul(&embed_site(&m.sy, 2, 2).unwrap())
                    .unwrap(),
            )
            .unwrap();
        let ev = h.eigenvalues().unwrap();
        for (got, want) in ev.iter().zip([-0.5, 0.0, 0.0, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_chain_matches_operator_algebra() {
        // δ = Δ: uniform P2 chain, compare against sums of embedded operators.
        let spec = ChainSpec::new(Protocol::P2, 3, Spin::ONE)
            .with_couplings(1.0, 1.0)
            .with_boundary_field(0.7);
        let basis = Basis::full(3, Spin::ONE);
        let h = build_hamiltonian(&spec, &basis, None).unwrap();
        let m = spin_matrices(Spin::ONE);
        let mut reference = Operator::from_triplets(basis.clone(), vec![]);
        for i in 1..3 {
            for op in [&m.sx, &m.sy] {
                let term = embed_site(op, i, 3).unwrap().matmul(&embed_site(op, i + 1, 3).unwrap()).unwrap();
                reference = reference.add(&term).unwrap();
            }
        }
        for site in [1, 3] {
            reference = reference
                .add(&embed_site(&m.sz, site, 3).unwrap().scale(C64::new(0.7, 0.0)))
                .unwrap();
        }
        let diff = h.to_dense() - reference.to_dense();
        assert!(crate::linalg::max_abs(&diff) < 1e-13);
    }

    #[test]
    fn field_only_chain_is_diagonal() {
        let spec = ChainSpec::new(Protocol::P2, 3, Spin::HALF)
            .with_couplings(1.0, 1.0)
            .with_boundary_field(0.3);
        let disorder = Disorder::new(
            DisorderMode::OffDiagonal,
            DisorderRealization {
                diag: vec![],
                offdiag: vec![-1.0, -1.0],
                seed: 0,
                strength: 1.0,
            },
        );
        // J + E d δ = 0 removes both bonds.
        let h = build_hamiltonian(&spec, &Basis::full(3, Spin::HALF), Some(&disorder)).unwrap();
        let dense = h.to_dense();
        for r in 0..8 {
            for c in 0..8 {
                if r != c {
                    assert_eq!(dense[(r, c)], C64::new(0.0, 0.0));
                }
            }
        }
        let mut ev = h.eigenvalues().unwrap();
        ev.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert_eq!(ev.len(), 3);
        assert!((ev[0] + 0.3).abs() < 1e-12 && ev[1].abs() < 1e-12 && (ev[2] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn hamiltonians_conserve_magnetization() {
        for spin in [Spin::HALF, Spin::ONE, Spin::THREE_HALVES] {
            let spec = ChainSpec::new(Protocol::P2, 4, spin).with_boundary_field(2.0);
            let h = build_hamiltonian(&spec, &Basis::full(4, spin), None).unwrap();
            assert!(h.total_sz_commutator_norm() < 1e-10);
            assert!(h.is_hermitian());
        }
    }

    #[test]
    fn sector_blocks_reproduce_full_spectrum() {
        let spin = Spin::ONE;
        let spec = ChainSpec::new(Protocol::P2, 4, spin).with_boundary_field(1.3);
        let full = build_hamiltonian(&spec, &Basis::full(4, spin), None).unwrap();
        let mut all = Vec::new();
        for two_m in (-8..=8).step_by(2) {
            let sector = sector_basis(4, spin, two_m).unwrap();
            let direct = build_hamiltonian(&spec, &Basis::Sector(sector.clone()), None).unwrap();
            let projected = project_to_sector(&full, &sector, false).unwrap();
            assert!(crate::linalg::max_abs(&(direct.to_dense() - projected.to_dense())) < 1e-14);
            all.extend(direct.eigenvalues().unwrap());
        }
        all.sort_by(f64::total_cmp);
        let reference = full.eigenvalues().unwrap();
        assert_eq!(all.len(), reference.len());
        for (a, b) in all.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn initial_states() {
        let p1 = ChainSpec::new(Protocol::P1, 7, Spin::HALF);
        let s = initial_state(&p1).unwrap();
        let sector = s.basis().as_sector().unwrap().clone();
        assert_eq!(sector.two_m(), -3);
        assert_eq!(sector.dim(), 21);
        let p2 = ChainSpec::new(Protocol::P2, 7, Spin::HALF);
        let sector = initial_state(&p2).unwrap().basis().as_sector().unwrap().clone();
        assert_eq!(sector.two_m(), -5);
        assert_eq!(sector.dim(), 7);
        let p2_one = ChainSpec::new(Protocol::P2, 3, Spin::ONE);
        assert_eq!(p2_one.initial_levels(), vec![0, 2, 2]);
        assert_eq!(p2_one.sector().unwrap().quanta(), 2);
    }

    #[test]
    fn disorder_draws_are_reproducible_and_bounded() {
        let a = draw_disorder(99, 0.5, 2, 6).unwrap();
        let b = draw_disorder(99, 0.5, 2, 6).unwrap();
        assert_eq!(a, b);
        assert!(a.diag.iter().chain(&a.offdiag).all(|x| (-0.5..=0.5).contains(x)));
        assert!(draw_disorder(1, -0.1, 2, 6).is_err());
    }

    #[test]
    fn disorder_statistics() {
        let r = draw_disorder(2024, 1.0, 10_000, 0).unwrap();
        let mean = r.diag.iter().sum::<f64>() / r.diag.len() as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!(r.diag.iter().all(|x| (-0.5..=0.5).contains(x)));
    }

    #[test]
    fn zero_strength_disorder_is_clean() {
        let spec = ChainSpec::new(Protocol::P2, 7, Spin::HALF).with_boundary_field(3.4);
        let clean = spec.sector_hamiltonian(None).unwrap();
        let r = draw_disorder(5, 0.0, 2, 6).unwrap();
        let dirty = spec
            .sector_hamiltonian(Some(&Disorder::new(DisorderMode::Both, r)))
            .unwrap();
        assert_eq!(clean.to_dense(), dirty.to_dense());
    }

    #[test]
    fn disorder_shape_mismatch() {
        let spec = ChainSpec::new(Protocol::P2, 7, Spin::HALF);
        let r = draw_disorder(5, 1.0, 3, 6).unwrap();
        let err = spec.sector_hamiltonian(Some(&Disorder::new(DisorderMode::Diagonal, r)));
        assert!(matches!(err, Err(Error::ShapeMismatch(_))));
        let r = draw_disorder(5, 1.0, 2, 5).unwrap();
        let err = spec.sector_hamiltonian(Some(&Disorder::new(DisorderMode::OffDiagonal, r)));
        assert!(matches!(err, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::new(Protocol::P2, 2, Spin::HALF).validate().is_err());
        assert!(ChainSpec::new(Protocol::P1, 6, Spin::HALF).validate().is_err());
        assert!(ChainSpec::new(Protocol::P2, 7, Spin::HALF).with_couplings(1.0, 2.0).validate().is_err());
        assert!(ChainSpec::new(Protocol::P2, 7, Spin::HALF).with_gamma(-1.0).validate().is_err());
        assert!(ChainSpec::new(Protocol::P2, 7, Spin::HALF).with_couplings(1.0, 1.0).validate().is_ok());
    }

    #[test]
    fn spec_round_trips_through_toml() {
        let spec = ChainSpec::new(Protocol::P2, 7, Spin::THREE_HALVES)
            .with_boundary_field(4.7)
            .with_dephasing_sites(SiteMask::Boundary);
        let text = toml::to_string(&spec).unwrap();
        assert!(text.contains("N = 7") && text.contains("Delta = 10.0") && text.contains("spin = \"3/2\""));
        let back: ChainSpec = toml::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let minimal: ChainSpec = toml::from_str("N = 7\nspin = \"1\"\nprotocol = \"p1\"").unwrap();
        assert_eq!(minimal, ChainSpec::new(Protocol::P1, 7, Spin::ONE));
    }
}
