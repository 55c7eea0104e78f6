use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{Basis, Operator};
use crate::{Error, Result, C64};

/// Spin magnitude, stored as `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Spin {
    two_s: u32,
}

impl Spin {
    pub const HALF: Spin = Spin { two_s: 1 };
    pub const ONE: Spin = Spin { two_s: 2 };
    pub const THREE_HALVES: Spin = Spin { two_s: 3 };

    pub fn from_twice(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return Err(Error::InvalidSpin("2s must be at least 1".into()));
        }
        Ok(Spin { two_s })
    }

    pub fn two_s(self) -> u32 {
        self.two_s
    }

    pub fn s(self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    /// Local Hilbert space dimension `2s + 1`.
    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    /// `m` of local level `level` (level 0 is `m = +s`).
    pub fn m(self, level: usize) -> f64 {
        self.s() - level as f64
    }

    /// Quanta above the `m = -s` ground state for `level`.
    pub fn quanta(self, level: usize) -> usize {
        self.two_s as usize - level
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_s % 2 == 0 {
            write!(f, "{}", self.two_s / 2)
        } else {
            write!(f, "{}/2", self.two_s)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        let text = raw.trim();
        let bad = || Error::InvalidSpin(format!("cannot parse {raw:?}; use 1/2, 1, 3/2, ..."));
        if let Some((num, den)) = text.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            let den: u32 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                1 => Spin::from_twice(2 * num),
                2 => Spin::from_twice(num),
                _ => Err(bad()),
            };
        }
        let value: f64 = text.parse().map_err(|_| bad())?;
        let twice = 2.0 * value;
        if twice.fract() != 0.0 || twice < 1.0 {
            return Err(bad());
        }
        Spin::from_twice(twice as u32)
    }
}

impl TryFrom<String> for Spin {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        value.parse()
    }
}

impl From<Spin> for String {
    fn from(spin: Spin) -> String {
        spin.to_string()
    }
}

/// The five single-site spin operators.
#[derive(Clone, Debug)]
pub struct SpinMatrices {
    pub sx: Operator,
    pub sy: Operator,
    pub sz: Operator,
    pub splus: Operator,
    pub sminus: Operator,
}

/// Standard `(2s+1)`-dimensional representation of the spin operators.
pub fn spin_matrices(spin: Spin) -> SpinMatrices {
    let d = spin.dim();
    let s = spin.s();
    let sz = DMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::new(spin.m(r), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    // <m+1| S+ |m> = sqrt(s(s+1) - m(m+1)); level l-1 sits above level l.
    let splus = DMatrix::from_fn(d, d, |r, c| {
        if c == r + 1 {
            let m = spin.m(c);
            C64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let sminus = splus.adjoint();
    let sx = (&splus + &sminus) * C64::new(0.5, 0.0);
    let sy = (&splus - &sminus) * C64::new(0.0, -0.5);
    let basis = Basis::full(1, spin);
    let op = |m: DMatrix<C64>| Operator::dense(basis.clone(), m).expect("square by construction");
    SpinMatrices {
        sx: op(sx),
        sy: op(sy),
        sz: op(sz),
        splus: op(splus),
        sminus: op(sminus),
    }
}

/// Raising coefficient `sqrt(s(s+1) - m(m+1))` for local level `level`.
pub(crate) fn raise_coefficient(spin: Spin, level: usize) -> f64 {
    let s = spin.s();
    let m = spin.m(level);
    (s * (s + 1.0) - m * (m + 1.0)).sqrt()
}

/// Lowering coefficient `sqrt(s(s+1) - m(m-1))` for local level `level`.
pub(crate) fn lower_coefficient(spin: Spin, level: usize) -> f64 {
    let s = spin.s();
    let m = spin.m(level);
    (s * (s + 1.0) - m * (m - 1.0)).sqrt()
}
