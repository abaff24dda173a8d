//! Coin-space (spin-1/2) algebra: 2×2 complex matrices and Pauli axes.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::WalkError;

/// Row-major 2×2 complex matrix acting on the coin space, basis order (up, down).
pub type Mat2 = [[Complex64; 2]; 2];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli axis label.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn pauli(self) -> Mat2 {
        match self {
            Axis::X => [[ZERO, ONE], [ONE, ZERO]],
            Axis::Y => [[ZERO, -I], [I, ZERO]],
            Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    /// Normalized (+1, −1) eigenvectors of the Pauli matrix.
    pub fn eigenvectors(self) -> ([Complex64; 2], [Complex64; 2]) {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            Axis::X => ([h, h], [h, -h]),
            Axis::Y => ([h, I * h], [h, -I * h]),
            Axis::Z => ([ONE, ZERO], [ZERO, ONE]),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl TryFrom<char> for Axis {
    type Error = WalkError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        match c.to_ascii_lowercase() {
            'x' => Ok(Axis::X),
            'y' => Ok(Axis::Y),
            'z' => Ok(Axis::Z),
            other => Err(WalkError::invalid("axis", format!("unknown Pauli axis '{other}'"))),
        }
    }
}

impl FromStr for Axis {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Axis::try_from(c),
            _ => Err(WalkError::invalid("axis", format!("expected one of x, y, z; got {s:?}"))),
        }
    }
}

/// Ordered pair (μ, ν): μ labels the probe W at site l, ν the source V at the origin.
///
/// Serializes as the two-letter string, e.g. `"xz"`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct AxisPair {
    pub mu: Axis,
    pub nu: Axis,
}

impl AxisPair {
    pub fn new(mu: Axis, nu: Axis) -> Self {
        AxisPair { mu, nu }
    }

    /// All nine (μ, ν) combinations in row-major order.
    pub fn all() -> Vec<AxisPair> {
        Axis::ALL
            .iter()
            .flat_map(|&mu| Axis::ALL.iter().map(move |&nu| AxisPair { mu, nu }))
            .collect()
    }
}

impl fmt::Display for AxisPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.mu, self.nu)
    }
}

impl FromStr for AxisPair {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 2 {
            return Err(WalkError::invalid("pair", format!("expected two axis letters, got {s:?}")));
        }
        Ok(AxisPair { mu: Axis::try_from(chars[0])?, nu: Axis::try_from(chars[1])? })
    }
}

impl From<AxisPair> for String {
    fn from(p: AxisPair) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for AxisPair {
    type Error = WalkError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

pub fn matmul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn trace(a: &Mat2) -> Complex64 {
    a[0][0] + a[1][1]
}

pub fn adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

/// `|u⟩⟨u| − |v⟩⟨v|` as a 2×2 matrix.
pub fn outer_difference(u: &[Complex64; 2], v: &[Complex64; 2]) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = u[i] * u[j].conj() - v[i] * v[j].conj();
        }
    }
    out
}
