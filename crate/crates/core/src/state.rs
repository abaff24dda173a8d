use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::spin::{ONE, ZERO};
use crate::walk::{step_backward, step_forward, CoinRow, Rotations};

/// Coin ⊗ position amplitudes on a ring, interleaved `[up_0, down_0, up_1, ...]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkerState {
    amplitudes: Vec<Complex64>,
}

/// Named initial spinors for CLI and default runs.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialSpinor {
    /// (|↑⟩ + i|↓⟩)/√2, spreads symmetrically.
    #[default]
    Symmetric,
    Up,
    Down,
    /// (|↑⟩ + |↓⟩)/√2
    Plus,
    /// (|↑⟩ − |↓⟩)/√2
    Minus,
}

impl InitialSpinor {
    pub fn spinor(self) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            InitialSpinor::Symmetric => [Complex64::new(h, 0.0), Complex64::new(0.0, h)],
            InitialSpinor::Up => [ONE, ZERO],
            InitialSpinor::Down => [ZERO, ONE],
            InitialSpinor::Plus => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            InitialSpinor::Minus => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }
}

impl WalkerState {
    pub fn zeros(sites: usize) -> Self {
        WalkerState { amplitudes: vec![ZERO; 2 * sites] }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() || amplitudes.len() % 2 != 0 {
            return Err(WalkError::invalid("amplitudes", "length must be a positive multiple of 2"));
        }
        Ok(WalkerState { amplitudes })
    }

    /// Spinor `(up, down)` placed on a single site.
    pub fn localized(sites: usize, site: usize, spinor: [Complex64; 2]) -> Result<Self> {
        if site >= sites {
            return Err(WalkError::invalid("site", format!("{site} out of range for L = {sites}")));
        }
        let mut state = Self::zeros(sites);
        state.amplitudes[2 * site] = spinor[0];
        state.amplitudes[2 * site + 1] = spinor[1];
        Ok(state)
    }

    pub fn sites(&self) -> usize {
        self.amplitudes.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn spinor(&self, site: usize) -> [Complex64; 2] {
        [self.amplitudes[2 * site], self.amplitudes[2 * site + 1]]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &WalkerState) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// p_x = |ψ↑_x|² + |ψ↓_x|² in internal site order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.chunks_exact(2).map(|s| s[0].norm_sqr() + s[1].norm_sqr()).collect()
    }

    /// Sites carrying any nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        self.amplitudes
            .chunks_exact(2)
            .enumerate()
            .filter(|(_, s)| s[0] != ZERO || s[1] != ZERO)
            .map(|(x, _)| x)
            .collect()
    }

    /// One application of `U = S (⊕ C)` with the given coin row.
    pub fn step(&self, row: CoinRow<'_>) -> Result<WalkerState> {
        let rot = Rotations::from_row(row, self.sites())?;
        self.step_with(&rot)
    }

    pub fn step_with(&self, rot: &Rotations) -> Result<WalkerState> {
        let mut out = Self::zeros(self.sites());
        step_forward(&self.amplitudes, &mut out.amplitudes, rot)?;
        Ok(out)
    }

    /// One application of `U†`.
    pub fn step_back_with(&self, rot: &Rotations) -> Result<WalkerState> {
        let mut out = Self::zeros(self.sites());
        step_backward(&self.amplitudes, &mut out.amplitudes, rot)?;
        Ok(out)
    }

    pub(crate) fn step_in_place(&mut self, rot: &Rotations, scratch: &mut Vec<Complex64>) -> Result<()> {
        scratch.resize(self.amplitudes.len(), ZERO);
        step_forward(&self.amplitudes, scratch, rot)?;
        std::mem::swap(&mut self.amplitudes, scratch);
        Ok(())
    }

    pub(crate) fn step_back_in_place(&mut self, rot: &Rotations, scratch: &mut Vec<Complex64>) -> Result<()> {
        scratch.resize(self.amplitudes.len(), ZERO);
        step_backward(&self.amplitudes, scratch, rot)?;
        std::mem::swap(&mut self.amplitudes, scratch);
        Ok(())
    }
}
