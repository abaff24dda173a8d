//! Heisenberg-evolved local operators in exact rank-2 form.
//!
//! A local Pauli operator `σ^μ ⊗ |l⟩⟨l|` equals `|a⟩⟨a| − |b⟩⟨b|` with `a`, `b`
//! the ±1 eigenvectors of `σ^μ` placed on site `l`. Unitary conjugation maps
//! `a` and `b` to `U a` and `U b`, so the evolved operator never needs to be
//! materialized: storage and each step cost O(L).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::spin::{outer_difference, Axis, Mat2};
use crate::state::WalkerState;
use crate::walk::{CoinRow, CoinSchedule, Rotations};

/// `|plus⟩⟨plus| − |minus⟩⟨minus|` with orthonormal `plus`, `minus`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rank2Operator {
    pub plus: WalkerState,
    pub minus: WalkerState,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `O → U O U†`
    Forward,
    /// `O → U† O U`
    Backward,
}

impl Rank2Operator {
    pub fn new(plus: WalkerState, minus: WalkerState) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(WalkError::DimensionMismatch { expected: plus.dim(), found: minus.dim() });
        }
        Ok(Rank2Operator { plus, minus })
    }

    pub fn sites(&self) -> usize {
        self.plus.sites()
    }

    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    /// Largest deviation of (plus, minus) from an orthonormal pair.
    pub fn orthonormality_error(&self) -> f64 {
        let aa = (self.plus.norm_sqr() - 1.0).abs();
        let bb = (self.minus.norm_sqr() - 1.0).abs();
        let ab = self.plus.inner(&self.minus).norm();
        aa.max(bb).max(ab)
    }

    /// Coin-space block `⟨l| O |l⟩ = α αᵀ* − β βᵀ*`.
    pub fn site_block(&self, site: usize) -> Mat2 {
        outer_difference(&self.plus.spinor(site), &self.minus.spinor(site))
    }

    /// ‖α_l‖² + ‖β_l‖², the site-l weight of `O²`.
    pub fn site_weight(&self, site: usize) -> f64 {
        let a = self.plus.spinor(site);
        let b = self.minus.spinor(site);
        a[0].norm_sqr() + a[1].norm_sqr() + b[0].norm_sqr() + b[1].norm_sqr()
    }

    pub fn conjugate_step(&self, row: CoinRow<'_>, direction: Direction) -> Result<Rank2Operator> {
        let rot = Rotations::from_row(row, self.sites())?;
        self.conjugate_with(&rot, direction)
    }

    pub fn conjugate_with(&self, rot: &Rotations, direction: Direction) -> Result<Rank2Operator> {
        Ok(match direction {
            Direction::Forward => Rank2Operator { plus: self.plus.step_with(rot)?, minus: self.minus.step_with(rot)? },
            Direction::Backward => {
                Rank2Operator { plus: self.plus.step_back_with(rot)?, minus: self.minus.step_back_with(rot)? }
            }
        })
    }

    fn conjugate_in_place(&mut self, rot: &Rotations, direction: Direction, scratch: &mut Vec<Complex64>) -> Result<()> {
        match direction {
            Direction::Forward => {
                self.plus.step_in_place(rot, scratch)?;
                self.minus.step_in_place(rot, scratch)
            }
            Direction::Backward => {
                self.plus.step_back_in_place(rot, scratch)?;
                self.minus.step_back_in_place(rot, scratch)
            }
        }
    }

    /// Sites where the operator has any nonzero component.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.plus.support();
        s.extend(self.minus.support());
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// `σ^μ ⊗ |site⟩⟨site|` on a ring of `sites` sites.
pub fn initial_local_operator(axis: Axis, site: usize, sites: usize) -> Result<Rank2Operator> {
    let (plus, minus) = axis.eigenvectors();
    Ok(Rank2Operator {
        plus: WalkerState::localized(sites, site, plus)?,
        minus: WalkerState::localized(sites, site, minus)?,
    })
}

/// `(A|B) = Tr(A† B) / D`, evaluated from the four state overlaps.
pub fn frobenius_inner(a: &Rank2Operator, b: &Rank2Operator, hilbert_dim: usize) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(WalkError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let pp = a.plus.inner(&b.plus).norm_sqr();
    let pm = a.plus.inner(&b.minus).norm_sqr();
    let mp = a.minus.inner(&b.plus).norm_sqr();
    let mm = a.minus.inner(&b.minus).norm_sqr();
    Ok((pp - pm - mp + mm) / hilbert_dim as f64)
}

/// `O_t = U(t) O U(t)†` for t = 0..=steps, with `U(t) = U_t ⋯ U_1`.
///
/// Snapshot `t` is handed to `visit` as soon as it is produced; nothing is retained.
pub fn evolve_forward<F>(op: &Rank2Operator, schedule: &CoinSchedule, steps: usize, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &Rank2Operator) -> Result<()>,
{
    let sites = op.sites();
    let mut cur = op.clone();
    let mut scratch = Vec::new();
    visit(0, &cur)?;
    let fixed = if schedule.is_time_independent() { Some(schedule.rotations(0, sites)?) } else { None };
    for t in 0..steps {
        match &fixed {
            Some(rot) => cur.conjugate_in_place(rot, Direction::Forward, &mut scratch)?,
            None => cur.conjugate_in_place(&schedule.rotations(t, sites)?, Direction::Forward, &mut scratch)?,
        }
        visit(t + 1, &cur)?;
    }
    Ok(())
}

/// Heisenberg snapshots `O_t = U(t)† O U(t)` for t = 0..=steps.
///
/// With a time-independent schedule each snapshot is one backward step from
/// the previous one. A temporal schedule needs `U_1† ⋯ U_t†` applied to the
/// initial states, which is rebuilt per snapshot (O(T² L) total).
pub fn heisenberg_snapshots(op: &Rank2Operator, schedule: &CoinSchedule, steps: usize) -> Result<Vec<Rank2Operator>> {
    let sites = op.sites();
    let mut scratch = Vec::new();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(op.clone());
    if schedule.is_time_independent() {
        let rot = schedule.rotations(0, sites)?;
        let mut cur = op.clone();
        for _ in 0..steps {
            cur.conjugate_in_place(&rot, Direction::Backward, &mut scratch)?;
            out.push(cur.clone());
        }
    } else {
        let rots = (0..steps).map(|t| schedule.rotations(t, sites)).collect::<Result<Vec<_>>>()?;
        for t in 1..=steps {
            let mut cur = op.clone();
            for rot in rots[..t].iter().rev() {
                cur.conjugate_in_place(rot, Direction::Backward, &mut scratch)?;
            }
            out.push(cur);
        }
    }
    Ok(out)
}
