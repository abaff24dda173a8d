//! Information-scrambling diagnostics for one-dimensional discrete-time quantum walks.
//!
//! The walker lives on a periodic ring of `L` sites with a two-level coin.
//! Each step rotates the coin by `C(θ)` and shifts spin-down right and
//! spin-up left. Coin angles may be clean, spatially disordered (one angle
//! per site) or temporally disordered (one angle per step).
//!
//! On top of that the crate computes
//!
//! * position distributions and the inverse participation ratio ([`dynamics`]),
//! * continuum dispersion, group and butterfly velocities ([`analytics`]),
//! * out-of-time-ordered correlators `C_{μν}(l, t)` ([`otoc`]),
//! * discrete-time Krylov complexity `K(t)` from the snapshot Gram matrix ([`krylov`]),
//! * seeded, order-independent disorder ensembles ([`ensemble`]).
//!
//! Local operators `σ^μ ⊗ |l⟩⟨l|` stay exactly rank 2 under unitary
//! conjugation, so operator dynamics costs O(L) per step ([`operator`]).
//! The [`oracle`] module rebuilds everything from dense `2L × 2L` matrices
//! for validation at small L.

pub mod analytics;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod krylov;
pub mod operator;
pub mod oracle;
pub mod otoc;
pub mod spin;
pub mod state;
pub mod walk;

pub use error::{Result, WalkError};
pub use spin::{Axis, AxisPair};
pub use state::{InitialSpinor, WalkerState};
pub use walk::{AngleDistribution, CoinSchedule, DisorderKind, DisorderSpec, WalkConfig};
