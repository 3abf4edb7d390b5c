//! Exact ground states of the constant-coupling pairing Hamiltonian in the
//! seniority-zero pair basis, their BCS and number-projected BCS
//! approximations, and fermionic entanglement and correlation measures of
//! the resulting states.
//!
//! All numerical code is generic over [`Real`] (`f64` or `f32`); the `*64`
//! aliases at the crate root fix the scalar to `f64`.
//!
//! ```
//! use pairsim::{exact, entanglement, ModelParams};
//!
//! let params = ModelParams::<f64>::new(2, 1.0, 1.0).unwrap();
//! let state = exact::ground_state(&params).unwrap();
//! let block = exact::four_mode_block(&state, 1, 2).unwrap();
//! let c = entanglement::concurrence_closed(&block);
//! assert!((c - 1.0 / 2f64.sqrt()).abs() < 1e-12);
//! ```

// `!(x > 0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
mod error;
pub mod exact;
pub mod fock;
pub mod linalg;
pub mod meanfield;
pub mod model;
mod scalar;
pub mod verify;

pub use entanglement::{EvenParityState8, TwoQubitRep};
pub use error::{Error, Result};
pub use exact::{FourModeEvenBlock, OccupationProfile, PairState};
pub use meanfield::{BcsSolution, PbcsSolution};
pub use model::{ModelParams, PairBasis};
pub use scalar::Real;

pub type ModelParams64 = ModelParams<f64>;
pub type PairState64 = PairState<f64>;
pub type OccupationProfile64 = OccupationProfile<f64>;
pub type FourModeEvenBlock64 = FourModeEvenBlock<f64>;
pub type BcsSolution64 = BcsSolution<f64>;
pub type PbcsSolution64 = PbcsSolution<f64>;
pub type TwoQubitRep64 = TwoQubitRep<f64>;
pub type EvenParityState64 = EvenParityState8<f64>;

pub type ModelParams32 = ModelParams<f32>;
pub type PairState32 = PairState<f32>;
