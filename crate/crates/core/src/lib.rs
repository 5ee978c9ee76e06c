//! Secret-key rates for decoy-state BB84 when the light source leaks
//! information through a passive side channel.
//!
//! The pipeline runs bottom-up:
//!
//! * [`qmath`]: small dense complex matrices, partial traces, entropies.
//! * [`sidechannel`]: the four side-channel states, given by their Gram
//!   matrix, plus the basis-imbalance parameter Δ and HOM visibility.
//! * [`attack`]: the phase-covariant cloner, Bob's QBER and Eve's Holevo
//!   information with and without the side channel.
//! * [`effective_error`]: converts the extra leakage into an effective Bob
//!   error rate.
//! * [`decoy`]: asymptotic decoy-state rates, plus the GLLP-Koashi bound
//!   for comparison.
//! * [`cli`]: scenario configs, distance sweeps, CSV output and presets.

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alphabet;
pub mod attack;
pub mod cli;
pub mod decoy;
pub mod effective_error;
pub mod error;
pub mod qmath;
pub mod sidechannel;

pub use error::{Error, Result};
