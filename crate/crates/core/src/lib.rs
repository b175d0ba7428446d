//! SVD-based X-/Y-Code and X-/Y-Precoder MIMO link laboratory.
//!
//! The channel `H = UΛV` is diagonalized by transmitting through `V†` and
//! receiving through `U†`. Subchannels are paired strongest with weakest and
//! each pair is jointly encoded by a 2×2 real matrix, which lifts the
//! diversity order above that of plain SVD transmission while keeping ML
//! detection two-dimensional.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]
#![cfg_attr(test, allow(clippy::approx_constant, clippy::too_many_arguments))]

pub mod analysis;
pub mod channel;
pub mod codes;
pub mod constellation;
pub mod decoders;
pub mod error;
pub mod linalg;
pub mod pairing;
pub mod rng;
pub mod sim;

pub use channel::{channel_from_condition, sample_rayleigh_channel, ChannelSample};
pub use codes::{CodeDesign, PairEncoder, Scheme};
pub use error::{Error, Result};
pub use linalg::{svd_decompose, ComplexMatrix, SvdFactors};
pub use pairing::PairingPlan;
