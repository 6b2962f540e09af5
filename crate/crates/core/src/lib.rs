//! Dynamics of two coaxial circular vortex filaments with opposite-sign
//! circulations under the localized induction approximation: vector fields,
//! Hamiltonians, the collision classification, collision times and an
//! event-detecting integrator used as an independent oracle.
//!
//! `no_std` compatible with `alloc`; disable the default `std` feature to route
//! transcendental functions through `libm`.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod math;
pub mod params;
pub mod roots;
pub mod state;

pub use error::{Error, Result};
pub use params::{Params, Renaming};
pub use state::{FullState, HyperbolicState, ReducedState, Reduction};
