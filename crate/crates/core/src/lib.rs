//! Separable wave-function modes on the spherical Minkowski and Schwarzschild
//! metrics, and the quadrature machinery that checks them against the
//! Fisher-information-metric constraint equations.
//!
//! The crate is `no_std` (it needs `alloc`). Transcendental functions come
//! from `libm`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod fisher;
pub mod geometry;
pub mod hydrogen;
pub mod modes;
pub mod ode;
pub mod quadrature;
pub mod schwarzschild;
pub mod specfun;

mod math;

pub use error::{Error, Result};
pub use fisher::{statistical_distance, FisherReport};
pub use geometry::{CoordPoint, MetricKind, MetricSpec};
pub use hydrogen::HydrogenState;
pub use modes::{ModeFunction, ModeSpec};
pub use quadrature::Domain;
pub use specfun::AngularIndex;
