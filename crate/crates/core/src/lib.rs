//! Opportunistic active-set selection in `(n,K)`-user interference channels.
//!
//! The channel model, rates, exponential-order calculus and selectors are
//! generic over the scalar type ([`Real`]: `f32` or `f64`); the aliases below
//! fix the common `f64` instantiation. Monte Carlo harnesses in
//! [`experiments`] are `f64` only.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod exporders;
pub mod linalg;
pub mod netmodel;
pub mod rates;
pub mod rng;
pub mod scalar;
pub mod scheduling;

pub use error::{Error, Result};
pub use exporders::{
    analytic_tail_exponent, piecewise_tail_exponent, theorem_bounds, AnalyticLaw, TailEvent,
    TheoremBounds,
};
pub use netmodel::{
    active_set_partition, antenna_pairing_transform, sample_network, ActiveSet, NetworkConfig,
    PathLoss,
};
pub use rates::{RateMode, RateReport};
pub use scalar::Real;
pub use scheduling::{Objective, SelectionResult, Strategy};

pub type Channel = netmodel::ChannelRealization<f64>;
pub type Channel32 = netmodel::ChannelRealization<f32>;
pub type ComplexMatrix = linalg::CMatrix<f64>;
pub type ComplexMatrix32 = linalg::CMatrix<f32>;
pub type Orders = exporders::OrderMatrix<f64>;
pub type Sample = exporders::OrderSample<f64>;
pub type Selection = scheduling::SelectionResult<f64>;
pub type Rates = rates::RateReport<f64>;
