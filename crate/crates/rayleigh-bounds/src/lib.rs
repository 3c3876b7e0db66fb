//! Bounds on the achievable rate of stationary Rayleigh flat-fading channels.
//!
//! All rates are in nats per channel use.

pub mod error;
pub mod model;
pub mod entropy;
pub mod quadrature;
pub mod rates;
pub mod prediction;
pub mod simulator;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ChannelParams, PsdModel, PsdShape};
