//! Near-field beamfocusing analysis for uniform linear and uniform circular
//! arrays: geometry, spherical-wave channels, range-domain array gain,
//! 3 dB beamdepth, effective beamfocusing Rayleigh distance (EBRD) and
//! multi-user MRT sum-rate.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod focus;
pub mod format;
pub mod gain;
pub mod geometry;
pub mod oracle;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
