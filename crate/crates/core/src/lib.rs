//! Simulation of adiabatic self-induced transparency (ASIT) in
//! Doppler-broadened two-level media.
//!
//! Units: `γ = 1` sets the frequency scale and `1/γ` the time scale.

pub mod commands;
pub mod config;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod lambda;
pub mod metrics;
pub mod ode;
pub mod output;
pub mod plot;
pub mod presets;
pub mod pulse;
pub mod sweep;
pub mod units;
pub mod verify;

pub use dynamics::{BlochState, MediumParams, SimWindow, Trajectory};
pub use error::{Error, Result};
pub use pulse::{AreaConvention, PulseSequence};
