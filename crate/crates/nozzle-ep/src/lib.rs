//! Steady supersonic Euler-Poisson flow with nonzero vorticity in a two-dimensional
//! convergent nozzle sector.

pub mod background;
pub mod domain;
pub mod error;
pub mod harness;
pub mod iteration;
pub mod linear;
pub mod potentials;
pub mod state;
pub mod transport;

pub use error::{Error, Result};
