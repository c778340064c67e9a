//! Linearized hyperbolic-elliptic system: coefficients, energy multiplier, Galerkin solve.

pub mod banded;
pub mod coeffs;
pub mod galerkin;
pub mod manufactured;
pub mod multiplier;

pub use banded::{BandLu, BandMatrix};
pub use coeffs::{assemble_bar_coefficients, assemble_state_coefficients, BarCoefficients, StateCoefficients};
pub use galerkin::{energy_estimate_ratio, galerkin_reduce, solve_spectral_bvp, synthesize_solution, SpectralBVP};
pub use manufactured::{manufactured_bvp, manufactured_run, manufactured_study, Manufactured, ManufacturedRun, ManufacturedStudy};
pub use multiplier::{build_multiplier, riccati_multiplier, Branch, MultiplierConfig, MultiplierG, RiccatiData};
