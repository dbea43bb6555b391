//! Periodic homogenization of second-order operators A = (f)* b(D)* g b(D) f
//! at desk scale: effective matrices via the periodic cell problem, spectral
//! germs and threshold operators near the band bottom, truncated Bloch-fiber
//! error functionals with smoothing, eigenvalue-branch fitting, sharpness
//! probes and Cauchy-problem evolutions with homogenization-rate studies.
//!
//! Everything is spectral: coefficients are truncated Fourier series, fibers
//! are Galerkin matrices over dual-mode boxes, and matrix functions go through
//! Hermitian eigendecompositions. The `examples/` directory is the intended
//! entry point; the `bloch-homog` binary exposes the same capabilities as
//! subcommands for scripted runs.

pub mod cell;
pub mod coeff;
pub mod config;
pub mod error;
pub mod evolve;
pub mod fiber;
pub mod germ;
pub mod iso15_3;
pub mod lattice;
pub mod linalg;
pub mod preset;
pub mod reproduce;
pub mod symbol;
pub mod tolerances;

pub use error::{Error, Result};
