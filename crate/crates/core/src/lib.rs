//! A laboratory for union-of-subspaces Boolean functions.
//!
//! The crate builds families of subspaces of `F_2^n`, certifies their
//! (dual) subspace-design parameters, analyzes the Fourier spectrum of the
//! indicator of their union, and runs the corruption-bound machinery on both
//! the parity-decision-tree side and the XOR-lifted communication side.
//!
//! Everything that can be exact is exact: GF(2) algebra is bit-packed,
//! truth tables and spectra are dyadic integers, probabilities are
//! [`num_rational::BigRational`]. Floats appear only in entropies and in
//! Monte Carlo statistics.

pub mod commlab;
pub mod designs;
pub mod distribution;
pub mod error;
pub mod f2;
pub mod fourier;
pub mod pdt;
pub mod rational;
pub mod rng;

pub use error::{Error, Result};
