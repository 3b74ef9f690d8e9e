//! Desk-scale laboratory for quantum random sampling.
//!
//! The crate generates random instances of the standard sampling schemes
//! (universal gate circuits, IQP circuits, Fock and Gaussian boson sampling),
//! evaluates their output probabilities along independent exact routes,
//! draws samples with several sampling strategies and scores sample sets
//! with a battery of verification statistics.
//!
//! # Layout
//!
//! - [`linalg`]: dense complex matrices, random-matrix ensembles, submatrix construction.
//! - [`poly`]: permanents (naive, Ryser, Glynn, Gurvits) and Hafnians.
//! - [`qubit`]: state-vector simulation, circuit families, hiding, Pauli noise, Pauli strings.
//! - [`boson`]: Fock and Gaussian boson sampling probabilities and the chained-marginal sampler.
//! - [`sampling`]: explicit distributions, sample sets and generic samplers.
//! - [`verify`]: XEB, HOG/BOG, Porter-Thomas statistics, discrimination tests and fidelity witnesses.
//!
//! Every stochastic operation takes an explicit [`RngStream`]; identical
//! `(seed, stream)` pairs reproduce identical results on every platform.
//!
//! Bit strings are little-endian: bit `i` of a basis index is qubit `i`, and the
//! textual form lists qubit 0 first.

pub mod boson;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod qubit;
pub mod rng;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use rng::RngStream;
