//! Matrix polynomials behind boson-sampling probabilities.
//!
//! Three exact permanent routes (naive enumeration, Ryser inclusion-exclusion,
//! Glynn polarization), the Gurvits randomized estimator, and two exact
//! Hafnian routes (matching enumeration and a power-trace subset sum).

mod hafnian;
mod kahan;
mod permanent;

pub use hafnian::{hafnian_naive, hafnian_recursive, HAFNIAN_NAIVE_MAX_DIM, HAFNIAN_RECURSIVE_MAX_DIM, SYMMETRY_TOL};
pub use permanent::{
    gurvits_estimate, gurvits_sample_count, permanent_glynn, permanent_naive, permanent_ryser,
    EstimateWithError, PERMANENT_EXACT_MAX_DIM, PERMANENT_NAIVE_MAX_DIM,
};
