//! Fock-state and Gaussian boson sampling: sample spaces, exact outcome
//! probabilities through permanents and Hafnians, and an exact chained
//! marginal sampler.

mod fock;
mod gaussian;

pub use fock::{
    bs_distribution, bs_probability, bs_sample_ancestral, fock_space, fock_space_size, FockOutcome,
    ANCESTRAL_MAX_PHOTONS, BS_MAX_PHOTONS, BS_TABLE_MAX_OUTCOMES,
};
pub use gaussian::{
    gbs_probability_hafnian_a, gbs_probability_hafnian_m, gbs_state_from_smss, gbs_truncated_table, GaussianState,
    SqueezingSpec, GBS_MAX_PHOTONS,
};
