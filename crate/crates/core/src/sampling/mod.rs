//! Explicit distributions, sample batches and the sampling strategies that
//! draw from them: inverse-CDF, rejection, frugal rejection, Metropolis and
//! the heavy-outcome spoofer.

mod distribution;
mod metropolis;
mod rejection;
mod sample_set;
mod spoof;

pub use distribution::{median_of_values, mix_with_uniform, sample_exact, DiscreteDistribution};
pub use metropolis::{bit_flip_proposal, photon_move_proposal, sample_metropolis};
pub use rejection::{
    clipped_law, clipped_tvd, frugal_tvd_formula, sample_frugal, sample_rejection, RejectionRun,
};
pub use sample_set::{SampleHeader, SampleSet};
pub use spoof::{spoof_heavy, spoof_law};
