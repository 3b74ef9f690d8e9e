//! Verification statistics: cross-entropy benchmarks, heavy and binned
//! outcome tests, Porter-Thomas diagnostics, boson-sampling discrimination
//! tests and fidelity witnesses.

mod bosonic;
mod distance;
mod fidelity;
mod heavy;
mod report;
mod xeb;

pub use bosonic::{bayes_discriminate, row_norm_discriminate, row_norm_estimator};
pub use distance::{porter_thomas_stats, tvd, ANTICONCENTRATION_ALPHAS};
pub use fidelity::{cluster_witness, direct_fidelity_estimation, stabilizer_outcome, WitnessReport};
pub use heavy::{bog_distance, bog_exact, bog_finite_sample_floor, hog_score, sampled_median, BogBins, HOG_SCALE};
pub use report::{mean_and_stderr, render_table, VerificationReport};
pub use xeb::{cross_entropy_difference, xeb_ensemble_norm, xeb_linear, xeb_linear_exact, xeb_unbiased};
