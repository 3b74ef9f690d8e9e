use std::time::Instant;

use super::SampleSet;
use crate::error::{Error, Result};
use crate::RngStream;

/// Outcome of a rejection-sampling run over the index domain `0..N`.
#[derive(Debug, Clone)]
pub struct RejectionRun {
    pub samples: SampleSet<usize>,
    pub proposals: u64,
    pub oracle_calls: u64,
}

impl RejectionRun {
    pub fn acceptance_rate(&self) -> f64 {
        self.samples.len() as f64 / self.proposals as f64
    }

    /// Probability evaluations spent per accepted sample.
    pub fn calls_per_sample(&self) -> f64 {
        self.oracle_calls as f64 / self.samples.len() as f64
    }
}

fn rejection_core(
    mut prob: impl FnMut(usize) -> f64,
    domain_size: usize,
    c: f64,
    k: usize,
    rng: &mut RngStream,
    name: &str,
) -> Result<RejectionRun> {
    if domain_size == 0 {
        return Err(Error::invalid("empty domain"));
    }
    if k == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let start = Instant::now();
    let seed = rng.seed();
    let envelope = c / domain_size as f64;
    let mut outcomes = Vec::with_capacity(k);
    let mut proposals = 0u64;
    while outcomes.len() < k {
        let x = rng.index(domain_size);
        let p = prob(x);
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::data(format!("oracle returned probability {p} for outcome {x}")));
        }
        proposals += 1;
        if rng.uniform() * envelope <= p {
            outcomes.push(x);
        }
    }
    Ok(RejectionRun {
        samples: SampleSet::new(outcomes, name, seed).with_wall_time(start.elapsed().as_secs_f64()),
        proposals,
        oracle_calls: proposals,
    })
}

/// Rejection sampling against the uniform proposal with envelope `c / N`:
/// draw `x` uniformly and `u ∈ [0,1)`, accept when `u·c/N ≤ p(x)`.
/// Exact whenever `c / N ≥ max p`; the expected number of oracle calls per
/// accepted sample is then `c`.
pub fn sample_rejection(
    prob: impl FnMut(usize) -> f64,
    domain_size: usize,
    c: f64,
    k: usize,
    rng: &mut RngStream,
) -> Result<RejectionRun> {
    if c.is_nan() || c < 1.0 {
        return Err(Error::invalid(format!("rejection bound must be at least 1, got {c}")));
    }
    rejection_core(prob, domain_size, c, k, rng, "rejection")
}

/// Frugal rejection sampling: the envelope `c / N` may sit below the largest
/// probabilities, which are then accepted with certainty. The output follows
/// [`clipped_law`] exactly.
pub fn sample_frugal(
    prob: impl FnMut(usize) -> f64,
    domain_size: usize,
    c: f64,
    k: usize,
    rng: &mut RngStream,
) -> Result<RejectionRun> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::invalid(format!("frugal bound must be positive, got {c}")));
    }
    rejection_core(prob, domain_size, c, k, rng, "frugal")
}

/// `p̃(x) = min(p(x), c/N) / Z`.
pub fn clipped_law(probs: &[f64], c: f64) -> Vec<f64> {
    let cap = c / probs.len() as f64;
    let clipped: Vec<f64> = probs.iter().map(|&p| p.min(cap)).collect();
    let z: f64 = clipped.iter().sum();
    clipped.into_iter().map(|p| p / z).collect()
}

/// Total-variation distance `½ Σ |p̃ − p|` between the clipped law and the table.
pub fn clipped_tvd(probs: &[f64], c: f64) -> f64 {
    0.5 * clipped_law(probs, c).iter().zip(probs).map(|(q, p)| (q - p).abs()).sum::<f64>()
}

/// Closed-form error of frugal sampling for exponentially distributed
/// probabilities: `2 exp(−c / (1 − e^{−c}))`.
pub fn frugal_tvd_formula(c: f64) -> f64 {
    2.0 * (-c / (1.0 - (-c).exp())).exp()
}
