use std::hash::Hash;

use super::{mean_and_stderr, VerificationReport};
use crate::error::{Error, Result};
use crate::sampling::{DiscreteDistribution, SampleSet};

fn non_empty<L>(samples: &SampleSet<L>) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::invalid("sample set is empty"));
    }
    Ok(())
}

/// Linear cross-entropy fidelity: the sample mean of `2ⁿ P(x) − 1`.
pub fn xeb_linear<L>(samples: &SampleSet<L>, ideal_prob: impl Fn(&L) -> f64, n: usize) -> Result<VerificationReport> {
    non_empty(samples)?;
    let d = 2f64.powi(n as i32);
    let values: Vec<f64> = samples.outcomes.iter().map(|x| d * ideal_prob(x) - 1.0).collect();
    let (mean, se) = mean_and_stderr(&values);
    Ok(VerificationReport::new("xeb_linear", mean, se, samples.len()).with_aux("n", n))
}

/// Expectation of [`xeb_linear`] under the sampling law `q`: `2ⁿ Σ q(x) P(x) − 1`.
pub fn xeb_linear_exact<L: Clone + Eq + Hash>(
    q: &DiscreteDistribution<L>,
    ideal: &DiscreteDistribution<L>,
    n: usize,
) -> Result<f64> {
    if q.len() != ideal.len() {
        return Err(Error::invalid("distributions have different sample spaces"));
    }
    let overlap: f64 = q.iter().map(|(x, qx)| qx * ideal.prob(x)).sum();
    Ok(2f64.powi(n as i32) * overlap - 1.0)
}

/// Ensemble mean of the ideal linear XEB, `N Σ_x p(x)² − 1`, over ideal tables.
pub fn xeb_ensemble_norm<'a>(tables: impl IntoIterator<Item = &'a [f64]>) -> Result<f64> {
    let values: Vec<f64> = tables
        .into_iter()
        .map(|t| t.len() as f64 * t.iter().map(|p| p * p).sum::<f64>() - 1.0)
        .collect();
    if values.is_empty() {
        return Err(Error::invalid("no ideal tables supplied"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// [`xeb_linear`] divided by the ensemble normalization.
pub fn xeb_unbiased<L>(
    samples: &SampleSet<L>,
    ideal_prob: impl Fn(&L) -> f64,
    n: usize,
    ensemble_norm: f64,
) -> Result<VerificationReport> {
    if !(ensemble_norm > 0.0) {
        return Err(Error::invalid(format!("ensemble normalization must be positive, got {ensemble_norm}")));
    }
    let raw = xeb_linear(samples, ideal_prob, n)?;
    Ok(VerificationReport::new("xeb_unbiased", raw.estimate / ensemble_norm, raw.stderr / ensemble_norm, raw.k)
        .with_aux("n", n)
        .with_aux("ensemble_norm", ensemble_norm))
}

/// Cross-entropy difference in nats: mean of `−ln P(x)` over samples minus `H(P)`.
pub fn cross_entropy_difference<L: Clone + Eq + Hash>(
    samples: &SampleSet<L>,
    ideal: &DiscreteDistribution<L>,
) -> Result<VerificationReport> {
    non_empty(samples)?;
    let mut values = Vec::with_capacity(samples.len());
    for x in &samples.outcomes {
        let p = ideal.prob(x);
        if p <= 0.0 {
            return Err(Error::data("sampled outcome has zero ideal probability"));
        }
        values.push(-p.ln());
    }
    let (ce, se) = mean_and_stderr(&values);
    let h = ideal.entropy();
    Ok(VerificationReport::new("cross_entropy_difference", ce - h, se, samples.len())
        .with_aux("cross_entropy", ce)
        .with_aux("entropy", h))
}
