use std::hash::Hash;

use super::VerificationReport;
use crate::error::{Error, Result};
use crate::sampling::DiscreteDistribution;

/// Thresholds `α` at which [`porter_thomas_stats`] reports `Pr[p ≥ α/N]`.
pub const ANTICONCENTRATION_ALPHAS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

/// `½ Σ |p − q|` over a shared sample space.
pub fn tvd<L: Clone + Eq + Hash>(p: &DiscreteDistribution<L>, q: &DiscreteDistribution<L>) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::invalid("distributions have different sample spaces"));
    }
    let mut sum = 0.0;
    for (label, pv) in p.iter() {
        let j = q.index_of(label).ok_or_else(|| Error::invalid("distributions have different sample spaces"))?;
        sum += (pv - q.probs()[j]).abs();
    }
    Ok((0.5 * sum).min(1.0))
}

/// Scaled second moment `N Σ p²` as the estimate, with the collision
/// probability and the anticoncentration fractions in `aux`.
pub fn porter_thomas_stats<L: Clone + Eq + Hash>(dist: &DiscreteDistribution<L>) -> VerificationReport {
    let n = dist.len() as f64;
    let collision: f64 = dist.probs().iter().map(|p| p * p).sum();
    let mut report = VerificationReport::new("porter_thomas", n * collision, 0.0, dist.len())
        .with_aux("collision_probability", collision);
    for alpha in ANTICONCENTRATION_ALPHAS {
        let frac = dist.probs().iter().filter(|&&p| p >= alpha / n).count() as f64 / n;
        report = report.with_aux(&format!("fraction_at_alpha_{alpha}"), frac);
    }
    report
}
