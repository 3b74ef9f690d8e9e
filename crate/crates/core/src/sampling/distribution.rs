use std::collections::HashMap;
use std::hash::Hash;
use std::time::Instant;

use super::SampleSet;
use crate::error::{Error, Result};
use crate::RngStream;

/// Allowed deviation of the total mass from 1.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Explicit probability table over a finite labelled sample space.
#[derive(Debug, Clone)]
pub struct DiscreteDistribution<L> {
    labels: Vec<L>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
    index: HashMap<L, usize>,
}

impl<L: Clone + Eq + Hash> DiscreteDistribution<L> {
    /// Builds a table; labels must be distinct, probabilities finite and
    /// non-negative with total mass 1 within `1e-8`.
    pub fn new(labels: Vec<L>, probs: Vec<f64>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::invalid(format!("{} labels but {} probabilities", labels.len(), probs.len())));
        }
        if labels.is_empty() {
            return Err(Error::invalid("distribution has no outcomes"));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::invalid(format!("invalid probability {p}")));
        }
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        if (acc - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!("probabilities sum to {acc}, not 1")));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::invalid("duplicate outcome label"));
            }
        }
        Ok(Self { labels, probs, cumulative, index })
    }

    /// Rescales non-negative weights to unit mass.
    pub fn from_weights(labels: Vec<L>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::invalid(format!("weights sum to {total}")));
        }
        Self::new(labels, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(labels: Vec<L>) -> Result<Self> {
        let p = 1.0 / labels.len().max(1) as f64;
        let probs = vec![p; labels.len()];
        Self::new(labels, probs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn index_of(&self, label: &L) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Probability of `label`; zero outside the sample space.
    pub fn prob(&self, label: &L) -> f64 {
        self.index_of(label).map_or(0.0, |i| self.probs[i])
    }

    /// Draws an index by binary search over the cumulative table.
    pub fn draw_index(&self, rng: &mut RngStream) -> usize {
        let total = *self.cumulative.last().expect("non-empty");
        let u = rng.uniform() * total;
        let i = self.cumulative.partition_point(|&c| c <= u);
        // guard against landing past the end through rounding or on a zero-mass tail
        let mut i = i.min(self.len() - 1);
        while self.probs[i] == 0.0 && i > 0 {
            i -= 1;
        }
        i
    }

    /// Median of the probability values: the largest `t` such that at least
    /// half of the outcomes have probability `≥ t`.
    pub fn median(&self) -> f64 {
        median_of_values(&self.probs)
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self.probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
    }

    /// Same sample space with new probabilities.
    pub fn with_probs(&self, probs: Vec<f64>) -> Result<Self> {
        Self::new(self.labels.clone(), probs)
    }

    /// Labels and probabilities in table order.
    pub fn iter(&self) -> impl Iterator<Item = (&L, f64)> {
        self.labels.iter().zip(self.probs.iter().copied())
    }
}

/// Largest `t` such that at least `⌈N/2⌉` of the values are `≥ t`.
pub fn median_of_values(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted[values.len().div_ceil(2) - 1]
}

/// Convex mixture `(1 − λ) P + λ U` with the uniform table on the same labels.
pub fn mix_with_uniform<L: Clone + Eq + Hash>(
    dist: &DiscreteDistribution<L>,
    lambda: f64,
) -> Result<DiscreteDistribution<L>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::invalid(format!("mixing weight must lie in [0, 1], got {lambda}")));
    }
    let u = 1.0 / dist.len() as f64;
    dist.with_probs(dist.probs().iter().map(|p| (1.0 - lambda) * p + lambda * u).collect())
}

/// `k` independent inverse-CDF draws from an explicit table.
pub fn sample_exact<L: Clone + Eq + Hash>(
    dist: &DiscreteDistribution<L>,
    k: usize,
    rng: &mut RngStream,
) -> Result<SampleSet<L>> {
    if dist.is_empty() {
        return Err(Error::invalid("cannot sample an empty distribution"));
    }
    if k == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let start = Instant::now();
    let seed = rng.seed();
    let outcomes = (0..k).map(|_| dist.labels[dist.draw_index(rng)].clone()).collect();
    Ok(SampleSet::new(outcomes, "exact", seed).with_wall_time(start.elapsed().as_secs_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_state;

    #[test]
    fn validation() {
        assert!(DiscreteDistribution::new(vec![0, 1], vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(vec![0, 1], vec![1.5, -0.5]).is_err());
        assert!(DiscreteDistribution::new(vec![0, 0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteDistribution::<u8>::new(vec![], vec![]).is_err());
        assert!(DiscreteDistribution::new(vec![0, 1], vec![0.5, 0.5 + 1e-9]).is_ok());
    }

    #[test]
    fn point_mass_sampling() {
        let d = DiscreteDistribution::new(vec!['a', 'b', 'c'], vec![0.0, 1.0, 0.0]).unwrap();
        let mut rng = RngStream::from_seed(1);
        let s = sample_exact(&d, 1000, &mut rng).unwrap();
        assert!(s.outcomes.iter().all(|&x| x == 'b'));
        assert!(sample_exact(&d, 0, &mut rng).is_err());
    }

    #[test]
    fn uniform_frequencies() {
        let d = DiscreteDistribution::uniform(vec![0, 1, 2, 3]).unwrap();
        let mut rng = RngStream::from_seed(2);
        let k = 100_000;
        let s = sample_exact(&d, k, &mut rng).unwrap();
        let sigma = (0.25f64 * 0.75 / k as f64).sqrt();
        for label in 0..4 {
            let f = s.outcomes.iter().filter(|&&x| x == label).count() as f64 / k as f64;
            assert!((f - 0.25).abs() < 3.0 * sigma, "label {label}: {f}");
        }
    }

    #[test]
    fn chi_square_on_random_table() {
        let mut rng = RngStream::new(3, 0);
        let amps = haar_state(256, &mut rng).unwrap();
        let probs: Vec<f64> = amps.iter().map(|a| a.norm_sqr()).collect();
        let d = DiscreteDistribution::from_weights((0..256).collect(), probs).unwrap();
        let k = 200_000;
        let s = sample_exact(&d, k, &mut rng).unwrap();
        let mut counts = vec![0usize; 256];
        for &x in &s.outcomes {
            counts[x] += 1;
        }
        let chi2: f64 = counts
            .iter()
            .zip(d.probs())
            .map(|(&c, &p)| {
                let e = p * k as f64;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        // 1% upper quantile of chi-square with 255 degrees of freedom
        assert!(chi2 < 310.5, "chi2 = {chi2}");
    }

    #[test]
    fn median_and_entropy() {
        let d = DiscreteDistribution::new(vec![0, 1, 2, 3], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(d.median(), 0.3);
        let u = DiscreteDistribution::uniform((0..8).collect::<Vec<_>>()).unwrap();
        assert_eq!(u.median(), 0.125);
        assert!((u.entropy() - 8f64.ln()).abs() < 1e-12);
        assert_eq!(median_of_values(&[3.0, 1.0, 2.0]), 2.0);
    }

    #[test]
    fn mixing() {
        let d = DiscreteDistribution::new(vec![0, 1], vec![0.8, 0.2]).unwrap();
        assert_eq!(mix_with_uniform(&d, 0.0).unwrap().probs(), d.probs());
        assert_eq!(mix_with_uniform(&d, 1.0).unwrap().probs(), &[0.5, 0.5]);
        assert!(mix_with_uniform(&d, 1.5).is_err());
        assert!(mix_with_uniform(&d, -0.1).is_err());
    }
}
