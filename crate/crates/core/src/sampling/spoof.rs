use std::hash::Hash;
use std::time::Instant;

use super::{DiscreteDistribution, SampleSet};
use crate::error::Result;
use crate::RngStream;

/// The table restricted to outcomes with probability at or above the median,
/// renormalized, over the original sample space.
pub fn spoof_law<L: Clone + Eq + Hash>(dist: &DiscreteDistribution<L>) -> Result<DiscreteDistribution<L>> {
    let median = dist.median();
    let weights = dist.probs().iter().map(|&p| if p >= median { p } else { 0.0 }).collect();
    DiscreteDistribution::from_weights(dist.labels().to_vec(), weights)
}

/// `k` draws from [`spoof_law`]: a classical sampler that only ever emits
/// heavy outcomes.
pub fn spoof_heavy<L: Clone + Eq + Hash>(
    dist: &DiscreteDistribution<L>,
    k: usize,
    rng: &mut RngStream,
) -> Result<SampleSet<L>> {
    let start = Instant::now();
    let law = spoof_law(dist)?;
    let mut set = super::sample_exact(&law, k, rng)?;
    set.sampler = "spoof_heavy".into();
    Ok(set.with_wall_time(start.elapsed().as_secs_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_is_unchanged() {
        let d = DiscreteDistribution::uniform((0..16).collect::<Vec<_>>()).unwrap();
        assert_eq!(spoof_law(&d).unwrap().probs(), d.probs());
    }

    #[test]
    fn support_is_heavy() {
        let d = DiscreteDistribution::new(vec![0, 1, 2, 3, 4], vec![0.05, 0.1, 0.15, 0.3, 0.4]).unwrap();
        let mut rng = RngStream::from_seed(5);
        let s = spoof_heavy(&d, 1000, &mut rng).unwrap();
        let median = d.median();
        assert!(s.outcomes.iter().all(|x| d.prob(x) >= median));
        assert_eq!(s.sampler, "spoof_heavy");
    }
}
