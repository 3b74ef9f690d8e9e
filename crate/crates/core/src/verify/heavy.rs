use std::f64::consts::LN_2;

use super::VerificationReport;
use crate::error::{Error, Result};
use crate::sampling::{median_of_values, SampleSet};

/// `2 / ln 2`, the factor turning an excess heavy fraction into `F_HOG`.
pub const HOG_SCALE: f64 = 2.0 / LN_2;

/// Heavy-outcome score: the fraction `h` of samples with `P(x) ≥ median`,
/// reported as `F_HOG = (2/ln 2)(h − ½)`.
pub fn hog_score<L>(samples: &SampleSet<L>, ideal_prob: impl Fn(&L) -> f64, median: f64) -> Result<VerificationReport> {
    if samples.is_empty() {
        return Err(Error::invalid("sample set is empty"));
    }
    let k = samples.len() as f64;
    let heavy = samples.outcomes.iter().filter(|x| ideal_prob(x) >= median).count() as f64 / k;
    let se = (heavy * (1.0 - heavy) / k).sqrt();
    Ok(VerificationReport::new("hog", HOG_SCALE * (heavy - 0.5), HOG_SCALE * se, samples.len())
        .with_aux("heavy_fraction", heavy)
        .with_aux("heavy_fraction_stderr", se)
        .with_aux("median", median))
}

/// Median estimated from the ideal probabilities of a pilot batch of samples.
pub fn sampled_median(pilot_probs: &[f64]) -> f64 {
    median_of_values(pilot_probs)
}

/// Bins equifilled under the exponential law `N e^{−N p}`:
/// boundaries `p_i = −ln(1 − i/m) / N` for `i < m`, closed by `p_m = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogBins {
    n: usize,
    boundaries: Vec<f64>,
}

impl BogBins {
    pub fn new(n: usize, m_bins: usize) -> Result<Self> {
        if m_bins == 0 {
            return Err(Error::invalid("need at least one bin"));
        }
        let d = 2f64.powi(n as i32);
        let mut boundaries: Vec<f64> = (0..m_bins).map(|i| -(1.0 - i as f64 / m_bins as f64).ln() / d).collect();
        boundaries.push(1.0);
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("{m_bins} bins do not fit below probability 1 at n = {n}")));
        }
        Ok(Self { n, boundaries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bins(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Bin holding probability `p`; bin `i` is `[p_i, p_{i+1})`, the last one closed.
    pub fn bin_of(&self, p: f64) -> usize {
        let i = self.boundaries.partition_point(|&b| b <= p);
        i.saturating_sub(1).min(self.bins() - 1)
    }
}

/// Binned distance `½ Σ_b |f_b − 1/m|`, where `f_b` is the fraction of
/// samples whose ideal probability falls in bin `b`.
pub fn bog_distance<L>(samples: &SampleSet<L>, ideal_prob: impl Fn(&L) -> f64, bins: &BogBins) -> Result<VerificationReport> {
    if samples.is_empty() {
        return Err(Error::invalid("sample set is empty"));
    }
    let m = bins.bins();
    let mut counts = vec![0usize; m];
    for x in &samples.outcomes {
        counts[bins.bin_of(ideal_prob(x))] += 1;
    }
    let k = samples.len() as f64;
    let target = 1.0 / m as f64;
    let d = 0.5 * counts.iter().map(|&c| (c as f64 / k - target).abs()).sum::<f64>();
    let se = 0.5 * counts.iter().map(|&c| {
        let f = c as f64 / k;
        (f * (1.0 - f) / k).sqrt()
    }).sum::<f64>();
    Ok(VerificationReport::new("bog", d, se, samples.len())
        .with_aux("bin_counts", counts)
        .with_aux("boundaries", bins.boundaries().to_vec()))
}

/// Binned distance for an explicit sampling law `q` over the same outcomes as `ideal`.
pub fn bog_exact(q: &[f64], ideal: &[f64], bins: &BogBins) -> Result<f64> {
    if q.len() != ideal.len() {
        return Err(Error::invalid("tables have different lengths"));
    }
    let mut mass = vec![0.0; bins.bins()];
    for (qx, px) in q.iter().zip(ideal) {
        mass[bins.bin_of(*px)] += qx;
    }
    let target = 1.0 / bins.bins() as f64;
    Ok(0.5 * mass.iter().map(|w| (w - target).abs()).sum::<f64>())
}

/// Expected [`bog_distance`] of `k` samples whose bins are exactly equifilled,
/// from the normal approximation `E|f − 1/m| ≈ √(2 (1/m)(1 − 1/m) / (π k))`.
pub fn bog_finite_sample_floor(m_bins: usize, k: usize) -> f64 {
    let p = 1.0 / m_bins as f64;
    0.5 * m_bins as f64 * (2.0 * p * (1.0 - p) / (std::f64::consts::PI * k as f64)).sqrt()
}
