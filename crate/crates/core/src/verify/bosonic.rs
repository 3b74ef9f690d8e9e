use super::{mean_and_stderr, VerificationReport};
use crate::boson::FockOutcome;
use crate::error::{Error, Result};
use crate::linalg::{select, ComplexMatrix, UnitaryMatrix};
use crate::sampling::SampleSet;
use crate::RngStream;

/// `n⁻ⁿ Π_i ‖row_i‖²` for an `n × n` matrix.
pub fn row_norm_estimator(x: &ComplexMatrix) -> f64 {
    let n = x.rows() as f64;
    (0..x.rows())
        .map(|i| x.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>() / n)
        .product()
}

fn row_norm_statistic(u: &UnitaryMatrix, modes: &[usize]) -> f64 {
    let n = modes.len();
    let cols: Vec<usize> = (0..n).collect();
    let scale = (u.dim() as f64).sqrt();
    let sub = select(u.matrix(), modes, &cols).scale(crate::C64::new(scale, 0.0));
    (row_norm_estimator(&sub) - 1.0).abs()
}

/// Mean of `|R*(√m U_{S,1ₙ}) − 1|` over the collision-free samples minus the
/// same mean over a matched number of uniformly random collision-free
/// outcomes. Samples with collisions are skipped and counted.
pub fn row_norm_discriminate(
    samples: &SampleSet<FockOutcome>,
    u: &UnitaryMatrix,
    rng: &mut RngStream,
) -> Result<VerificationReport> {
    let m = u.dim();
    let mut skipped = 0usize;
    let mut values = Vec::with_capacity(samples.len());
    let mut n = None;
    for s in &samples.outcomes {
        if s.modes() != m {
            return Err(Error::invalid(format!("sample has {} modes, interferometer {m}", s.modes())));
        }
        if !s.is_collision_free() {
            skipped += 1;
            continue;
        }
        n.get_or_insert(s.total());
        values.push(row_norm_statistic(u, &s.modes_with_multiplicity()));
    }
    let n = n.ok_or_else(|| Error::data("no collision-free samples"))?;
    let control: Vec<f64> = (0..values.len())
        .map(|_| {
            let mut modes = rand::seq::index::sample(rng, m, n).into_vec();
            modes.sort_unstable();
            row_norm_statistic(u, &modes)
        })
        .collect();
    let (mean_s, se_s) = mean_and_stderr(&values);
    let (mean_c, se_c) = mean_and_stderr(&control);
    Ok(
        VerificationReport::new("row_norm_gap", mean_s - mean_c, (se_s * se_s + se_c * se_c).sqrt(), values.len())
            .with_aux("mean_samples", mean_s)
            .with_aux("mean_control", mean_c)
            .with_aux("skipped_collisions", skipped),
    )
}

/// Posterior weight of hypothesis `P₀` against `Q` under equal priors:
/// `c = 1 / (1 + exp(−Σ (ln p₀ − ln q)))`, evaluated in log space.
pub fn bayes_discriminate<L>(
    samples: &SampleSet<L>,
    prob_p0: impl Fn(&L) -> f64,
    prob_q: impl Fn(&L) -> f64,
) -> Result<VerificationReport> {
    if samples.is_empty() {
        return Err(Error::invalid("sample set is empty"));
    }
    let mut llr = 0.0;
    for x in &samples.outcomes {
        let (p, q) = (prob_p0(x), prob_q(x));
        if p <= 0.0 && q <= 0.0 {
            return Err(Error::data("outcome impossible under both hypotheses"));
        }
        llr += p.ln() - q.ln();
    }
    let c = if llr >= 0.0 {
        1.0 / (1.0 + (-llr).exp())
    } else {
        let e = llr.exp();
        e / (1.0 + e)
    };
    Ok(VerificationReport::new("bayes", c, 0.0, samples.len()).with_aux("log_likelihood_ratio", llr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn estimator_fixtures() {
        let ones = ComplexMatrix::from_fn(4, 4, |_, _| C64::new(1.0, 0.0));
        assert!((row_norm_estimator(&ones) - 1.0).abs() < 1e-15);
        let mut z = ones.clone();
        for j in 0..4 {
            z[(2, j)] = C64::new(0.0, 0.0);
        }
        assert_eq!(row_norm_estimator(&z), 0.0);
    }

    #[test]
    fn bayes_arithmetic() {
        let s = SampleSet::new(vec![0usize], "x", 0);
        let r = bayes_discriminate(&s, |_| 0.2, |_| 0.1).unwrap();
        assert!((r.estimate - 2.0 / 3.0).abs() < 1e-15);
        let many = SampleSet::new((0..100).collect::<Vec<usize>>(), "x", 0);
        let same = bayes_discriminate(&many, |&x| 0.001 * (x + 1) as f64, |&x| 0.001 * (x + 1) as f64).unwrap();
        assert_eq!(same.estimate, 0.5);
        assert!(bayes_discriminate(&s, |_| 0.0, |_| 0.0).is_err());
        let one_sided = bayes_discriminate(&s, |_| 0.0, |_| 0.5).unwrap();
        assert_eq!(one_sided.estimate, 0.0);
    }

    #[test]
    fn row_norm_needs_collision_free_samples() {
        let u = UnitaryMatrix::new(ComplexMatrix::identity(3)).unwrap();
        let s = SampleSet::new(vec![FockOutcome::new(vec![2, 0, 0])], "x", 0);
        let mut rng = RngStream::from_seed(1);
        assert!(matches!(row_norm_discriminate(&s, &u, &mut rng), Err(Error::Data(_))));
    }
}
