//! Ensemble-level Monte Carlo checks that cut across modules.

use qrslab::boson::{bs_distribution, gbs_state_from_smss, gbs_truncated_table, SqueezingSpec};
use qrslab::linalg::{haar_state, haar_unitary};
use qrslab::qubit::{build_haar_brickwork_circuit, output_distribution};
use qrslab::sampling::{mix_with_uniform, sample_exact, sample_rejection, DiscreteDistribution};
use qrslab::verify::{
    bayes_discriminate, bog_distance, bog_exact, bog_finite_sample_floor, hog_score, mean_and_stderr,
    porter_thomas_stats, tvd, xeb_ensemble_norm, xeb_linear, xeb_unbiased, BogBins,
};
use qrslab::RngStream;

fn haar_table(n: usize, rng: &mut RngStream) -> DiscreteDistribution<usize> {
    let d = 1 << n;
    let amps = haar_state(d, rng).unwrap();
    DiscreteDistribution::new((0..d).collect(), amps.iter().map(|a| a.norm_sqr()).collect()).unwrap()
}

// Depth 3n: at depth n a 1D brickwork is still visibly short of the
// second-moment limit (about 2.34 instead of 2 at n = 8).
fn brickwork_table(n: usize, rng: &mut RngStream) -> Vec<f64> {
    let c = build_haar_brickwork_circuit(n, 3 * n, rng).unwrap();
    output_distribution(&c).unwrap().probs().to_vec()
}

fn second_moment_target(n: usize) -> f64 {
    let d = 2f64.powi(n as i32);
    2.0 * d / (d + 1.0)
}

#[test]
fn brickwork_second_moment_n8() {
    let mut rng = RngStream::new(801, 0);
    let moments: Vec<f64> = (0..500)
        .map(|_| {
            let t = brickwork_table(8, &mut rng);
            t.len() as f64 * t.iter().map(|p| p * p).sum::<f64>()
        })
        .collect();
    let (mean, se) = mean_and_stderr(&moments);
    let target = second_moment_target(8);
    assert!((mean - target).abs() <= 4.0 * se, "mean {mean} ± {se}, target {target}");
}

#[test]
fn brickwork_second_moment_n10() {
    let mut rng = RngStream::new(1001, 0);
    let moments: Vec<f64> = (0..100)
        .map(|_| {
            let t = brickwork_table(10, &mut rng);
            t.len() as f64 * t.iter().map(|p| p * p).sum::<f64>()
        })
        .collect();
    let (mean, se) = mean_and_stderr(&moments);
    let target = second_moment_target(10);
    assert!((mean - target).abs() <= 4.0 * se, "mean {mean} ± {se}, target {target}");
}

#[test]
fn porter_thomas_statistics_of_haar_states() {
    let mut rng = RngStream::new(1002, 0);
    let (mut moments, mut fractions) = (Vec::new(), Vec::new());
    for _ in 0..500 {
        let r = porter_thomas_stats(&haar_table(10, &mut rng));
        moments.push(r.estimate);
        fractions.push(r.aux_f64("fraction_at_alpha_0.5").unwrap());
    }
    let (mean, se) = mean_and_stderr(&moments);
    let target = second_moment_target(10);
    assert!((mean - target).abs() <= 4.0 * se, "mean {mean} ± {se}, target {target}");
    let (frac, _) = mean_and_stderr(&fractions);
    assert!((frac - (-0.5f64).exp()).abs() <= 0.02, "fraction {frac}");
    assert!(fractions.iter().all(|&f| f >= 0.125));
}

#[test]
fn xeb_on_haar_state_samples() {
    let mut rng = RngStream::new(1003, 0);
    let table = haar_table(10, &mut rng);
    let p = |x: &usize| table.probs()[*x];
    let d = 1024.0;
    let ideal_value = (d - 1.0) / (d + 1.0);

    let ideal = xeb_linear(&sample_exact(&table, 20_000, &mut rng).unwrap(), p, 10).unwrap();
    let exact_ideal = d * table.probs().iter().map(|q| q * q).sum::<f64>() - 1.0;
    assert!((ideal.estimate - exact_ideal).abs() <= 3.0 * ideal.stderr, "{ideal:?} vs {exact_ideal}");
    // Single-state fluctuation of N Σp² around its ensemble mean is about √(4/N).
    assert!((exact_ideal - ideal_value).abs() <= 4.0 * (4.0 / d).sqrt());

    let uniform = DiscreteDistribution::uniform((0..1024).collect()).unwrap();
    let r = xeb_linear(&sample_exact(&uniform, 20_000, &mut rng).unwrap(), p, 10).unwrap();
    assert!(r.estimate.abs() <= 3.0 * r.stderr, "{r:?}");

    let lambda = 0.4;
    let mixed = mix_with_uniform(&table, lambda).unwrap();
    let r = xeb_linear(&sample_exact(&mixed, 20_000, &mut rng).unwrap(), p, 10).unwrap();
    let expect = (1.0 - lambda) * exact_ideal;
    assert!((r.estimate - expect).abs() <= 3.0 * r.stderr, "{r:?} vs {expect}");
}

#[test]
fn unbiased_xeb_over_a_circuit_ensemble() {
    let mut rng = RngStream::new(1004, 0);
    let tables: Vec<DiscreteDistribution<usize>> = (0..100)
        .map(|_| {
            let t = brickwork_table(8, &mut rng);
            DiscreteDistribution::new((0..256).collect(), t).unwrap()
        })
        .collect();
    let norm = xeb_ensemble_norm(tables.iter().map(|t| t.probs())).unwrap();
    let uniform = DiscreteDistribution::uniform((0..256).collect()).unwrap();

    let pooled = |law: &dyn Fn(&DiscreteDistribution<usize>) -> DiscreteDistribution<usize>, rng: &mut RngStream| {
        let (mut sum, mut var) = (0.0, 0.0);
        for t in &tables {
            let set = sample_exact(&law(t), 200, rng).unwrap();
            let r = xeb_unbiased(&set, |x| t.probs()[*x], 8, norm).unwrap();
            sum += r.estimate;
            var += r.stderr * r.stderr;
        }
        let k = tables.len() as f64;
        (sum / k, var.sqrt() / k)
    };

    let (f, se) = pooled(&|t| t.clone(), &mut rng);
    assert!((f - 1.0).abs() <= 3.0 * se, "ideal {f} ± {se}");
    let (f, se) = pooled(&|_| uniform.clone(), &mut rng);
    assert!(f.abs() <= 3.0 * se, "uniform {f} ± {se}");
    let lambda = 0.3;
    let (f, se) = pooled(&|t| mix_with_uniform(t, lambda).unwrap(), &mut rng);
    assert!((f - (1.0 - lambda)).abs() <= 3.0 * se, "mixed {f} ± {se}");
}

#[test]
fn binned_outcome_distance() {
    let mut rng = RngStream::new(1005, 0);
    let n = 12;
    let table = haar_table(n, &mut rng);
    let p = |x: &usize| table.probs()[*x];
    let bins = BogBins::new(n, 8).unwrap();
    let k = 50_000;

    let ideal = bog_distance(&sample_exact(&table, k, &mut rng).unwrap(), p, &bins).unwrap();
    let law_value = bog_exact(table.probs(), table.probs(), &bins).unwrap();
    let floor = bog_finite_sample_floor(8, k);
    assert!(ideal.estimate <= law_value + floor + 3.0 * ideal.stderr, "{ideal:?}, law {law_value}, floor {floor}");

    let uniform = DiscreteDistribution::uniform((0..1 << n).collect()).unwrap();
    let r = bog_distance(&sample_exact(&uniform, k, &mut rng).unwrap(), p, &bins).unwrap();
    let analytic = bog_exact(uniform.probs(), table.probs(), &bins).unwrap();
    assert!((r.estimate - analytic).abs() <= 3.0 * r.stderr, "{r:?} vs {analytic}");

    let two = BogBins::new(n, 2).unwrap();
    assert!((two.boundaries()[1] - std::f64::consts::LN_2 / 4096.0).abs() < 1e-18);
    let set = sample_exact(&table, k, &mut rng).unwrap();
    let bog = bog_distance(&set, p, &two).unwrap();
    let heavy = hog_score(&set, p, two.boundaries()[1]).unwrap().aux_f64("heavy_fraction").unwrap();
    assert!((bog.estimate - (heavy - 0.5).abs()).abs() < 1e-12, "{} vs {heavy}", bog.estimate);
}

#[test]
fn bayes_favours_the_boson_table_over_uniform() {
    let mut rng = RngStream::new(1006, 0);
    let u = haar_unitary(6, &mut rng).unwrap();
    let table = bs_distribution(&u, 3).unwrap();
    let q = 1.0 / table.len() as f64;
    let set = sample_exact(&table, 1000, &mut rng).unwrap();
    let r = bayes_discriminate(&set, |s| table.prob(s), |_| q).unwrap();
    assert!(r.estimate > 0.99, "{r:?}");
}

#[test]
fn truncated_gaussian_table_captures_the_mass() {
    let mut rng = RngStream::new(1007, 0);
    let u = haar_unitary(4, &mut rng).unwrap();
    let state = gbs_state_from_smss(&u, &SqueezingSpec::uniform(4, 0.3).unwrap()).unwrap();
    let total: f64 = gbs_truncated_table(&state, 6).unwrap().iter().map(|(_, p)| p).sum();
    assert!((0.999..=1.0 + 1e-12).contains(&total), "{total}");
}

fn empirical(outcomes: &[usize], len: usize) -> DiscreteDistribution<usize> {
    let mut counts = vec![0.0; len];
    for &x in outcomes {
        counts[x] += 1.0;
    }
    DiscreteDistribution::from_weights((0..len).collect(), counts).unwrap()
}

#[test]
fn exact_and_rejection_samplers_agree_in_law() {
    let mut rng = RngStream::new(1008, 0);
    for _ in 0..5 {
        let table = haar_table(5, &mut rng);
        let c = 32.0 * table.probs().iter().cloned().fold(0.0, f64::max);
        let exact = sample_exact(&table, 100_000, &mut rng).unwrap();
        let run = sample_rejection(|i| table.probs()[i], 32, c.max(1.0), 100_000, &mut rng).unwrap();
        let d = tvd(&empirical(&exact.outcomes, 32), &empirical(&run.samples.outcomes, 32)).unwrap();
        assert!(d <= 0.02, "tvd {d}");
    }
}
