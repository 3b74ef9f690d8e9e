use std::collections::HashMap;
use std::fs::File;
use std::hash::Hash;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use qrslab::boson::{bs_sample_ancestral, FockOutcome};
use qrslab::qubit::{noisy_distribution_trajectories, BitString};
use qrslab::sampling::{
    bit_flip_proposal, mix_with_uniform, photon_move_proposal, sample_exact, sample_frugal, sample_metropolis,
    sample_rejection, spoof_heavy, DiscreteDistribution, SampleSet,
};
use qrslab::verify::{
    bayes_discriminate, bog_distance, cross_entropy_difference, hog_score, render_table, row_norm_discriminate,
    xeb_linear, xeb_unbiased, BogBins, VerificationReport,
};
use qrslab::RngStream;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{canonical_json, sha256_hex, ExperimentConfig, Noise, SamplerMethod, Scheme, Verifier};
use crate::error::{CliError, CliResult};
use crate::instance::{Ideal, Instance};

pub const INSTANCE_FILE: &str = "instance.json";
pub const SAMPLES_FILE: &str = "samples.jsonl";
pub const REPORTS_FILE: &str = "reports.json";
pub const RECORD_FILE: &str = "run_record.json";

// child streams of the config seed, one per campaign step
const GENERATE_STREAM: u64 = 0;
const SAMPLE_STREAM: u64 = 1;
const VERIFY_STREAM: u64 = 2;

fn step_rng(config: &ExperimentConfig, step: u64) -> RngStream {
    RngStream::from_seed(config.seed).split(step)
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

fn file_sha256(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::missing(path, e))?;
    Ok(sha256_hex(&bytes))
}

pub fn cmd_generate(config: &ExperimentConfig, out: &Path) -> CliResult<Value> {
    ensure_dir(out)?;
    let instance = Instance::generate(config, &mut step_rng(config, GENERATE_STREAM))?;
    let path = out.join(INSTANCE_FILE);
    instance.write(&path)?;
    Ok(json!({
        "instance": path.display().to_string(),
        "instance_id": instance.instance_id(),
        "scheme": instance.scheme(),
    }))
}

/// Outcome types the harness can sample and score.
pub trait Outcome: Clone + Eq + Hash + Serialize + DeserializeOwned {
    /// Symmetric Metropolis neighbour.
    fn propose(&self, rng: &mut RngStream) -> Self;
}

impl Outcome for BitString {
    fn propose(&self, rng: &mut RngStream) -> Self {
        bit_flip_proposal(self, rng)
    }
}

impl Outcome for FockOutcome {
    fn propose(&self, rng: &mut RngStream) -> Self {
        photon_move_proposal(self, rng)
    }
}

struct Drawn<L> {
    samples: SampleSet<L>,
    acceptance_rate: Option<f64>,
}

fn draw<L: Outcome>(law: &DiscreteDistribution<L>, method: &SamplerMethod, k: usize, rng: &mut RngStream) -> CliResult<Drawn<L>> {
    let relabel = |set: &SampleSet<usize>| set.map(|&i| law.labels()[i].clone());
    let (samples, acceptance_rate) = match method {
        SamplerMethod::Exact => (sample_exact(law, k, rng)?, None),
        SamplerMethod::Uniform => {
            let mut set = sample_exact(&DiscreteDistribution::uniform(law.labels().to_vec())?, k, rng)?;
            set.sampler = "uniform".into();
            (set, None)
        }
        SamplerMethod::Rejection { c } => {
            let run = sample_rejection(|i| law.probs()[i], law.len(), *c, k, rng)?;
            (relabel(&run.samples), Some(run.acceptance_rate()))
        }
        SamplerMethod::Frugal { c } => {
            let run = sample_frugal(|i| law.probs()[i], law.len(), *c, k, rng)?;
            (relabel(&run.samples), Some(run.acceptance_rate()))
        }
        SamplerMethod::Metropolis { burn_in, thinning } => {
            let start = law
                .iter()
                .fold(None::<(&L, f64)>, |best, (x, p)| match best {
                    Some((_, q)) if q >= p => best,
                    _ => Some((x, p)),
                })
                .map(|(x, _)| x.clone())
                .expect("tables are non-empty");
            let set = sample_metropolis(
                start,
                |x, y| law.prob(y) / law.prob(x),
                |x, rng| x.propose(rng),
                *burn_in,
                *thinning,
                k,
                rng,
            )?;
            (set, None)
        }
        SamplerMethod::SpoofHeavy => (spoof_heavy(law, k, rng)?, None),
        SamplerMethod::Ancestral => {
            return Err(CliError::config("the ancestral sampler needs scheme fock_bs"));
        }
    };
    Ok(Drawn { samples, acceptance_rate })
}

fn white_noise<L: Outcome>(table: DiscreteDistribution<L>, noise: &Noise) -> CliResult<DiscreteDistribution<L>> {
    match *noise {
        Noise::White { lambda } => Ok(mix_with_uniform(&table, lambda)?),
        Noise::None => Ok(table),
        Noise::Pauli { .. } => Err(CliError::config("pauli noise needs a qubit scheme")),
    }
}

fn write_samples<L: Serialize>(drawn: Drawn<L>, instance: &Instance, out: &Path) -> CliResult<Value> {
    let samples = drawn.samples.with_instance(instance.instance_id());
    let path = out.join(SAMPLES_FILE);
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    let mut w = BufWriter::new(file);
    samples.write_jsonl(&mut w)?;
    w.flush().map_err(|e| CliError::io(&path, e))?;
    Ok(json!({
        "samples": path.display().to_string(),
        "sampler": samples.sampler,
        "k": samples.len(),
        "acceptance_rate": drawn.acceptance_rate,
    }))
}

pub fn cmd_sample(config: &ExperimentConfig, out: &Path) -> CliResult<Value> {
    let instance = Instance::read(&out.join(INSTANCE_FILE), config)?;
    let mut rng = step_rng(config, SAMPLE_STREAM);
    let k = config.sampler.k;
    let method = &config.sampler.method;
    match instance.ideal()? {
        Ideal::Qubit { circuit, table } => {
            let law = match config.noise {
                Noise::Pauli { eps, n_traj } => noisy_distribution_trajectories(&circuit, eps, n_traj, &mut rng)?,
                _ => white_noise(table, &config.noise)?,
            };
            write_samples(draw(&law, method, k, &mut rng)?, &instance, out)
        }
        Ideal::Fock { unitary, table } => {
            let drawn = if *method == SamplerMethod::Ancestral {
                let Scheme::FockBs { n, .. } = config.scheme else {
                    unreachable!("instance scheme matches config")
                };
                Drawn {
                    samples: bs_sample_ancestral(&unitary, n, k, &mut rng)?,
                    acceptance_rate: None,
                }
            } else {
                draw(&white_noise(table, &config.noise)?, method, k, &mut rng)?
            };
            write_samples(drawn, &instance, out)
        }
        Ideal::Gaussian { table, captured } => {
            let mut summary = write_samples(draw(&white_noise(table, &config.noise)?, method, k, &mut rng)?, &instance, out)?;
            summary["captured_mass"] = json!(captured);
            Ok(summary)
        }
    }
}

fn read_samples<L: DeserializeOwned>(path: &Path, instance: &Instance) -> CliResult<SampleSet<L>> {
    let file = File::open(path).map_err(|e| CliError::missing(path, e))?;
    let set = SampleSet::read_jsonl(BufReader::new(file)).map_err(|e| CliError::missing(path, e))?;
    if set.instance_id != instance.instance_id() {
        return Err(CliError::missing(
            path,
            format!("samples belong to instance {:?}, not {:?}", set.instance_id, instance.instance_id()),
        ));
    }
    Ok(set)
}

/// `½ Σ |f(x) − p(x)|` between empirical frequencies and the ideal table.
fn empirical_tvd<L: Outcome>(samples: &SampleSet<L>, table: &DiscreteDistribution<L>) -> VerificationReport {
    let mut counts: HashMap<&L, usize> = HashMap::new();
    for x in &samples.outcomes {
        *counts.entry(x).or_default() += 1;
    }
    let k = samples.len() as f64;
    let mut l1 = 0.0;
    for (x, p) in table.iter() {
        l1 += (counts.remove(x).unwrap_or(0) as f64 / k - p).abs();
    }
    // anything left over lies outside the ideal support
    l1 += counts.values().map(|&c| c as f64 / k).sum::<f64>();
    VerificationReport::new("tvd", l1 / 2.0, 0.0, samples.len())
}

type RowNormCheck<'a> = &'a dyn Fn(&mut RngStream) -> qrslab::Result<VerificationReport>;

fn score<L: Outcome>(
    config: &ExperimentConfig,
    samples: &SampleSet<L>,
    table: &DiscreteDistribution<L>,
    row_norm: Option<RowNormCheck>,
    rng: &mut RngStream,
) -> CliResult<Vec<VerificationReport>> {
    let prob = |x: &L| table.prob(x);
    let qubits = || {
        config
            .scheme
            .qubits()
            .ok_or_else(|| CliError::config("verifier needs a qubit scheme"))
    };
    let mut reports = Vec::with_capacity(config.verifiers.len());
    for vc in &config.verifiers {
        let report = match &vc.verifier {
            Verifier::XebLinear => xeb_linear(samples, prob, qubits()?)?,
            Verifier::XebUnbiased { ensemble_norm } => xeb_unbiased(samples, prob, qubits()?, *ensemble_norm)?,
            Verifier::CrossEntropy => cross_entropy_difference(samples, table)?,
            Verifier::Hog => hog_score(samples, prob, table.median())?,
            Verifier::Bog { bins } => bog_distance(samples, prob, &BogBins::new(qubits()?, *bins)?)?,
            Verifier::Tvd => empirical_tvd(samples, table),
            Verifier::Bayes => {
                let uniform = 1.0 / table.len() as f64;
                bayes_discriminate(samples, prob, |_| uniform)?
            }
            Verifier::RowNorm => match row_norm {
                Some(check) => check(rng)?,
                None => return Err(CliError::config("verifier row_norm needs scheme fock_bs")),
            },
        };
        let report = match vc.threshold {
            Some(t) => {
                let passed = if vc.verifier.higher_is_better() {
                    report.estimate >= t
                } else {
                    report.estimate <= t
                };
                report.with_aux("threshold", t).with_aux("passed", passed)
            }
            None => report,
        };
        reports.push(report);
    }
    Ok(reports)
}

fn all_passed(reports: &[VerificationReport]) -> bool {
    reports
        .iter()
        .all(|r| r.aux.get("passed").and_then(Value::as_bool).unwrap_or(true))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactRef {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timestamps {
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
}

/// Provenance of one verification run. `content_hash` covers every field
/// except the timestamps, so reruns of the same config hash identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub instance: ArtifactRef,
    pub samples: ArtifactRef,
    pub reports: Vec<VerificationReport>,
    pub passed: bool,
    pub content_hash: String,
    pub timestamps: Timestamps,
}

impl RunRecord {
    pub fn compute_content_hash(&self) -> String {
        let content = json!({
            "config_hash": self.config_hash,
            "instance": self.instance,
            "samples": self.samples,
            "reports": self.reports,
            "passed": self.passed,
        });
        sha256_hex(canonical_json(&content).as_bytes())
    }
}

fn unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

/// Scores the sample file and writes `reports.json` and `run_record.json`.
/// Returns the record; `passed` is false when any threshold is missed.
pub fn cmd_verify(config: &ExperimentConfig, out: &Path) -> CliResult<RunRecord> {
    let started = unix_ms();
    let instance_path = out.join(INSTANCE_FILE);
    let samples_path = out.join(SAMPLES_FILE);
    let instance = Instance::read(&instance_path, config)?;
    let mut rng = step_rng(config, VERIFY_STREAM);
    let reports = match instance.ideal()? {
        Ideal::Qubit { table, .. } => {
            let samples: SampleSet<BitString> = read_samples(&samples_path, &instance)?;
            score(config, &samples, &table, None, &mut rng)?
        }
        Ideal::Fock { unitary, table } => {
            let samples: SampleSet<FockOutcome> = read_samples(&samples_path, &instance)?;
            let check = |rng: &mut RngStream| row_norm_discriminate(&samples, &unitary, rng);
            score(config, &samples, &table, Some(&check), &mut rng)?
        }
        Ideal::Gaussian { table, .. } => {
            let samples: SampleSet<FockOutcome> = read_samples(&samples_path, &instance)?;
            score(config, &samples, &table, None, &mut rng)?
        }
    };
    write_json(&out.join(REPORTS_FILE), &reports)?;
    let mut record = RunRecord {
        config_hash: config.hash(),
        instance: ArtifactRef {
            file: INSTANCE_FILE.into(),
            sha256: file_sha256(&instance_path)?,
        },
        samples: ArtifactRef {
            file: SAMPLES_FILE.into(),
            sha256: file_sha256(&samples_path)?,
        },
        passed: all_passed(&reports),
        reports,
        content_hash: String::new(),
        timestamps: Timestamps {
            started_unix_ms: started,
            finished_unix_ms: unix_ms(),
        },
    };
    record.content_hash = record.compute_content_hash();
    write_json(&out.join(RECORD_FILE), &record)?;
    Ok(record)
}

/// Text table of the reports in `out`, with threshold verdicts.
pub fn cmd_report(out: &Path) -> CliResult<String> {
    let path = out.join(REPORTS_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::missing(&path, e))?;
    let reports: Vec<VerificationReport> = serde_json::from_str(&text).map_err(|e| CliError::missing(&path, e))?;
    let mut table = render_table(&reports);
    for r in &reports {
        if let (Some(t), Some(passed)) = (r.aux_f64("threshold"), r.aux.get("passed").and_then(Value::as_bool)) {
            let verdict = if passed { "pass" } else { "FAIL" };
            table.push_str(&format!("{}: {verdict} (threshold {t})\n", r.metric));
        }
    }
    let record_path = out.join(RECORD_FILE);
    if let Ok(text) = std::fs::read_to_string(&record_path) {
        let record: RunRecord = serde_json::from_str(&text).map_err(|e| CliError::missing(&record_path, e))?;
        table.push_str(&format!("config {}\nrecord {}\n", record.config_hash, record.content_hash));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> ExperimentConfig {
        ExperimentConfig::parse(text).unwrap()
    }

    #[test]
    fn tvd_of_perfect_frequencies_is_zero() {
        let labels: Vec<usize> = (0..4).collect();
        let table = DiscreteDistribution::uniform(labels).unwrap();
        let samples = SampleSet::new(vec![0, 1, 2, 3], "x", 0);
        assert_eq!(empirical_tvd(&samples, &table).estimate, 0.0);
        let skewed = SampleSet::new(vec![0, 0, 0, 0], "x", 0);
        assert!((empirical_tvd(&skewed, &table).estimate - 0.75).abs() < 1e-15);
    }

    #[test]
    fn content_hash_ignores_timestamps() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(
            r#"{"seed": 3, "scheme": {"kind": "iqp_poly", "n": 3}, "sampler": {"kind": "exact", "k": 50},
                "verifiers": [{"name": "xeb_linear"}]}"#,
        );
        cmd_generate(&cfg, dir.path()).unwrap();
        cmd_sample(&cfg, dir.path()).unwrap();
        let mut a = cmd_verify(&cfg, dir.path()).unwrap();
        assert_eq!(a.content_hash, a.compute_content_hash());
        a.timestamps.started_unix_ms += 1000;
        assert_eq!(a.content_hash, a.compute_content_hash());
        let b = cmd_verify(&cfg, dir.path()).unwrap();
        assert_eq!(a.content_hash, b.content_hash);
    }

    impl Outcome for usize {
        fn propose(&self, _: &mut RngStream) -> Self {
            *self
        }
    }
}
