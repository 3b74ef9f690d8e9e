use std::path::{Path, PathBuf};

use qrslab::boson::{fock_space_size, ANCESTRAL_MAX_PHOTONS, BS_MAX_PHOTONS, BS_TABLE_MAX_OUTCOMES, GBS_MAX_PHOTONS};
use qrslab::qubit::{CouplerSet, DISTRIBUTION_MAX_QUBITS, TRAJECTORY_MAX_QUBITS};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// One experiment: which instance family to draw, how to sample it and how
/// to score the samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub sampler: SamplerConfig,
    #[serde(default)]
    pub noise: Noise,
    #[serde(default)]
    pub verifiers: Vec<VerifierConfig>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scheme {
    Universal {
        rows: usize,
        cols: usize,
        depth: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pattern: Option<Vec<CouplerSet>>,
    },
    IqpPoly {
        n: usize,
    },
    IqpWeights {
        n: usize,
        #[serde(default)]
        continuous: bool,
    },
    FockBs {
        m: usize,
        n: usize,
    },
    GaussianBs {
        m: usize,
        r: f64,
        cutoff: usize,
    },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Universal { .. } => "universal",
            Scheme::IqpPoly { .. } => "iqp_poly",
            Scheme::IqpWeights { .. } => "iqp_weights",
            Scheme::FockBs { .. } => "fock_bs",
            Scheme::GaussianBs { .. } => "gaussian_bs",
        }
    }

    /// Qubit count for the circuit schemes.
    pub fn qubits(&self) -> Option<usize> {
        match *self {
            Scheme::Universal { rows, cols, .. } => Some(rows * cols),
            Scheme::IqpPoly { n } | Scheme::IqpWeights { n, .. } => Some(n),
            Scheme::FockBs { .. } | Scheme::GaussianBs { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub k: usize,
    #[serde(flatten)]
    pub method: SamplerMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SamplerMethod {
    Exact,
    Uniform,
    Rejection { c: f64 },
    Frugal { c: f64 },
    Metropolis { burn_in: usize, thinning: usize },
    Ancestral,
    SpoofHeavy,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Noise {
    #[default]
    None,
    /// Mixture `(1 − λ) P + λ U` of the ideal and uniform tables.
    White { lambda: f64 },
    /// Pauli channel after every multi-qubit gate, averaged over trajectories.
    Pauli { eps: f64, n_traj: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifierConfig {
    #[serde(flatten)]
    pub verifier: Verifier,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Verifier {
    XebLinear,
    XebUnbiased { ensemble_norm: f64 },
    CrossEntropy,
    Hog,
    Bog { bins: usize },
    Tvd,
    RowNorm,
    Bayes,
}

impl Verifier {
    /// Whether a larger estimate means the samples look more ideal.
    pub fn higher_is_better(&self) -> bool {
        !matches!(self, Verifier::CrossEntropy | Verifier::Bog { .. } | Verifier::Tvd)
    }

    fn needs_qubits(&self) -> bool {
        matches!(
            self,
            Verifier::XebLinear | Verifier::XebUnbiased { .. } | Verifier::Hog | Verifier::Bog { .. }
        )
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Checks size guards and scheme/sampler/verifier compatibility.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        match &self.scheme {
            Scheme::Universal { rows, cols, depth, pattern } => {
                if *rows == 0 || *cols == 0 || *depth == 0 {
                    return bad("universal grid and depth must be positive".into());
                }
                if pattern.as_ref().is_some_and(Vec::is_empty) {
                    return bad("coupler pattern must not be empty".into());
                }
            }
            Scheme::IqpPoly { n } | Scheme::IqpWeights { n, .. } => {
                if *n == 0 {
                    return bad("qubit count must be positive".into());
                }
            }
            Scheme::FockBs { m, n } => {
                if *n == 0 || n > m {
                    return bad(format!("need 1 ≤ n ≤ m, got n = {n}, m = {m}"));
                }
                if *n > BS_MAX_PHOTONS {
                    return bad(format!("{n} photons exceed the limit of {BS_MAX_PHOTONS}"));
                }
                let size = fock_space_size(*m, *n);
                if size > BS_TABLE_MAX_OUTCOMES {
                    return bad(format!("{size} outcomes exceed the table limit of {BS_TABLE_MAX_OUTCOMES}"));
                }
            }
            Scheme::GaussianBs { m, r, cutoff } => {
                if *m == 0 || !(r.is_finite() && *r >= 0.0) {
                    return bad("gaussian scheme needs m > 0 and a finite r ≥ 0".into());
                }
                if *cutoff > GBS_MAX_PHOTONS {
                    return bad(format!("cutoff {cutoff} exceeds the limit of {GBS_MAX_PHOTONS}"));
                }
                let size: usize = (0..=*cutoff).map(|n| fock_space_size(*m, n)).fold(0, usize::saturating_add);
                if size > BS_TABLE_MAX_OUTCOMES {
                    return bad(format!("{size} outcomes exceed the table limit of {BS_TABLE_MAX_OUTCOMES}"));
                }
            }
        }
        if let Some(q) = self.scheme.qubits() {
            if q > DISTRIBUTION_MAX_QUBITS {
                return bad(format!("{q} qubits exceed the table limit of {DISTRIBUTION_MAX_QUBITS}"));
            }
        }

        if self.sampler.k == 0 {
            return bad("sample count k must be positive".into());
        }
        match self.sampler.method {
            SamplerMethod::Rejection { c } if !(c >= 1.0) => return bad(format!("rejection needs c ≥ 1, got {c}")),
            SamplerMethod::Frugal { c } if !(c > 0.0) => return bad(format!("frugal rejection needs c > 0, got {c}")),
            SamplerMethod::Metropolis { thinning: 0, .. } => return bad("thinning must be at least 1".into()),
            SamplerMethod::Metropolis { .. } if matches!(self.scheme, Scheme::GaussianBs { .. }) => {
                return bad("photon-move proposals cannot change the photon number of a gaussian_bs outcome".into())
            }
            SamplerMethod::Ancestral => match self.scheme {
                Scheme::FockBs { n, .. } if n <= ANCESTRAL_MAX_PHOTONS => {
                    if self.noise != Noise::None {
                        return bad("the ancestral sampler draws from the ideal law only".into());
                    }
                }
                Scheme::FockBs { .. } => {
                    return bad(format!("ancestral sampling is limited to {ANCESTRAL_MAX_PHOTONS} photons"))
                }
                _ => return bad("the ancestral sampler needs scheme fock_bs".into()),
            },
            _ => {}
        }

        match self.noise {
            Noise::None => {}
            Noise::White { lambda } => {
                if !(0.0..=1.0).contains(&lambda) {
                    return bad(format!("white-noise weight must lie in [0, 1], got {lambda}"));
                }
            }
            Noise::Pauli { eps, n_traj } => {
                let Some(q) = self.scheme.qubits() else {
                    return bad("pauli noise needs a qubit scheme".into());
                };
                if q > TRAJECTORY_MAX_QUBITS {
                    return bad(format!("{q} qubits exceed the trajectory limit of {TRAJECTORY_MAX_QUBITS}"));
                }
                if !(0.0..=1.0).contains(&eps) || n_traj == 0 {
                    return bad("pauli noise needs eps in [0, 1] and n_traj > 0".into());
                }
            }
        }

        for v in &self.verifiers {
            if v.verifier.needs_qubits() && self.scheme.qubits().is_none() {
                return bad(format!("verifier {} needs a qubit scheme", v.verifier.name()));
            }
            match v.verifier {
                Verifier::RowNorm if !matches!(self.scheme, Scheme::FockBs { .. }) => {
                    return bad("verifier row_norm needs scheme fock_bs".into())
                }
                Verifier::XebUnbiased { ensemble_norm } if !(ensemble_norm > 0.0) => {
                    return bad(format!("ensemble_norm must be positive, got {ensemble_norm}"))
                }
                Verifier::Bog { bins: 0 } => return bad("bog needs at least one bin".into()),
                _ => {}
            }
            if v.threshold.is_some_and(|t| !t.is_finite()) {
                return bad("thresholds must be finite".into());
            }
        }
        Ok(())
    }

    /// Canonical JSON with sorted keys. The output directory is left out
    /// so that moving a run does not change its identity.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.output = None;
        canonical_json(&clone)
    }

    pub fn hash(&self) -> String {
        sha256_hex(self.canonical_json().as_bytes())
    }

    pub fn instance_id(&self) -> String {
        format!("{}-{}", self.scheme.name(), &self.hash()[..12])
    }
}

impl Verifier {
    pub fn name(&self) -> &'static str {
        match self {
            Verifier::XebLinear => "xeb_linear",
            Verifier::XebUnbiased { .. } => "xeb_unbiased",
            Verifier::CrossEntropy => "cross_entropy",
            Verifier::Hog => "hog",
            Verifier::Bog { .. } => "bog",
            Verifier::Tvd => "tvd",
            Verifier::RowNorm => "row_norm",
            Verifier::Bayes => "bayes",
        }
    }
}

/// JSON text with object keys in sorted order.
pub fn canonical_json(value: &impl Serialize) -> String {
    // serde_json's default map is ordered by key, so a round trip through
    // Value sorts every nested object
    let v: Value = serde_json::to_value(value).expect("config types serialize");
    serde_json::to_string(&v).expect("values serialize")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
