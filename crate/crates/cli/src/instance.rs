use std::path::Path;

use qrslab::boson::{bs_distribution, gbs_state_from_smss, gbs_truncated_table, FockOutcome, SqueezingSpec};
use qrslab::linalg::{haar_unitary, UnitaryMatrix};
use qrslab::qubit::{
    build_iqp_poly_circuit, build_iqp_weight_circuit, build_sycamore_circuit_with, output_distribution, BitString,
    Circuit, CouplerSet, IqpPolynomial, IqpWeights,
};
use qrslab::sampling::DiscreteDistribution;
use qrslab::RngStream;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Scheme};
use crate::error::{CliError, CliResult};

/// A generated problem instance as written to `instance.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Instance {
    Universal {
        circuit: Circuit,
    },
    IqpPoly {
        polynomial: IqpPolynomial,
        circuit: Circuit,
    },
    IqpWeights {
        weights: IqpWeights,
        circuit: Circuit,
    },
    FockBs {
        instance_id: String,
        photons: usize,
        unitary: UnitaryMatrix,
    },
    GaussianBs {
        instance_id: String,
        cutoff: usize,
        unitary: UnitaryMatrix,
        squeezing: SqueezingSpec,
    },
}

/// Exact output law of an instance.
pub enum Ideal {
    Qubit {
        circuit: Circuit,
        table: DiscreteDistribution<BitString>,
    },
    Fock {
        unitary: UnitaryMatrix,
        table: DiscreteDistribution<FockOutcome>,
    },
    /// Conditioned on at most `cutoff` photons; `captured` is the
    /// probability mass of that sector before renormalizing.
    Gaussian {
        table: DiscreteDistribution<FockOutcome>,
        captured: f64,
    },
}

impl Instance {
    pub fn generate(config: &ExperimentConfig, rng: &mut RngStream) -> CliResult<Self> {
        let id = config.instance_id();
        Ok(match &config.scheme {
            Scheme::Universal { rows, cols, depth, pattern } => {
                let pattern = pattern.as_deref().unwrap_or(&CouplerSet::DEFAULT_PATTERN);
                let circuit = build_sycamore_circuit_with(*rows, *cols, *depth, pattern, rng)?;
                Instance::Universal { circuit: circuit.with_instance_id(id) }
            }
            Scheme::IqpPoly { n } => {
                let polynomial = IqpPolynomial::random(*n, rng);
                let circuit = build_iqp_poly_circuit(&polynomial)?.with_instance_id(id);
                Instance::IqpPoly { polynomial, circuit }
            }
            Scheme::IqpWeights { n, continuous } => {
                let weights = if *continuous {
                    IqpWeights::random_continuous(*n, rng)
                } else {
                    IqpWeights::random_discrete(*n, rng)
                };
                let circuit = build_iqp_weight_circuit(&weights)?.with_instance_id(id);
                Instance::IqpWeights { weights, circuit }
            }
            Scheme::FockBs { m, n } => Instance::FockBs {
                instance_id: id,
                photons: *n,
                unitary: haar_unitary(*m, rng)?,
            },
            Scheme::GaussianBs { m, r, cutoff } => Instance::GaussianBs {
                instance_id: id,
                cutoff: *cutoff,
                unitary: haar_unitary(*m, rng)?,
                squeezing: SqueezingSpec::uniform(*m, *r)?,
            },
        })
    }

    pub fn scheme(&self) -> &'static str {
        match self {
            Instance::Universal { .. } => "universal",
            Instance::IqpPoly { .. } => "iqp_poly",
            Instance::IqpWeights { .. } => "iqp_weights",
            Instance::FockBs { .. } => "fock_bs",
            Instance::GaussianBs { .. } => "gaussian_bs",
        }
    }

    pub fn instance_id(&self) -> &str {
        match self {
            Instance::Universal { circuit } | Instance::IqpPoly { circuit, .. } | Instance::IqpWeights { circuit, .. } => {
                circuit.instance_id()
            }
            Instance::FockBs { instance_id, .. } | Instance::GaussianBs { instance_id, .. } => instance_id,
        }
    }

    pub fn ideal(&self) -> CliResult<Ideal> {
        Ok(match self {
            Instance::Universal { circuit } | Instance::IqpPoly { circuit, .. } | Instance::IqpWeights { circuit, .. } => {
                Ideal::Qubit {
                    circuit: circuit.clone(),
                    table: output_distribution(circuit)?,
                }
            }
            Instance::FockBs { photons, unitary, .. } => Ideal::Fock {
                unitary: unitary.clone(),
                table: bs_distribution(unitary, *photons)?,
            },
            Instance::GaussianBs { cutoff, unitary, squeezing, .. } => {
                let state = gbs_state_from_smss(unitary, squeezing)?;
                let (labels, weights): (Vec<_>, Vec<_>) = gbs_truncated_table(&state, *cutoff)?
                    .into_iter()
                    // rounding can leave a vanishing outcome a hair below zero
                    .map(|(s, p)| (s, p.max(0.0)))
                    .unzip();
                let captured = weights.iter().sum();
                Ideal::Gaussian {
                    table: DiscreteDistribution::from_weights(labels, weights)?,
                    captured,
                }
            }
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::io(path, e))?;
        std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path, config: &ExperimentConfig) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::missing(path, e))?;
        let instance: Self = serde_json::from_str(&text).map_err(|e| CliError::missing(path, e))?;
        if instance.scheme() != config.scheme.name() {
            return Err(CliError::config(format!(
                "instance has scheme {} but the config asks for {}",
                instance.scheme(),
                config.scheme.name()
            )));
        }
        Ok(instance)
    }
}
