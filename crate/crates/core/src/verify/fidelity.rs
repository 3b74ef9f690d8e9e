use serde::{Deserialize, Serialize};

use super::{mean_and_stderr, VerificationReport};
use crate::error::{Error, Result};
use crate::qubit::PauliString;
use crate::RngStream;

/// Stabilizer witness value with the state's fidelity when it is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub witness: f64,
    pub exact_fidelity: Option<f64>,
    pub expectations: Vec<f64>,
    /// All expectations equal 1, so the witness is exactly 1.
    pub perfect: bool,
}

impl WitnessReport {
    pub fn with_fidelity(mut self, fidelity: f64) -> Self {
        self.exact_fidelity = Some(fidelity);
        self
    }

    /// `witness ≤ fidelity + 1e-9`, or `true` when no fidelity is attached.
    pub fn is_consistent(&self) -> bool {
        self.exact_fidelity.is_none_or(|f| self.witness <= f + 1e-9)
    }
}

/// Witness `1 − (N − Σ⟨S_i⟩)/2` from the parent Hamiltonian `−Σ S_i`,
/// whose ground energy is `−N` and gap 2.
pub fn cluster_witness(expectations: &[f64], n: usize) -> Result<WitnessReport> {
    if expectations.len() != n {
        return Err(Error::invalid(format!("{} expectations for {n} qubits", expectations.len())));
    }
    if let Some(e) = expectations.iter().find(|e| !(-1.0 - 1e-12..=1.0 + 1e-12).contains(*e)) {
        return Err(Error::data(format!("stabilizer expectation {e} outside [-1, 1]")));
    }
    let sum: f64 = expectations.iter().sum();
    Ok(WitnessReport {
        witness: 1.0 - (n as f64 - sum) / 2.0,
        exact_fidelity: None,
        expectations: expectations.to_vec(),
        perfect: expectations.iter().all(|&e| e == 1.0),
    })
}

/// A single ±1 measurement outcome with mean `expectation`.
pub fn stabilizer_outcome(expectation: f64, rng: &mut RngStream) -> i8 {
    if rng.uniform() < (1.0 + expectation) / 2.0 {
        1
    } else {
        -1
    }
}

/// Direct fidelity estimation for a stabilizer target: each round multiplies
/// a uniformly random subset of the generators and records one ±1 outcome of
/// measuring that group element on the preparation.
pub fn direct_fidelity_estimation(
    generators: &[PauliString],
    mut outcome: impl FnMut(&PauliString, &mut RngStream) -> i8,
    k: usize,
    rng: &mut RngStream,
) -> Result<VerificationReport> {
    if k == 0 {
        return Err(Error::invalid("need at least one round"));
    }
    let width = generators
        .first()
        .map(PauliString::width)
        .ok_or_else(|| Error::invalid("no stabilizer generators"))?;
    let mut values = Vec::with_capacity(k);
    for _ in 0..k {
        let mut element = PauliString::identity(width);
        for g in generators {
            if rng.coin() {
                element = element.mul(g)?;
            }
        }
        let o = outcome(&element, rng);
        if o != 1 && o != -1 {
            return Err(Error::data(format!("measurement outcome {o} is not ±1")));
        }
        values.push(f64::from(o));
    }
    let (mean, se) = mean_and_stderr(&values);
    Ok(VerificationReport::new("dfe", mean, se, k).with_aux("generators", generators.len()))
}
