use serde::{Deserialize, Serialize};

use super::gate::GateJson;
use super::{BitString, Gate, GateKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitFamily {
    Universal,
    IqpPoly,
    IqpWeights,
    Custom,
}

/// Ordered gate list on `width` qubits, applied to `|0ⁿ⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CircuitJson", try_from = "CircuitJson")]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    family: CircuitFamily,
    instance_id: String,
}

impl Circuit {
    pub fn new(width: usize, family: CircuitFamily) -> Self {
        Self {
            width,
            gates: Vec::new(),
            family,
            instance_id: String::new(),
        }
    }

    pub fn with_instance_id(mut self, id: impl Into<String>) -> Self {
        self.instance_id = id.into();
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn family(&self) -> CircuitFamily {
        self.family
    }

    pub fn instance_id(&self) -> &str {
        &self.instance_id
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&t) = gate.targets().iter().find(|&&t| t >= self.width) {
            return Err(Error::invalid(format!("target qubit {t} outside a {}-qubit circuit", self.width)));
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Builds and appends a gate.
    pub fn add(&mut self, kind: GateKind, targets: &[usize]) -> Result<()> {
        self.push(Gate::new(kind, targets.to_vec())?)
    }
}

/// Appends `X` on every qubit where `y` has a one, so that
/// `p_x(C_y) = p_{x⊕y}(C)`.
pub fn hide_instance(c: &Circuit, y: &BitString) -> Result<Circuit> {
    if y.width() != c.width() {
        return Err(Error::invalid(format!("mask has {} bits for a {}-qubit circuit", y.width(), c.width())));
    }
    let mut out = c.clone();
    for q in (0..c.width()).filter(|&q| y.get(q)) {
        out.add(GateKind::X, &[q])?;
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    family: CircuitFamily,
    #[serde(default)]
    instance_id: String,
    gates: Vec<GateJson>,
}

impl From<Circuit> for CircuitJson {
    fn from(c: Circuit) -> Self {
        Self {
            n: c.width,
            family: c.family,
            instance_id: c.instance_id,
            gates: c.gates.iter().map(GateJson::from).collect(),
        }
    }
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = Error;

    fn try_from(j: CircuitJson) -> Result<Self> {
        let mut c = Circuit::new(j.n, j.family).with_instance_id(j.instance_id);
        for g in j.gates {
            c.push(Gate::try_from(g)?)?;
        }
        Ok(c)
    }
}
