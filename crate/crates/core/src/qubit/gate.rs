use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::C64;

/// Gate types. Matrices act on the local basis index `Σ_k bit(targets[k])·2ᵏ`.
///
/// The three square roots are principal: `√P = ((1+i)/2)·I + ((1−i)/2)·P`
/// for `P ∈ {X, Y, W}` with `W = (X + Y)/√2`, e.g.
///
/// ```text
/// √X = ½ [[1+i, 1−i],
///         [1−i, 1+i]]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    SqrtX,
    SqrtY,
    SqrtW,
    H,
    X,
    Z,
    CZ,
    CCZ,
    /// `[[1,0,0,0],[0,cos θ,−i sin θ,0],[0,−i sin θ,cos θ,0],[0,0,0,e^{−iφ}]]`.
    FSim { theta: f64, phi: f64 },
    /// `exp(i w X⊗X)`.
    ExpXX(f64),
    /// `exp(i w X)`.
    ExpX(f64),
    /// `diag(e^{i a_0}, e^{i a_1}, …)` over `2ᵏ` local basis states.
    DiagonalPhase(Vec<f64>),
    /// Arbitrary dense unitary on `k` qubits.
    Unitary(ComplexMatrix),
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn local_width(len: usize) -> Option<usize> {
    (len.is_power_of_two() && len >= 2).then(|| len.trailing_zeros() as usize)
}

fn sqrt_pauli(p: [C64; 4]) -> Vec<C64> {
    let a = c(0.5, 0.5);
    let b = c(0.5, -0.5);
    vec![a + b * p[0], b * p[1], b * p[2], a + b * p[3]]
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::SqrtX => "SqrtX",
            GateKind::SqrtY => "SqrtY",
            GateKind::SqrtW => "SqrtW",
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::CZ => "CZ",
            GateKind::CCZ => "CCZ",
            GateKind::FSim { .. } => "FSim",
            GateKind::ExpXX(_) => "ExpXX",
            GateKind::ExpX(_) => "ExpX",
            GateKind::DiagonalPhase(_) => "DiagonalPhase",
            GateKind::Unitary(_) => "Unitary",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::SqrtX
            | GateKind::SqrtY
            | GateKind::SqrtW
            | GateKind::H
            | GateKind::X
            | GateKind::Z
            | GateKind::ExpX(_) => 1,
            GateKind::CZ | GateKind::FSim { .. } | GateKind::ExpXX(_) => 2,
            GateKind::CCZ => 3,
            GateKind::DiagonalPhase(a) => local_width(a.len()).unwrap_or(0),
            GateKind::Unitary(u) => local_width(u.rows()).unwrap_or(0),
        }
    }

    /// Numeric parameters in wire order.
    pub fn params(&self) -> Vec<f64> {
        match self {
            GateKind::FSim { theta, phi } => vec![*theta, *phi],
            GateKind::ExpXX(w) | GateKind::ExpX(w) => vec![*w],
            GateKind::DiagonalPhase(a) => a.clone(),
            GateKind::Unitary(u) => u.data().iter().flat_map(|z| [z.re, z.im]).collect(),
            _ => Vec::new(),
        }
    }

    pub fn from_parts(name: &str, params: &[f64]) -> Result<Self> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::invalid(format!("gate {name} takes {n} parameters, got {}", params.len())))
            }
        };
        let kind = match name {
            "SqrtX" | "SqrtY" | "SqrtW" | "H" | "X" | "Z" | "CZ" | "CCZ" => {
                want(0)?;
                match name {
                    "SqrtX" => GateKind::SqrtX,
                    "SqrtY" => GateKind::SqrtY,
                    "SqrtW" => GateKind::SqrtW,
                    "H" => GateKind::H,
                    "X" => GateKind::X,
                    "Z" => GateKind::Z,
                    "CZ" => GateKind::CZ,
                    _ => GateKind::CCZ,
                }
            }
            "FSim" => {
                want(2)?;
                GateKind::FSim {
                    theta: params[0],
                    phi: params[1],
                }
            }
            "ExpXX" => {
                want(1)?;
                GateKind::ExpXX(params[0])
            }
            "ExpX" => {
                want(1)?;
                GateKind::ExpX(params[0])
            }
            "DiagonalPhase" => GateKind::DiagonalPhase(params.to_vec()),
            "Unitary" => {
                let dim = ((params.len() / 2) as f64).sqrt().round() as usize;
                if params.len() != 2 * dim * dim {
                    return Err(Error::invalid("Unitary parameters must be 2·d² interleaved re/im values"));
                }
                let data = params.chunks(2).map(|p| c(p[0], p[1])).collect();
                GateKind::Unitary(ComplexMatrix::new(dim, dim, data)?)
            }
            other => return Err(Error::invalid(format!("unknown gate {other:?}"))),
        };
        if kind.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("gate {name} has non-finite parameters")));
        }
        Ok(kind)
    }

    /// Diagonal of the local matrix for diagonal gates.
    pub fn diagonal(&self) -> Option<Vec<C64>> {
        let one = c(1.0, 0.0);
        match self {
            GateKind::Z => Some(vec![one, -one]),
            GateKind::CZ => Some(vec![one, one, one, -one]),
            GateKind::CCZ => {
                let mut d = vec![one; 8];
                d[7] = -one;
                Some(d)
            }
            GateKind::DiagonalPhase(a) => Some(a.iter().map(|&t| C64::from_polar(1.0, t)).collect()),
            _ => None,
        }
    }

    /// Dense local matrix, row-major, `2ᵏ × 2ᵏ`.
    pub fn matrix(&self) -> Vec<C64> {
        if let Some(d) = self.diagonal() {
            let n = d.len();
            let mut m = vec![c(0.0, 0.0); n * n];
            for (i, v) in d.into_iter().enumerate() {
                m[i * n + i] = v;
            }
            return m;
        }
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let s = FRAC_1_SQRT_2;
        match self {
            GateKind::SqrtX => sqrt_pauli([zero, one, one, zero]),
            GateKind::SqrtY => sqrt_pauli([zero, c(0.0, -1.0), c(0.0, 1.0), zero]),
            GateKind::SqrtW => sqrt_pauli([zero, c(s, -s), c(s, s), zero]),
            GateKind::H => vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)],
            GateKind::X => vec![zero, one, one, zero],
            GateKind::FSim { theta, phi } => {
                let (sn, cs) = theta.sin_cos();
                let mis = c(0.0, -sn);
                #[rustfmt::skip]
                let m = vec![
                    one, zero, zero, zero,
                    zero, c(cs, 0.0), mis, zero,
                    zero, mis, c(cs, 0.0), zero,
                    zero, zero, zero, C64::from_polar(1.0, -phi),
                ];
                m
            }
            GateKind::ExpXX(w) => {
                let (sn, cs) = w.sin_cos();
                let (d, a) = (c(cs, 0.0), c(0.0, sn));
                #[rustfmt::skip]
                let m = vec![
                    d, zero, zero, a,
                    zero, d, a, zero,
                    zero, a, d, zero,
                    a, zero, zero, d,
                ];
                m
            }
            GateKind::ExpX(w) => {
                let (sn, cs) = w.sin_cos();
                vec![c(cs, 0.0), c(0.0, sn), c(0.0, sn), c(cs, 0.0)]
            }
            GateKind::Unitary(u) => u.data().to_vec(),
            GateKind::Z | GateKind::CZ | GateKind::CCZ | GateKind::DiagonalPhase(_) => unreachable!(),
        }
    }
}

/// A gate placed on specific qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
}

impl Gate {
    /// Checks arity and that targets are distinct. Width is checked by the circuit.
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self> {
        let arity = kind.arity();
        if arity == 0 {
            return Err(Error::invalid(format!("{} gate has a malformed table", kind.name())));
        }
        if let GateKind::Unitary(u) = &kind {
            if u.unitarity_defect() > 1e-10 {
                return Err(Error::invalid("Unitary gate matrix is not unitary"));
            }
        }
        if targets.len() != arity {
            return Err(Error::invalid(format!(
                "{} acts on {arity} qubits, got {} targets",
                kind.name(),
                targets.len()
            )));
        }
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::invalid(format!("repeated target qubit {t}")));
            }
        }
        Ok(Self { kind, targets })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }
}

/// Wire form `{name, params, targets}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct GateJson {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
    pub targets: Vec<usize>,
}

impl From<&Gate> for GateJson {
    fn from(g: &Gate) -> Self {
        Self {
            name: g.kind.name().to_string(),
            params: g.kind.params(),
            targets: g.targets.clone(),
        }
    }
}

impl TryFrom<GateJson> for Gate {
    type Error = Error;

    fn try_from(j: GateJson) -> Result<Self> {
        Gate::new(GateKind::from_parts(&j.name, &j.params)?, j.targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    fn mat(k: &GateKind) -> ComplexMatrix {
        let m = k.matrix();
        let n = (m.len() as f64).sqrt() as usize;
        ComplexMatrix::new(n, n, m).unwrap()
    }

    #[test]
    fn all_gates_unitary() {
        let kinds = [
            GateKind::SqrtX,
            GateKind::SqrtY,
            GateKind::SqrtW,
            GateKind::H,
            GateKind::X,
            GateKind::Z,
            GateKind::CZ,
            GateKind::CCZ,
            GateKind::FSim { theta: 0.3, phi: 1.1 },
            GateKind::ExpXX(0.7),
            GateKind::ExpX(-0.4),
            GateKind::DiagonalPhase(vec![0.1, 0.2, 0.3, 0.4]),
        ];
        for k in &kinds {
            assert!(mat(k).unitarity_defect() < 1e-14, "{}", k.name());
        }
    }

    #[test]
    fn square_roots_square_to_paulis() {
        let s = FRAC_1_SQRT_2;
        let cases = [
            (GateKind::SqrtX, [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            (GateKind::SqrtY, [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
            (GateKind::SqrtW, [c(0.0, 0.0), c(s, -s), c(s, s), c(0.0, 0.0)]),
        ];
        for (k, p) in cases {
            let m = mat(&k);
            let sq = m.matmul(&m);
            let target = ComplexMatrix::new(2, 2, p.to_vec()).unwrap();
            assert!(sq.max_abs_diff(&target) < 1e-15, "{}", k.name());
        }
        let sx = GateKind::SqrtX.matrix();
        assert_eq!(sx[0], c(0.5, 0.5));
        assert_eq!(sx[1], c(0.5, -0.5));
    }

    #[test]
    fn iswap_star_entries() {
        let m = GateKind::FSim { theta: FRAC_PI_2, phi: FRAC_PI_6 }.matrix();
        let expect = [
            (0, c(1.0, 0.0)),
            (5, c(0.0, 0.0)),
            (6, c(0.0, -1.0)),
            (9, c(0.0, -1.0)),
            (10, c(0.0, 0.0)),
            (15, c(3f64.sqrt() / 2.0, -0.5)),
        ];
        for (i, v) in expect {
            assert!((m[i] - v).norm() < 1e-15, "entry {i}: {}", m[i]);
        }
    }

    #[test]
    fn target_validation() {
        assert!(Gate::new(GateKind::CZ, vec![0]).is_err());
        assert!(Gate::new(GateKind::CZ, vec![1, 1]).is_err());
        assert!(Gate::new(GateKind::DiagonalPhase(vec![0.0; 3]), vec![0, 1]).is_err());
        assert!(Gate::new(GateKind::Unitary(ComplexMatrix::zeros(2, 2)), vec![0]).is_err());
        assert!(Gate::new(GateKind::CCZ, vec![0, 2, 1]).is_ok());
    }

    #[test]
    fn wire_roundtrip() {
        let g = Gate::new(GateKind::FSim { theta: 1.0, phi: 0.5 }, vec![3, 1]).unwrap();
        let j = GateJson::from(&g);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"name":"FSim","params":[1.0,0.5],"targets":[3,1]}"#);
        assert_eq!(Gate::try_from(j).unwrap(), g);
        let u = ComplexMatrix::from_fn(2, 2, |i, j| if i != j { c(0.0, 1.0) } else { c(0.0, 0.0) });
        let g = Gate::new(GateKind::Unitary(u), vec![0]).unwrap();
        assert_eq!(Gate::try_from(GateJson::from(&g)).unwrap(), g);
        assert!(GateKind::from_parts("Foo", &[]).is_err());
        assert!(GateKind::from_parts("H", &[1.0]).is_err());
    }
}
