use super::{Circuit, CircuitFamily, GateKind};
use crate::error::{Error, Result};
use crate::linalg::haar_unitary;
use crate::RngStream;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

/// One coupler activation layer on a `rows × cols` grid with qubit
/// `r·cols + c` at row `r`, column `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplerSet {
    /// `(r, c)–(r, c+1)` for even `c`.
    RightEvenCols,
    /// `(r, c)–(r, c+1)` for odd `c`.
    RightOddCols,
    /// `(r, c)–(r+1, c)` for even `r`.
    DownEvenRows,
    /// `(r, c)–(r+1, c)` for odd `r`.
    DownOddRows,
}

impl CouplerSet {
    pub const DEFAULT_PATTERN: [CouplerSet; 4] = [
        CouplerSet::RightEvenCols,
        CouplerSet::RightOddCols,
        CouplerSet::DownEvenRows,
        CouplerSet::DownOddRows,
    ];

    pub fn pairs(self, rows: usize, cols: usize) -> Vec<(usize, usize)> {
        let q = |r: usize, c: usize| r * cols + c;
        let mut out = Vec::new();
        match self {
            CouplerSet::RightEvenCols | CouplerSet::RightOddCols => {
                let parity = usize::from(self == CouplerSet::RightOddCols);
                for r in 0..rows {
                    for c in (parity..cols.saturating_sub(1)).step_by(2) {
                        out.push((q(r, c), q(r, c + 1)));
                    }
                }
            }
            CouplerSet::DownEvenRows | CouplerSet::DownOddRows => {
                let parity = usize::from(self == CouplerSet::DownOddRows);
                for r in (parity..rows.saturating_sub(1)).step_by(2) {
                    for c in 0..cols {
                        out.push((q(r, c), q(r + 1, c)));
                    }
                }
            }
        }
        out
    }
}

/// Random grid circuit with the default four-layer coupler cycle.
pub fn build_sycamore_circuit(rows: usize, cols: usize, depth: usize, rng: &mut RngStream) -> Result<Circuit> {
    build_sycamore_circuit_with(rows, cols, depth, &CouplerSet::DEFAULT_PATTERN, rng)
}

/// Each cycle applies a random gate from `{√X, √Y, √W}` to every qubit,
/// never repeating a qubit's gate from the previous cycle, then
/// `FSim(π/2, π/6)` on every coupler of `pattern[cycle % len]`.
pub fn build_sycamore_circuit_with(
    rows: usize,
    cols: usize,
    depth: usize,
    pattern: &[CouplerSet],
    rng: &mut RngStream,
) -> Result<Circuit> {
    let n = rows * cols;
    if n == 0 {
        return Err(Error::invalid("grid has no qubits"));
    }
    if pattern.is_empty() {
        return Err(Error::invalid("coupler pattern is empty"));
    }
    let choices = [GateKind::SqrtX, GateKind::SqrtY, GateKind::SqrtW];
    let mut last: Vec<Option<usize>> = vec![None; n];
    let mut c = Circuit::new(n, CircuitFamily::Universal);
    for cycle in 0..depth {
        for (q, prev) in last.iter_mut().enumerate() {
            let pick = match *prev {
                None => rng.index(3),
                Some(p) => (p + 1 + rng.index(2)) % 3,
            };
            *prev = Some(pick);
            c.add(choices[pick].clone(), &[q])?;
        }
        for (a, b) in pattern[cycle % pattern.len()].pairs(rows, cols) {
            c.add(GateKind::FSim { theta: FRAC_PI_2, phi: FRAC_PI_6 }, &[a, b])?;
        }
    }
    Ok(c)
}

/// One-dimensional brickwork of Haar-random two-qubit gates: layer `l`
/// couples `(i, i+1)` for `i ≡ l (mod 2)`.
pub fn build_haar_brickwork_circuit(n: usize, depth: usize, rng: &mut RngStream) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::invalid("brickwork needs at least two qubits"));
    }
    let mut c = Circuit::new(n, CircuitFamily::Universal);
    for layer in 0..depth {
        for i in ((layer % 2)..n - 1).step_by(2) {
            let u = haar_unitary(4, rng)?.into_matrix();
            c.add(GateKind::Unitary(u), &[i, i + 1])?;
        }
    }
    Ok(c)
}
