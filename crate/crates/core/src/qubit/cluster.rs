use super::{Circuit, CircuitFamily, GateKind, Pauli, PauliString};
use crate::error::Result;

/// Nearest-neighbour edges of a `rows × cols` grid, qubit `r·cols + c`.
pub fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let q = r * cols + c;
            if c + 1 < cols {
                edges.push((q, q + 1));
            }
            if r + 1 < rows {
                edges.push((q, q + cols));
            }
        }
    }
    edges
}

/// `Π_{edges} CZ · H⊗ⁿ |0ⁿ⟩`.
pub fn cluster_circuit(rows: usize, cols: usize) -> Result<Circuit> {
    let n = rows * cols;
    let mut c = Circuit::new(n, CircuitFamily::Custom);
    for q in 0..n {
        c.add(GateKind::H, &[q])?;
    }
    for (a, b) in grid_edges(rows, cols) {
        c.add(GateKind::CZ, &[a, b])?;
    }
    Ok(c)
}

/// Generators `X_i Π_{j ~ i} Z_j`, one per qubit.
pub fn cluster_stabilizers(rows: usize, cols: usize) -> Vec<PauliString> {
    let n = rows * cols;
    let edges = grid_edges(rows, cols);
    (0..n)
        .map(|i| {
            let mut s = PauliString::identity(n).with(i, Pauli::X);
            for &(a, b) in &edges {
                if a == i {
                    s = s.with(b, Pauli::Z);
                } else if b == i {
                    s = s.with(a, Pauli::Z);
                }
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{pauli_expectation, simulate_state};

    #[test]
    fn stabilizers_hold_on_cluster_state() {
        for (rows, cols) in [(1, 2), (2, 2), (2, 4), (3, 3)] {
            let psi = simulate_state(&cluster_circuit(rows, cols).unwrap()).unwrap();
            for s in cluster_stabilizers(rows, cols) {
                assert!((pauli_expectation(&psi, &s).unwrap() - 1.0).abs() < 1e-10, "{s}");
            }
        }
    }

    #[test]
    fn generator_shape() {
        let s = cluster_stabilizers(2, 2);
        assert_eq!(s[0].to_string(), "+XZZI");
        assert_eq!(s[3].to_string(), "+IZZX");
    }
}
