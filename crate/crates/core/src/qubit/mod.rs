//! State-vector simulation of qubit circuits and the random circuit families
//! built on it.
//!
//! Basis states are indexed little-endian: bit `i` of the index is qubit `i`.
//! Text forms of bit strings list qubit 0 first.

mod bits;
mod circuit;
mod cluster;
mod gate;
mod iqp;
mod noise;
mod pauli;
mod state;
mod sycamore;

pub use bits::BitString;
pub use circuit::{hide_instance, Circuit, CircuitFamily};
pub use cluster::{cluster_circuit, cluster_stabilizers, grid_edges};
pub use gate::{Gate, GateKind};
pub use iqp::{
    build_iqp_poly_circuit, build_iqp_weight_circuit, iqp_gap_amplitude, ising_partition_amplitude, IqpPolynomial,
    IqpWeights,
};
pub use noise::{noisy_distribution_trajectories, noisy_state_trajectory, TRAJECTORY_MAX_QUBITS};
pub use pauli::{pauli_expectation, Pauli, PauliString};
pub use state::{
    amplitude, output_distribution, simulate_state, StateVector, DISTRIBUTION_MAX_QUBITS, SIMULATION_MAX_QUBITS,
};
pub use sycamore::{build_haar_brickwork_circuit, build_sycamore_circuit, build_sycamore_circuit_with, CouplerSet};
