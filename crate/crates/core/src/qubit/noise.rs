use rayon::prelude::*;

use super::{output_distribution, BitString, Circuit, StateVector};
use crate::error::{check_limit, Error, Result};
use crate::sampling::DiscreteDistribution;
use crate::{RngStream, C64};

/// Width limit of trajectory averaging.
pub const TRAJECTORY_MAX_QUBITS: usize = 16;

// trajectories are split across this many independent streams
const CHUNKS: u64 = 64;

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("error probability must lie in [0, 1], got {eps}")));
    }
    Ok(())
}

fn apply_pauli(psi: &mut StateVector, q: usize, which: usize) {
    let bit = 1usize << q;
    let amps = psi.amplitudes_mut();
    let i = C64::new(0.0, 1.0);
    for b in 0..amps.len() {
        if b & bit != 0 {
            continue;
        }
        let (a0, a1) = (amps[b], amps[b | bit]);
        match which {
            // X
            0 => {
                amps[b] = a1;
                amps[b | bit] = a0;
            }
            // Y = [[0, −i], [i, 0]]
            1 => {
                amps[b] = -i * a1;
                amps[b | bit] = i * a0;
            }
            // Z
            _ => amps[b | bit] = -a1,
        }
    }
}

/// One noisy run: after every multi-qubit gate each touched qubit suffers a
/// uniformly random non-identity Pauli with probability `eps`.
pub fn noisy_state_trajectory(c: &Circuit, eps: f64, rng: &mut RngStream) -> Result<StateVector> {
    check_eps(eps)?;
    let mut psi = StateVector::zero(c.width())?;
    for g in c.gates() {
        psi.apply(g)?;
        if g.arity() >= 2 && eps > 0.0 {
            for &q in g.targets() {
                if rng.uniform() < eps {
                    apply_pauli(&mut psi, q, rng.index(3));
                }
            }
        }
    }
    Ok(psi)
}

/// Output table averaged over `n_traj` noisy runs. Work is split over a fixed
/// number of child streams so the result does not depend on thread count.
pub fn noisy_distribution_trajectories(
    c: &Circuit,
    eps: f64,
    n_traj: usize,
    rng: &mut RngStream,
) -> Result<DiscreteDistribution<BitString>> {
    check_eps(eps)?;
    check_limit("trajectory width", c.width(), TRAJECTORY_MAX_QUBITS)?;
    if n_traj == 0 {
        return Err(Error::invalid("need at least one trajectory"));
    }
    if eps == 0.0 {
        return output_distribution(c);
    }
    let base = rng.fork();
    let dim = 1usize << c.width();
    let partials: Vec<Vec<f64>> = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| -> Result<Vec<f64>> {
            let mut stream = base.split(chunk);
            let mut acc = vec![0.0; dim];
            let count = (n_traj as u64 + CHUNKS - 1 - chunk) / CHUNKS;
            for _ in 0..count {
                let psi = noisy_state_trajectory(c, eps, &mut stream)?;
                for (a, p) in acc.iter_mut().zip(psi.amplitudes()) {
                    *a += p.norm_sqr();
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![0.0; dim];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    DiscreteDistribution::from_weights(BitString::all(c.width()).collect(), total)
}
