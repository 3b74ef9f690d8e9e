use rayon::prelude::*;

use super::{BitString, Circuit, Gate};
use crate::error::{check_limit, Error, Result};
use crate::sampling::DiscreteDistribution;
use crate::C64;

/// Memory guard for [`simulate_state`].
pub const SIMULATION_MAX_QUBITS: usize = 24;
/// Guard for building full output tables.
pub const DISTRIBUTION_MAX_QUBITS: usize = 20;

// below this many amplitudes gates are applied on one thread
const PARALLEL_MIN_AMPS: usize = 1 << 14;

/// `2ⁿ` amplitudes, little-endian basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(width: usize) -> Result<Self> {
        check_limit("state width", width, SIMULATION_MAX_QUBITS)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << width];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { width, amps })
    }

    /// Wraps amplitudes whose squared norm is 1 within `1e-10`.
    pub fn from_amplitudes(width: usize, amps: Vec<C64>) -> Result<Self> {
        check_limit("state width", width, SIMULATION_MAX_QUBITS)?;
        if amps.len() != 1 << width {
            return Err(Error::invalid(format!("{} amplitudes for {width} qubits", amps.len())));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("state has squared norm {norm}")));
        }
        Ok(Self { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        if let Some(&t) = gate.targets().iter().find(|&&t| t >= self.width) {
            return Err(Error::invalid(format!("target qubit {t} outside a {}-qubit state", self.width)));
        }
        let targets = gate.targets();
        if let Some(diag) = gate.kind().diagonal() {
            let local = |i: usize| -> usize {
                targets.iter().enumerate().map(|(k, &t)| (i >> t & 1) << k).sum()
            };
            let f = |(i, a): (usize, &mut C64)| *a *= diag[local(i)];
            if self.amps.len() >= PARALLEL_MIN_AMPS {
                self.amps.par_iter_mut().enumerate().for_each(f);
            } else {
                self.amps.iter_mut().enumerate().for_each(f);
            }
            return Ok(());
        }
        let m = gate.kind().matrix();
        let dim = 1usize << targets.len();
        let offsets: Vec<usize> = (0..dim)
            .map(|l| targets.iter().enumerate().map(|(k, &t)| (l >> k & 1) << t).sum())
            .collect();
        let tmask: usize = targets.iter().map(|&t| 1usize << t).sum();
        // iterate over indices with all target bits clear by scattering a counter into the free bits
        let free_count = 1usize << (self.width - targets.len());
        let mut sorted = targets.to_vec();
        sorted.sort_unstable();
        let spread = |mut j: usize| -> usize {
            for &t in &sorted {
                let low = j & ((1 << t) - 1);
                j = ((j >> t) << (t + 1)) | low;
            }
            j
        };
        debug_assert_eq!(spread(free_count - 1) & tmask, 0);
        let amps_ptr = SyncPtr(self.amps.as_mut_ptr());
        let kernel = |j: usize| {
            let base = spread(j);
            let mut buf = [C64::new(0.0, 0.0); 8];
            let mut big;
            let local: &mut [C64] = if dim <= 8 {
                &mut buf[..dim]
            } else {
                big = vec![C64::new(0.0, 0.0); dim];
                &mut big[..]
            };
            let p = amps_ptr;
            for (l, &off) in offsets.iter().enumerate() {
                // SAFETY: each `base` owns the disjoint index set {base + off}
                local[l] = unsafe { *p.0.add(base + off) };
            }
            for (r, &off) in offsets.iter().enumerate() {
                let row = &m[r * dim..(r + 1) * dim];
                let v: C64 = row.iter().zip(local.iter()).map(|(a, b)| a * b).sum();
                unsafe { *p.0.add(base + off) = v };
            }
        };
        if self.amps.len() >= PARALLEL_MIN_AMPS {
            (0..free_count).into_par_iter().for_each(kernel);
        } else {
            (0..free_count).for_each(kernel);
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct SyncPtr(*mut C64);
unsafe impl Send for SyncPtr {}
unsafe impl Sync for SyncPtr {}

/// `C|0ⁿ⟩` by applying each gate in place.
pub fn simulate_state(c: &Circuit) -> Result<StateVector> {
    let mut psi = StateVector::zero(c.width())?;
    for g in c.gates() {
        psi.apply(g)?;
    }
    Ok(psi)
}

/// `⟨x|C|0ⁿ⟩`.
pub fn amplitude(c: &Circuit, x: &BitString) -> Result<C64> {
    if x.width() != c.width() {
        return Err(Error::invalid(format!("{}-bit outcome for a {}-qubit circuit", x.width(), c.width())));
    }
    Ok(simulate_state(c)?.amps[x.index()])
}

/// The full table `p(x) = |⟨x|C|0ⁿ⟩|²`.
pub fn output_distribution(c: &Circuit) -> Result<DiscreteDistribution<BitString>> {
    check_limit("output table width", c.width(), DISTRIBUTION_MAX_QUBITS)?;
    let psi = simulate_state(c)?;
    DiscreteDistribution::new(BitString::all(c.width()).collect(), psi.probabilities())
}
