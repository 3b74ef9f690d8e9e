use std::time::Instant;

use super::SampleSet;
use crate::boson::FockOutcome;
use crate::error::{Error, Result};
use crate::qubit::BitString;
use crate::RngStream;

/// Metropolis chain started at `init`.
///
/// `ratio(x, y)` returns `p(y) / p(x)`; a proposal is accepted with
/// probability `min(1, ratio)`. The proposal must be symmetric. After
/// `burn_in` steps every `thinning`-th state is recorded until `k` are kept.
pub fn sample_metropolis<L: Clone>(
    init: L,
    mut ratio: impl FnMut(&L, &L) -> f64,
    mut propose: impl FnMut(&L, &mut RngStream) -> L,
    burn_in: usize,
    thinning: usize,
    k: usize,
    rng: &mut RngStream,
) -> Result<SampleSet<L>> {
    if k == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    if thinning == 0 {
        return Err(Error::invalid("thinning must be at least 1"));
    }
    let start = Instant::now();
    let seed = rng.seed();
    let mut state = init;
    let mut step = |state: &mut L, rng: &mut RngStream| -> Result<()> {
        let candidate = propose(state, rng);
        let r = ratio(state, &candidate);
        if !(r > 0.0) {
            return Err(Error::data(format!("probability ratio must be positive, got {r}")));
        }
        if r >= 1.0 || rng.uniform() < r {
            *state = candidate;
        }
        Ok(())
    };
    for _ in 0..burn_in {
        step(&mut state, rng)?;
    }
    let mut outcomes = Vec::with_capacity(k);
    for _ in 0..k {
        for _ in 0..thinning {
            step(&mut state, rng)?;
        }
        outcomes.push(state.clone());
    }
    Ok(SampleSet::new(outcomes, "metropolis", seed).with_wall_time(start.elapsed().as_secs_f64()))
}

/// Flips one uniformly chosen bit.
pub fn bit_flip_proposal(x: &BitString, rng: &mut RngStream) -> BitString {
    x.flip(rng.index(x.width()))
}

/// Moves one photon from a uniformly chosen source mode to a uniformly chosen
/// different mode; an empty source proposes staying put. Every move and its
/// reverse have the same probability `1 / (m (m − 1))`.
pub fn photon_move_proposal(s: &FockOutcome, rng: &mut RngStream) -> FockOutcome {
    let m = s.modes();
    if m < 2 {
        return s.clone();
    }
    let src = rng.index(m);
    let mut dst = rng.index(m - 1);
    if dst >= src {
        dst += 1;
    }
    let mut counts = s.counts().to_vec();
    if counts[src] == 0 {
        return s.clone();
    }
    counts[src] -= 1;
    counts[dst] += 1;
    FockOutcome::new(counts)
}
