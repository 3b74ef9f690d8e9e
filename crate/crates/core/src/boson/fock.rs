use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_limit, Error, Result};
use crate::linalg::{expand_pattern, select, UnitaryMatrix};
use crate::poly::permanent_ryser;
use crate::sampling::{DiscreteDistribution, SampleSet};
use crate::{RngStream, C64};

/// Photon-number limit of [`bs_probability`].
pub const BS_MAX_PHOTONS: usize = 10;
/// Largest sample space [`bs_distribution`] will tabulate.
pub const BS_TABLE_MAX_OUTCOMES: usize = 200_000;
/// Photon-number limit of [`bs_sample_ancestral`].
pub const ANCESTRAL_MAX_PHOTONS: usize = 8;

// sample batches are split over this many child streams
const CHUNKS: u64 = 64;

/// Photon counts per output mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockOutcome(Vec<usize>);

impl FockOutcome {
    pub fn new(counts: Vec<usize>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_collision_free(&self) -> bool {
        self.0.iter().all(|&s| s <= 1)
    }

    /// `Π_j s_j!`.
    pub fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&s| (1..=s).map(|k| k as f64).product::<f64>())
            .product()
    }

    /// Mode indices with multiplicity, ascending.
    pub fn modes_with_multiplicity(&self) -> Vec<usize> {
        expand_pattern(&self.0)
    }
}

impl From<Vec<usize>> for FockOutcome {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

/// `C(m + n − 1, n)`, saturating.
pub fn fock_space_size(m: usize, n: usize) -> usize {
    if m == 0 {
        return usize::from(n == 0);
    }
    let mut acc: u128 = 1;
    for i in 1..=n as u128 {
        acc = acc * (m as u128 - 1 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// All placements of `n` photons in `m` modes, ordered with the first
/// mode's count descending, then the second, and so on.
pub fn fock_space(m: usize, n: usize, collision_free_only: bool) -> Vec<FockOutcome> {
    fn fill(m: usize, left: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<FockOutcome>) {
        if prefix.len() + 1 == m {
            if left <= cap {
                prefix.push(left);
                out.push(FockOutcome(prefix.clone()));
                prefix.pop();
            }
            return;
        }
        for s in (0..=left.min(cap)).rev() {
            prefix.push(s);
            fill(m, left - s, cap, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(FockOutcome(Vec::new()));
        }
        return out;
    }
    let cap = if collision_free_only { 1 } else { n };
    fill(m, n, cap, &mut Vec::with_capacity(m), &mut out);
    out
}

fn check_outcome(u: &UnitaryMatrix, s: &FockOutcome) -> Result<usize> {
    if s.modes() != u.dim() {
        return Err(Error::invalid(format!("outcome has {} modes, interferometer {}", s.modes(), u.dim())));
    }
    let n = s.total();
    if n > u.dim() {
        return Err(Error::invalid(format!("{n} photons do not fit in {} input modes", u.dim())));
    }
    Ok(n)
}

/// `|Perm(U_{S,1ₙ})|² / Π s_j!` for `n` photons injected into the first `n` modes.
pub fn bs_probability(u: &UnitaryMatrix, s: &FockOutcome) -> Result<f64> {
    let n = check_outcome(u, s)?;
    check_limit("photon number", n, BS_MAX_PHOTONS)?;
    let rows = s.modes_with_multiplicity();
    let cols: Vec<usize> = (0..n).collect();
    let sub = select(u.matrix(), &rows, &cols);
    Ok(permanent_ryser(&sub)?.norm_sqr() / s.factorial_product())
}

/// Full output table over all `C(m+n−1, n)` outcomes.
pub fn bs_distribution(u: &UnitaryMatrix, n: usize) -> Result<DiscreteDistribution<FockOutcome>> {
    check_limit("photon number", n, BS_MAX_PHOTONS)?;
    check_limit("boson sample space", fock_space_size(u.dim(), n), BS_TABLE_MAX_OUTCOMES)?;
    let space = fock_space(u.dim(), n, false);
    let probs = space.par_iter().map(|s| bs_probability(u, s)).collect::<Result<Vec<_>>>()?;
    DiscreteDistribution::new(space, probs)
}

/// Exact sampler placing photons one at a time.
///
/// With `A` the first `n` columns of `U`, the marginal of the first `k`
/// photon modes is proportional to `Σ_{|c|=k} |Perm(A_{r₁…r_k; c})|²` over
/// column subsets `c`. Each step expands the new row's permanents from the
/// previous step's by Laplace expansion along that row.
pub fn bs_sample_ancestral(
    u: &UnitaryMatrix,
    n: usize,
    k: usize,
    rng: &mut RngStream,
) -> Result<SampleSet<FockOutcome>> {
    check_limit("photon number", n, ANCESTRAL_MAX_PHOTONS)?;
    let m = u.dim();
    if n > m {
        return Err(Error::invalid(format!("{n} photons do not fit in {m} input modes")));
    }
    if k == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let start = std::time::Instant::now();
    let seed = rng.seed();
    let base = rng.fork();
    let a = u.matrix();
    let outcomes: Vec<FockOutcome> = (0..CHUNKS)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let mut stream = base.split(chunk);
            let count = (k as u64 + CHUNKS - 1 - chunk) / CHUNKS;
            (0..count)
                .map(|_| ancestral_draw(a, m, n, &mut stream))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(SampleSet::new(outcomes, "ancestral", seed).with_wall_time(start.elapsed().as_secs_f64()))
}

fn ancestral_draw(a: &crate::linalg::ComplexMatrix, m: usize, n: usize, rng: &mut RngStream) -> FockOutcome {
    let subsets = 1usize << n;
    let zero = C64::new(0.0, 0.0);
    // perms[c] = Perm(A_{chosen rows; c}) for |c| = number of chosen rows
    let mut perms = vec![zero; subsets];
    perms[0] = C64::new(1.0, 0.0);
    let mut counts = vec![0usize; m];
    let mut candidate = vec![vec![zero; subsets]; m];
    let mut weights = vec![0.0; m];
    for step in 1..=n {
        for i in 0..m {
            let row = a.row(i);
            let next = &mut candidate[i];
            let mut w = 0.0;
            for c in (0..subsets).filter(|c: &usize| c.count_ones() as usize == step) {
                let mut p = zero;
                let mut rest = c;
                while rest != 0 {
                    let l = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    p += row[l] * perms[c & !(1 << l)];
                }
                next[c] = p;
                w += p.norm_sqr();
            }
            weights[i] = w;
        }
        let total: f64 = weights.iter().sum();
        let mut u = rng.uniform() * total;
        let mut pick = m - 1;
        for (i, &w) in weights.iter().enumerate() {
            if u < w {
                pick = i;
                break;
            }
            u -= w;
        }
        while weights[pick] == 0.0 && pick > 0 {
            pick -= 1;
        }
        counts[pick] += 1;
        std::mem::swap(&mut perms, &mut candidate[pick]);
    }
    FockOutcome(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary, ComplexMatrix};
    use std::f64::consts::FRAC_1_SQRT_2;

    pub(crate) fn hom() -> UnitaryMatrix {
        let s = FRAC_1_SQRT_2;
        UnitaryMatrix::new(ComplexMatrix::from_real(&[vec![s, s], vec![s, -s]]).unwrap()).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn space_enumeration() {
        let two: Vec<_> = fock_space(2, 2, false).into_iter().map(|s| s.0).collect();
        assert_eq!(two, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        for m in 1..=8 {
            for n in 0..=8 {
                assert_eq!(fock_space(m, n, false).len(), binom(m + n - 1, n), "m={m} n={n}");
                assert_eq!(fock_space_size(m, n), binom(m + n - 1, n));
                let cf = fock_space(m, n, true);
                assert_eq!(cf.len(), if n <= m { binom(m, n) } else { 0 });
                assert!(cf.iter().all(|s| s.is_collision_free() && s.total() == n));
            }
        }
    }

    #[test]
    fn hong_ou_mandel() {
        let u = hom();
        assert!(bs_probability(&u, &FockOutcome(vec![1, 1])).unwrap() < 1e-12);
        assert!((bs_probability(&u, &FockOutcome(vec![2, 0])).unwrap() - 0.5).abs() < 1e-15);
        let d = bs_distribution(&u, 2).unwrap();
        let p = d.probs();
        assert!((p[0] - 0.5).abs() < 1e-15 && p[1] < 1e-15 && (p[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_is_point_mass() {
        let u = UnitaryMatrix::new(ComplexMatrix::identity(4)).unwrap();
        let d = bs_distribution(&u, 3).unwrap();
        for (s, p) in d.iter() {
            let expect = if s.counts() == [1, 1, 1, 0] { 1.0 } else { 0.0 };
            assert!((p - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn random_table_normalized() {
        let mut rng = RngStream::new(70, 0);
        let u = haar_unitary(5, &mut rng).unwrap();
        let total: f64 = bs_distribution(&u, 3).unwrap().probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn guards() {
        let u = hom();
        assert!(bs_probability(&u, &FockOutcome(vec![1, 1, 0])).is_err());
        assert!(bs_probability(&u, &FockOutcome(vec![3, 0])).is_err());
        let mut rng = RngStream::from_seed(1);
        let big = haar_unitary(12, &mut rng).unwrap();
        assert!(matches!(bs_distribution(&big, 10), Err(Error::SizeLimit { .. })));
        let big = haar_unitary(9, &mut rng).unwrap();
        assert!(matches!(bs_sample_ancestral(&big, 9, 1, &mut rng), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn output_permutation_relabels_table() {
        let mut rng = RngStream::new(71, 0);
        let u = haar_unitary(4, &mut rng).unwrap();
        let perm = [2, 0, 3, 1];
        let v = u.permute_rows(&perm).unwrap();
        let du = bs_distribution(&u, 2).unwrap();
        let dv = bs_distribution(&v, 2).unwrap();
        for (s, p) in du.iter() {
            let mut moved = vec![0; 4];
            for (j, &c) in s.counts().iter().enumerate() {
                moved[perm[j]] = c;
            }
            assert!((dv.prob(&FockOutcome(moved)) - p).abs() < 1e-14);
        }
    }

    #[test]
    fn single_photon_follows_first_column() {
        let mut rng = RngStream::new(72, 0);
        let u = haar_unitary(4, &mut rng).unwrap();
        let k = 50_000;
        let s = bs_sample_ancestral(&u, 1, k, &mut rng).unwrap();
        for j in 0..4 {
            let p = u.matrix()[(j, 0)].norm_sqr();
            let f = s.outcomes.iter().filter(|o| o.counts()[j] == 1).count() as f64 / k as f64;
            let sigma = (p * (1.0 - p) / k as f64).sqrt();
            assert!((f - p).abs() < 3.0 * sigma, "mode {j}: {f} vs {p}");
        }
    }

    #[test]
    fn ancestral_law_matches_table() {
        let mut rng = RngStream::new(73, 0);
        let u = haar_unitary(4, &mut rng).unwrap();
        let d = bs_distribution(&u, 3).unwrap();
        let k = 50_000;
        let s = bs_sample_ancestral(&u, 3, k, &mut rng).unwrap();
        let mut freq = vec![0.0; d.len()];
        for o in &s.outcomes {
            freq[d.index_of(o).unwrap()] += 1.0 / k as f64;
        }
        let tvd = 0.5 * freq.iter().zip(d.probs()).map(|(f, p)| (f - p).abs()).sum::<f64>();
        assert!(tvd < 0.02, "tvd {tvd}");
        assert!(s.outcomes.iter().all(|o| o.total() == 3));
    }

    #[test]
    fn deterministic_batches() {
        let u = hom();
        let a = bs_sample_ancestral(&u, 2, 1000, &mut RngStream::from_seed(9)).unwrap();
        let b = bs_sample_ancestral(&u, 2, 1000, &mut RngStream::from_seed(9)).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        assert_eq!(a.len(), 1000);
    }
}
