use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kahan::{kahan_total, KahanSum};
use crate::error::{check_limit, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::{RngStream, C64};

/// Largest dimension accepted by [`permanent_naive`].
pub const PERMANENT_NAIVE_MAX_DIM: usize = 10;
/// Largest dimension accepted by the Ryser and Glynn routes.
pub const PERMANENT_EXACT_MAX_DIM: usize = 30;

// Gray-code walks shorter than this run on one thread.
const SERIAL_LOG2: usize = 14;
const MAX_CHUNKS: u64 = 256;

/// Randomized estimate with its empirical standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithError {
    pub value: C64,
    pub standard_error: f64,
    pub sample_count: usize,
}

fn check_square(a: &ComplexMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::invalid(format!("permanent needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(a.rows())
}

/// Sum over all permutations of `Π_j a[j, τ(j)]`.
pub fn permanent_naive(a: &ComplexMatrix) -> Result<C64> {
    let n = check_square(a)?;
    check_limit("permanent_naive dimension", n, PERMANENT_NAIVE_MAX_DIM)?;

    fn recurse(a: &ComplexMatrix, row: usize, used: u32, prefix: C64, acc: &mut KahanSum) {
        let n = a.rows();
        if row == n {
            acc.add(prefix);
            return;
        }
        for col in 0..n {
            if used & (1 << col) == 0 {
                recurse(a, row + 1, used | (1 << col), prefix * a[(row, col)], acc);
            }
        }
    }

    let mut acc = KahanSum::default();
    recurse(a, 0, 0, C64::new(1.0, 0.0), &mut acc);
    Ok(acc.value())
}

/// Splits `1..total` (Gray-code step indices) into contiguous chunks.
fn chunks(total: u64) -> Vec<(u64, u64)> {
    let nchunks = if total < (1 << SERIAL_LOG2) { 1 } else { MAX_CHUNKS.min(total) };
    let size = total.div_ceil(nchunks);
    (0..nchunks)
        .map(|c| (c * size, ((c + 1) * size).min(total)))
        .filter(|(s, e)| s < e)
        .collect()
}

#[inline]
fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Ryser's inclusion-exclusion formula,
/// `Perm(A) = (−1)ⁿ Σ_{S⊆[n]} (−1)^{|S|} Π_i Σ_{j∈S} a_ij`,
/// walked in Gray-code order so each subset costs one column update.
pub fn permanent_ryser(a: &ComplexMatrix) -> Result<C64> {
    let n = check_square(a)?;
    check_limit("permanent_ryser dimension", n, PERMANENT_EXACT_MAX_DIM)?;
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let total = 1u64 << n;
    let parts: Vec<C64> = chunks(total)
        .into_par_iter()
        .map(|(start, end)| {
            // row sums for the subset gray(start); step k moves gray(k-1) -> gray(k)
            let mut subset = gray(start);
            let mut sums = vec![C64::new(0.0, 0.0); n];
            for j in 0..n {
                if subset >> j & 1 == 1 {
                    for (i, s) in sums.iter_mut().enumerate() {
                        *s += a[(i, j)];
                    }
                }
            }
            let mut acc = KahanSum::default();
            let term = |sums: &[C64], subset: u64| -> C64 {
                let prod: C64 = sums.iter().product();
                if (n - subset.count_ones() as usize).is_multiple_of(2) {
                    prod
                } else {
                    -prod
                }
            };
            if start > 0 {
                acc.add(term(&sums, subset));
            }
            for k in (start + 1)..end {
                let j = k.trailing_zeros() as usize;
                subset ^= 1 << j;
                if subset >> j & 1 == 1 {
                    for (i, s) in sums.iter_mut().enumerate() {
                        *s += a[(i, j)];
                    }
                } else {
                    for (i, s) in sums.iter_mut().enumerate() {
                        *s -= a[(i, j)];
                    }
                }
                acc.add(term(&sums, subset));
            }
            acc.value()
        })
        .collect();
    Ok(kahan_total(parts))
}

/// Glynn's formula,
/// `Perm(A) = 2^{1−n} Σ_{δ∈{±1}ⁿ, δ₁=1} (Π_k δ_k) Π_j Σ_i δ_i a_ij`,
/// walked in Gray-code order over the signs `δ₂…δₙ`.
pub fn permanent_glynn(a: &ComplexMatrix) -> Result<C64> {
    let n = check_square(a)?;
    check_limit("permanent_glynn dimension", n, PERMANENT_EXACT_MAX_DIM)?;
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let total = 1u64 << (n - 1);
    let parts: Vec<C64> = chunks(total)
        .into_par_iter()
        .map(|(start, end)| {
            // bit b of `flips` set means δ_{b+1} = −1
            let mut flips = gray(start);
            let mut sums: Vec<C64> = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| if i > 0 && flips >> (i - 1) & 1 == 1 { -a[(i, j)] } else { a[(i, j)] })
                        .sum()
                })
                .collect();
            let mut acc = KahanSum::default();
            let term = |sums: &[C64], flips: u64| -> C64 {
                let prod: C64 = sums.iter().product();
                if flips.count_ones().is_multiple_of(2) {
                    prod
                } else {
                    -prod
                }
            };
            acc.add(term(&sums, flips));
            for k in (start + 1)..end {
                let b = k.trailing_zeros() as usize;
                flips ^= 1 << b;
                let row = b + 1;
                // δ_row went from +1 to −1 (subtract 2a) or back (add 2a)
                let factor = if flips >> b & 1 == 1 { -2.0 } else { 2.0 };
                for (j, s) in sums.iter_mut().enumerate() {
                    *s += a[(row, j)] * factor;
                }
                acc.add(term(&sums, flips));
            }
            acc.value()
        })
        .collect();
    Ok(kahan_total(parts) / (total as f64))
}

/// Samples used by [`gurvits_estimate`] at additive error `epsilon`: `ceil(4/ε²)`.
pub fn gurvits_sample_count(epsilon: f64) -> usize {
    (4.0 / (epsilon * epsilon)).ceil() as usize
}

/// Gurvits' randomized estimator: the mean over uniformly random `x ∈ {±1}ⁿ`
/// of `(Π_k x_k) Π_j (A_j · x)`, an unbiased estimate of `Perm(A)` whose
/// samples are bounded in modulus by `‖A‖ⁿ`.
pub fn gurvits_estimate(a: &ComplexMatrix, epsilon: f64, rng: &mut RngStream) -> Result<EstimateWithError> {
    let n = check_square(a)?;
    if epsilon.is_nan() || epsilon <= 0.0 || epsilon > 1.0 {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    let k = gurvits_sample_count(epsilon);
    let mut x = vec![1.0f64; n];
    let mut values = Vec::with_capacity(k);
    for _ in 0..k {
        let mut sign = 1.0;
        for xi in x.iter_mut() {
            *xi = if rng.coin() { 1.0 } else { -1.0 };
            sign *= *xi;
        }
        let mut prod = C64::new(sign, 0.0);
        for j in 0..n {
            let dot: C64 = a.row(j).iter().zip(&x).map(|(aij, xi)| aij * xi).sum();
            prod *= dot;
        }
        values.push(prod);
    }
    let mean = values.iter().sum::<C64>() / k as f64;
    let se = if k > 1 {
        let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (k - 1) as f64;
        (var / k as f64).sqrt()
    } else {
        0.0
    };
    Ok(EstimateWithError {
        value: mean,
        standard_error: se,
        sample_count: k,
    })
}
