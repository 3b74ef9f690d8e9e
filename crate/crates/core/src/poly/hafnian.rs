use rayon::prelude::*;

use super::kahan::{kahan_total, KahanSum};
use crate::error::{check_limit, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::C64;

/// Largest dimension accepted by [`hafnian_naive`].
pub const HAFNIAN_NAIVE_MAX_DIM: usize = 12;
/// Largest dimension accepted by [`hafnian_recursive`].
pub const HAFNIAN_RECURSIVE_MAX_DIM: usize = 32;
/// Allowed asymmetry, relative to `max(1, max|a_ij|)`.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Validates shape and symmetry and returns the symmetrized input.
fn prepare(a: &ComplexMatrix, limit: usize, what: &'static str) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::invalid(format!("hafnian needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    if n % 2 == 1 {
        return Err(Error::invalid(format!("hafnian needs an even dimension, got {n}")));
    }
    check_limit(what, n, limit)?;
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOL * a.max_abs().max(1.0) {
        return Err(Error::invalid(format!("hafnian input is not symmetric (max |a_ij - a_ji| = {asym:e})")));
    }
    Ok(a.symmetrized())
}

/// Sum over all perfect matchings of `Π a[i, j]` over matched pairs.
/// The diagonal never enters.
pub fn hafnian_naive(a: &ComplexMatrix) -> Result<C64> {
    let a = prepare(a, HAFNIAN_NAIVE_MAX_DIM, "hafnian_naive dimension")?;
    let n = a.rows();

    fn recurse(a: &ComplexMatrix, free: u32, prefix: C64, acc: &mut KahanSum) {
        if free == 0 {
            acc.add(prefix);
            return;
        }
        let i = free.trailing_zeros() as usize;
        let rest = free & !(1 << i);
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            recurse(a, rest & !(1 << j), prefix * a[(i, j)], acc);
        }
    }

    let mut acc = KahanSum::default();
    let all = if n == 0 { 0 } else { (1u32 << n) - 1 };
    recurse(&a, all, C64::new(1.0, 0.0), &mut acc);
    Ok(acc.value())
}

/// Power-trace formula: with `B = A·[[0,I],[I,0]]` and `B_Z` the principal
/// submatrix on rows `Z ∪ (Z + n)`,
/// `Haf(A) = Σ_{Z⊆[n]} (−1)^{n−|Z|} [ηⁿ] exp(Σ_k tr(B_Zᵏ) ηᵏ / 2k)`.
/// Runs in `O(n⁴ 2ⁿ)` for a `2n × 2n` input.
pub fn hafnian_recursive(a: &ComplexMatrix) -> Result<C64> {
    let mut a = prepare(a, HAFNIAN_RECURSIVE_MAX_DIM, "hafnian_recursive dimension")?;
    let dim = a.rows();
    if dim == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    for i in 0..dim {
        a[(i, i)] = C64::new(0.0, 0.0);
    }
    let half = dim / 2;
    // b[i][j] = a[i][partner(j)]
    let b = ComplexMatrix::from_fn(dim, dim, |i, j| a[(i, (j + half) % dim)]);

    let total = 1usize << half;
    let parts: Vec<C64> = (1..total)
        .into_par_iter()
        .fold(KahanSum::default, |mut acc, subset| {
            let idx: Vec<usize> = (0..half)
                .filter(|&i| subset >> i & 1 == 1)
                .flat_map(|i| [i, i + half])
                .collect();
            let sub = crate::linalg::select(&b, &idx, &idx);
            let coeff = matching_coefficient(&sub, half);
            if (half - subset.count_ones() as usize).is_multiple_of(2) {
                acc.add(coeff);
            } else {
                acc.add(-coeff);
            }
            acc
        })
        .map(|acc| acc.value())
        .collect();
    Ok(kahan_total(parts))
}

/// `[ηⁿ] exp(Σ_{k=1}^{n} tr(Cᵏ) ηᵏ / 2k)` via the Newton-type recurrence
/// `e_m = (1/m) Σ_{k=1}^{m} (p_k / 2) e_{m−k}`.
fn matching_coefficient(c: &ComplexMatrix, order: usize) -> C64 {
    let mut traces = Vec::with_capacity(order);
    let mut power = c.clone();
    for k in 1..=order {
        if k > 1 {
            power = power.matmul(c);
        }
        traces.push((0..c.rows()).map(|i| power[(i, i)]).sum::<C64>());
    }
    let mut e = vec![C64::new(0.0, 0.0); order + 1];
    e[0] = C64::new(1.0, 0.0);
    for m in 1..=order {
        let s: C64 = (1..=m).map(|k| traces[k - 1] * 0.5 * e[m - k]).sum();
        e[m] = s / m as f64;
    }
    e[order]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ginibre_matrix;
    use crate::poly::permanent_ryser;
    use crate::RngStream;

    fn random_symmetric(n: usize, rng: &mut RngStream) -> ComplexMatrix {
        let g = ginibre_matrix(n, n, 1.0, rng).unwrap();
        g.add(&g.transpose()).scale(C64::new(0.5, 0.0))
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn two_by_two() {
        let a = C64::new(0.7, -1.3);
        let m = ComplexMatrix::from_rows(&[vec![C64::new(0.0, 0.0), a], vec![a, C64::new(0.0, 0.0)]]).unwrap();
        assert_eq!(hafnian_naive(&m).unwrap(), a);
        assert!((hafnian_recursive(&m).unwrap() - a).norm() < 1e-15);
        // the diagonal is ignored
        let mut d = m.clone();
        d[(0, 0)] = C64::new(5.0, 0.0);
        d[(1, 1)] = C64::new(-2.0, 1.0);
        assert_eq!(hafnian_naive(&d).unwrap(), a);
        assert!((hafnian_recursive(&d).unwrap() - a).norm() < 1e-15);
    }

    #[test]
    fn all_ones_counts_matchings() {
        let mut double_fact = 1.0;
        for half in 1..=6 {
            double_fact *= (2 * half - 1) as f64;
            let ones = ComplexMatrix::from_fn(2 * half, 2 * half, |_, _| C64::new(1.0, 0.0));
            assert!((hafnian_naive(&ones).unwrap() - double_fact).norm() < 1e-9);
            assert!((hafnian_recursive(&ones).unwrap() - double_fact).norm() < 1e-9 * double_fact);
        }
        let six = ComplexMatrix::from_fn(6, 6, |_, _| C64::new(1.0, 0.0));
        assert_eq!(hafnian_naive(&six).unwrap(), C64::new(15.0, 0.0));
    }

    #[test]
    fn empty_is_one() {
        let e = ComplexMatrix::zeros(0, 0);
        assert_eq!(hafnian_naive(&e).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(hafnian_recursive(&e).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn errors() {
        assert!(matches!(hafnian_naive(&ComplexMatrix::zeros(3, 3)), Err(Error::InvalidArgument(_))));
        assert!(matches!(hafnian_recursive(&ComplexMatrix::zeros(2, 4)), Err(Error::InvalidArgument(_))));
        let mut asym = ComplexMatrix::zeros(2, 2);
        asym[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(hafnian_naive(&asym), Err(Error::InvalidArgument(_))));
        assert!(matches!(hafnian_recursive(&asym), Err(Error::InvalidArgument(_))));
        assert!(matches!(hafnian_naive(&ComplexMatrix::zeros(14, 14)), Err(Error::SizeLimit { .. })));
        assert!(matches!(hafnian_recursive(&ComplexMatrix::zeros(34, 34)), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn routes_agree() {
        let mut rng = RngStream::new(21, 0);
        for _ in 0..100 {
            let dim = 2 * (1 + rng.index(5));
            let a = random_symmetric(dim, &mut rng);
            let n = hafnian_naive(&a).unwrap();
            let r = hafnian_recursive(&a).unwrap();
            assert!(rel(r, n) < 1e-9, "dim {dim}: {r} vs {n}");
        }
    }

    #[test]
    fn permanent_embedding() {
        let mut rng = RngStream::new(22, 0);
        for n in 1..=5 {
            let a = ginibre_matrix(n, n, 1.0, &mut rng).unwrap();
            let big = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
                (true, false) => a[(i, j - n)],
                (false, true) => a[(j, i - n)],
                _ => C64::new(0.0, 0.0),
            });
            let p = permanent_ryser(&a).unwrap();
            assert!(rel(hafnian_recursive(&big).unwrap(), p) < 1e-10);
            if 2 * n <= HAFNIAN_NAIVE_MAX_DIM {
                assert!(rel(hafnian_naive(&big).unwrap(), p) < 1e-10);
            }
        }
    }

    #[test]
    fn block_diagonal_factorizes() {
        let mut rng = RngStream::new(23, 0);
        for (p, q) in [(2, 2), (2, 4), (4, 4), (4, 6)] {
            let a = random_symmetric(p, &mut rng);
            let b = random_symmetric(q, &mut rng);
            let expect = hafnian_naive(&a).unwrap() * hafnian_naive(&b).unwrap();
            let sum = a.direct_sum(&b);
            assert!(rel(hafnian_recursive(&sum).unwrap(), expect) < 1e-10);
            assert!(rel(hafnian_naive(&sum).unwrap(), expect) < 1e-10);
        }
    }
}
