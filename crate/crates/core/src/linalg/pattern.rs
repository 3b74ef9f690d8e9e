use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Repetition counts per row or column group, e.g. a photon-count pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutcomePattern(pub Vec<usize>);

impl OutcomePattern {
    /// Pattern of `len` ones.
    pub fn ones(len: usize) -> Self {
        OutcomePattern(vec![1; len])
    }

    /// `1` on the first `n` positions, `0` on the rest of `len`.
    pub fn first(n: usize, len: usize) -> Self {
        OutcomePattern((0..len).map(|i| usize::from(i < n)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl From<Vec<usize>> for OutcomePattern {
    fn from(v: Vec<usize>) -> Self {
        OutcomePattern(v)
    }
}

/// Index list with index `j` repeated `counts[j]` times, in order.
pub fn expand_pattern(counts: &[usize]) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(j, &c)| std::iter::repeat_n(j, c))
        .collect()
}

/// Matrix with rows `row_idx` and columns `col_idx` of `a`, repetitions allowed.
pub fn select(a: &ComplexMatrix, row_idx: &[usize], col_idx: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(row_idx.len(), col_idx.len(), |i, j| a[(row_idx[i], col_idx[j])])
}

/// `A_{S,S'}`: row `j` of `a` repeated `row_pattern[j]` times, then column `k`
/// repeated `col_pattern[k]` times, index order preserved.
pub fn submatrix(
    a: &ComplexMatrix,
    row_pattern: &OutcomePattern,
    col_pattern: &OutcomePattern,
) -> Result<ComplexMatrix> {
    if row_pattern.len() != a.rows() || col_pattern.len() != a.cols() {
        return Err(Error::invalid(format!(
            "pattern lengths ({}, {}) do not match matrix shape ({}, {})",
            row_pattern.len(),
            col_pattern.len(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(select(a, &expand_pattern(&row_pattern.0), &expand_pattern(&col_pattern.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ginibre_matrix;
    use crate::{RngStream, C64};
    use proptest::prelude::*;

    #[test]
    fn identity_with_ones() {
        let id = ComplexMatrix::identity(3);
        let s = submatrix(&id, &OutcomePattern::ones(3), &OutcomePattern::ones(3)).unwrap();
        assert_eq!(s, id);
    }

    #[test]
    fn hom_repeated_row() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bs = ComplexMatrix::from_real(&[vec![h, h], vec![h, -h]]).unwrap();
        let s = submatrix(&bs, &vec![2, 0].into(), &vec![1, 1].into()).unwrap();
        assert_eq!((s.rows(), s.cols()), (2, 2));
        assert_eq!(s.row(0), bs.row(0));
        assert_eq!(s.row(1), bs.row(0));
    }

    #[test]
    fn empty_pattern_gives_empty_matrix() {
        let id = ComplexMatrix::identity(2);
        let s = submatrix(&id, &vec![0, 0].into(), &vec![0, 0].into()).unwrap();
        assert_eq!((s.rows(), s.cols()), (0, 0));
    }

    #[test]
    fn length_mismatch() {
        let id = ComplexMatrix::identity(2);
        assert!(submatrix(&id, &vec![1].into(), &vec![1, 1].into()).is_err());
    }

    #[test]
    fn matches_nested_loop_enumeration() {
        let mut rng = RngStream::from_seed(8);
        for _ in 0..20 {
            let a = ginibre_matrix(4, 4, 1.0, &mut rng).unwrap();
            let rp: Vec<usize> = (0..4).map(|_| rng.index(3)).collect();
            let cp: Vec<usize> = (0..4).map(|_| rng.index(3)).collect();
            let s = submatrix(&a, &rp.clone().into(), &cp.clone().into()).unwrap();
            let mut expect: Vec<C64> = Vec::new();
            for (j, &rj) in rp.iter().enumerate() {
                for _ in 0..rj {
                    for (k, &ck) in cp.iter().enumerate() {
                        for _ in 0..ck {
                            expect.push(a[(j, k)]);
                        }
                    }
                }
            }
            assert_eq!(s.data(), &expect[..]);
        }
    }

    proptest! {
        #[test]
        fn dims_equal_pattern_sums(rp in proptest::collection::vec(0usize..4, 3),
                                   cp in proptest::collection::vec(0usize..4, 5)) {
            let a = ComplexMatrix::from_fn(3, 5, |i, j| C64::new(i as f64, j as f64));
            let s = submatrix(&a, &rp.clone().into(), &cp.clone().into()).unwrap();
            prop_assert_eq!(s.rows(), rp.iter().sum::<usize>());
            prop_assert_eq!(s.cols(), cp.iter().sum::<usize>());
        }
    }
}
