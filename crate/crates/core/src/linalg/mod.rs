//! Dense complex linear algebra, random-matrix ensembles and the submatrix
//! construction shared by the boson-sampling formulas.

mod decomp;
mod matrix;
mod pattern;
mod random;

pub use decomp::{householder_qr, lu_determinant, lu_inverse, spectral_norm};
pub use matrix::{ComplexMatrix, MatrixJson, UnitaryMatrix, UNITARY_TOL};
pub use pattern::{expand_pattern, select, submatrix, OutcomePattern};
pub use random::{ginibre_matrix, haar_state, haar_unitary};
