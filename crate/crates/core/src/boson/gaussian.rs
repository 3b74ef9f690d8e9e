use serde::{Deserialize, Serialize};

use super::{fock_space, FockOutcome};
use crate::error::{check_limit, Error, Result};
use crate::linalg::{lu_determinant, lu_inverse, select, ComplexMatrix, UnitaryMatrix};
use crate::poly::{hafnian_naive, hafnian_recursive};
use crate::C64;

/// Photon-number limit of the Gaussian probability routes.
pub const GBS_MAX_PHOTONS: usize = 8;

/// Per-mode squeezing parameters `r_i ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SqueezingJson")]
pub struct SqueezingSpec {
    r: Vec<f64>,
}

#[derive(Deserialize)]
struct SqueezingJson {
    r: Vec<f64>,
}

impl TryFrom<SqueezingJson> for SqueezingSpec {
    type Error = Error;

    fn try_from(j: SqueezingJson) -> Result<Self> {
        SqueezingSpec::new(j.r)
    }
}

impl SqueezingSpec {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if let Some(x) = r.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::invalid(format!("squeezing must be finite and non-negative, got {x}")));
        }
        Ok(Self { r })
    }

    pub fn uniform(m: usize, r: f64) -> Result<Self> {
        Self::new(vec![r; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.r
    }

    pub fn modes(&self) -> usize {
        self.r.len()
    }
}

/// Gaussian state described by its `2m × 2m` covariance in `(a, a†)` ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct GaussianState {
    sigma: ComplexMatrix,
    sigma_q: ComplexMatrix,
    m_matrix: ComplexMatrix,
    det_sigma_q: f64,
}

impl From<GaussianState> for ComplexMatrix {
    fn from(s: GaussianState) -> Self {
        s.sigma
    }
}

impl TryFrom<ComplexMatrix> for GaussianState {
    type Error = Error;

    fn try_from(sigma: ComplexMatrix) -> Result<Self> {
        GaussianState::new(sigma)
    }
}

impl GaussianState {
    /// Derives `σ_Q = σ + I/2` and `M = X (I − σ_Q⁻¹)` with `X = [[0, I], [I, 0]]`.
    pub fn new(sigma: ComplexMatrix) -> Result<Self> {
        if !sigma.is_square() || sigma.rows() % 2 == 1 {
            return Err(Error::invalid("covariance must be square with even dimension"));
        }
        let herm = sigma.max_abs_diff(&sigma.adjoint());
        if herm > 1e-10 {
            return Err(Error::invalid(format!("covariance is not Hermitian (defect {herm:e})")));
        }
        let dim = sigma.rows();
        let half = dim / 2;
        let sigma_q = sigma.add(&ComplexMatrix::identity(dim).scale(C64::new(0.5, 0.0)));
        let inv = lu_inverse(&sigma_q).map_err(|_| Error::invalid("sigma_Q is singular"))?;
        let diff = ComplexMatrix::identity(dim).sub(&inv);
        let m_matrix = ComplexMatrix::from_fn(dim, dim, |i, j| diff[((i + half) % dim, j)]);
        let det = lu_determinant(&sigma_q)?;
        if !(det.re > 0.0) || det.im.abs() > 1e-8 * det.re {
            return Err(Error::invalid(format!("det(sigma_Q) = {det} is not positive")));
        }
        Ok(Self {
            sigma,
            sigma_q,
            m_matrix,
            det_sigma_q: det.re,
        })
    }

    pub fn modes(&self) -> usize {
        self.sigma.rows() / 2
    }

    pub fn sigma(&self) -> &ComplexMatrix {
        &self.sigma
    }

    pub fn sigma_q(&self) -> &ComplexMatrix {
        &self.sigma_q
    }

    pub fn m_matrix(&self) -> &ComplexMatrix {
        &self.m_matrix
    }

    pub fn det_sigma_q(&self) -> f64 {
        self.det_sigma_q
    }
}

/// Squeezed vacua `r` sent through `U`:
/// `σ = ½ B Σ Σ† B†` with `B = U ⊕ U*` and `Σ = [[⊕cosh r, ⊕sinh r], [⊕sinh r, ⊕cosh r]]`.
pub fn gbs_state_from_smss(u: &UnitaryMatrix, r: &SqueezingSpec) -> Result<GaussianState> {
    let m = u.dim();
    if r.modes() != m {
        return Err(Error::invalid(format!("{} squeezers for {m} modes", r.modes())));
    }
    let b = u.matrix().direct_sum(&u.matrix().conj());
    let big = ComplexMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let (ri, rj) = (i % m, j % m);
        if ri != rj {
            C64::new(0.0, 0.0)
        } else if (i < m) == (j < m) {
            C64::new(r.r[ri].cosh(), 0.0)
        } else {
            C64::new(r.r[ri].sinh(), 0.0)
        }
    });
    let inner = big.matmul(&big.adjoint());
    let sigma = b.matmul(&inner).matmul(&b.adjoint()).scale(C64::new(0.5, 0.0));
    GaussianState::new(sigma)
}

fn check_photons(s: &FockOutcome, m: usize) -> Result<usize> {
    if s.modes() != m {
        return Err(Error::invalid(format!("outcome has {} modes, state {m}", s.modes())));
    }
    let n = s.total();
    check_limit("photon number", n, GBS_MAX_PHOTONS)?;
    Ok(n)
}

/// `|Haf(A_S)|² / (Π s_j! · Π cosh r_i)` with `A = U diag(tanh r) Uᵀ`.
pub fn gbs_probability_hafnian_a(u: &UnitaryMatrix, r: &SqueezingSpec, s: &FockOutcome) -> Result<f64> {
    let m = u.dim();
    if r.modes() != m {
        return Err(Error::invalid(format!("{} squeezers for {m} modes", r.modes())));
    }
    let n = check_photons(s, m)?;
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let um = u.matrix();
    let a = ComplexMatrix::from_fn(m, m, |i, j| {
        (0..m).map(|k| um[(i, k)] * r.r[k].tanh() * um[(j, k)]).sum()
    });
    let idx = s.modes_with_multiplicity();
    let sub = select(&a, &idx, &idx);
    let cosh: f64 = r.r.iter().map(|x| x.cosh()).product();
    Ok(hafnian_naive(&sub)?.norm_sqr() / (s.factorial_product() * cosh))
}

/// `det(σ_Q)^{−1/2} Haf(M_S) / Π s_j!`, where `M_S` keeps `s_j` copies of
/// rows and columns `j` and `m + j`.
pub fn gbs_probability_hafnian_m(state: &GaussianState, s: &FockOutcome) -> Result<f64> {
    let m = state.modes();
    let n = check_photons(s, m)?;
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let low = s.modes_with_multiplicity();
    let idx: Vec<usize> = low.iter().copied().chain(low.iter().map(|j| j + m)).collect();
    let sub = select(&state.m_matrix, &idx, &idx);
    let haf = hafnian_recursive(&sub)?;
    Ok(haf.re / (state.det_sigma_q.sqrt() * s.factorial_product()))
}

/// Probabilities of every outcome with at most `cutoff` photons, via the M route.
pub fn gbs_truncated_table(state: &GaussianState, cutoff: usize) -> Result<Vec<(FockOutcome, f64)>> {
    check_limit("photon cutoff", cutoff, GBS_MAX_PHOTONS)?;
    let mut out = Vec::new();
    for n in 0..=cutoff {
        for s in fock_space(state.modes(), n, false) {
            let p = gbs_probability_hafnian_m(state, &s)?;
            out.push((s, p));
        }
    }
    Ok(out)
}
