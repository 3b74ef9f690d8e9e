use rand_distr::{Distribution, StandardNormal};

use super::{householder_qr, ComplexMatrix, UnitaryMatrix};
use crate::error::{Error, Result};
use crate::{RngStream, C64};

fn complex_normal(rng: &mut RngStream, scale: f64) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * scale, im * scale)
}

/// `n × m` matrix of i.i.d. circular complex normals with `E|z|² = sigma²`
/// (real and imaginary parts each have variance `sigma²/2`).
pub fn ginibre_matrix(n: usize, m: usize, sigma: f64, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    let scale = sigma * std::f64::consts::FRAC_1_SQRT_2;
    Ok(ComplexMatrix::from_fn(n, m, |_, _| complex_normal(rng, scale)))
}

/// Haar-random unitary of dimension `d`: QR of a Ginibre matrix with each
/// column of `Q` multiplied by the phase of the matching diagonal entry of `R`.
pub fn haar_unitary(d: usize, rng: &mut RngStream) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(Error::invalid("Haar unitary needs d >= 1"));
    }
    let g = ginibre_matrix(d, d, 1.0, rng)?;
    let (q, r) = householder_qr(&g)?;
    let mut u = q;
    for k in 0..d {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 { rkk / rkk.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            u[(i, k)] *= phase;
        }
    }
    UnitaryMatrix::new(u)
}

/// Haar-random pure state in dimension `d` (a normalised complex Gaussian
/// vector, equal in law to a column of a Haar unitary).
pub fn haar_state(d: usize, rng: &mut RngStream) -> Result<Vec<C64>> {
    if d == 0 {
        return Err(Error::invalid("Haar state needs d >= 1"));
    }
    let mut v: Vec<C64> = (0..d).map(|_| complex_normal(rng, 1.0)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    Ok(v)
}
