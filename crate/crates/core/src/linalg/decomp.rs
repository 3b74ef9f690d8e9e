use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// Householder QR of a square matrix: returns `(Q, R)` with `Q` unitary,
/// `R` upper triangular and `Q·R = A`.
pub fn householder_qr(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::invalid("QR expects a square matrix"));
    }
    let n = a.rows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut v = vec![C64::new(0.0, 0.0); n];

    for k in 0..n {
        let norm_x = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        // alpha = -phase·‖x‖ avoids cancellation in v = x - alpha·e1
        let alpha = -phase * norm_x;
        for i in k..n {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let vnorm = (k..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut().take(n).skip(k) {
            *vi /= vnorm;
        }
        // R <- (I - 2vv†) R on rows k..n
        for j in k..n {
            let dot: C64 = (k..n).map(|i| v[i].conj() * r[(i, j)]).sum();
            for i in k..n {
                let upd = v[i] * dot * 2.0;
                r[(i, j)] -= upd;
            }
        }
        // Q <- Q (I - 2vv†) on columns k..n
        for i in 0..n {
            let dot: C64 = (k..n).map(|j| q[(i, j)] * v[j]).sum();
            for j in k..n {
                let upd = dot * v[j].conj() * 2.0;
                q[(i, j)] -= upd;
            }
        }
        for i in (k + 1)..n {
            r[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    Ok((q, r))
}

struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
}

fn lu_decompose(a: &ComplexMatrix) -> Result<Lu> {
    if !a.is_square() {
        return Err(Error::invalid("LU expects a square matrix"));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pmax <= 1e-14 * scale {
            return Err(Error::invalid("matrix is singular"));
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for j in (k + 1)..n {
                let upd = f * lu[(k, j)];
                lu[(i, j)] -= upd;
            }
        }
    }
    Ok(Lu { lu, perm, sign })
}

/// Determinant via partially pivoted LU. Singular input yields an error.
pub fn lu_determinant(a: &ComplexMatrix) -> Result<C64> {
    if a.rows() == 0 && a.is_square() {
        return Ok(C64::new(1.0, 0.0));
    }
    let d = lu_decompose(a)?;
    let n = a.rows();
    Ok((0..n).fold(C64::new(d.sign, 0.0), |acc, i| acc * d.lu[(i, i)]))
}

/// Inverse via partially pivoted LU. Singular input yields an error.
pub fn lu_inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = lu_decompose(a)?;
    let n = a.rows();
    let mut inv = ComplexMatrix::zeros(n, n);
    let mut col = vec![C64::new(0.0, 0.0); n];
    for c in 0..n {
        // solve L U x = P e_c
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = if d.perm[i] == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        }
        for i in 0..n {
            let mut s = col[i];
            for j in 0..i {
                s -= d.lu[(i, j)] * col[j];
            }
            col[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for j in (i + 1)..n {
                s -= d.lu[(i, j)] * col[j];
            }
            col[i] = s / d.lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, c)] = col[i];
        }
    }
    Ok(inv)
}

/// Operator (spectral) norm by power iteration on `A†A`.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let g = a.adjoint().matmul(a);
    let n = g.rows();
    let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0 + 0.01 * i as f64, 0.003 * i as f64)).collect();
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w = g.apply(&v);
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm / v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v = w.into_iter().map(|z| z / norm).collect();
        if (next - lambda).abs() <= 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}
