use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_4, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitFamily, GateKind};
use crate::error::{check_limit, Error, Result};
use crate::{RngStream, C64};

/// Width limit of the brute-force amplitude sums.
pub const BRUTE_FORCE_MAX_QUBITS: usize = 24;

/// Degree-3 polynomial over GF(2):
/// `f(x) = Σ x_i x_j x_k + Σ x_i x_j + Σ x_i` over the stored index sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IqpPolynomialJson")]
pub struct IqpPolynomial {
    n: usize,
    cubic: BTreeSet<[usize; 3]>,
    quadratic: BTreeSet<[usize; 2]>,
    linear: BTreeSet<usize>,
}

#[derive(Deserialize)]
struct IqpPolynomialJson {
    n: usize,
    cubic: Vec<[usize; 3]>,
    quadratic: Vec<[usize; 2]>,
    linear: Vec<usize>,
}

impl TryFrom<IqpPolynomialJson> for IqpPolynomial {
    type Error = Error;

    fn try_from(j: IqpPolynomialJson) -> Result<Self> {
        IqpPolynomial::new(j.n, j.cubic, j.quadratic, j.linear)
    }
}

impl IqpPolynomial {
    /// Each term lists strictly increasing indices below `n`; repeated terms are rejected.
    pub fn new(n: usize, cubic: Vec<[usize; 3]>, quadratic: Vec<[usize; 2]>, linear: Vec<usize>) -> Result<Self> {
        let check = |t: &[usize]| -> Result<()> {
            if t.windows(2).any(|w| w[0] >= w[1]) || t.iter().any(|&i| i >= n) {
                return Err(Error::invalid(format!("bad polynomial term {t:?} for n = {n}")));
            }
            Ok(())
        };
        let mut p = Self {
            n,
            cubic: BTreeSet::new(),
            quadratic: BTreeSet::new(),
            linear: BTreeSet::new(),
        };
        for t in cubic {
            check(&t)?;
            if !p.cubic.insert(t) {
                return Err(Error::invalid(format!("repeated term {t:?}")));
            }
        }
        for t in quadratic {
            check(&t)?;
            if !p.quadratic.insert(t) {
                return Err(Error::invalid(format!("repeated term {t:?}")));
            }
        }
        for t in linear {
            check(&[t])?;
            if !p.linear.insert(t) {
                return Err(Error::invalid(format!("repeated term {t}")));
            }
        }
        Ok(p)
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, vec![], vec![], vec![]).expect("empty polynomial is valid")
    }

    /// Includes every possible term independently with probability ½.
    pub fn random(n: usize, rng: &mut RngStream) -> Self {
        let mut cubic = Vec::new();
        let mut quadratic = Vec::new();
        let mut linear = Vec::new();
        for i in 0..n {
            if rng.coin() {
                linear.push(i);
            }
            for j in i + 1..n {
                if rng.coin() {
                    quadratic.push([i, j]);
                }
                for k in j + 1..n {
                    if rng.coin() {
                        cubic.push([i, j, k]);
                    }
                }
            }
        }
        Self::new(n, cubic, quadratic, linear).expect("generated terms are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cubic(&self) -> impl Iterator<Item = &[usize; 3]> {
        self.cubic.iter()
    }

    pub fn quadratic(&self) -> impl Iterator<Item = &[usize; 2]> {
        self.quadratic.iter()
    }

    pub fn linear(&self) -> impl Iterator<Item = &usize> {
        self.linear.iter()
    }

    /// `f(x)` with bit `i` of `x` holding `x_i`.
    pub fn evaluate(&self, x: u64) -> bool {
        let bit = |i: usize| x >> i & 1 == 1;
        let mut v = false;
        v ^= self.linear.iter().filter(|&&i| bit(i)).count() % 2 == 1;
        v ^= self.quadratic.iter().filter(|t| bit(t[0]) && bit(t[1])).count() % 2 == 1;
        v ^= self.cubic.iter().filter(|t| bit(t[0]) && bit(t[1]) && bit(t[2])).count() % 2 == 1;
        v
    }
}

/// `H⊗ⁿ · D_f · H⊗ⁿ` with `D_f` built from `Z`, `CZ` and `CCZ` gates.
pub fn build_iqp_poly_circuit(f: &IqpPolynomial) -> Result<Circuit> {
    let mut c = Circuit::new(f.n, CircuitFamily::IqpPoly);
    for q in 0..f.n {
        c.add(GateKind::H, &[q])?;
    }
    for &i in &f.linear {
        c.add(GateKind::Z, &[i])?;
    }
    for t in &f.quadratic {
        c.add(GateKind::CZ, t)?;
    }
    for t in &f.cubic {
        c.add(GateKind::CCZ, t)?;
    }
    for q in 0..f.n {
        c.add(GateKind::H, &[q])?;
    }
    Ok(c)
}

/// Normalized gap `2⁻ⁿ Σ_x (−1)^{f(x)}`, the all-zero amplitude of the IQP circuit.
pub fn iqp_gap_amplitude(f: &IqpPolynomial) -> Result<f64> {
    check_limit("gap width", f.n, BRUTE_FORCE_MAX_QUBITS)?;
    let total: i64 = (0..1u64 << f.n)
        .into_par_iter()
        .map(|x| if f.evaluate(x) { -1 } else { 1 })
        .sum();
    Ok(total as f64 / (1u64 << f.n) as f64)
}

/// Symmetric angle table: off-diagonal entries couple pairs, diagonal
/// entries act on single qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IqpWeightsJson")]
pub struct IqpWeights {
    n: usize,
    w: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct IqpWeightsJson {
    n: usize,
    w: Vec<Vec<f64>>,
}

impl TryFrom<IqpWeightsJson> for IqpWeights {
    type Error = Error;

    fn try_from(j: IqpWeightsJson) -> Result<Self> {
        let w = IqpWeights::new(j.w)?;
        if w.n != j.n {
            return Err(Error::invalid("weight table size does not match n"));
        }
        Ok(w)
    }
}

impl IqpWeights {
    pub fn new(w: Vec<Vec<f64>>) -> Result<Self> {
        let n = w.len();
        for (i, row) in w.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid("weight table must be square"));
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::invalid("weights must be finite"));
                }
                if (x - w[j][i]).abs() > 1e-12 {
                    return Err(Error::invalid(format!("weights not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, w })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, w: vec![vec![0.0; n]; n] }
    }

    fn random_with(n: usize, mut draw: impl FnMut() -> f64) -> Self {
        let mut w = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let x = draw();
                w[i][j] = x;
                w[j][i] = x;
            }
        }
        Self { n, w }
    }

    /// Every entry drawn uniformly from `{0, π/4, …, 7π/4}`.
    pub fn random_discrete(n: usize, rng: &mut RngStream) -> Self {
        Self::random_with(n, || rng.index(8) as f64 * FRAC_PI_4)
    }

    /// Every entry drawn uniformly from `[0, 2π)`.
    pub fn random_continuous(n: usize, rng: &mut RngStream) -> Self {
        Self::random_with(n, || rng.uniform() * TAU)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i][j]
    }
}

/// `Π exp(i w_ij X_i X_j) · Π exp(i w_ii X_i)` over nonzero entries.
pub fn build_iqp_weight_circuit(w: &IqpWeights) -> Result<Circuit> {
    let mut c = Circuit::new(w.n, CircuitFamily::IqpWeights);
    for i in 0..w.n {
        for j in i + 1..w.n {
            if w.w[i][j] != 0.0 {
                c.add(GateKind::ExpXX(w.w[i][j]), &[i, j])?;
            }
        }
    }
    for i in 0..w.n {
        if w.w[i][i] != 0.0 {
            c.add(GateKind::ExpX(w.w[i][i]), &[i])?;
        }
    }
    Ok(c)
}

/// `Z_W / 2ⁿ` with `Z_W = Σ_{z∈{±1}ⁿ} exp(i (Σ_{i<j} w_ij z_i z_j + Σ_i w_ii z_i))`.
pub fn ising_partition_amplitude(w: &IqpWeights) -> Result<C64> {
    check_limit("partition function width", w.n, BRUTE_FORCE_MAX_QUBITS)?;
    let n = w.n;
    let total: C64 = (0..1u64 << n)
        .into_par_iter()
        .map(|x| {
            let z = |i: usize| if x >> i & 1 == 1 { -1.0 } else { 1.0 };
            let mut energy = 0.0;
            for i in 0..n {
                let zi = z(i);
                energy += w.w[i][i] * zi;
                for j in i + 1..n {
                    energy += w.w[i][j] * zi * z(j);
                }
            }
            C64::from_polar(1.0, energy)
        })
        .sum();
    Ok(total / (1u64 << n) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{amplitude, output_distribution, BitString};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn polynomial_validation() {
        assert!(IqpPolynomial::new(3, vec![[0, 2, 1]], vec![], vec![]).is_err());
        assert!(IqpPolynomial::new(3, vec![], vec![[0, 3]], vec![]).is_err());
        assert!(IqpPolynomial::new(3, vec![], vec![], vec![1, 1]).is_err());
        let f = IqpPolynomial::new(3, vec![[0, 1, 2]], vec![[0, 1]], vec![2]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"n":3,"cubic":[[0,1,2]],"quadratic":[[0,1]],"linear":[2]}"#);
        assert_eq!(serde_json::from_str::<IqpPolynomial>(&text).unwrap(), f);
    }

    #[test]
    fn empty_polynomial_returns_to_zero() {
        let c = build_iqp_poly_circuit(&IqpPolynomial::zero(4)).unwrap();
        assert!(c.gates().iter().all(|g| *g.kind() == GateKind::H));
        let d = output_distribution(&c).unwrap();
        assert!((d.probs()[0] - 1.0).abs() < 1e-12);
        assert_eq!(iqp_gap_amplitude(&IqpPolynomial::zero(4)).unwrap(), 1.0);
    }

    #[test]
    fn balanced_and_quadratic_gaps() {
        let f = IqpPolynomial::new(1, vec![], vec![], vec![0]).unwrap();
        assert_eq!(iqp_gap_amplitude(&f).unwrap(), 0.0);
        let amp = amplitude(&build_iqp_poly_circuit(&f).unwrap(), &BitString::zeros(1)).unwrap();
        assert!(amp.norm() < 1e-15);

        let g = IqpPolynomial::new(2, vec![], vec![[0, 1]], vec![]).unwrap();
        assert_eq!(iqp_gap_amplitude(&g).unwrap(), 0.5);
        let amp = amplitude(&build_iqp_poly_circuit(&g).unwrap(), &BitString::zeros(2)).unwrap();
        assert!((amp - 0.5).norm() < 1e-15);
    }

    #[test]
    fn random_polynomial_matches_state_vector() {
        let mut rng = RngStream::new(60, 0);
        for _ in 0..10 {
            let f = IqpPolynomial::random(6, &mut rng);
            let amp = amplitude(&build_iqp_poly_circuit(&f).unwrap(), &BitString::zeros(6)).unwrap();
            assert!((amp - iqp_gap_amplitude(&f).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_weights() {
        let w = IqpWeights::zero(3);
        assert!(build_iqp_weight_circuit(&w).unwrap().gates().is_empty());
        assert!((ising_partition_amplitude(&w).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn single_qubit_weights() {
        let w = IqpWeights::new(vec![vec![FRAC_PI_2]]).unwrap();
        let amp = amplitude(&build_iqp_weight_circuit(&w).unwrap(), &BitString::zeros(1)).unwrap();
        assert!(amp.norm() < 1e-15);
        for theta in [0.3, 1.2, -2.0] {
            let w = IqpWeights::new(vec![vec![theta]]).unwrap();
            assert!((ising_partition_amplitude(&w).unwrap() - theta.cos()).norm() < 1e-15);
        }
    }

    #[test]
    fn weights_validation() {
        assert!(IqpWeights::new(vec![vec![0.0, 1.0], vec![0.5, 0.0]]).is_err());
        assert!(IqpWeights::new(vec![vec![f64::NAN]]).is_err());
        assert!(IqpWeights::new(vec![vec![0.0, 1.0]]).is_err());
        let mut rng = RngStream::from_seed(1);
        let w = IqpWeights::random_discrete(4, &mut rng);
        for i in 0..4 {
            for j in 0..4 {
                let k = w.get(i, j) / FRAC_PI_4;
                assert!((k - k.round()).abs() < 1e-12 && (0.0..8.0).contains(&k));
            }
        }
    }

    #[test]
    fn random_weights_match_state_vector() {
        let mut rng = RngStream::new(61, 0);
        for _ in 0..10 {
            let w = IqpWeights::random_continuous(5, &mut rng);
            let amp = amplitude(&build_iqp_weight_circuit(&w).unwrap(), &BitString::zeros(5)).unwrap();
            assert!((amp - ising_partition_amplitude(&w).unwrap()).norm() < 1e-10);
        }
    }
}
