//! Brute-force fixtures. Each one is rebuilt from scratch by enumeration or
//! closed forms and stored next to the SHA-256 of its canonical JSON, so two
//! regenerations can be compared by hash alone.

use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};

use qrslab::boson::{bs_distribution, FockOutcome};
use qrslab::linalg::{ginibre_matrix, haar_state, haar_unitary, ComplexMatrix, UnitaryMatrix};
use qrslab::poly::permanent_naive;
use qrslab::qubit::CouplerSet;
use qrslab::sampling::{clipped_tvd, frugal_tvd_formula};
use qrslab::{RngStream, C64};
use serde_json::{json, Value};

use crate::config::{canonical_json, sha256_hex};
use crate::error::{CliError, CliResult};

type Builder = fn(u64) -> CliResult<Value>;

pub const FIXTURES: &[(&str, &str, Builder)] = &[
    ("permanents", "naive permanents of Ginibre matrices, n = 1..8", permanents),
    ("permanent_moments", "E|Perm X|² = n! for Ginibre X, n = 1..8", permanent_moments),
    ("hom", "two photons on a balanced beam splitter", hom),
    ("bs_table", "full Fock table for a Haar interferometer, m = 6, n = 3", bs_table),
    ("tmss", "two-mode squeezed vacuum P(n, n) = tanh²ⁿ r / cosh² r", tmss),
    ("clipped_tvd", "clipped-law TVD of Haar-state tables at n = 12", clipped_tvd_fixture),
    ("haar_moments", "ideal linear XEB and scaled second moment of Haar states", haar_moments),
    ("porter_thomas", "exponential-law constants for HOG, spoofing and entropy", porter_thomas),
    ("gate_counts", "gate counts of grid circuits from the coupler cycle", gate_counts),
    ("depolarized_cluster", "witness and fidelity of globally depolarized cluster states", depolarized_cluster),
];

pub fn list() -> Value {
    FIXTURES
        .iter()
        .map(|(name, about, _)| json!({"name": name, "description": about}))
        .collect()
}

/// Builds fixture `name` and writes `out/oracle/<name>.json`.
pub fn cmd_oracle(name: &str, seed: u64, out: &Path) -> CliResult<(PathBuf, String)> {
    let (_, _, build) = FIXTURES
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| CliError::Usage(format!("unknown fixture {name:?}")))?;
    let data = build(seed)?;
    let hash = sha256_hex(canonical_json(&data).as_bytes());
    let dir = out.join("oracle");
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let path = dir.join(format!("{name}.json"));
    let doc = json!({"fixture": name, "seed": seed, "sha256": hash, "data": data});
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::io(&path, e))?;
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok((path, hash))
}

fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn permanents(seed: u64) -> CliResult<Value> {
    let root = RngStream::from_seed(seed);
    let mut rows = Vec::new();
    for n in 1..=8usize {
        let mut rng = root.split(n as u64);
        for _ in 0..3 {
            let a = ginibre_matrix(n, n, 1.0, &mut rng)?;
            rows.push(json!({"n": n, "matrix": a, "permanent": complex(permanent_naive(&a)?)}));
        }
    }
    Ok(Value::Array(rows))
}

fn permanent_moments(_: u64) -> CliResult<Value> {
    let mut fact = 1.0;
    Ok((1..=8u32)
        .map(|n| {
            fact *= f64::from(n);
            json!({"n": n, "mean_abs_sq": fact})
        })
        .collect())
}

fn table_json(u: &UnitaryMatrix, n: usize) -> CliResult<Value> {
    let dist = bs_distribution(u, n)?;
    Ok(dist.iter().map(|(s, p)| json!({"outcome": s, "p": p})).collect())
}

fn hom(_: u64) -> CliResult<Value> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let u = UnitaryMatrix::new(ComplexMatrix::from_real(&[vec![h, h], vec![h, -h]])?)?;
    table_json(&u, 2)
}

fn bs_table(seed: u64) -> CliResult<Value> {
    let u = haar_unitary(6, &mut RngStream::from_seed(seed))?;
    Ok(json!({"unitary": u, "photons": 3, "table": table_json(&u, 3)?}))
}

fn tmss(_: u64) -> CliResult<Value> {
    let mut rows = Vec::new();
    for r in [0.25f64, 0.5, 1.0] {
        for n in 0..=4 {
            let p = r.tanh().powi(2 * n) / r.cosh().powi(2);
            rows.push(json!({"r": r, "outcome": FockOutcome::new(vec![n as usize, n as usize]), "p": p}));
        }
    }
    Ok(Value::Array(rows))
}

fn clipped_tvd_fixture(seed: u64) -> CliResult<Value> {
    let root = RngStream::from_seed(seed);
    let mut rows = Vec::new();
    for state in 0..3u64 {
        let psi = haar_state(1 << 12, &mut root.split(state))?;
        let probs: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
        for c in [1.0, 2.0, 5.0, 10.0] {
            rows.push(json!({
                "state": state,
                "c": c,
                "tvd": clipped_tvd(&probs, c),
                "l1_formula": frugal_tvd_formula(c),
            }));
        }
    }
    Ok(Value::Array(rows))
}

fn haar_moments(_: u64) -> CliResult<Value> {
    Ok((1..=12)
        .map(|n| {
            let d = 2f64.powi(n);
            json!({"n": n, "xeb_ideal": (d - 1.0) / (d + 1.0), "scaled_second_moment": 2.0 * d / (d + 1.0)})
        })
        .collect())
}

fn porter_thomas(_: u64) -> CliResult<Value> {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let per_n: Vec<Value> = [10u32, 12]
        .iter()
        .map(|&n| {
            let d = 2f64.powi(n as i32);
            json!({"n": n, "median": LN_2 / d, "entropy_nats": d.ln() - 1.0 + EULER_GAMMA})
        })
        .collect();
    Ok(json!({
        "heavy_fraction": (1.0 + LN_2) / 2.0,
        "spoof_hog": 1.0 / LN_2,
        "spoof_tvd": (1.0 - LN_2) / 2.0,
        "fraction_at_half": (-0.5f64).exp(),
        "paley_zygmund_half": 0.125,
        "uniform_cross_entropy_difference": 1.0,
        "tables": per_n,
    }))
}

fn coupler_count(set: CouplerSet, rows: usize, cols: usize) -> usize {
    match set {
        CouplerSet::RightEvenCols => rows * (cols / 2),
        CouplerSet::RightOddCols => rows * (cols.saturating_sub(1) / 2),
        CouplerSet::DownEvenRows => cols * (rows / 2),
        CouplerSet::DownOddRows => cols * (rows.saturating_sub(1) / 2),
    }
}

fn gate_counts(_: u64) -> CliResult<Value> {
    let mut rows = Vec::new();
    for (r, c) in [(2usize, 2usize), (2, 3), (3, 3), (3, 4)] {
        for depth in [1usize, 4, 8] {
            let pattern = CouplerSet::DEFAULT_PATTERN;
            let two: usize = (0..depth).map(|t| coupler_count(pattern[t % pattern.len()], r, c)).sum();
            rows.push(json!({"rows": r, "cols": c, "depth": depth, "single_qubit": r * c * depth, "two_qubit": two}));
        }
    }
    Ok(Value::Array(rows))
}

fn depolarized_cluster(_: u64) -> CliResult<Value> {
    let mut rows = Vec::new();
    for n in [4i32, 8] {
        for eps in [0.05, 0.1] {
            rows.push(json!({
                "n": n,
                "eps": eps,
                "witness": 1.0 - f64::from(n) * eps / 2.0,
                "fidelity": (1.0 - eps) + eps / 2f64.powi(n),
            }));
        }
    }
    Ok(Value::Array(rows))
}
