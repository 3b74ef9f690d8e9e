use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Point estimate of one benchmark with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub metric: String,
    pub estimate: f64,
    pub stderr: f64,
    pub k: usize,
    #[serde(default)]
    pub aux: BTreeMap<String, Value>,
}

impl VerificationReport {
    pub fn new(metric: impl Into<String>, estimate: f64, stderr: f64, k: usize) -> Self {
        Self {
            metric: metric.into(),
            estimate,
            stderr: stderr.max(0.0),
            k,
            aux: BTreeMap::new(),
        }
    }

    pub fn with_aux(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.aux.insert(key.to_string(), value.into());
        self
    }

    pub fn aux_f64(&self, key: &str) -> Option<f64> {
        self.aux.get(key).and_then(Value::as_f64)
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len();
    if k == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (mean, (var / k as f64).sqrt())
}

/// Fixed-width text table of reports.
pub fn render_table(reports: &[VerificationReport]) -> String {
    let width = reports.iter().map(|r| r.metric.len()).max().unwrap_or(6).max(6);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:>14}  {:>12}  {:>9}", "metric", "estimate", "stderr", "k");
    for r in reports {
        let _ = writeln!(out, "{:<width$}  {:>14.6}  {:>12.3e}  {:>9}", r.metric, r.estimate, r.stderr, r.k);
    }
    out
}
