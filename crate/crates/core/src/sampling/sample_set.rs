use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Provenance record written as the first JSONL line of a sample file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleHeader {
    pub instance_id: String,
    pub sampler: String,
    pub seed: u64,
    pub k: usize,
}

/// A batch of outcomes with the provenance needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet<L> {
    pub outcomes: Vec<L>,
    pub instance_id: String,
    pub sampler: String,
    pub seed: u64,
    /// Seconds spent sampling. Kept out of the JSONL form so reruns are byte-identical.
    pub wall_time: Option<f64>,
}

impl<L> SampleSet<L> {
    pub fn new(outcomes: Vec<L>, sampler: impl Into<String>, seed: u64) -> Self {
        Self {
            outcomes,
            instance_id: String::new(),
            sampler: sampler.into(),
            seed,
            wall_time: None,
        }
    }

    pub fn with_instance(mut self, id: impl Into<String>) -> Self {
        self.instance_id = id.into();
        self
    }

    pub fn with_wall_time(mut self, secs: f64) -> Self {
        self.wall_time = Some(secs);
        self
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn header(&self) -> SampleHeader {
        SampleHeader {
            instance_id: self.instance_id.clone(),
            sampler: self.sampler.clone(),
            seed: self.seed,
            k: self.outcomes.len(),
        }
    }

    /// Relabels every outcome, keeping provenance.
    pub fn map<M>(&self, f: impl FnMut(&L) -> M) -> SampleSet<M> {
        SampleSet {
            outcomes: self.outcomes.iter().map(f).collect(),
            instance_id: self.instance_id.clone(),
            sampler: self.sampler.clone(),
            seed: self.seed,
            wall_time: self.wall_time,
        }
    }
}

impl<L: Serialize> SampleSet<L> {
    /// Header line followed by one JSON outcome per line.
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<()> {
        let io = |e: std::io::Error| Error::data(format!("writing samples: {e}"));
        let json = |e: serde_json::Error| Error::data(format!("encoding samples: {e}"));
        writeln!(w, "{}", serde_json::to_string(&self.header()).map_err(json)?).map_err(io)?;
        for o in &self.outcomes {
            writeln!(w, "{}", serde_json::to_string(o).map_err(json)?).map_err(io)?;
        }
        Ok(())
    }

    pub fn to_jsonl_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)?;
        Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
    }
}

impl<L: DeserializeOwned> SampleSet<L> {
    pub fn read_jsonl(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::data("sample file is empty"))?
            .map_err(|e| Error::data(format!("reading samples: {e}")))?;
        let header: SampleHeader =
            serde_json::from_str(&first).map_err(|e| Error::data(format!("bad sample header: {e}")))?;
        let mut outcomes = Vec::with_capacity(header.k);
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::data(format!("reading samples: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            outcomes.push(
                serde_json::from_str(&line).map_err(|e| Error::data(format!("bad sample on line {}: {e}", i + 2)))?,
            );
        }
        if outcomes.len() != header.k {
            return Err(Error::data(format!("header promises {} samples, file has {}", header.k, outcomes.len())));
        }
        Ok(Self {
            outcomes,
            instance_id: header.instance_id,
            sampler: header.sampler,
            seed: header.seed,
            wall_time: None,
        })
    }
}
