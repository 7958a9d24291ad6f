//! Run records: one JSON line per run, append-only, reproducible modulo
//! `run_id` and `wall_ms`.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: String,
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    pub oracle_calls: u64,
    pub quantum_queries: u64,
    pub qubits: u32,
    pub wall_ms: u64,
    pub seed: u64,
}

impl RunRecord {
    pub fn new(command: &str, seed: u64) -> Self {
        RunRecord {
            run_id: uuid::Uuid::new_v4().to_string(),
            command: command.to_string(),
            params: BTreeMap::new(),
            estimate: f64::NAN,
            reference: None,
            oracle_calls: 0,
            quantum_queries: 0,
            qubits: 0,
            wall_ms: 0,
            seed,
        }
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn emit(&self) {
        println!(
            "{}",
            serde_json::to_string(self).expect("record serialization cannot fail")
        );
    }
}

/// Loads a JSON-lines record file.
pub fn load_records(path: &Path) -> std::io::Result<Vec<RunRecord>> {
    let file = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let record: RunRecord = serde_json::from_str(trimmed).map_err(|e| {
            std::io::Error::new(std::io::ErrorKind::InvalidData, format!("bad record: {e}"))
        })?;
        out.push(record);
    }
    Ok(out)
}

/// Writes an outcome distribution as `outcome_index,probability` CSV.
pub fn dump_distribution(path: &Path, distribution: &[f64]) -> std::io::Result<()> {
    use std::io::Write;
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "outcome_index,probability")?;
    for (i, p) in distribution.iter().enumerate() {
        writeln!(file, "{i},{p}")?;
    }
    Ok(())
}
