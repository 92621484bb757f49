//! Machine-readable reports: key-sorted JSON and the CSV matrix view.

use std::io::Write;
use std::path::Path;

use popswo::{ProbeResult, SwoConfig, SwoId, Witness};
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct SwoEntry {
    pub id: SwoId,
    pub config: SwoConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub swos: Vec<SwoEntry>,
    pub rows: Vec<Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64, swos: Vec<SwoEntry>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            swos,
            rows: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let value = canonical(serde_json::to_value(self).expect("report serializes"));
        let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
        text.push('\n');
        text
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }
}

/// Rebuilds every object with sorted keys, whatever map backend serde_json uses.
pub fn canonical(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut sorted = Map::new();
            for (k, v) in entries {
                sorted.insert(k, canonical(v));
            }
            Value::Object(sorted)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        other => other,
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// SHA-256 of the canonical JSON witness payload, `-` when there is none.
pub fn witness_digest(witness: Option<&Witness>) -> String {
    match witness {
        None => "-".to_string(),
        Some(w) => {
            let json = serde_json::to_string(&canonical(serde_json::to_value(w).expect("witness serializes")))
                .expect("value serializes");
            hex(&Sha256::digest(json.as_bytes()))
        }
    }
}

/// Per-probe seed derived from the master seed and the cell identity.
pub fn probe_seed(master: u64, swo: SwoId, probe: &str) -> u64 {
    let digest = Sha256::digest(format!("{master}/{}/{probe}", swo.name()).as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub swo: SwoId,
    pub probe: String,
    pub seed: u64,
    pub result: ProbeResult,
    pub wall_time_ms: Option<f64>,
}

impl ProbeRow {
    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("swo".into(), Value::from(self.swo.name()));
        map.insert("axiom".into(), Value::from(self.probe.clone()));
        map.insert("probe_seed".into(), Value::from(self.seed));
        map.insert("status".into(), Value::from(self.result.status.to_string()));
        map.insert("samples".into(), Value::from(self.result.samples_run));
        map.insert("certified".into(), Value::from(self.result.certified));
        map.insert("note".into(), Value::from(self.result.note.clone()));
        map.insert("witness".into(), serde_json::to_value(&self.result.witness).expect("witness serializes"));
        map.insert("witness_digest".into(), Value::from(witness_digest(self.result.witness.as_ref())));
        if let Some(ms) = self.wall_time_ms {
            map.insert("wall_time_ms".into(), Value::from(ms));
        }
        Value::Object(map)
    }
}

pub fn write_csv(path: &Path, rows: &[ProbeRow]) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["swo", "axiom", "status", "samples", "witness_digest"])?;
    for r in rows {
        out.write_record([
            r.swo.name().to_string(),
            r.probe.clone(),
            r.result.status.to_string(),
            r.result.samples_run.to_string(),
            witness_digest(r.result.witness.as_ref()),
        ])?;
    }
    let bytes = out.into_inner().map_err(|e| e.into_error())?;
    std::fs::File::create(path)?.write_all(&bytes)
}
