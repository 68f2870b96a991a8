use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use genpers::interleave::Distance;
use genpers::{Error, Ext};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BOUNDS: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Violation,
    BoundsOnly,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Violation => EXIT_VIOLATION,
            Status::BoundsOnly => EXIT_BOUNDS,
        }
    }

    /// The worse of two outcomes; violations dominate.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Violation, _) | (_, Status::Violation) => Status::Violation,
            (Status::BoundsOnly, _) | (_, Status::BoundsOnly) => Status::BoundsOnly,
            _ => Status::Ok,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub outputs: BTreeMap<String, Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> RunReport {
        RunReport { command, inputs: vec![], outputs: BTreeMap::new(), status: Status::Ok, timing_ms: None }
    }

    pub fn input(&mut self, path: &Path) -> Result<(), Error> {
        let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let hash = Sha256::digest(&bytes);
        let sha256 = hash.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256 });
        Ok(())
    }

    pub fn put(&mut self, key: &str, value: Value) {
        self.outputs.insert(key.to_string(), value);
    }

    pub fn distance(&mut self, key: &str, d: &Distance) {
        if matches!(d, Distance::Bounds { .. }) {
            self.status = self.status.and(Status::BoundsOnly);
        }
        self.put(key, distance_json(d));
    }

    pub fn violation(&mut self, message: String) {
        self.status = Status::Violation;
        match self.outputs.entry("violations".into()).or_insert_with(|| json!([])) {
            Value::Array(v) => v.push(Value::String(message)),
            _ => unreachable!("violations is a list"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

pub fn ext_json(e: Ext) -> Value {
    Value::String(e.to_string())
}

pub fn distance_json(d: &Distance) -> Value {
    match d {
        Distance::Exact(v) => json!({ "exact": v.to_string() }),
        Distance::Bounds { lower, upper } => json!({ "lower": lower.to_string(), "upper": upper.to_string() }),
    }
}
