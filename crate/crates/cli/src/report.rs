use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Machine-readable result of one command. Fields are declared in
/// alphabetical order and `results` is a sorted map, so the JSON is
/// stable-ordered.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub diagnostics: Vec<String>,
    /// SHA-256 over the input files, in the order given.
    pub input_digest: String,
    pub results: BTreeMap<String, Value>,
    pub wall_time_s: f64,
}

pub struct Recorder {
    command: String,
    hasher: Sha256,
    started: Instant,
    pub results: BTreeMap<String, Value>,
    pub diagnostics: Vec<String>,
    /// Lines for the human-readable output.
    pub lines: Vec<String>,
}

impl Recorder {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            hasher: Sha256::new(),
            started: Instant::now(),
            results: BTreeMap::new(),
            diagnostics: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn input(&mut self, bytes: &[u8]) {
        self.hasher.update(bytes);
    }

    pub fn real(&mut self, key: &str, value: f64) {
        self.results.insert(key.to_string(), Value::from(value));
    }

    pub fn flag(&mut self, key: &str, value: bool) {
        self.results.insert(key.to_string(), Value::from(value));
    }

    pub fn value(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.to_string(), serde_json::to_value(value).expect("plain data serializes"));
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.diagnostics.push(s.into());
    }

    pub fn finish(self) -> (RunReport, Vec<String>) {
        let digest = self.hasher.finalize();
        let report = RunReport {
            command: self.command,
            diagnostics: self.diagnostics,
            input_digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
            results: self.results,
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        (report, self.lines)
    }
}
