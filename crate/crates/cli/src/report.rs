use std::env;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Negative,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::Negative => ExitCode::from(1),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Outcome::Success => "ok",
            Outcome::Negative => "negative",
        }
    }
}

#[derive(Debug, Serialize)]
struct InputHash {
    name: String,
    sha256: String,
}

/// Everything a command prints. No clock readings: identical inputs give
/// byte-identical reports.
#[derive(Debug, Serialize)]
pub struct RunReport {
    command: Vec<String>,
    inputs: Vec<InputHash>,
    pub payload: Value,
    verdict: &'static str,
}

impl RunReport {
    pub fn from_env() -> Self {
        RunReport { command: env::args().skip(1).collect(), inputs: Vec::new(), payload: Value::Null, verdict: "" }
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push(InputHash { name: name.to_string(), sha256: hex::encode(Sha256::digest(bytes)) });
    }

    pub fn emit(mut self, outcome: Outcome, out: Option<&Path>) -> Result<Outcome> {
        self.verdict = outcome.label();
        let mut text = serde_json::to_string_pretty(&self)?;
        text.push('\n');
        write(&text, out)?;
        Ok(outcome)
    }

    /// CSV matrices go out bare, without the JSON envelope.
    pub fn emit_raw(self, text: &str, out: Option<&Path>) -> Result<Outcome> {
        write(text, out)?;
        Ok(Outcome::Success)
    }
}

fn write(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
