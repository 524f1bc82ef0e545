//! File loading, run manifests and exit-code mapping.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use pprank_core::{DanglingPolicy, Error as CoreError, Graph};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// CLI-level failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Parse { .. } | CoreError::InvalidInput(_) => EXIT_INPUT,
            CoreError::Convergence { .. } => EXIT_NO_CONVERGENCE,
            CoreError::Internal(_) => EXIT_INTERNAL,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

/// Provenance block attached to every JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub input_digest: String,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, input_digest: String) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            input_digest,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }
}

/// Reads a graph file, returning the parsed graph and its content digest.
pub fn load_graph(path: &Path) -> Result<(Graph, String), CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {}", path.display(), e)))?;
    let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::input(format!("{} is not valid UTF-8", path.display())))?;
    let graph = pprank_core::parse_edge_list(&text)?;
    Ok((graph, digest))
}

/// Reads a vector file: either a JSON array or one decimal per line.
pub fn load_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {}", path.display(), e)))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: bad JSON array: {}", path.display(), e)));
    }
    let mut v = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let x: f64 = line.parse().map_err(|_| {
            CliError::input(format!(
                "{} line {}: bad decimal '{}'",
                path.display(),
                idx + 1,
                line
            ))
        })?;
        v.push(x);
    }
    if v.is_empty() {
        return Err(CliError::input(format!("{} holds no values", path.display())));
    }
    Ok(v)
}

/// Parses `--dangling patch-uniform|reject|patch:<vector file>`.
pub fn parse_dangling_spec(spec: &str) -> Result<DanglingPolicy, CliError> {
    match spec {
        "patch-uniform" => Ok(DanglingPolicy::PatchUniform),
        "reject" => Ok(DanglingPolicy::Reject),
        other => {
            if let Some(path) = other.strip_prefix("patch:") {
                Ok(DanglingPolicy::PatchVector(load_vector(Path::new(path))?))
            } else {
                Err(CliError::input(format!(
                    "unknown dangling policy '{}'; use patch-uniform, reject or patch:<file>",
                    other
                )))
            }
        }
    }
}
