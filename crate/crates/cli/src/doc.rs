//! Schema-versioned JSON documents.
//!
//! A document is `{"schema": "qctree", "schema_version": 1, "kind": ..., "data": ...}`.
//! Bare data (an object without `schema_version`) is also accepted on
//! import and read as the current version.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "qctree";
pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize)]
struct Envelope<T> {
    schema: String,
    schema_version: u32,
    kind: String,
    data: T,
}

#[derive(Deserialize)]
struct Header {
    schema: Option<String>,
    schema_version: Option<serde_json::Value>,
    kind: Option<String>,
}

/// Wraps `data` in the current envelope.
pub fn to_document<T: Serialize>(kind: &str, data: &T) -> String {
    let env = Envelope {
        schema: SCHEMA.to_string(),
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        data,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("serializable document");
    s.push('\n');
    s
}

fn parse_error(source: &str, e: serde_json::Error) -> CliError {
    CliError::Parse {
        file: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Reads a document of the given kind from text.
pub fn from_document<T: DeserializeOwned>(kind: &str, text: &str, source: &str) -> Result<T, CliError> {
    let probe: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_error(source, e))?;
    let enveloped = probe.get("schema_version").is_some();
    if !enveloped {
        return serde_json::from_str(text).map_err(|e| parse_error(source, e));
    }
    let header: Header = serde_json::from_str(text).map_err(|e| parse_error(source, e))?;
    let version = header.schema_version.unwrap();
    if header.schema.as_deref() != Some(SCHEMA) || version.as_u64() != Some(SCHEMA_VERSION as u64) {
        return Err(CliError::Schema(format!(
            "{source}: schema {:?} version {} is not supported (expected schema {SCHEMA:?} version {SCHEMA_VERSION})",
            header.schema.unwrap_or_default(),
            version
        )));
    }
    if header.kind.as_deref() != Some(kind) {
        return Err(CliError::Schema(format!(
            "{source}: document kind {:?} where {kind:?} was expected",
            header.kind.unwrap_or_default()
        )));
    }
    let env: Envelope<T> = serde_json::from_str(text).map_err(|e| parse_error(source, e))?;
    Ok(env.data)
}

pub fn read_document<T: DeserializeOwned>(kind: &str, path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    from_document(kind, &text, &path.display().to_string())
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
