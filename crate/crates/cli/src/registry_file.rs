//! Binding registry as newline-delimited JSON, one record per line.
//!
//! ```text
//! {"group":"production","pk_p":"02…","pk_d":"03…","t":1700000000,"zeta":"c59e…"}
//! ```
//!
//! Loading recomputes every `zeta`; a single altered byte in any field makes
//! the load fail with the offending line number.

use std::fs;
use std::io::Write;
use std::path::Path;

use przk_bind_core::hash::Digest;
use przk_bind_core::registration::{BindingRecord, Registry};
use przk_bind_core::{GroupId, PrimeGroup};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::keyfile::decode_element;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordLine {
    pub group: GroupId,
    pub pk_p: String,
    pub pk_d: String,
    pub t: u64,
    pub zeta: String,
}

impl RecordLine {
    pub fn from_record<G: PrimeGroup>(rec: &BindingRecord<G>) -> Self {
        RecordLine {
            group: G::ID,
            pk_p: hex::encode(G::encode_element(&rec.pk_p)),
            pk_d: hex::encode(G::encode_element(&rec.pk_d)),
            t: rec.t,
            zeta: hex::encode(rec.zeta.as_bytes()),
        }
    }

    /// Decodes the fields and checks `zeta` against them.
    pub fn to_record<G: PrimeGroup>(&self) -> Result<BindingRecord<G>, String> {
        if self.group != G::ID {
            return Err(format!("group {}, expected {}", self.group, G::ID));
        }
        let zeta_bytes = hex::decode(&self.zeta).map_err(|e| format!("zeta: {e}"))?;
        let zeta = Digest::from_slice(&zeta_bytes).ok_or("zeta: must be 32 bytes")?;
        let rec = BindingRecord {
            pk_p: decode_element::<G>("pk_p", &self.pk_p)?,
            pk_d: decode_element::<G>("pk_d", &self.pk_d)?,
            t: self.t,
            zeta,
        };
        if !rec.verify() {
            return Err("zeta does not match (pk_p, pk_d, t)".into());
        }
        Ok(rec)
    }
}

/// Group of the first record, or `None` for a missing or empty file.
pub fn peek_group(path: &Path) -> Result<Option<GroupId>, CliError> {
    let Some(text) = read_optional(path)? else {
        return Ok(None);
    };
    match text.lines().find(|l| !l.trim().is_empty()) {
        None => Ok(None),
        Some(line) => serde_json::from_str::<RecordLine>(line)
            .map(|r| Some(r.group))
            .map_err(|e| CliError::integrity(format!("{} line 1: {e}", path.display()))),
    }
}

fn read_optional(path: &Path) -> Result<Option<String>, CliError> {
    match fs::read_to_string(path) {
        Ok(t) => Ok(Some(t)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(CliError::io(path, e)),
    }
}

/// Loads and verifies every record. A missing file is an empty registry.
pub fn load<G: PrimeGroup>(path: &Path) -> Result<Registry<G>, CliError> {
    let mut registry = Registry::new();
    let Some(text) = read_optional(path)? else {
        return Ok(registry);
    };
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = |msg: &dyn std::fmt::Display| {
            CliError::integrity(format!("{} line {}: {msg}", path.display(), i + 1))
        };
        let parsed: RecordLine = serde_json::from_str(line).map_err(|e| at(&e))?;
        let rec = parsed.to_record::<G>().map_err(|e| at(&e))?;
        registry.insert(rec).map_err(|e| at(&e))?;
    }
    Ok(registry)
}

/// Appends one record after checking the existing file and rejecting duplicates.
pub fn append<G: PrimeGroup>(path: &Path, rec: &BindingRecord<G>) -> Result<(), CliError> {
    let mut registry = load::<G>(path)?;
    registry.insert(*rec).map_err(CliError::runtime)?;
    let mut line = serde_json::to_string(&RecordLine::from_record(rec))
        .expect("record lines always serialize");
    line.push('\n');
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    f.write_all(line.as_bytes())
        .map_err(|e| CliError::io(path, e))
}
