use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "run.json";

/// Writes `run.json` into `dir`: tool version, command and the fully
/// resolved settings.
pub fn write_manifest(dir: &Path, command: &str, settings: Value) -> Result<()> {
    let manifest = json!({
        "tool": "qlstma",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "settings": settings,
    });
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
}

pub(crate) fn read_manifest(dir: &Path) -> Option<Value> {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE)).ok()?;
    serde_json::from_str(&text).ok()
}
