//! Output cache keyed by the config hash, and the per-directory manifest.
//!
//! An entry is a directory `<root>/<hash>/` holding the output files and
//! `record.json`. A hit copies the stored bytes, so reruns are bit-identical.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "IRLAB_CACHE_DIR";
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandRecord {
    pub config_hash: String,
    pub files: Vec<String>,
    pub wall_clock_seconds: f64,
    pub exit_code: i32,
    pub rows: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultManifest {
    pub versions: BTreeMap<String, String>,
    pub commands: BTreeMap<String, CommandRecord>,
}

pub fn cache_root(out_dir: &Path) -> PathBuf {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => out_dir.join(".irlab-cache"),
    }
}

pub struct Cache {
    entry: PathBuf,
}

impl Cache {
    pub fn new(root: PathBuf, key: String) -> Self {
        Self { entry: root.join(key) }
    }

    /// Copies a stored entry into `out_dir`; `None` when there is none.
    pub fn restore(&self, out_dir: &Path, command: &str) -> io::Result<Option<CommandRecord>> {
        let record_path = self.entry.join("record.json");
        let Ok(text) = fs::read_to_string(&record_path) else {
            return Ok(None);
        };
        let Ok(record) = serde_json::from_str::<CommandRecord>(&text) else {
            return Ok(None);
        };
        if record.files.iter().any(|f| !self.entry.join(f).is_file()) {
            return Ok(None);
        }
        fs::create_dir_all(out_dir)?;
        for f in &record.files {
            fs::copy(self.entry.join(f), out_dir.join(f))?;
        }
        record_in_manifest(out_dir, command, &record)?;
        Ok(Some(record))
    }

    pub fn store(&self, files: &[(String, String)], record: &CommandRecord) -> io::Result<()> {
        fs::create_dir_all(&self.entry)?;
        for (name, contents) in files {
            fs::write(self.entry.join(name), contents)?;
        }
        let json = serde_json::to_string_pretty(record).map_err(io::Error::other)?;
        fs::write(self.entry.join("record.json"), json)
    }
}

pub fn write_outputs(out_dir: &Path, files: &[(String, String)]) -> io::Result<()> {
    fs::create_dir_all(out_dir)?;
    for (name, contents) in files {
        fs::write(out_dir.join(name), contents)?;
    }
    Ok(())
}

pub fn read_manifest(out_dir: &Path) -> Option<ResultManifest> {
    let text = fs::read_to_string(out_dir.join(MANIFEST)).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn record_in_manifest(out_dir: &Path, command: &str, record: &CommandRecord) -> io::Result<()> {
    let mut manifest = read_manifest(out_dir).unwrap_or_default();
    manifest
        .versions
        .insert("irlab".into(), env!("CARGO_PKG_VERSION").into());
    manifest.commands.insert(command.into(), record.clone());
    let json = serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?;
    fs::write(out_dir.join(MANIFEST), json + "\n")
}
