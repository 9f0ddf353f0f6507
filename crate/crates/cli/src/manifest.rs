//! Run manifests: every invocation that writes files also records what
//! produced them. The wall-clock timestamp lives only here, so the data
//! files themselves stay byte-identical across reruns with one seed.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::io;

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(digest.len() * 2);
    for byte in digest {
        hex.push_str(&format!("{:02x}", byte));
    }
    hex
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes =
        std::fs::read(path).with_context(|| format!("digesting {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    /// The invocation as typed, argv joined by spaces.
    pub command: String,
    pub seed: u64,
    /// Effective settings beyond the seed (restarts, case counts, ...).
    pub config: Value,
    /// Input path -> SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    /// Paths written by this run, relative to the invocation.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn from_argv(seed: u64, config: Value) -> Self {
        let command = std::env::args().collect::<Vec<_>>().join(" ");
        RunManifest {
            command,
            seed,
            config,
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs
            .insert(path.display().to_string(), file_digest(path)?);
        Ok(())
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let doc = json!({
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "timestamp": timestamp,
        });
        io::write_json_file(path, &doc)
    }
}
