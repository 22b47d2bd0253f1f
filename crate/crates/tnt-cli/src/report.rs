//! Machine-readable run reports.
//!
//! Reports are deterministic for identical invocations and settings: the
//! only varying field is `wall_time_ms`, kept separate from `results`.

use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct SettingsEcho {
    pub seed: u64,
    pub restarts: u32,
    pub max_iters: u32,
    pub opt_tol: f64,
    pub tol: f64,
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub settings: Option<SettingsEcho>,
    pub results: serde_json::Value,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
}

pub fn digest_file(path: &Path) -> anyhow::Result<InputDigest> {
    let bytes =
        std::fs::read(path).with_context(|| format!("reading input {}", path.display()))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let hex: String = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex,
    })
}

/// Prints the report to stdout or writes it to `out`.
pub fn emit(report: &RunReport, out: Option<&Path>) -> anyhow::Result<()> {
    let text = tnt_core::io::to_json_string(report)?;
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))
                .with_context(|| format!("writing report to {}", path.display()))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}
