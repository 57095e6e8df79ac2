//! Deterministic CSV/JSON emission: fixed number formatting, content hashes
//! and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

/// Format a number with 12 significant digits, lowercase scientific outside
/// `[1e-4, 1e6)`. Pure function of the value, so identical runs produce
/// byte-identical files.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let ax = x.abs();
    if (1e-4..1e6).contains(&ax) {
        let exponent = ax.log10().floor() as i32;
        let precision = (11 - exponent).max(0) as usize;
        format!("{x:.precision$}")
    } else {
        format!("{x:.11e}")
    }
}

/// Accumulates output files, hashing them as they are written.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileDigest>,
    started: Instant,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)
            .with_context(|| format!("cannot create output directory {}", root.display()))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
            started: Instant::now(),
        })
    }

    /// Write a file and record its digest.
    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(contents);
        self.files.push(FileDigest {
            name: name.to_string(),
            sha256: format!("{:x}", hasher.finalize()),
            bytes: contents.len() as u64,
        });
        Ok(())
    }

    /// Write a CSV file from a header and formatted rows.
    pub fn write_csv(&mut self, name: &str, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
        let mut buf = Vec::new();
        writeln!(buf, "{}", header.join(","))?;
        for row in rows {
            let line: Vec<String> = row.iter().map(|&x| format_sig(x)).collect();
            writeln!(buf, "{}", line.join(","))?;
        }
        self.write(name, &buf)
    }

    /// Finish the run: write `manifest.json` and return the manifest.
    pub fn finish(
        mut self,
        command: &str,
        config: &RunConfig,
        truncation: Option<TruncationInfo>,
        thermal_tail_bound: Option<f64>,
    ) -> Result<RunManifest> {
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: config.clone(),
            truncation,
            thermal_tail_bound,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            files: self.files.clone(),
        };
        let json = serde_json::to_string_pretty(&manifest)?;
        let path = self.root.join("manifest.json");
        fs::write(&path, json.as_bytes())
            .with_context(|| format!("cannot write {}", path.display()))?;
        self.files.clear();
        Ok(manifest)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TruncationInfo {
    pub k_modes: usize,
    pub normal_modes: usize,
}

/// Full record of one run: resolved config, truncation actually used, tail
/// bound achieved, tool version, wall-clock duration and the content hashes
/// of every emitted file. Timestamps live only here, never in data files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config: RunConfig,
    pub truncation: Option<TruncationInfo>,
    pub thermal_tail_bound: Option<f64>,
    pub wall_clock_seconds: f64,
    pub files: Vec<FileDigest>,
}
