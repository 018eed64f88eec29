use std::fmt::Display;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

const LOCK_NAME: &str = ".apspectra.lock";

/// Exclusive claim on an output directory, released on drop.
pub struct OutputLock {
    path: PathBuf,
}

impl OutputLock {
    pub fn acquire(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(LOCK_NAME);
        let mut f = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
            .with_context(|| format!("output directory {} is locked by another run", dir.display()))?;
        writeln!(f, "{}", std::process::id())?;
        Ok(OutputLock { path })
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Files of one run, kept in memory until every one of them is ready.
#[derive(Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.files.push((name.to_string(), bytes));
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: Csv) {
        self.files.push((name.to_string(), table.into_bytes()));
    }

    pub fn names(&self) -> Vec<&str> {
        self.files.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Write each file under a temporary name, then rename them all.
    pub fn commit(self, dir: &Path) -> Result<Vec<PathBuf>> {
        let pid = std::process::id();
        let mut staged = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let tmp = dir.join(format!(".{name}.tmp-{pid}"));
            let mut f = File::create(&tmp).with_context(|| format!("writing {}", tmp.display()))?;
            f.write_all(bytes)?;
            f.sync_all()?;
            staged.push((tmp, dir.join(name)));
        }
        let mut done = Vec::with_capacity(staged.len());
        for (tmp, target) in staged {
            fs::rename(&tmp, &target).with_context(|| format!("renaming to {}", target.display()))?;
            done.push(target);
        }
        Ok(done)
    }
}

/// Comma-separated table with a provenance comment and a fixed header.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(provenance: &str, header: &[&str]) -> Self {
        let mut text = format!("# {provenance}\n");
        text.push_str(&header.join(","));
        text.push('\n');
        Csv { text }
    }

    pub fn row(&mut self, cells: &[&dyn Display]) {
        let line: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}
