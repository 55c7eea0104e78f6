use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Result;

/// `x` with 12 significant digits, `%g` style.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// CSV text with a leading `# config_hash=` line and a header row.
#[derive(Clone, Debug)]
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(config_hash: &str, header: &[String]) -> Self {
        let mut text = format!("# config_hash={config_hash}\n");
        text.push_str(&header.join(","));
        text.push('\n');
        Csv {
            text,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns);
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn numeric_row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
        self.row(&cells);
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of a value's JSON encoding.
pub fn config_hash<T: Serialize>(value: &T) -> String {
    sha256_hex(serde_json::to_string(value).expect("config serializes").as_bytes())
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
}

/// Provenance record written next to every run's outputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub master_seed: Option<u64>,
    pub config_hash: String,
    pub config: serde_json::Value,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<OutputEntry>,
}

/// Files produced by one command, held in memory until the run succeeds.
#[derive(Default)]
pub struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn add_json<T: Serialize>(&mut self, name: impl Into<String>, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add(name, bytes);
        Ok(())
    }

    pub fn entries(&self) -> Vec<OutputEntry> {
        self.files
            .iter()
            .map(|(name, bytes)| OutputEntry {
                file: name.clone(),
                sha256: sha256_hex(bytes),
            })
            .collect()
    }

    /// Writes every file through a temporary sibling and a rename.
    pub fn commit(self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut staged = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            staged.push((tmp, dir.join(name)));
        }
        let mut written = Vec::with_capacity(staged.len());
        for (tmp, path) in staged {
            tmp.persist(&path).map_err(|e| e.error)?;
            written.push(path);
        }
        Ok(written)
    }
}
