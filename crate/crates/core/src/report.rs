//! Tabular experiment reports.
//!
//! A report is a config echo, named numeric columns, and a summary of derived
//! scalars and pass flags. Serialization is deterministic: floats are written
//! with 17 significant digits, maps are ordered, and files are written
//! atomically (temp file + rename), so identical runs produce identical bytes.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Result, TOOL_VERSION};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportHeader {
    pub tool_version: String,
    pub seed: Option<u64>,
    /// Echo of the configuration that produced the report, as key/value pairs.
    pub config: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentReport {
    pub header: ReportHeader,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
}

impl ExperimentReport {
    pub fn new(config: &[(&str, String)], seed: Option<u64>, columns: &[&str]) -> Self {
        Self {
            header: ReportHeader {
                tool_version: TOOL_VERSION.to_string(),
                seed,
                config: config
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect(),
            },
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            flags: BTreeMap::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn set_summary(&mut self, key: &str, value: f64) {
        self.summary.insert(key.to_string(), value);
    }

    pub fn set_flag(&mut self, key: &str, value: bool) {
        self.flags.insert(key.to_string(), value);
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        self.flags.get(key).copied()
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.get(key).copied()
    }

    /// Column values by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// CSV rendering: `#`-prefixed header echo, then a header row and data.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# tool_version={}\n", self.header.tool_version));
        if let Some(seed) = self.header.seed {
            out.push_str(&format!("# seed={seed}\n"));
        }
        for (k, v) in &self.header.config {
            out.push_str(&format!("# {k}={v}\n"));
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary:{k}={}\n", fmt_f64(*v)));
        }
        for (k, v) in &self.flags {
            out.push_str(&format!("# flag:{k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json().as_bytes())
    }
}

/// Format with 17 significant digits (round-trip exact for f64).
pub fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        // Integral values stay readable in CSV output.
        format!("{v}")
    } else {
        format!("{v:.16e}")
    }
}

/// Write `bytes` to `path` through a temp file in the same directory, then
/// rename. An interrupted run never leaves a partial report behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(dir)
            .map_err(|e| crate::Error::Capacity(format!("creating {}: {e}", dir.display())))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut file = std::fs::File::create(&tmp)
        .map_err(|e| crate::Error::Capacity(format!("creating {}: {e}", tmp.display())))?;
    file.write_all(bytes)
        .and_then(|_| file.sync_all())
        .map_err(|e| crate::Error::Capacity(format!("writing {}: {e}", tmp.display())))?;
    drop(file);
    std::fs::rename(&tmp, path)
        .map_err(|e| crate::Error::Capacity(format!("renaming to {}: {e}", path.display())))?;
    Ok(())
}
