//! CSV and JSON artifact writers.
//!
//! Every file starts with the resolved configuration: CSV files as `# `
//! comment lines ahead of the header row, JSON files under a `config` key.
//! Floats are written in Rust's shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::Result;

/// Version string recorded in run metadata.
pub const VERSION: &str = env!("CONTACT_LAB_VERSION");

/// Column-oriented CSV table.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self, config: &Config) -> String {
        let mut out = String::new();
        for line in config.to_toml().lines() {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (k, x) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{x}");
            }
            out.push('\n');
        }
        out
    }
}

/// Output directory with the configuration every artifact embeds.
pub struct Artifacts<'a> {
    dir: PathBuf,
    config: &'a Config,
    written: Vec<PathBuf>,
}

impl<'a> Artifacts<'a> {
    pub fn create(dir: &Path, config: &'a Config) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            config,
            written: Vec::new(),
        })
    }

    pub fn csv(&mut self, name: &str, table: &Table) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, table.render(self.config))?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Writes `{"config": ..., "version": ..., <body fields>}`.
    pub fn json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<PathBuf> {
        let mut doc = json!({
            "config": self.config,
            "version": VERSION,
        });
        match serde_json::to_value(body)? {
            Value::Object(map) => {
                doc.as_object_mut().expect("object").extend(map);
            }
            other => {
                doc["data"] = other;
            }
        }
        let path = self.dir.join(name);
        fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

/// Strips the `# ` configuration preamble from rendered CSV text.
pub fn csv_body(text: &str) -> impl Iterator<Item = &str> {
    text.lines().filter(|l| !l.starts_with('#'))
}
