//! Plot-ready tabular output: comma-delimited with a `#`-prefixed manifest
//! header block, or a JSON mirror. The manifest carries the fully resolved
//! configuration, the seed, and a checksum of the data section, so re-running
//! with the same manifest reproduces the table byte for byte.

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => anyhow::bail!("format must be csv | json, got {other:?}"),
        }
    }
}

pub struct Table {
    pub subcommand: &'static str,
    pub manifest: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn data_section(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    fn checksum(&self, data: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(data.as_bytes());
        hex_string(&hasher.finalize())
    }

    pub fn render(&self, format: Format) -> String {
        let data = self.data_section();
        let sha = self.checksum(&data);
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&format!("# tincell {}\n", env!("CARGO_PKG_VERSION")));
                out.push_str(&format!("# subcommand = {}\n", self.subcommand));
                for (k, v) in &self.manifest {
                    out.push_str(&format!("# {k} = {v}\n"));
                }
                out.push_str(&format!("# sha256 = {sha}\n"));
                out.push_str(&data);
                out
            }
            Format::Json => {
                let manifest: serde_json::Map<String, serde_json::Value> = self
                    .manifest
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                let obj = serde_json::json!({
                    "tool": "tincell",
                    "version": env!("CARGO_PKG_VERSION"),
                    "subcommand": self.subcommand,
                    "manifest": manifest,
                    "sha256": sha,
                    "columns": self.columns,
                    "rows": self.rows,
                });
                let mut s = serde_json::to_string_pretty(&obj).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    pub fn write(&self, out: Option<&Path>, format: Format) -> Result<()> {
        let rendered = self.render(format);
        match out {
            Some(path) => std::fs::write(path, rendered)
                .with_context(|| format!("cannot write {}", path.display()))?,
            None => std::io::stdout().write_all(rendered.as_bytes())?,
        }
        Ok(())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
