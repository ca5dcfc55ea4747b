//! Tables, output files and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Csv,
    Json,
}

/// Named table of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, headers: &[&str]) -> Self {
        Self { name: name.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Single-row table from `(header, value)` pairs.
    pub fn record(name: &str, pairs: &[(&str, String)]) -> Self {
        let mut t = Self::new(name, &pairs.iter().map(|p| p.0).collect::<Vec<_>>());
        t.push(pairs.iter().map(|p| p.1.clone()).collect());
        t
    }

    fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.headers)?;
        for r in &self.rows {
            wr.write_record(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// One JSON object per row; numeric-looking cells are emitted as numbers.
    fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.rows {
            let obj: serde_json::Map<String, serde_json::Value> = self
                .headers
                .iter()
                .zip(r)
                .map(|(h, c)| {
                    let v = serde_json::from_str::<serde_json::Number>(c)
                        .map(serde_json::Value::Number)
                        .unwrap_or_else(|_| match c.as_str() {
                            "true" => serde_json::Value::Bool(true),
                            "false" => serde_json::Value::Bool(false),
                            _ => serde_json::Value::String(c.clone()),
                        });
                    (h.clone(), v)
                })
                .collect();
            writeln!(w, "{}", serde_json::Value::Object(obj))?;
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, w: W, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w).map_err(std::io::Error::other),
            Format::Json => self.write_json(w),
        }
    }
}

/// Everything a command produces.
#[derive(Debug, Default)]
pub struct Output {
    pub tables: Vec<Table>,
    /// Extra JSON-lines payloads, `(file stem, lines)`.
    pub jsonl: Vec<(String, Vec<String>)>,
    /// Whether a verification-style command found a failure.
    pub failed: bool,
}

/// Reproducibility record written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a, C: Serialize> {
    pub command: &'a str,
    pub config: &'a C,
    pub seed: Option<u64>,
    pub git_describe: &'a str,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
}

pub const GIT_DESCRIBE: &str = env!("SYMSENSE_GIT_DESCRIBE");

/// Prints tables to stdout, separated by blank lines.
pub fn print(out: &Output, format: Format) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for (i, t) in out.tables.iter().enumerate() {
        if i > 0 {
            writeln!(lock)?;
        }
        t.write(&mut lock, format)?;
    }
    Ok(())
}

/// Writes every table and payload into `dir`; returns the written paths.
pub fn write_dir(dir: &Path, out: &Output, format: Format) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "jsonl",
    };
    let mut paths = Vec::new();
    for t in &out.tables {
        let p = dir.join(format!("{}.{ext}", t.name));
        t.write(fs::File::create(&p)?, format)?;
        paths.push(p);
    }
    for (stem, lines) in &out.jsonl {
        let p = dir.join(format!("{stem}.jsonl"));
        let mut f = std::io::BufWriter::new(fs::File::create(&p)?);
        for l in lines {
            writeln!(f, "{l}")?;
        }
        paths.push(p);
    }
    Ok(paths)
}

pub fn write_manifest<C: Serialize>(dir: &Path, manifest: &RunManifest<C>) -> std::io::Result<PathBuf> {
    let p = dir.join("manifest.json");
    fs::write(&p, serde_json::to_string_pretty(manifest).map_err(std::io::Error::other)? + "\n")?;
    Ok(p)
}
