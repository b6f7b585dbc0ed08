//! Output directory bookkeeping: tables as CSV or JSON, plus the run
//! manifest listing every file written.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::scenario::{Format, ScenarioFile};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => serde_json::json!(v),
            Cell::Int(v) => serde_json::json!(v),
            Cell::Text(s) => serde_json::json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub rows: Option<usize>,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: Option<u64>,
    pub resolved_config: Option<&'a ScenarioFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<serde_json::Value>,
    pub files: &'a [FileEntry],
}

pub struct OutputDir {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

impl OutputDir {
    pub const MANIFEST: &'static str = "manifest.json";

    pub fn create(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        Ok(Self {
            dir,
            files: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    /// Writes `<stem>.csv` or `<stem>.json` (array of row objects).
    pub fn write_table(
        &mut self,
        stem: &str,
        format: Format,
        headers: &[&str],
        rows: &[Vec<Cell>],
    ) -> Result<(), CliError> {
        let name = match format {
            Format::Csv => format!("{stem}.csv"),
            Format::Json => format!("{stem}.json"),
        };
        let path = self.dir.join(&name);
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_path(&path)
                    .map_err(|e| io_err(&path, e))?;
                w.write_record(headers).map_err(|e| io_err(&path, e))?;
                for row in rows {
                    w.write_record(row.iter().map(Cell::render))
                        .map_err(|e| io_err(&path, e))?;
                }
                w.flush().map_err(|e| io_err(&path, e))?;
            }
            Format::Json => {
                let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                    .iter()
                    .map(|row| {
                        headers
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.json()))
                            .collect()
                    })
                    .collect();
                write_json_file(&path, &objects)?;
            }
        }
        self.files.push(FileEntry {
            name,
            rows: Some(rows.len()),
            columns: headers.iter().map(|h| h.to_string()).collect(),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let path = self.dir.join(name);
        write_json_file(&path, value)?;
        self.files.push(FileEntry {
            name: name.to_string(),
            rows: None,
            columns: Vec::new(),
        });
        Ok(())
    }

    /// Writes the manifest through a temporary file and a rename.
    pub fn finish(
        self,
        command: &str,
        scenario: Option<&ScenarioFile>,
        calibration: Option<serde_json::Value>,
    ) -> Result<PathBuf, CliError> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed: scenario.map(|s| s.simulation.seed),
            resolved_config: scenario,
            calibration,
            files: &self.files,
        };
        let path = self.dir.join(Self::MANIFEST);
        let tmp = self.dir.join(format!("{}.tmp", Self::MANIFEST));
        write_json_file(&tmp, &manifest)?;
        fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }
}

pub fn write_json_file<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}
