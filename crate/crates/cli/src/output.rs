//! Run directories: config snapshot, data files, reports and a file log.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use spinadc_core::RunConfig;

pub struct RunDir {
    path: PathBuf,
    command: String,
    files: Vec<String>,
}

impl RunDir {
    /// Uses `out`, then the config's `output_dir`, then `runs/<command>-<unix seconds>`.
    pub fn create(command: &str, out: Option<&Path>, cfg: &RunConfig) -> std::io::Result<Self> {
        let path = match (out, &cfg.output_dir) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(dir)) => PathBuf::from(dir),
            (None, None) => {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                PathBuf::from("runs").join(format!("{command}-{secs}"))
            }
        };
        fs::create_dir_all(&path)?;
        let mut run = Self { path, command: command.to_string(), files: Vec::new() };
        run.write("config.json", &(cfg.to_json_pretty() + "\n"))?;
        Ok(run)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<()> {
        fs::write(self.path.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
        self.write(name, &(text + "\n"))
    }

    pub fn write_csv(&mut self, name: &str, header: &str, rows: impl IntoIterator<Item = String>) -> std::io::Result<()> {
        let mut text = String::from(header);
        text.push('\n');
        for row in rows {
            text.push_str(&row);
            text.push('\n');
        }
        self.write(name, &text)
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        let mut log = format!("command: {}\n", self.command);
        for f in &self.files {
            let _ = writeln!(log, "wrote: {f}");
        }
        self.write("run.log", &log)
    }
}

/// Two-column text table with keys padded to a common width.
pub fn aligned(title: &str, rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = format!("{title}\n");
    for (k, v) in rows {
        let _ = writeln!(out, "  {k:<width$}  {v}");
    }
    out
}
