//! Deterministic rendering of grid data and JSON reports.
//!
//! All documents are byte-stable for identical inputs: no timestamps, no
//! environment echoes, fixed field order, and a schema version in the
//! metadata so later layout changes stay detectable. CSV cells use 17
//! significant digits with `.` as the decimal separator and `\n` line
//! endings.

use std::path::PathBuf;

use serde::Serialize;

use darboux::{Cx, Error, Result};

/// Version tag embedded in every emitted document.
pub const SCHEMA_VERSION: u32 = 1;

/// Fixed-precision cell format: 17 significant digits.
pub fn fmt_cell(v: f64) -> String {
    format!("{v:.16e}")
}

/// A block of grid rows, optionally attached to one spectral sample.
#[derive(Debug, Clone, Serialize)]
pub struct GridBlock {
    /// Spectral sample the block belongs to, as `[re, im]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<[f64; 2]>,
    /// Data rows in output order.
    pub rows: Vec<Vec<f64>>,
}

impl GridBlock {
    /// Block without a spectral sample (real-valued grids).
    pub fn plain(rows: Vec<Vec<f64>>) -> Self {
        GridBlock { k: None, rows }
    }

    /// Block tagged with the spectral sample it was evaluated at.
    pub fn for_k(k: Cx, rows: Vec<Vec<f64>>) -> Self {
        GridBlock { k: Some([k.re, k.im]), rows }
    }
}

/// A complete grid document: column names plus one or more blocks.
#[derive(Debug, Clone, Serialize)]
pub struct GridDoc {
    pub schema_version: u32,
    pub verb: &'static str,
    pub columns: &'static [&'static str],
    pub blocks: Vec<GridBlock>,
}

impl GridDoc {
    pub fn new(verb: &'static str, columns: &'static [&'static str], blocks: Vec<GridBlock>) -> Self {
        GridDoc { schema_version: SCHEMA_VERSION, verb, columns, blocks }
    }

    /// CSV rendering: metadata comment lines, a header row, then data rows;
    /// blocks with a spectral sample are introduced by a `# k:` comment.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# schema_version: {}\n", self.schema_version));
        s.push_str(&format!("# verb: {}\n", self.verb));
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for block in &self.blocks {
            if let Some([re, im]) = block.k {
                s.push_str(&format!("# k: {},{}\n", fmt_cell(re), fmt_cell(im)));
            }
            for row in &block.rows {
                let cells: Vec<String> = row.iter().map(|&v| fmt_cell(v)).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
        }
        s
    }

    /// JSON rendering of the same document.
    pub fn to_json(&self) -> String {
        to_json_text(self)
    }
}

/// Pretty JSON with a trailing newline; field order follows the Rust struct
/// (or `json!` literal) definition, so output is deterministic.
pub fn to_json_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serialization cannot fail");
    s.push('\n');
    s
}

/// Output destination: a file when a path is configured, stdout otherwise.
#[derive(Debug, Clone, Default)]
pub struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(path: Option<PathBuf>) -> Self {
        Sink { path }
    }

    /// Write the rendered document.
    pub fn write(&self, text: &str) -> Result<()> {
        match &self.path {
            Some(path) => std::fs::write(path, text).map_err(|e| {
                Error::InvalidConfig(format!("cannot write output {}: {e}", path.display()))
            }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
