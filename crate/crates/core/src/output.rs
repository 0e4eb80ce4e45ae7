//! CSV tables.
//!
//! Layout: a `# stenoflow v1` line, `# key=value` metadata lines, the column
//! header, then numeric rows. Numbers are written in scientific notation with
//! 12 significant digits so output is byte-stable for a fixed run.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::params::FlowParams;

pub const FORMAT_TAG: &str = "# stenoflow v1";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// 12 significant digits; NaN for missing values.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v == 0.0 {
        // drop the sign of negative zero
        format!("{:.11e}", 0.0)
    } else {
        format!("{v:.11e}")
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    /// Records every model input so a table documents its own run.
    pub fn params_meta(&mut self, params: &FlowParams) -> &mut Self {
        self.meta("alpha", params.alpha)
            .meta("hematocrit", params.hematocrit)
            .meta("beta", params.beta)
            .meta("m", params.m)
            .meta("hartmann", params.hartmann)
            .meta("permeability", params.permeability)
            .meta("l", params.throat_spacing)
            .meta("d", params.onset)
            .meta("length", params.length)
            .meta("severity", params.severity)
            .meta("tol", params.tol)
            .meta("n_max", params.n_max)
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn get_meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_TAG);
        out.push('\n');
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|v| format_number(*v)))
                .expect("in-memory write");
        }
        let body = writer.into_inner().expect("in-memory flush");
        out.push_str(&String::from_utf8(body).expect("ascii output"));
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(self.to_csv_string().as_bytes())
            .map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(&text).map_err(|message| Error::Csv {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn parse_csv(text: &str) -> std::result::Result<Self, String> {
        let mut metadata = Vec::new();
        let mut body_start = 0;
        for line in text.lines() {
            match line.strip_prefix('#') {
                Some(comment) => {
                    if let Some((k, v)) = comment.trim().split_once('=') {
                        metadata.push((k.to_string(), v.to_string()));
                    }
                    body_start += line.len() + 1;
                }
                None => break,
            }
        }
        let body = text.get(body_start..).unwrap_or("");
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(body.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| e.to_string())?
            .iter()
            .map(str::to_string)
            .collect();
        if columns.is_empty() || columns.iter().all(String::is_empty) {
            return Err("no column header".to_string());
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| e.to_string())?;
            let row = record
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad number `{f}`: {e}"))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.40884142121617), "4.08841421216e-1");
        assert_eq!(format_number(-0.0), "0.00000000000e0");
        assert_eq!(format_number(f64::NAN), "NaN");
        assert_eq!(format_number(63.6724504407959), "6.36724504408e1");
    }

    #[test]
    fn layout_and_parse() {
        let mut t = Table::new(["z", "eta"]);
        t.meta("command", "geometry");
        t.push(vec![0.0, 1.0]);
        t.push(vec![1.0, 0.375]);
        let text = t.to_csv_string();
        assert!(text.starts_with("# stenoflow v1\n# command=geometry\nz,eta\n"));
        let back = Table::parse_csv(&text).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.rows, t.rows);
        assert_eq!(back.get_meta("command"), Some("geometry"));
    }

    #[test]
    fn empty_body_is_rejected() {
        assert!(Table::parse_csv("# stenoflow v1\n").is_err());
    }
}
