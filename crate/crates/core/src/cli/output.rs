//! Output files.
//!
//! CSV layout, shared by every scenario:
//!
//! ```text
//! # units: <units of every column>
//! <comma-separated column names>
//! <rows>
//! ```
//!
//! Floating-point fields are written in base-10 scientific notation with 12
//! significant digits (`{:.11e}`, `.` radix), integers in plain decimal, and
//! empty fields as nothing. Every row, including the last, ends in `\n`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::CliError;

pub const UNITS: &str =
    "# units: frequencies in omega_nu, rates and intensities in Omega^2/(2 omega_nu), times in 1/omega_nu";

pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub enum Field {
    Num(f64),
    Int(usize),
    Empty,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(x) => num(*x),
            Field::Int(i) => i.to_string(),
            Field::Empty => String::new(),
        }
    }
}

pub struct CsvWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CsvWriter {
    pub fn create(path: &Path, columns: &[&str]) -> Result<Self, CliError> {
        let file = File::create(path).map_err(|e| io_error(path, e))?;
        let mut w = Self {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        };
        w.line(UNITS)?;
        w.line(&columns.join(","))?;
        Ok(w)
    }

    fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.out, "{text}").map_err(|e| io_error(&self.path, e))
    }

    pub fn row(&mut self, fields: &[Field]) -> Result<(), CliError> {
        let text: Vec<String> = fields.iter().map(Field::render).collect();
        self.line(&text.join(","))
    }

    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.out.flush().map_err(|e| io_error(&self.path, e))?;
        Ok(self.path)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io_error(path, e))?;
    Ok(path.to_path_buf())
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0), "1.00000000000e0");
        assert_eq!(num(-0.4950975), "-4.95097500000e-1");
        assert_eq!(num(123456.7890123456), "1.23456789012e5");
    }

    #[test]
    fn header_then_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut w = CsvWriter::create(&path, &["a", "b", "c"]).unwrap();
        w.row(&[Field::Num(0.5), Field::Int(3), Field::Empty])
            .unwrap();
        w.finish().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], UNITS);
        assert_eq!(lines[1], "a,b,c");
        assert_eq!(lines[2], "5.00000000000e-1,3,");
        assert!(text.ends_with('\n'));
    }
}
