//! Output directory bookkeeping: every data file is written once, hashed,
//! and recorded for the manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Fixed float format: 17 significant digits in scientific notation.
pub fn fmt(x: f64) -> String {
    // avoid a "-0" that would differ between otherwise equal runs
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    records: Vec<OutputRecord>,
}

impl OutputSet {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            records: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn records(&self) -> &[OutputRecord] {
        &self.records
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        ensure!(
            !self.records.iter().any(|r| r.file == name),
            "output {name} written twice"
        );
        let path = self.dir.join(name);
        std::fs::write(&path, contents)
            .with_context(|| format!("cannot write {}", path.display()))?;
        self.records.push(OutputRecord {
            file: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
            bytes: contents.len(),
        });
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// CSV table with a header row; cells are written verbatim.
#[derive(Debug, Clone)]
pub struct Csv {
    width: usize,
    text: String,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut text = String::new();
        let cols: Vec<&str> = header.iter().map(|h| h.as_ref()).collect();
        text.push_str(&cols.join(","));
        text.push('\n');
        Self {
            width: cols.len(),
            text,
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        debug_assert_eq!(cells.len(), self.width);
        for (k, c) in cells.iter().enumerate() {
            if k > 0 {
                self.text.push(',');
            }
            self.text.push_str(c.as_ref());
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// `t` followed by one column per site, times in units of `2π/J0`.
pub fn site_table(prefix: &str, times: &[f64], rows: &[Vec<f64>]) -> String {
    let sites = rows.first().map_or(0, Vec::len);
    let mut header = vec!["t_2pi_over_j0".to_string()];
    header.extend((1..=sites).map(|l| format!("{prefix}_{l}")));
    let mut csv = Csv::new(&header);
    for (t, row) in times.iter().zip(rows) {
        let mut cells = vec![fmt(*t)];
        cells.extend(row.iter().map(|&x| fmt(x)));
        csv.row(&cells);
    }
    csv.finish()
}

/// Square matrix with 1-based row and column labels.
pub fn matrix_table(rows: usize, cols: usize, get: impl Fn(usize, usize) -> f64) -> String {
    let mut out = String::from("x\\y");
    for y in 1..=cols {
        let _ = write!(out, ",{y}");
    }
    out.push('\n');
    for x in 1..=rows {
        let _ = write!(out, "{x}");
        for y in 1..=cols {
            let _ = write!(out, ",{}", fmt(get(x, y)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(fmt(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt(-0.0), fmt(0.0));
        let parsed: f64 = fmt(std::f64::consts::PI).parse().unwrap();
        assert_eq!(parsed, std::f64::consts::PI);
    }

    #[test]
    fn duplicate_outputs_are_refused() {
        let dir = std::env::temp_dir().join(format!("magnon-out-{}", std::process::id()));
        let mut set = OutputSet::create(&dir).unwrap();
        set.write("a.csv", "x\n").unwrap();
        assert!(set.write("a.csv", "y\n").is_err());
        assert_eq!(set.records()[0].sha256, sha256_hex(b"x\n"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn matrix_table_layout() {
        let t = matrix_table(2, 2, |x, y| (10 * x + y) as f64);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "x\\y,1,2");
        assert!(lines[2].starts_with("2,2.1"));
    }
}
