//! JSON matrix files: `{ "rows": r, "cols": c, "entries": [[{re, im}, …]] }`.

use anyhow::{bail, Context, Result};
use conjorbit::{CMatrix, Complex64};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<ComplexEntry>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> MatrixFile {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| {
                            let v = m.get(i, j);
                            ComplexEntry { re: v.re, im: v.im }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.rows {
            bail!(
                "matrix file declares {} rows but has {}",
                self.rows,
                self.entries.len()
            );
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                bail!(
                    "matrix file declares {} cols but row {i} has {}",
                    self.cols,
                    row.len()
                );
            }
        }
        if self.rows == 0 || self.cols == 0 {
            bail!("matrix file must not be empty");
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let e = self.entries[i][j];
            Complex64::new(e.re, e.im)
        }))
    }
}

pub fn load_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading matrix file {}", path.display()))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing matrix file {}", path.display()))?;
    file.to_matrix()
}

pub fn save_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    let file = MatrixFile::from_matrix(m);
    let text = serde_json::to_string_pretty(&file)?;
    std::fs::write(path, text)
        .with_context(|| format!("writing matrix file {}", path.display()))?;
    Ok(())
}

/// Parse a 1-based comma-separated permutation like `2,1,3` into 0-based
/// indices.
pub fn parse_permutation(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        let v: usize = piece
            .trim()
            .parse()
            .with_context(|| format!("permutation entry {piece:?} is not a positive integer"))?;
        if v == 0 {
            bail!("permutation entries are 1-based; got 0");
        }
        out.push(v - 1);
    }
    let n = out.len();
    let mut seen = vec![false; n];
    for &v in &out {
        if v >= n || seen[v] {
            bail!("{text:?} is not a permutation of 1..={n}");
        }
        seen[v] = true;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_file_round_trip() {
        let m = CMatrix::from_fn(2, 3, |i, j| Complex64::new(i as f64, j as f64 - 1.0));
        let back = MatrixFile::from_matrix(&m).to_matrix().unwrap();
        assert_eq!(back.max_abs_diff(&m), 0.0);
    }

    #[test]
    fn matrix_file_shape_mismatch_is_an_error() {
        let bad = MatrixFile {
            rows: 2,
            cols: 2,
            entries: vec![vec![ComplexEntry { re: 0.0, im: 0.0 }; 2]],
        };
        assert!(bad.to_matrix().is_err());
    }

    #[test]
    fn permutation_parsing() {
        assert_eq!(parse_permutation("2,1,3").unwrap(), vec![1, 0, 2]);
        assert!(parse_permutation("1,1").is_err());
        assert!(parse_permutation("0,1").is_err());
        assert!(parse_permutation("3,1").is_err());
        assert!(parse_permutation("a").is_err());
    }
}
