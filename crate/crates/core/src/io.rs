//! JSON matrix files: `{"dim": n, "entries": [[re, im], ...]}` with the
//! `n * n` entries in row-major order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{c64, ComplexMatrix, DensityMatrix, UnitaryMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "matrix files hold square matrices");
        Self { dim: m.rows(), entries: m.row_major_entries().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.dim == 0 {
            return Err(Error::Format("dim must be positive".into()));
        }
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::Format(format!(
                "dim {} needs {} entries, found {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        if self.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Format("entries must be finite".into()));
        }
        ComplexMatrix::from_row_major(self.dim, self.dim, self.entries.iter().map(|[re, im]| c64(*re, *im)).collect())
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.to_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(m)).expect("matrix file serializes")
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Reads a matrix file and validates the density-matrix invariants.
pub fn read_density(path: &Path) -> Result<DensityMatrix> {
    DensityMatrix::new(read_matrix(path)?)
}

pub fn read_unitary(path: &Path) -> Result<UnitaryMatrix> {
    UnitaryMatrix::new(read_matrix(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let m = parse_matrix(r#"{"dim": 2, "entries": [[0.75, 0], [0, 0], [0, 0], [0.25, 0]]}"#).unwrap();
        let rho = DensityMatrix::new(m).unwrap();
        assert_eq!(rho.dim(), 2);

        let bad = parse_matrix(r#"{"dim": 2, "entries": [[1, 0]]}"#);
        assert!(matches!(bad, Err(Error::Format(_))));
        assert!(parse_matrix("not json").is_err());
        assert!(parse_matrix(r#"{"dim": 1, "entries": [[1, 0]], "extra": 3}"#).is_err());
    }

    #[test]
    fn round_trips_through_text() {
        let m = crate::qmat::dft_unitary(3).matrix().clone();
        let back = parse_matrix(&matrix_to_json(&m)).unwrap();
        assert_eq!(back, m);
    }
}
