//! Matrix files: TOML documents tagged by `format`.
//!
//! ```toml
//! format = "dense-hermitian"
//! n = 2
//! re = [[0.0, 0.1], [0.1, 2.0]]
//! im = [[0.0, 0.0], [0.0, 0.0]]   # optional
//! ```
//!
//! `format = "tridiagonal"` takes `diag` and `offdiag`; `format = "generator"`
//! takes `name` (`wilkinson_plus`, `wilkinson_split`, `aed_example_1000`), an
//! optional `n` and, for `wilkinson_split`, `part = "a"` or `"e"`. Floats are
//! written in shortest round-trip form, so finite values survive a
//! write/read cycle bit for bit.

use std::path::Path;

use eigpert::eigcore::{
    aed_example_1000, wilkinson_plus, wilkinson_split, CMatrix, DenseHermitian, SymTridiagonal, C64,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MatrixFile {
    DenseHermitian {
        n: usize,
        /// Row-major real parts.
        re: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<Vec<f64>>>,
    },
    Tridiagonal {
        diag: Vec<f64>,
        offdiag: Vec<f64>,
    },
    Generator {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        part: Option<String>,
    },
}

/// A loaded matrix in its natural storage.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Dense(DenseHermitian),
    Tridiagonal(SymTridiagonal),
}

impl Matrix {
    pub fn n(&self) -> usize {
        match self {
            Matrix::Dense(a) => a.n(),
            Matrix::Tridiagonal(t) => t.n(),
        }
    }

    pub fn to_dense(&self) -> DenseHermitian {
        match self {
            Matrix::Dense(a) => a.clone(),
            Matrix::Tridiagonal(t) => t.to_dense(),
        }
    }

    /// The tridiagonal form; dense input must be real and exactly tridiagonal.
    pub fn to_tridiagonal(&self) -> Result<SymTridiagonal, CliError> {
        match self {
            Matrix::Tridiagonal(t) => Ok(t.clone()),
            Matrix::Dense(a) => {
                let n = a.n();
                for i in 0..n {
                    for j in 0..n {
                        let v = a.get(i, j);
                        if v.im != 0.0 || (i.abs_diff(j) > 1 && v.re != 0.0) {
                            return Err(CliError::Input(format!(
                                "matrix is not real tridiagonal: entry ({}, {}) = {v}",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
                let diag = (0..n).map(|i| a.get(i, i).re).collect();
                let offdiag = (1..n).map(|i| a.get(i, i - 1).re).collect();
                Ok(SymTridiagonal::new(diag, offdiag)?)
            }
        }
    }
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("malformed matrix file: {e}")))
    }

    pub fn serialize(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Input(format!("cannot serialize matrix: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn from_dense(a: &DenseHermitian) -> Self {
        let n = a.n();
        let re = (0..n).map(|i| (0..n).map(|j| a.get(i, j).re).collect()).collect();
        let im: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j).im).collect()).collect();
        let complex = im.iter().flatten().any(|v| *v != 0.0);
        MatrixFile::DenseHermitian {
            n,
            re,
            im: complex.then_some(im),
        }
    }

    pub fn from_tridiagonal(t: &SymTridiagonal) -> Self {
        MatrixFile::Tridiagonal {
            diag: t.diag().to_vec(),
            offdiag: t.offdiag().to_vec(),
        }
    }

    pub fn load(&self) -> Result<Matrix, CliError> {
        match self {
            MatrixFile::DenseHermitian { n, re, im } => {
                let n = *n;
                let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
                if !shape_ok(re) || !im.as_ref().is_none_or(shape_ok) {
                    return Err(CliError::Input(format!("dense matrix entries are not {n} x {n}")));
                }
                if let Some(i) = im.as_ref().and_then(|m| (0..n).find(|&i| m[i][i] != 0.0)) {
                    return Err(CliError::Input(format!("diagonal entry {} has a nonzero imaginary part", i + 1)));
                }
                let m = CMatrix::from_fn(n, n, |i, j| C64::new(re[i][j], im.as_ref().map_or(0.0, |m| m[i][j])));
                Ok(Matrix::Dense(DenseHermitian::from_matrix_checked(&m, 0.0)?))
            }
            MatrixFile::Tridiagonal { diag, offdiag } => {
                Ok(Matrix::Tridiagonal(SymTridiagonal::new(diag.clone(), offdiag.clone())?))
            }
            MatrixFile::Generator { name, n, part } => {
                let need_n = || n.ok_or_else(|| CliError::Input(format!("generator {name} needs n")));
                let t = match name.as_str() {
                    "wilkinson_plus" => wilkinson_plus(need_n()?)?,
                    "wilkinson_split" => {
                        let (a, e) = wilkinson_split(need_n()?)?;
                        match part.as_deref() {
                            Some("a") => a,
                            Some("e") => e,
                            other => {
                                return Err(CliError::Input(format!(
                                    "wilkinson_split needs part = \"a\" or \"e\", got {other:?}"
                                )))
                            }
                        }
                    }
                    "aed_example_1000" => aed_example_1000(),
                    other => return Err(CliError::Input(format!("unknown generator {other:?}"))),
                };
                Ok(Matrix::Tridiagonal(t))
            }
        }
    }
}

pub fn load_matrix(path: &Path) -> Result<Matrix, CliError> {
    MatrixFile::read(path)?.load()
}
