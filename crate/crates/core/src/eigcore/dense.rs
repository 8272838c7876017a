//! Dense complex matrices, Hermitian matrices and 2x2 block partitions.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// General dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn conj_transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Copies the sub-block starting at (`r0`, `c0`) with the given shape.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }
}

/// Square Hermitian matrix.
///
/// The lower triangle is authoritative: constructors mirror it into the
/// upper triangle and reject diagonals with a nonzero imaginary part, so
/// `a[i][j] == conj(a[j][i])` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    m: CMatrix,
}

impl DenseHermitian {
    pub fn zeros(n: usize) -> Self {
        DenseHermitian {
            m: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diagonal(&vec![1.0; n])
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        DenseHermitian {
            m: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(d[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// Builds from an entry function evaluated on the lower triangle (i >= j).
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                if i == j {
                    if v.im != 0.0 {
                        return Err(Error::NotHermitian(format!(
                            "diagonal entry {i} has imaginary part {}",
                            v.im
                        )));
                    }
                    m.set(i, i, v);
                } else {
                    m.set(i, j, v);
                    m.set(j, i, v.conj());
                }
            }
        }
        Ok(DenseHermitian { m })
    }

    /// Builds from a full square matrix; the upper triangle and the
    /// imaginary part of the diagonal are ignored.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Dimension(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Self::from_lower_fn(m.rows(), |i, j| if i == j { C64::new(m.get(i, i).re, 0.0) } else { m.get(i, j) })
    }

    /// Builds from a full square matrix and checks that it is Hermitian to
    /// within `tol` (absolute, entrywise).
    pub fn from_matrix_checked(m: &CMatrix, tol: f64) -> Result<Self> {
        let n = m.rows();
        if n != m.cols() {
            return Err(Error::Dimension(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if (m.get(i, j) - m.get(j, i).conj()).norm() > tol {
                    return Err(Error::NotHermitian(format!(
                        "entries ({i},{j}) and ({j},{i}) are not conjugate"
                    )));
                }
            }
        }
        Self::from_matrix(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_matrix(&CMatrix::from_real_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m.get(i, j)
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn add(&self, other: &DenseHermitian) -> Result<DenseHermitian> {
        self.check_same_order(other)?;
        Self::from_lower_fn(self.n(), |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &DenseHermitian) -> Result<DenseHermitian> {
        self.check_same_order(other)?;
        Self::from_lower_fn(self.n(), |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, s: f64) -> DenseHermitian {
        DenseHermitian { m: self.m.scale(s) }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &DenseHermitian, s: f64) -> Result<DenseHermitian> {
        self.check_same_order(other)?;
        Self::from_lower_fn(self.n(), |i, j| self.get(i, j) + other.get(i, j) * s)
    }

    fn check_same_order(&self, other: &DenseHermitian) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "orders differ: {} vs {}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    /// Principal submatrix on rows/columns `start..start+len`.
    pub fn principal(&self, start: usize, len: usize) -> DenseHermitian {
        DenseHermitian {
            m: self.m.submatrix(start, start, len, len),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// `Qᴴ A Q` for a column set `Q` (n x r).
    pub fn compress(&self, q: &CMatrix) -> Result<DenseHermitian> {
        let aq = self.m.matmul(q)?;
        let c = q.conj_transpose().matmul(&aq)?;
        Self::from_matrix(&c)
    }
}

/// Partition of an order-n matrix into a leading (n-k) block and a trailing
/// k block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSplit {
    n: usize,
    k: usize,
}

impl BlockSplit {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidArgument(format!(
                "block split needs 1 <= k <= n-1, got k={k}, n={n}"
            )));
        }
        Ok(BlockSplit { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the trailing block.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Size of the leading block.
    pub fn lead(&self) -> usize {
        self.n - self.k
    }

    fn check(&self, a: &DenseHermitian) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::Dimension(format!(
                "split is for order {}, matrix has order {}",
                self.n,
                a.n()
            )));
        }
        Ok(())
    }

    pub fn block11(&self, a: &DenseHermitian) -> Result<DenseHermitian> {
        self.check(a)?;
        Ok(a.principal(0, self.lead()))
    }

    pub fn block22(&self, a: &DenseHermitian) -> Result<DenseHermitian> {
        self.check(a)?;
        Ok(a.principal(self.lead(), self.k))
    }

    /// The k x (n-k) coupling block below the leading block.
    pub fn block21(&self, a: &DenseHermitian) -> Result<CMatrix> {
        self.check(a)?;
        Ok(a.as_matrix().submatrix(self.lead(), 0, self.k, self.lead()))
    }

    /// Splits a vector into its leading and trailing (length k) parts.
    pub fn split_vector<'a, T>(&self, x: &'a [T]) -> (&'a [T], &'a [T]) {
        x.split_at(self.lead())
    }
}
