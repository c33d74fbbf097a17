use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gauss::GaussRat;
use crate::error::{Error, Result};

/// Dense row-major matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRat>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![GaussRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &GaussRat::one())
    }

    pub fn scalar(n: usize, c: &GaussRat) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[GaussRat]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (k, e) in entries.iter().enumerate() {
            m[(k, k)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for tests and fixtures.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|row| row.iter().map(|&x| GaussRat::from_int(x)).collect())
            .collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    pub fn column(v: &[GaussRat]) -> Self {
        ExactMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, r: usize) -> &[GaussRat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<GaussRat> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussRat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> &[GaussRat] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> GaussRat {
        let mut t = GaussRat::zero();
        for k in 0..self.rows.min(self.cols) {
            t += &self[(k, k)];
        }
        t
    }

    /// `self - c·I`.
    pub fn shift(&self, c: &GaussRat) -> Self {
        let mut m = self.clone();
        for k in 0..self.rows.min(self.cols) {
            m[(k, k)] -= c;
        }
        m
    }

    pub fn submatrix(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let mut m = Self::zeros(h, w);
        for r in 0..h {
            for c in 0..w {
                m[(r, c)] = self[(r0 + r, c0 + c)].clone();
            }
        }
        m
    }

    /// Rows and columns picked by index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, m: &ExactMatrix) {
        for r in 0..m.rows {
            for c in 0..m.cols {
                self[(r0 + r, c0 + c)] = m[(r, c)].clone();
            }
        }
    }

    pub fn hstack(parts: &[&ExactMatrix]) -> Result<Self> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::Dimension("hstack row counts differ".into()));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for m in parts {
            out.set_submatrix(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&ExactMatrix]) -> Result<Self> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if parts.iter().any(|m| m.cols != cols) {
            return Err(Error::Dimension("vstack column counts differ".into()));
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for m in parts {
            out.set_submatrix(r0, 0, m);
            r0 += m.rows;
        }
        Ok(out)
    }

    pub fn block_diag(parts: &[ExactMatrix]) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.set_submatrix(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn kron(&self, other: &ExactMatrix) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = &self[(r, c)];
                if a.is_zero() {
                    continue;
                }
                out.set_submatrix(r * other.rows, c * other.cols, &other.scale(a));
            }
        }
        out
    }

    pub fn try_mul(&self, rhs: &ExactMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut s = GaussRat::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first
    /// nonzero entry at or below the current row, so the result is a
    /// deterministic function of the input.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let d = &f * &m[(row, c)];
                    m[(r, c)] -= &d;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel, one vector per free column of the echelon
    /// form, with a 1 in that free position.
    pub fn kernel(&self) -> Vec<Vec<GaussRat>> {
        let Echelon { reduced, pivots } = self.echelon();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![GaussRat::zero(); self.cols];
            v[free] = GaussRat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&reduced[(r, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// The kernel basis as the columns of a matrix.
    pub fn kernel_matrix(&self) -> ExactMatrix {
        columns_to_matrix(self.cols, &self.kernel())
    }

    /// Columns of `self` at the pivot positions: a basis of the column space.
    pub fn column_basis(&self) -> ExactMatrix {
        let piv = self.echelon().pivots;
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, &piv)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::hstack(&[self, &Self::identity(n)])?;
        let e = aug.echelon();
        if !leading_identity(&e.pivots, n) {
            return Err(Error::Singular("matrix is not invertible".into()));
        }
        Ok(e.reduced.submatrix(0, n, n, n))
    }

    /// Solves `self · X = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &ExactMatrix) -> Result<Self> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::Dimension("solve: incompatible shapes".into()));
        }
        let n = self.rows;
        let aug = Self::hstack(&[self, rhs])?;
        let e = aug.echelon();
        if !leading_identity(&e.pivots, n) {
            return Err(Error::Singular("coefficient matrix is singular".into()));
        }
        Ok(e.reduced.submatrix(0, n, n, rhs.cols))
    }

    /// Coordinates of the columns of `rhs` in the basis given by the
    /// (independent) columns of `self`. Fails if some column is not in the
    /// span.
    pub fn coordinates(&self, rhs: &ExactMatrix) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::Dimension("coordinates: row mismatch".into()));
        }
        let k = self.cols;
        let e = Self::hstack(&[self, rhs])?.echelon();
        if e.pivots.iter().any(|&p| p >= k) {
            return Err(Error::Precondition("vector outside the span".into()));
        }
        if e.pivots.len() != k {
            return Err(Error::Precondition("basis columns are dependent".into()));
        }
        Ok(e.reduced.submatrix(0, k, k, rhs.cols))
    }

    pub fn determinant(&self) -> GaussRat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = GaussRat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return GaussRat::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det *= &piv;
            let inv = piv.inv().expect("pivot is nonzero");
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &inv;
                for c in col..n {
                    let d = &f * &m[(col, c)];
                    m[(r, c)] -= &d;
                }
            }
        }
        det
    }

    /// Stacks the columns into one vector.
    pub fn vec_cols(&self) -> Vec<GaussRat> {
        (0..self.cols).flat_map(|c| self.col(c)).collect()
    }

    pub fn from_vec_cols(rows: usize, cols: usize, v: &[GaussRat]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m[(r, c)] = v[c * rows + r].clone();
            }
        }
        m
    }
}

fn leading_identity(pivots: &[usize], n: usize) -> bool {
    pivots.len() >= n && pivots[..n].iter().enumerate().all(|(k, &p)| k == p)
}

pub fn columns_to_matrix(rows: usize, cols: &[Vec<GaussRat>]) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(rows, cols.len());
    for (c, v) in cols.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            m[(r, c)] = x.clone();
        }
    }
    m
}

pub fn mat_rank(m: &ExactMatrix) -> usize {
    m.rank()
}

/// Solves `a·X − X·b = c` through the Kronecker system
/// `(I ⊗ a − bᵀ ⊗ I) vec X = vec c`.
pub fn solve_sylvester(a: &ExactMatrix, b: &ExactMatrix, c: &ExactMatrix) -> Result<ExactMatrix> {
    if !a.is_square() || !b.is_square() || c.rows != a.rows || c.cols != b.rows {
        return Err(Error::Dimension("sylvester: incompatible shapes".into()));
    }
    let (m, n) = (a.rows, b.rows);
    let op = &ExactMatrix::identity(n).kron(a) - &b.transpose().kron(&ExactMatrix::identity(m));
    let rhs = ExactMatrix::column(&c.vec_cols());
    let x = op
        .solve(&rhs)
        .map_err(|_| Error::Singular("a and b share an eigenvalue".into()))?;
    Ok(ExactMatrix::from_vec_cols(m, n, &x.col(0)))
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = GaussRat;
    fn index(&self, (r, c): (usize, usize)) -> &GaussRat {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GaussRat {
        &mut self.data[r * self.cols + c]
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        f.write_str("]")
    }
}
