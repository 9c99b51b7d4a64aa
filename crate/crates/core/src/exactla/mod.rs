//! Dense linear algebra over the rationals, over `f64`, and modulo a prime.
//!
//! Exact rank and determinant use fraction-free (Bareiss) elimination on an
//! integer matrix obtained by clearing row denominators. Kernels are read off
//! a reduced row echelon form over `BigRational`. The floating-point rank is
//! only meant for realizations with irrational coordinates.

mod bareiss;
mod float;
mod modular;

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub use bareiss::{determinant_int, rank_int};
pub use float::rank_f64;
pub use modular::{rank_mod_p, MODULUS};

/// Default relative pivot tolerance for [`rank_f64`].
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinAlgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Which field a rank computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum FieldMode {
    Exact,
    Float { tolerance: f64 },
}

impl Default for FieldMode {
    fn default() -> Self {
        FieldMode::Exact
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinAlgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(LinAlgError::Dimension(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    /// Plain-text dump: one row per line, entries separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub type RationalMatrix = Matrix<BigRational>;

/// Multiplies each row by the lcm of its denominators, giving an integer
/// matrix with the same row space. Also returns the per-row scale factors.
fn clear_denominators(m: &RationalMatrix) -> (Matrix<BigInt>, Vec<BigInt>) {
    let mut scales = Vec::with_capacity(m.rows);
    let mut data = Vec::with_capacity(m.data.len());
    for i in 0..m.rows {
        let row = m.row(i);
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for x in row {
            data.push(x.numer() * (&lcm / x.denom()));
        }
        scales.push(lcm);
    }
    (
        Matrix {
            rows: m.rows,
            cols: m.cols,
            data,
        },
        scales,
    )
}

/// Exact rank over the rationals.
pub fn rank(m: &RationalMatrix) -> usize {
    let (int, _) = clear_denominators(m);
    rank_int(int)
}

/// Exact determinant over the rationals.
pub fn determinant(m: &RationalMatrix) -> Result<BigRational, LinAlgError> {
    if m.rows != m.cols {
        return Err(LinAlgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let (int, scales) = clear_denominators(m);
    let det = determinant_int(int)?;
    let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(BigRational::new(det, scale))
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut RationalMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = m[(r, c)].recip();
        for j in c..m.cols {
            let v = &m[(r, j)] * &inv;
            m[(r, j)] = v;
        }
        for i in 0..m.rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in c..m.cols {
                let v = &m[(i, j)] - &factor * &m[(r, j)];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space `{v : m v = 0}`.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![BigRational::zero(); m.cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[(r, free)].clone();
        }
        basis.push(normalize_vector(v));
    }
    basis
}

/// Basis of the left null space `{w : wᵀ m = 0}`.
pub fn cokernel_basis(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    kernel_basis(&m.transpose())
}

/// Scales a nonzero vector to coprime integers with a positive leading entry.
pub fn normalize_vector(v: Vec<BigRational>) -> Vec<BigRational> {
    let Some(lead) = v.iter().find(|x| !x.is_zero()) else {
        return v;
    };
    let negative = lead.is_negative();
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| {
            let q = x / &gcd;
            BigRational::from_integer(if negative { -q } else { q })
        })
        .collect()
}

pub fn mat_vec(m: &RationalMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn vec_mat(v: &[BigRational], m: &RationalMatrix) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); m.cols];
    for (i, w) in v.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (j, x) in m.row(i).iter().enumerate() {
            out[j] += w * x;
        }
    }
    out
}

pub fn mat_mul(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix, LinAlgError> {
    if a.cols != b.rows {
        return Err(LinAlgError::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::filled(a.rows, b.cols, BigRational::zero());
    for i in 0..a.rows {
        for l in 0..a.cols {
            let x = &a[(i, l)];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let v = &out[(i, j)] + x * &b[(l, j)];
                out[(i, j)] = v;
            }
        }
    }
    Ok(out)
}

pub fn int_to_rational(m: &Matrix<i64>) -> RationalMatrix {
    m.map(|&x| BigRational::from_integer(BigInt::from(x)))
}
