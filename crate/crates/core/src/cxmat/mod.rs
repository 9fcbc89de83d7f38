//! Dense complex matrices and a small general eigensolver.
//!
//! Everything here is sized for "oracle scale" problems (a few thousand rows
//! at most). Storage is row-major.

mod eig;
mod lu;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

pub use eig::{eig, eigenvalues, sort_eigenvalues, SpectralDecomposition, NEAR_DEFECTIVE_CONDITION};
pub use lu::{solve, Lu};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Shorthand for building a complex number.
#[inline]
pub const fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Which side of a Kronecker product the identity sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `I_d ⊗ A`
    Left,
    /// `A ⊗ I_d`
    Right,
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    /// Zero matrix. Panics on a zero dimension.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "CMatrix dimensions must be >= 1");
        Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major data, validating shape and finiteness.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_vec",
                detail: format!("{} entries for a {}x{} matrix", data.len(), rows, cols),
            });
        }
        let m = Self { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from a slice of rows.
    pub fn from_rows<R: AsRef<[Complex]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::Empty);
        }
        let ncols = rows[0].as_ref().len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::DimensionMismatch {
                    op: "from_rows",
                    detail: format!("row {} has {} entries, expected {}", i, r.len(), ncols),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(nrows, ncols, data)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cr: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&cr)
    }

    /// Single-column matrix.
    pub fn column_vector(v: &[Complex]) -> Result<Self> {
        Self::from_vec(v.len(), 1, v.to_vec())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn check_finite(&self) -> Result<()> {
        for (k, z) in self.data.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite {
                    row: k / self.cols,
                    col: k % self.cols,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, "sub", |a, b| a - b)
    }

    fn zip(&self, other: &Self, op: &'static str, f: impl Fn(Complex, Complex) -> Complex) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op,
                detail: format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `A·x` for a vector `x`.
    pub fn matvec(&self, x: &[Complex]) -> Result<Vec<Complex>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "matvec",
                detail: format!("{} columns vs vector of length {}", self.cols, x.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Largest entry-wise distance to `other`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Standard complex matrix product.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            detail: format!("{}x{} times {}x{}", a.rows, a.cols, b.rows, b.cols),
        });
    }
    let mut out = CMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a[(i, k)];
            if aik == Complex::new(0.0, 0.0) {
                continue;
            }
            let brow = b.row(k);
            let orow = &mut out.data[i * b.cols..(i + 1) * b.cols];
            for (o, &bkj) in orow.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

pub fn transpose(a: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.cols, a.rows, |i, j| a[(j, i)])
}

pub fn conj_transpose(a: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.cols, a.rows, |i, j| a[(j, i)].conj())
}

pub fn frob_norm(a: &CMatrix) -> f64 {
    a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute row sum.
pub fn inf_norm(a: &CMatrix) -> f64 {
    (0..a.rows)
        .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `I_d ⊗ A` for [`Side::Left`], `A ⊗ I_d` for [`Side::Right`].
pub fn kron_identity_embed(a: &CMatrix, side: Side, d: usize) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::Empty);
    }
    let (r, cl) = (a.rows, a.cols);
    let mut out = CMatrix::zeros(r * d, cl * d);
    for k in 0..d {
        for i in 0..r {
            for j in 0..cl {
                match side {
                    Side::Left => out[(k * r + i, k * cl + j)] = a[(i, j)],
                    Side::Right => out[(i * d + k, j * d + k)] = a[(i, j)],
                }
            }
        }
    }
    Ok(out)
}

/// Rigorous upper bound on the spectral radius: `min_k ‖A^k‖_F^{1/k}` for
/// `k = 1, 2, 4, …` up to the matrix size (Gelfand bound).
///
/// Unlike eigenvalues from QR, this is exact for nilpotent matrices whose
/// powers vanish in floating point, which is how defective collapse at an
/// exceptional point is certified.
pub fn spectral_radius_bound(a: &CMatrix) -> Result<f64> {
    a.require_square()?;
    let n = a.rows;
    let mut best = frob_norm(a);
    let mut power = a.clone();
    let mut k = 1usize;
    while k < n.max(2) * 2 && best > 0.0 {
        power = matmul(&power, &power)?;
        k *= 2;
        let nrm = frob_norm(&power);
        if !nrm.is_finite() {
            break;
        }
        best = best.min(nrm.powf(1.0 / k as f64));
    }
    Ok(best)
}
