use alloc::format;
use alloc::vec::Vec;

use super::{inf_norm, CMatrix, Complex};
use crate::error::{Error, Result};

/// Relative pivot threshold below which a matrix is reported singular.
const SINGULAR_PIVOT: f64 = 1e-14;

/// Partial-pivoted LU factorization `P·A = L·U`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors `a`, failing when a pivot falls below `1e-14·‖a‖∞`.
    pub fn new(a: &CMatrix) -> Result<Self> {
        a.require_square()?;
        let tol = SINGULAR_PIVOT * inf_norm(a);
        Self::factor(a, |column, pivot| {
            if pivot <= tol || pivot == 0.0 {
                Err(Error::Singular { column, pivot })
            } else {
                Ok(None)
            }
        })
    }

    /// Factors `a`, replacing tiny pivots by `floor` instead of failing.
    /// Used by inverse iteration, where `a` is singular by design.
    pub(crate) fn new_perturbed(a: &CMatrix, floor: f64) -> Self {
        Self::factor(a, |_, pivot| Ok((pivot < floor).then_some(floor))).expect("perturbed factorization cannot fail")
    }

    fn factor(a: &CMatrix, mut on_pivot: impl FnMut(usize, f64) -> Result<Option<f64>>) -> Result<Self> {
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmag) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
            }
            if let Some(floor) = on_pivot(k, pmag)? {
                lu[(k, k)] = Complex::new(floor, 0.0);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let ukj = lu[(k, j)];
                    lu[(i, j)] -= factor * ukj;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn size(&self) -> usize {
        self.lu.rows()
    }

    /// Solves `A·x = b` in place of a single right-hand side.
    pub fn solve_vec(&self, b: &[Complex]) -> Vec<Complex> {
        let n = self.size();
        let mut x: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix> {
        if b.rows() != self.size() {
            return Err(Error::DimensionMismatch {
                op: "solve",
                detail: format!(
                    "system of size {} with right-hand side of {} rows",
                    self.size(),
                    b.rows()
                ),
            });
        }
        let mut out = CMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            out.set_column(j, &self.solve_vec(&b.column(j)));
        }
        Ok(out)
    }

    pub fn inverse(&self) -> CMatrix {
        let n = self.size();
        self.solve(&CMatrix::identity(n))
            .expect("square identity always matches")
    }
}

/// Solves `a·X = b` by partial-pivoted LU.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            op: "solve",
            detail: format!(
                "{}x{} system with {} right-hand-side rows",
                a.rows(),
                a.cols(),
                b.rows()
            ),
        });
    }
    Lu::new(a)?.solve(b)
}
