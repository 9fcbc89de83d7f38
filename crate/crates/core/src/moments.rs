//! Order-`m` moment matrices and their tensor-product eigensystems.
//!
//! Indices are zero-based throughout the API; multi-indices print one-based
//! to match the usual `(i₁, …, iₘ)` notation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cxmat::{eig, CMatrix, Complex, SpectralDecomposition};
use crate::error::{Error, Result};

/// Default cap on the row count of dense moment matrices.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// A first-order evolution matrix together with component labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSystem {
    m1: CMatrix,
    labels: Vec<String>,
}

impl ModeSystem {
    pub fn new(m1: CMatrix, labels: Vec<String>) -> Result<Self> {
        m1.require_square()?;
        m1.check_finite()?;
        if labels.len() != m1.rows() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for a {}-dimensional system",
                labels.len(),
                m1.rows()
            )));
        }
        Ok(Self { m1, labels })
    }

    /// Labels components `"1"`, `"2"`, ….
    pub fn unlabeled(m1: CMatrix) -> Result<Self> {
        let labels = (1..=m1.rows()).map(|i| i.to_string()).collect();
        Self::new(m1, labels)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m1.rows()
    }

    pub fn m1(&self) -> &CMatrix {
        &self.m1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Copy with a single entry of `M_1` replaced.
    pub fn with_entry(&self, row: usize, col: usize, value: Complex) -> Result<Self> {
        if row >= self.dim() || col >= self.dim() {
            return Err(Error::InvalidArgument(format!(
                "entry ({row}, {col}) outside a {}-dimensional system",
                self.dim()
            )));
        }
        let mut m1 = self.m1.clone();
        m1[(row, col)] = value;
        Self::new(m1, self.labels.clone())
    }
}

/// Ordered tuple `(i₁, …, iₘ)` of factor indices (zero-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("multi-index must have order >= 1".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::InvalidArgument(format!(
                "index {bad} out of range for dimension {dim}"
            )));
        }
        Ok(Self(indices))
    }

    /// Multi-index at position `flat` of the lexicographic enumeration
    /// (leftmost index slowest).
    pub fn from_flat(mut flat: usize, dim: usize, order: usize) -> Self {
        let mut idx = vec![0; order];
        for slot in idx.iter_mut().rev() {
            *slot = flat % dim;
            flat /= dim;
        }
        Self(idx)
    }

    /// Inverse of [`MultiIndex::from_flat`].
    pub fn flat(&self, dim: usize) -> usize {
        self.0.iter().fold(0, |acc, &i| acc * dim + i)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str(")")
    }
}

/// Occupation counts `(n₁, …, n_dim)` of a multi-index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument(
                "exponent vector needs at least one component".into(),
            ));
        }
        Ok(Self(counts))
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total order `Σ nᵢ`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    /// The sorted (non-decreasing) index word with these counts.
    pub fn sorted_word(&self) -> MultiIndex {
        let mut w = Vec::with_capacity(self.order());
        for (i, &n) in self.0.iter().enumerate() {
            w.extend(core::iter::repeat(i).take(n as usize));
        }
        MultiIndex(w)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

pub fn multiindex_to_exponents(idx: &MultiIndex, dim: usize) -> ExponentVector {
    let mut counts = vec![0u32; dim];
    for &i in idx.as_slice() {
        counts[i] += 1;
    }
    ExponentVector(counts)
}

/// Exact multinomial coefficient `m! / (n₁!⋯n_d!)`.
pub fn degeneracy(ev: &ExponentVector) -> Result<u64> {
    let overflow = || Error::Overflow { what: "degeneracy" };
    let mut total: u128 = 0;
    let mut result: u128 = 1;
    for &n in ev.counts() {
        // result *= C(total + n, n), built incrementally so every step is exact
        for j in 1..=n as u128 {
            result = result.checked_mul(total + j).ok_or_else(overflow)? / j;
        }
        total += n as u128;
    }
    u64::try_from(result).map_err(|_| overflow())
}

/// `dim^m`, failing past `cap`.
pub fn checked_size(dim: usize, m: usize, cap: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be >= 1".into()));
    }
    let mut size: usize = 1;
    for _ in 0..m {
        size = match size.checked_mul(dim) {
            Some(s) if s <= cap => s,
            _ => {
                return Err(Error::SizeCap {
                    requested: size.saturating_mul(dim),
                    cap,
                })
            }
        };
    }
    Ok(size)
}

/// Standard Kronecker product.
pub fn kron_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (p, q) = (b.rows(), b.cols());
    let mut out = CMatrix::zeros(a.rows() * p, a.cols() * q);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker sum `A ⊗ I + I ⊗ B`.
pub fn kron_sum(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.require_square()?;
    b.require_square()?;
    let (n, p) = (a.rows(), b.rows());
    let mut out = CMatrix::zeros(n * p, n * p);
    for i in 0..n {
        for j in 0..n {
            let aij = a[(i, j)];
            for k in 0..p {
                out[(i * p + k, j * p + k)] += aij;
            }
        }
        for k in 0..p {
            for l in 0..p {
                out[(i * p + k, i * p + l)] += b[(k, l)];
            }
        }
    }
    Ok(out)
}

/// `M_m = M_1 ⊕ ⋯ ⊕ M_1` (`m` terms) with the default size cap.
pub fn build_mm(sys: &ModeSystem, m: usize) -> Result<CMatrix> {
    build_mm_capped(sys, m, DEFAULT_SIZE_CAP)
}

/// `M_m` assembled entry by entry: row `w'` couples to column `w` iff the
/// two words differ in at most one slot `s`, with weight `M_1[w'_s, w_s]`.
pub fn build_mm_capped(sys: &ModeSystem, m: usize, cap: usize) -> Result<CMatrix> {
    let dim = sys.dim();
    let size = checked_size(dim, m, cap)?;
    let m1 = sys.m1();
    let mut out = CMatrix::zeros(size, size);
    let mut stride = vec![1usize; m];
    for s in (0..m.saturating_sub(1)).rev() {
        stride[s] = stride[s + 1] * dim;
    }
    for row in 0..size {
        for &st in &stride {
            let a = (row / st) % dim;
            let base = row - a * st;
            for b in 0..dim {
                out[(row, base + b * st)] += m1[(a, b)];
            }
        }
    }
    Ok(out)
}

/// Complete analytic eigensystem of `M_m` indexed by multi-indices.
#[derive(Debug, Clone)]
pub struct TensorEigensystem {
    order: usize,
    base: SpectralDecomposition,
    entries: Vec<(MultiIndex, Complex)>,
}

impl TensorEigensystem {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.base.size()
    }

    pub fn base(&self) -> &SpectralDecomposition {
        &self.base
    }

    /// All `(multi-index, eigenvalue)` pairs, lexicographic in the index.
    pub fn entries(&self) -> &[(MultiIndex, Complex)] {
        &self.entries
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = Complex> + '_ {
        self.entries.iter().map(|(_, l)| *l)
    }

    /// `Σ λ_{iₖ}` for an arbitrary multi-index of this order.
    pub fn eigenvalue_of(&self, idx: &MultiIndex) -> Complex {
        idx.as_slice().iter().map(|&i| self.base.eigenvalues[i]).sum()
    }

    fn check(&self, idx: &MultiIndex) -> Result<()> {
        if idx.order() != self.order || idx.as_slice().iter().any(|&i| i >= self.dim()) {
            return Err(Error::InvalidArgument(format!(
                "multi-index {idx} invalid for order {} and dimension {}",
                self.order,
                self.dim()
            )));
        }
        Ok(())
    }

    /// Right eigenvector `ψ_{i₁} ⊗ ⋯ ⊗ ψ_{iₘ}`.
    pub fn eigvec(&self, idx: &MultiIndex) -> Result<Vec<Complex>> {
        self.check(idx)?;
        Ok(self.tensor(idx, |k| self.base.right_vector(k)))
    }

    /// Left eigenvector `φ_{i₁} ⊗ ⋯ ⊗ φ_{iₘ}` (biorthonormal to the right ones).
    pub fn left_eigvec(&self, idx: &MultiIndex) -> Result<Vec<Complex>> {
        self.check(idx)?;
        Ok(self.tensor(idx, |k| self.base.left_vector(k)))
    }

    fn tensor(&self, idx: &MultiIndex, factor: impl Fn(usize) -> Vec<Complex>) -> Vec<Complex> {
        let mut acc = vec![Complex::new(1.0, 0.0)];
        for &i in idx.as_slice() {
            let f = factor(i);
            let mut next = Vec::with_capacity(acc.len() * f.len());
            for &a in &acc {
                next.extend(f.iter().map(|&b| a * b));
            }
            acc = next;
        }
        acc
    }
}

pub fn tensor_eigensystem(sys: &ModeSystem, m: usize) -> Result<TensorEigensystem> {
    tensor_eigensystem_capped(sys, m, DEFAULT_SIZE_CAP)
}

pub fn tensor_eigensystem_capped(sys: &ModeSystem, m: usize, cap: usize) -> Result<TensorEigensystem> {
    let dim = sys.dim();
    let size = checked_size(dim, m, cap)?;
    let base = eig(sys.m1())?;
    let entries = (0..size)
        .map(|flat| {
            let idx = MultiIndex::from_flat(flat, dim, m);
            let lambda = idx.as_slice().iter().map(|&i| base.eigenvalues[i]).sum();
            (idx, lambda)
        })
        .collect();
    Ok(TensorEigensystem {
        order: m,
        base,
        entries,
    })
}

/// Free-function form of [`TensorEigensystem::eigvec`].
pub fn tensor_eigvec(eigsys: &TensorEigensystem, idx: &MultiIndex) -> Result<Vec<Complex>> {
    eigsys.eigvec(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxmat::c;
    use alloc::vec;

    #[test]
    fn flat_roundtrip_is_lexicographic() {
        let idx = MultiIndex::from_flat(5, 2, 3);
        assert_eq!(idx.as_slice(), &[1, 0, 1]);
        assert_eq!(idx.flat(2), 5);
        assert_eq!(alloc::format!("{idx}"), "(2,1,2)");
    }

    #[test]
    fn exponents_from_words() {
        let e = multiindex_to_exponents(&MultiIndex::new(vec![0, 0, 1], 2).unwrap(), 2);
        assert_eq!(e.counts(), &[2, 1]);
        let e = multiindex_to_exponents(&MultiIndex::new(vec![2, 0, 2], 3).unwrap(), 3);
        assert_eq!(e.counts(), &[1, 0, 2]);
    }

    #[test]
    fn degeneracy_values() {
        assert_eq!(degeneracy(&ExponentVector::new(vec![2, 1]).unwrap()).unwrap(), 3);
        assert_eq!(degeneracy(&ExponentVector::new(vec![0, 5, 0]).unwrap()).unwrap(), 1);
        assert_eq!(
            degeneracy(&ExponentVector::new(vec![10, 10]).unwrap()).unwrap(),
            184_756
        );
        assert!(matches!(
            degeneracy(&ExponentVector::new(vec![1; 30]).unwrap()),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn kron_with_unit_and_shift() {
        let a = CMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64));
        assert_eq!(kron_product(&CMatrix::identity(1), &a), a);
        let shift = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        let k = kron_product(&shift, &CMatrix::identity(2));
        for i in 0..4 {
            for j in 0..4 {
                let expect = if (i, j) == (0, 2) || (i, j) == (1, 3) { 1.0 } else { 0.0 };
                assert_eq!(k[(i, j)], c(expect, 0.0));
            }
        }
    }

    #[test]
    fn kron_sum_of_scalars() {
        let x = CMatrix::from_diag(&[c(1.0, 2.0)]);
        let y = CMatrix::from_diag(&[c(-3.0, 0.5)]);
        assert_eq!(kron_sum(&x, &y).unwrap()[(0, 0)], c(-2.0, 2.5));
    }

    #[test]
    fn size_cap_is_enforced() {
        let sys = ModeSystem::unlabeled(CMatrix::identity(2)).unwrap();
        assert!(matches!(
            build_mm_capped(&sys, 5, 16),
            Err(Error::SizeCap { requested: 32, cap: 16 })
        ));
        assert!(build_mm_capped(&sys, 4, 16).is_ok());
        assert!(build_mm(&sys, 0).is_err());
    }

    #[test]
    fn first_order_is_m1() {
        let m1 = CMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, -(i as f64)));
        let sys = ModeSystem::unlabeled(m1.clone()).unwrap();
        assert_eq!(build_mm(&sys, 1).unwrap(), m1);
    }

    #[test]
    fn labels_must_match_dimension() {
        assert!(ModeSystem::new(CMatrix::identity(2), vec!["a".into()]).is_err());
        assert!(ModeSystem::unlabeled(CMatrix::zeros(2, 3)).is_err());
    }
}
