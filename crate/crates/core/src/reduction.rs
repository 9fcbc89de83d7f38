//! Collapse of the slot-permutation degeneracy of `M_m`.
//!
//! `M_m` commutes with every permutation of tensor slots, so the symmetric
//! subspace is invariant. Grouping multi-indices into permutation classes
//! (multisets of factor indices) gives one basis vector and one eigenvector
//! per class. Writing the class-averaged eigenvectors in the class basis
//! gives `T`, and the effective matrix is `T·diag(d)·T⁻¹`, where `d` holds
//! the per-class eigenvalue sums.
//!
//! Two bases are supported: [`Mode::Average`] weights each class indicator
//! by `1/D` (entries of a symmetric moment vector read off directly), and
//! [`Mode::Normalized`] by `1/√D`, which makes the effective matrix symmetric
//! whenever `M_1` is.

use alloc::vec;
use alloc::vec::Vec;

use crate::cxmat::{frob_norm, inf_norm, matmul, transpose, CMatrix, Complex, Lu};
use crate::error::{Error, Result};
use crate::moments::{
    build_mm_capped, checked_size, degeneracy, multiindex_to_exponents, tensor_eigensystem_capped, ExponentVector,
    ModeSystem, MultiIndex, TensorEigensystem, DEFAULT_SIZE_CAP,
};

/// Condition number of `T` above which the reduction is refused.
pub const REDUCTION_CONDITION_LIMIT: f64 = 1e10;
/// Entries below this fraction of `‖M_eff‖_F` are snapped to zero.
pub const ZERO_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Class indicators scaled by `1/D`.
    Average,
    /// Class indicators scaled by `1/√D`.
    Normalized,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Average => "average",
            Mode::Normalized => "normalized",
        }
    }

    /// Weight applied to the members of a class of size `size`.
    pub fn weight(self, size: usize) -> f64 {
        match self {
            Mode::Average => 1.0 / size as f64,
            Mode::Normalized => 1.0 / (size as f64).sqrt(),
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" => Ok(Mode::Average),
            "normalized" => Ok(Mode::Normalized),
            other => Err(Error::InvalidArgument(alloc::format!(
                "unknown reduction mode '{other}'"
            ))),
        }
    }
}

/// All multi-indices sharing one multiset of factor indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationClass {
    pub exponents: ExponentVector,
    /// Every word with these counts, in lexicographic order.
    pub representatives: Vec<MultiIndex>,
    pub size: usize,
}

impl PermutationClass {
    fn from_sorted_word(word: &[usize], dim: usize) -> Result<Self> {
        let mut reps = Vec::new();
        let mut w = word.to_vec();
        loop {
            reps.push(MultiIndex::new(w.clone(), dim)?);
            if !next_permutation(&mut w) {
                break;
            }
        }
        let exponents = multiindex_to_exponents(&reps[0], dim);
        let size = reps.len();
        debug_assert_eq!(degeneracy(&exponents).ok(), Some(size as u64));
        Ok(Self {
            exponents,
            representatives: reps,
            size,
        })
    }

    /// The non-decreasing word of this class.
    pub fn word(&self) -> &MultiIndex {
        &self.representatives[0]
    }
}

/// Lexicographic next permutation; false once the last one is reached.
fn next_permutation(w: &mut [usize]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// Number of combinations with repetition, `C(dim + m − 1, m)`.
pub fn s_dim(dim: usize, m: usize) -> Result<usize> {
    if dim == 0 || m == 0 {
        return Err(Error::InvalidArgument("s_dim needs dim >= 1 and m >= 1".into()));
    }
    let overflow = || Error::Overflow { what: "s_dim" };
    let n = dim.checked_add(m - 1).ok_or_else(overflow)? as u128;
    let k = (m.min(dim - 1)) as u128;
    let mut acc: u128 = 1;
    for j in 1..=k {
        acc = acc.checked_mul(n - k + j).ok_or_else(overflow)? / j;
    }
    usize::try_from(acc).map_err(|_| overflow())
}

/// Permutation classes of order-`m` words over `dim` letters, ordered by
/// their sorted word.
pub fn enumerate_classes(dim: usize, m: usize) -> Result<Vec<PermutationClass>> {
    enumerate_classes_capped(dim, m, DEFAULT_SIZE_CAP)
}

pub fn enumerate_classes_capped(dim: usize, m: usize, cap: usize) -> Result<Vec<PermutationClass>> {
    checked_size(dim, m, cap)?;
    let mut classes = Vec::with_capacity(s_dim(dim, m)?);
    let mut word = vec![0usize; m];
    loop {
        classes.push(PermutationClass::from_sorted_word(&word, dim)?);
        // advance to the next non-decreasing word
        let Some(pos) = (0..m).rev().find(|&p| word[p] + 1 < dim) else {
            break;
        };
        let v = word[pos] + 1;
        for x in &mut word[pos..] {
            *x = v;
        }
    }
    Ok(classes)
}

/// Weighted sum of the tensor eigenvectors of a class (`1/D` or `1/√D`).
pub fn representative_eigvec(eigsys: &TensorEigensystem, class: &PermutationClass, mode: Mode) -> Result<Vec<Complex>> {
    let w = mode.weight(class.size);
    let mut acc: Option<Vec<Complex>> = None;
    for rep in &class.representatives {
        let v = eigsys.eigvec(rep)?;
        match acc.as_mut() {
            None => acc = Some(v),
            Some(a) => a.iter_mut().zip(&v).for_each(|(x, y)| *x += *y),
        }
    }
    let mut acc = acc.expect("classes are never empty");
    acc.iter_mut().for_each(|x| *x *= w);
    Ok(acc)
}

/// Effective matrix of the moment dynamics on permutation classes, with its
/// eigen-decomposition.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub order: usize,
    pub dim: usize,
    pub mode: Mode,
    pub classes: Vec<PermutationClass>,
    pub meff: CMatrix,
    /// Columns are eigenvectors of `meff`, aligned with `d`.
    pub t: CMatrix,
    pub d: Vec<Complex>,
}

impl ReducedSystem {
    pub fn size(&self) -> usize {
        self.classes.len()
    }

    /// `‖meff·T − T·diag(d)‖_F`.
    pub fn similarity_residual(&self) -> f64 {
        let lhs = matmul(&self.meff, &self.t).expect("square");
        let rhs = matmul(&self.t, &CMatrix::from_diag(&self.d)).expect("square");
        frob_norm(&lhs.sub(&rhs).expect("same shape"))
    }
}

pub fn reduce(sys: &ModeSystem, m: usize, mode: Mode) -> Result<ReducedSystem> {
    reduce_capped(sys, m, mode, DEFAULT_SIZE_CAP)
}

pub fn reduce_capped(sys: &ModeSystem, m: usize, mode: Mode, cap: usize) -> Result<ReducedSystem> {
    let dim = sys.dim();
    let eigsys = tensor_eigensystem_capped(sys, m, cap)?;
    let classes = enumerate_classes_capped(dim, m, cap)?;
    let s = classes.len();

    // T = B'ᵀ·A', built one eigenvector column at a time.
    let mut t = CMatrix::zeros(s, s);
    let mut d = Vec::with_capacity(s);
    for (col, class) in classes.iter().enumerate() {
        let a = representative_eigvec(&eigsys, class, mode)?;
        for (row, basis) in classes.iter().enumerate() {
            let sum: Complex = basis.representatives.iter().map(|w| a[w.flat(dim)]).sum();
            t[(row, col)] = sum * mode.weight(basis.size);
        }
        d.push(eigsys.eigenvalue_of(class.word()));
    }

    let lu = Lu::new(&t).map_err(|_| Error::ReductionSingular {
        condition: f64::INFINITY,
    })?;
    let t_inv = lu.inverse();
    let condition = inf_norm(&t) * inf_norm(&t_inv);
    if !condition.is_finite() || condition > REDUCTION_CONDITION_LIMIT {
        return Err(Error::ReductionSingular { condition });
    }

    // meff = T·D·T⁻¹, via meffᵀ = T⁻ᵀ·(T·D)ᵀ
    let td = CMatrix::from_fn(s, s, |i, j| t[(i, j)] * d[j]);
    let lu_t = Lu::new(&transpose(&t)).map_err(|_| Error::ReductionSingular { condition })?;
    let mut meff = transpose(&lu_t.solve(&transpose(&td))?);
    snap_zeros(&mut meff);

    Ok(ReducedSystem {
        order: m,
        dim,
        mode,
        classes,
        meff,
        t,
        d,
    })
}

/// Zeroes entries (and entry components) below `ZERO_SNAP·‖a‖_F`.
pub fn snap_zeros(a: &mut CMatrix) {
    let tol = ZERO_SNAP * frob_norm(a);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let z = &mut a[(i, j)];
            if z.norm() < tol {
                *z = Complex::new(0.0, 0.0);
                continue;
            }
            if z.re.abs() < tol {
                z.re = 0.0;
            }
            if z.im.abs() < tol {
                z.im = 0.0;
            }
        }
    }
}

/// Effective matrix read directly off `M_m`, without any eigenvectors.
///
/// Average mode takes one representative row per class and sums the columns
/// of each class; normalized mode is the congruence `B''ᵀ·M_m·B''` with
/// orthonormal class indicators.
pub fn direct_collapse(sys: &ModeSystem, m: usize, mode: Mode) -> Result<CMatrix> {
    direct_collapse_capped(sys, m, mode, DEFAULT_SIZE_CAP)
}

pub fn direct_collapse_capped(sys: &ModeSystem, m: usize, mode: Mode, cap: usize) -> Result<CMatrix> {
    let dim = sys.dim();
    let mm = build_mm_capped(sys, m, cap)?;
    let classes = enumerate_classes_capped(dim, m, cap)?;
    let s = classes.len();
    let mut out = CMatrix::zeros(s, s);
    for (r, rc) in classes.iter().enumerate() {
        for (c, cc) in classes.iter().enumerate() {
            let block = |row: usize| -> Complex { cc.representatives.iter().map(|w| mm[(row, w.flat(dim))]).sum() };
            out[(r, c)] = match mode {
                Mode::Average => block(rc.word().flat(dim)),
                Mode::Normalized => {
                    let total: Complex = rc.representatives.iter().map(|w| block(w.flat(dim))).sum();
                    total / ((rc.size * cc.size) as f64).sqrt()
                }
            };
        }
    }
    Ok(out)
}
