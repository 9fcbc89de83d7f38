//! General dense eigensolver for complex non-Hermitian matrices.
//!
//! Eigenvalues come from Householder reduction to upper Hessenberg form
//! followed by single-shift QR sweeps with Wilkinson shifts (exceptional
//! shifts every tenth sweep without deflation). Right eigenvectors are then
//! recovered by inverse iteration on the original matrix, left eigenvectors
//! by inverse iteration on its conjugate transpose, and the pair is
//! renormalized so that `L†R = I`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::lu::{solve, Lu};
use super::{conj_transpose, frob_norm, CMatrix, Complex};
use crate::error::{Error, Result};

/// Eigenvector-matrix condition number above which a matrix is treated as
/// defective.
pub const NEAR_DEFECTIVE_CONDITION: f64 = 1e10;

/// Sweeps allowed per deflated eigenvalue.
const MAX_SWEEPS_PER_EIGENVALUE: usize = 120;
/// Relative real-part window inside which eigenvalues are ordered by imaginary part.
const ORDER_TIE: f64 = 1e-9;
/// Relative distance under which eigenvalues share an inverse-iteration cluster.
const CLUSTER_TOL: f64 = 1e-9;
const INVERSE_ITERATIONS: usize = 6;

/// Eigenvalues with biorthonormal right/left eigenvector bases.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<Complex>,
    /// Columns are right eigenvectors, unit 2-norm.
    pub right: CMatrix,
    /// Columns are left eigenvectors, scaled so that `left† · right = I`.
    pub left: CMatrix,
    /// `‖R‖_F·‖R⁻¹‖_F` estimate for the right-eigenvector matrix.
    pub condition: f64,
}

impl SpectralDecomposition {
    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn right_vector(&self, k: usize) -> Vec<Complex> {
        self.right.column(k)
    }

    pub fn left_vector(&self, k: usize) -> Vec<Complex> {
        self.left.column(k)
    }
}

/// Orders eigenvalues by real part descending, then imaginary part descending.
/// Real parts closer than `tol` count as equal, so rounding noise on a real
/// axis does not scramble the order.
pub fn sort_eigenvalues(values: &mut [Complex], tol: f64) {
    values.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal));
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && (values[end].re - values[end - 1].re).abs() <= tol {
            end += 1;
        }
        values[start..end].sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal));
        start = end;
    }
}

/// Eigenvalues only, sorted as in [`sort_eigenvalues`].
///
/// This never inspects eigenvectors, so it also succeeds on defective
/// matrices (with the usual `ε^{1/k}` accuracy loss at a `k`-fold Jordan block).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex>> {
    a.require_square()?;
    a.check_finite()?;
    let scale = frob_norm(a);
    let mut h = hessenberg(a);
    let mut vals = hessenberg_qr(&mut h, scale)?;
    sort_eigenvalues(&mut vals, ORDER_TIE * scale.max(f64::MIN_POSITIVE));
    Ok(vals)
}

/// Full spectral decomposition of a diagonalizable matrix.
pub fn eig(a: &CMatrix) -> Result<SpectralDecomposition> {
    let values = eigenvalues(a)?;
    let n = a.rows();
    let scale = frob_norm(a);
    if scale == 0.0 {
        return Ok(SpectralDecomposition {
            eigenvalues: values,
            right: CMatrix::identity(n),
            left: CMatrix::identity(n),
            condition: n as f64,
        });
    }

    let right = inverse_iteration(a, &values, scale);
    let ah = conj_transpose(a);
    let conj_values: Vec<Complex> = values.iter().map(|z| z.conj()).collect();
    let raw_left = inverse_iteration(&ah, &conj_values, scale);

    // L ← L·G^{-†} with G = L†R, so that L†R = I.
    let gram = super::matmul(&conj_transpose(&raw_left), &right)?;
    let left = match solve(&gram, &conj_transpose(&raw_left)) {
        Ok(lh) => conj_transpose(&lh),
        Err(_) => {
            return Err(Error::NearDefective {
                condition: f64::INFINITY,
                threshold: NEAR_DEFECTIVE_CONDITION,
            })
        }
    };

    let condition = frob_norm(&right) * frob_norm(&left);
    if !condition.is_finite() || condition > NEAR_DEFECTIVE_CONDITION {
        return Err(Error::NearDefective {
            condition,
            threshold: NEAR_DEFECTIVE_CONDITION,
        });
    }

    for (k, &lambda) in values.iter().enumerate() {
        let r = right.column(k);
        let ar = a.matvec(&r)?;
        let res = ar
            .iter()
            .zip(&r)
            .map(|(x, y)| (x - lambda * y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res > 1e-8 * scale {
            return Err(Error::NearDefective {
                condition,
                threshold: NEAR_DEFECTIVE_CONDITION,
            });
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues: values,
        right,
        left,
        condition,
    })
}

/// Householder reduction to upper Hessenberg form (similarity, eigenvalues only).
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    let mut v = vec![Complex::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let xnorm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut().take(n).skip(k + 1) {
            *vi /= vnorm;
        }
        // H ← (I − 2vv†)·H
        for j in k..n {
            let s: Complex = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                let vi = v[i];
                h[(i, j)] -= vi * s * 2.0;
            }
        }
        // H ← H·(I − 2vv†)
        for i in 0..n {
            let s: Complex = (k + 1..n).map(|j| h[(i, j)] * v[j]).sum();
            for j in k + 1..n {
                let vj = v[j];
                h[(i, j)] -= s * vj.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::new(0.0, 0.0);
        }
    }
    h
}

/// Unitary Givens pair `[[α, β], [−β̄, ᾱ]]` zeroing `b` against `a`.
fn givens(a: Complex, b: Complex) -> (Complex, Complex) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    } else {
        (a.conj() / r, b.conj() / r)
    }
}

fn eig22(a: Complex, b: Complex, c: Complex, d: Complex) -> (Complex, Complex) {
    let s = a.norm() + b.norm() + c.norm() + d.norm();
    if s == 0.0 {
        return (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
    }
    let (a, b, c, d) = (a / s, b / s, c / s, d / s);
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5) * ((a - d) * 0.5) + b * c;
    let root = disc.sqrt();
    ((half_tr + root) * s, (half_tr - root) * s)
}

fn negligible_subdiagonal(h: &CMatrix, k: usize, scale: f64) -> bool {
    let eps = f64::EPSILON;
    let sub = h[(k, k - 1)].norm();
    if sub <= f64::MIN_POSITIVE / eps {
        return true;
    }
    let mut tst = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
    if tst == 0.0 {
        tst = scale;
    }
    if sub <= eps * tst {
        return true;
    }
    // Ahues–Tisseur refinement: compare against the local 2x2 conditioning.
    let sup = h[(k - 1, k)].norm();
    let ab = sub.max(sup);
    let ba = sub.min(sup);
    let diff = (h[(k - 1, k - 1)] - h[(k, k)]).norm();
    let aa = h[(k, k)].norm().max(diff);
    let bb = h[(k, k)].norm().min(diff);
    let s = aa + ab;
    s > 0.0 && ba * (ab / s) <= (f64::MIN_POSITIVE / eps).max(eps * (bb * (aa / s)))
}

/// Shifted QR on an upper Hessenberg matrix; returns its eigenvalues unsorted.
fn hessenberg_qr(h: &mut CMatrix, scale: f64) -> Result<Vec<Complex>> {
    let n = h.rows();
    let zero = Complex::new(0.0, 0.0);
    let mut vals = vec![zero; n];
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut total = 0usize;
    let mut rots: Vec<(Complex, Complex)> = Vec::with_capacity(n);

    loop {
        if hi == 0 {
            vals[0] = h[(0, 0)];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            if negligible_subdiagonal(h, lo, scale) {
                h[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            vals[hi] = h[(hi, hi)];
            hi -= 1;
            sweeps = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig22(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            vals[lo] = l1;
            vals[hi] = l2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            sweeps = 0;
            continue;
        }

        sweeps += 1;
        total += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NoConvergence { iterations: total });
        }

        let shift = if sweeps % 10 == 0 {
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * 0.75
        } else {
            let (l1, l2) = eig22(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            if (l1 - h[(hi, hi)]).norm() <= (l2 - h[(hi, hi)]).norm() {
                l1
            } else {
                l2
            }
        };

        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        rots.clear();
        for k in lo..hi {
            let (al, be) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = al * x + be * y;
                h[(k + 1, j)] = -be.conj() * x + al.conj() * y;
            }
            h[(k + 1, k)] = zero;
            rots.push((al, be));
        }
        for (off, &(al, be)) in rots.iter().enumerate() {
            let k = lo + off;
            for i in lo..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * al.conj() + y * be.conj();
                h[(i, k + 1)] = -x * be + y * al;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(vals)
}

/// Deterministic pseudo-random start vector.
fn start_vector(n: usize, seed: usize) -> Vec<Complex> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15 ^ (seed as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    (0..n).map(|_| Complex::new(next() + 1.0, next())).collect()
}

fn normalize(v: &mut [Complex]) -> f64 {
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        for z in v.iter_mut() {
            *z /= nrm;
        }
    }
    nrm
}

/// Fixes the global phase: largest-magnitude component real and positive.
fn fix_phase(v: &mut [Complex]) {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn inverse_iteration(a: &CMatrix, values: &[Complex], scale: f64) -> CMatrix {
    let n = a.rows();
    let floor = f64::EPSILON * scale;
    let mut out = CMatrix::zeros(n, n);
    let mut vecs: Vec<Vec<Complex>> = Vec::with_capacity(n);
    for (k, &lambda) in values.iter().enumerate() {
        let cluster: Vec<usize> = (0..k)
            .filter(|&i| (values[i] - lambda).norm() <= CLUSTER_TOL * scale)
            .collect();
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= lambda;
        }
        let lu = Lu::new_perturbed(&shifted, floor);
        let mut v = start_vector(n, k);
        let project = |v: &mut Vec<Complex>, vecs: &[Vec<Complex>]| {
            for &i in &cluster {
                let u = &vecs[i];
                let dot: Complex = u.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                for (vj, uj) in v.iter_mut().zip(u) {
                    *vj -= dot * uj;
                }
            }
        };
        project(&mut v, &vecs);
        normalize(&mut v);
        for _ in 0..INVERSE_ITERATIONS {
            let mut w = lu.solve_vec(&v);
            project(&mut w, &vecs);
            if normalize(&mut w) == 0.0 || w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                break;
            }
            v = w;
            let av = a.matvec(&v).expect("square");
            let res = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - lambda * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if res <= 1e-14 * scale {
                break;
            }
        }
        fix_phase(&mut v);
        out.set_column(k, &v);
        vecs.push(v);
    }
    out
}
