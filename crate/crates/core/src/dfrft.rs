//! Sylvester chains, the angular-momentum matrix `J_x`, and the discrete
//! fractional Fourier transform generated by it.

use alloc::format;
use alloc::vec::Vec;

use crate::cxmat::{c, eig, CMatrix, Complex};
use crate::error::{Error, Result};

/// Order `n` (matrix size `n + 1`) and coupling `α`. `j = n/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JxSpec {
    n: usize,
    alpha: Complex,
}

impl JxSpec {
    pub fn new(n: usize, alpha: Complex) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Jx order must be >= 1".into()));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) || alpha == c(0.0, 0.0) {
            return Err(Error::InvalidArgument(format!(
                "coupling must be finite and nonzero, got {alpha}"
            )));
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Complex {
        self.alpha
    }

    /// `j = n/2`.
    pub fn j(&self) -> f64 {
        self.n as f64 / 2.0
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    /// Real coupling makes `J_x` Hermitian and the transform unitary.
    pub fn is_hermitian(&self) -> bool {
        self.alpha.im == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<Complex>,
}

impl Signal {
    pub fn new(samples: Vec<Complex>) -> Self {
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `M(k, k+1) = (n − k)α`, `M(k, k−1) = kα`, zero diagonal.
pub fn sylvester_matrix(n: usize, alpha: Complex) -> CMatrix {
    CMatrix::from_fn(n + 1, n + 1, |r, col| {
        if col == r + 1 {
            alpha * (n - r) as f64
        } else if r == col + 1 {
            alpha * r as f64
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Diagonal `S` with `S(0,0) = 1` and
/// `S(k,k) = S(k−1,k−1)·√(M(k,k−1)/M(k−1,k))` (principal branch), which
/// symmetrizes a tridiagonal chain under `S⁻¹·M·S`.
pub fn similarity_s(meff: &CMatrix) -> Result<CMatrix> {
    meff.require_square()?;
    let n = meff.rows();
    let mut diag = Vec::with_capacity(n);
    diag.push(c(1.0, 0.0));
    for k in 1..n {
        let down = meff[(k, k - 1)];
        let up = meff[(k - 1, k)];
        if down == c(0.0, 0.0) || up == c(0.0, 0.0) {
            return Err(Error::BrokenChain { index: k });
        }
        let prev = diag[k - 1];
        diag.push(prev * (down / up).sqrt());
    }
    Ok(CMatrix::from_diag(&diag))
}

/// `J_x(m, m+1) = J_x(m+1, m) = α·√((j − m)(j + m + 1))`, `m = −j..j`.
pub fn jx_matrix(spec: &JxSpec) -> CMatrix {
    let n = spec.n;
    CMatrix::from_fn(n + 1, n + 1, |r, col| {
        let k = r.min(col);
        if r.abs_diff(col) == 1 {
            // with m = k − j: (j − m) = n − k, (j + m + 1) = k + 1
            spec.alpha * (((n - k) * (k + 1)) as f64).sqrt()
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Precomputed eigenbasis of `J_x`. Immutable once built.
#[derive(Debug, Clone)]
pub struct FrftPlan {
    spec: JxSpec,
    /// Ladder index `m` of each eigenvector, `λ = 2αm`.
    ladder: Vec<f64>,
    right: CMatrix,
    /// Columns `w_k` with `w_k† · v_l = δ_kl`.
    left: CMatrix,
    unitary: bool,
}

impl FrftPlan {
    pub fn new(spec: JxSpec) -> Result<Self> {
        let jx = jx_matrix(&spec);
        let dec = eig(&jx)?;
        let j = spec.j();
        let ladder: Vec<f64> = dec
            .eigenvalues
            .iter()
            .map(|&lam| {
                let m = (lam / (spec.alpha * 2.0)).re;
                // snap onto the half-integer ladder −j..j
                ((m + j).round() - j).clamp(-j, j)
            })
            .collect();
        if spec.is_hermitian() {
            let right = orthonormalize(&dec.right);
            Ok(Self {
                spec,
                ladder,
                left: right.clone(),
                right,
                unitary: true,
            })
        } else {
            Ok(Self {
                spec,
                ladder,
                right: dec.right,
                left: dec.left,
                unitary: false,
            })
        }
    }

    pub fn spec(&self) -> &JxSpec {
        &self.spec
    }

    pub fn unitary(&self) -> bool {
        self.unitary
    }

    pub fn ladder(&self) -> &[f64] {
        &self.ladder
    }

    /// `V·diag(exp(−i·a·(π/2)·m))·W†·s`.
    pub fn apply(&self, sig: &Signal, a: f64) -> Result<Signal> {
        let n = self.spec.size();
        if sig.len() != n {
            return Err(Error::DimensionMismatch {
                op: "frft",
                detail: format!("signal has {} samples, transform size is {n}", sig.len()),
            });
        }
        if !a.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "fractional order must be finite, got {a}"
            )));
        }
        if let Some(i) = sig.samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        let mut out = alloc::vec![c(0.0, 0.0); n];
        for k in 0..n {
            let mut coeff = c(0.0, 0.0);
            for i in 0..n {
                coeff += self.left[(i, k)].conj() * sig.samples[i];
            }
            let phase = -a * core::f64::consts::FRAC_PI_2 * self.ladder[k];
            coeff *= Complex::from_polar(1.0, phase);
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.right[(i, k)] * coeff;
            }
        }
        Ok(Signal::new(out))
    }
}

/// Transformed signal plus whether the transform was unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct FrftOutput {
    pub signal: Signal,
    pub non_unitary: bool,
}

pub fn frft(sig: &Signal, a: f64, spec: &JxSpec) -> Result<FrftOutput> {
    let plan = FrftPlan::new(*spec)?;
    Ok(FrftOutput {
        signal: plan.apply(sig, a)?,
        non_unitary: !plan.unitary(),
    })
}

fn orthonormalize(v: &CMatrix) -> CMatrix {
    let n = v.cols();
    let mut out = v.clone();
    for k in 0..n {
        let mut col = out.column(k);
        for _ in 0..2 {
            for p in 0..k {
                let prev = out.column(p);
                let dot: Complex = prev.iter().zip(&col).map(|(a, b)| a.conj() * b).sum();
                for (x, q) in col.iter_mut().zip(&prev) {
                    *x -= dot * q;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut col {
            *x /= norm;
        }
        out.set_column(k, &col);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxmat::matmul;

    fn binom(n: usize, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn small_sylvester() {
        let a = c(0.5, 0.0);
        assert_eq!(
            sylvester_matrix(1, a),
            CMatrix::from_rows(&[[c(0.0, 0.0), a], [a, c(0.0, 0.0)]]).unwrap()
        );
        let m = sylvester_matrix(2, a);
        assert_eq!((m[(0, 1)], m[(1, 2)]), (a * 2.0, a));
        assert_eq!((m[(1, 0)], m[(2, 1)]), (a, a * 2.0));
    }

    #[test]
    fn s_is_inverse_root_binomial() {
        let s = similarity_s(&sylvester_matrix(10, c(0.3, 0.0))).unwrap();
        for k in 0..=10 {
            assert!((s[(k, k)].re - 1.0 / binom(10, k).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn broken_chain() {
        let mut m = sylvester_matrix(3, c(1.0, 0.0)).data().to_vec();
        m[2 * 4 + 1] = c(0.0, 0.0);
        let m = CMatrix::from_vec(4, 4, m).unwrap();
        assert!(matches!(similarity_s(&m), Err(Error::BrokenChain { index: 2 })));
    }

    #[test]
    fn similarity_gives_jx() {
        for n in [1, 2, 5, 12] {
            let alpha = c(0.7, 0.0);
            let m = sylvester_matrix(n, alpha);
            let s = similarity_s(&m).unwrap();
            let sinv = CMatrix::from_diag(&s.diagonal().iter().map(|z| z.inv()).collect::<Vec<_>>());
            let t = matmul(&matmul(&sinv, &m).unwrap(), &s).unwrap();
            let jx = jx_matrix(&JxSpec::new(n, alpha).unwrap());
            assert!(t.max_abs_diff(&jx) < 1e-12 * n as f64);
        }
    }

    #[test]
    fn transform_properties() {
        for n in [3, 4] {
            let spec = JxSpec::new(n, c(1.0, 0.0)).unwrap();
            let plan = FrftPlan::new(spec).unwrap();
            let sig = Signal::new((0..=n).map(|k| c(k as f64, 1.0 - k as f64 * 0.5)).collect());
            let same = plan.apply(&sig, 0.0).unwrap();
            let full = plan.apply(&sig, 4.0).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for k in 0..=n {
                assert!((same.samples[k] - sig.samples[k]).norm() < 1e-12);
                assert!((full.samples[k] - sig.samples[k] * sign).norm() < 1e-12);
            }
            assert!((plan.apply(&sig, 0.37).unwrap().norm() - sig.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_coupling_is_flagged() {
        let spec = JxSpec::new(2, c(1.0, 0.5)).unwrap();
        let sig = Signal::new(alloc::vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let out = frft(&sig, 1.0, &spec).unwrap();
        assert!(out.non_unitary);
        let back = frft(&out.signal, -1.0, &spec).unwrap();
        assert!((back.signal.samples[0] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn wrong_length_rejected() {
        let spec = JxSpec::new(2, c(1.0, 0.0)).unwrap();
        assert!(frft(&Signal::new(alloc::vec![c(1.0, 0.0)]), 1.0, &spec).is_err());
        assert!(JxSpec::new(0, c(1.0, 0.0)).is_err());
    }
}
