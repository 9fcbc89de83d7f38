//! Exceptional-point sweeps for the subharmonic-generation preset.
//!
//! At `g = Δ` the first-order matrix of the parametric subharmonic process
//! is a second-order exceptional point, and the third-order moment matrix
//! is nilpotent: one fourth-order Jordan block plus a diabolically doubled
//! second-order one. A diagonal perturbation `ε·P` splits them, and the
//! order of each coalescence shows up as the power law `|λ(ε)| ∝ ε^{1/k}`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::cxmat::{c, eigenvalues, CMatrix, Complex};
use crate::error::{Error, Result};
use crate::moments::ModeSystem;

/// Detuning `Δ` and pump coupling `g` of the subharmonic process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubharmonicParams {
    pub delta: f64,
    pub g: f64,
}

impl SubharmonicParams {
    pub fn new(delta: f64, g: f64) -> Result<Self> {
        if !delta.is_finite() || !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "invalid subharmonic parameters delta={delta}, g={g}"
            )));
        }
        Ok(Self { delta, g })
    }

    /// `Λ = √(g² − Δ²)`, imaginary below threshold.
    pub fn lambda(&self) -> Complex {
        c(self.g * self.g - self.delta * self.delta, 0.0).sqrt()
    }

    /// `φ = arctan(Δ/Λ)` for real `Λ > 0`.
    pub fn phi(&self) -> f64 {
        (self.delta / self.lambda().re).atan()
    }
}

/// `M_1 = [[−iΔ, −g], [−g, iΔ]]` acting on `(a, a†)`.
pub fn subharmonic_m1(p: SubharmonicParams) -> ModeSystem {
    let m1 = CMatrix::from_rows(&[[c(0.0, -p.delta), c(-p.g, 0.0)], [c(-p.g, 0.0), c(0.0, p.delta)]])
        .expect("parameters are validated finite");
    ModeSystem::new(m1, vec!["a".to_string(), "a†".to_string()]).expect("2x2 with two labels")
}

/// `P = diag[1, 0, 0, 1, 0, 1, 0, 0]`.
pub fn ddep_perturbation() -> CMatrix {
    let pattern = [1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0];
    let diag: Vec<Complex> = pattern.iter().map(|&x| c(x, 0.0)).collect();
    CMatrix::from_diag(&diag)
}

/// `n` logarithmically spaced points from `min` to `max` inclusive.
pub fn log_spaced(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min && n >= 2) {
        return Err(Error::InvalidArgument(format!(
            "bad log grid [{min}, {max}] with {n} points"
        )));
    }
    let (lo, hi) = (min.ln(), max.ln());
    Ok((0..n)
        .map(|k| {
            if k == 0 {
                min
            } else if k == n - 1 {
                max
            } else {
                (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub epsilons: Vec<f64>,
    /// Sorted eigenvalues at each ε (outer index: ε).
    pub tracks: Vec<Vec<Complex>>,
    /// Continued trajectories (outer index: track, inner: ε).
    pub matched_tracks: Vec<Vec<Complex>>,
}

impl SweepResult {
    pub fn track_count(&self) -> usize {
        self.matched_tracks.len()
    }
}

/// Eigenvalues of `m + ε·p` over the grid, continued across ε by minimal
/// displacement.
pub fn perturb_sweep(m: &CMatrix, p: &CMatrix, eps_grid: &[f64]) -> Result<SweepResult> {
    m.require_square()?;
    if p.rows() != m.rows() || p.cols() != m.cols() {
        return Err(Error::DimensionMismatch {
            op: "perturb_sweep",
            detail: format!(
                "{}x{} matrix with {}x{} perturbation",
                m.rows(),
                m.cols(),
                p.rows(),
                p.cols()
            ),
        });
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidArgument(
            "epsilon grid must be non-empty, positive and finite".into(),
        ));
    }
    if eps_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("epsilon grid must be strictly ascending".into()));
    }

    let n = m.rows();
    let mut tracks = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let perturbed = m.add(&p.scale(c(eps, 0.0)))?;
        let vals = eigenvalues(&perturbed).map_err(|e| Error::SweepFailure {
            epsilon: eps,
            message: e.to_string(),
        })?;
        tracks.push(vals);
    }

    let mut matched: Vec<Vec<Complex>> = (0..n).map(|k| vec![tracks[0][k]]).collect();
    for step in 1..tracks.len() {
        let prev: Vec<Complex> = matched.iter().map(|t| *t.last().expect("non-empty")).collect();
        let next = &tracks[step];
        for (k, j) in assign(&prev, next).into_iter().enumerate() {
            matched[k].push(next[j]);
        }
    }

    Ok(SweepResult {
        epsilons: eps_grid.to_vec(),
        tracks,
        matched_tracks: matched,
    })
}

/// Matches `prev[k]` to `next[assign[k]]`. Nearest neighbours are used when
/// they already form a bijection, otherwise the minimal-total-displacement
/// assignment.
fn assign(prev: &[Complex], next: &[Complex]) -> Vec<usize> {
    let n = prev.len();
    let nearest: Vec<usize> = prev
        .iter()
        .map(|a| {
            (0..n)
                .min_by(|&i, &j| (next[i] - a).norm().total_cmp(&(next[j] - a).norm()))
                .expect("non-empty")
        })
        .collect();
    let mut taken = vec![false; n];
    let bijective = nearest.iter().all(|&j| !core::mem::replace(&mut taken[j], true));
    if bijective {
        return nearest;
    }
    let cost: Vec<Vec<f64>> = prev
        .iter()
        .map(|a| next.iter().map(|b| (b - a).norm()).collect())
        .collect();
    hungarian(&cost)
}

/// Minimum-cost perfect matching on a square cost matrix (row → column).
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    // 1-based potentials formulation
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=n {
        if p[j] != 0 {
            out[p[j] - 1] = j - 1;
        }
    }
    out
}

/// Least-squares power law `|λ| ∝ ε^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// Minimum number of points and decades a fit must cover.
pub const MIN_FIT_POINTS: usize = 10;
pub const MIN_FIT_DECADES: f64 = 2.0;

/// Slope of `log magnitude` against `log ε`.
pub fn fit_power_law(eps: &[f64], magnitudes: &[f64]) -> Result<ExponentFit> {
    if eps.len() != magnitudes.len() {
        return Err(Error::Fit(format!(
            "{} abscissae for {} values",
            eps.len(),
            magnitudes.len()
        )));
    }
    if eps.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "need at least {MIN_FIT_POINTS} points, got {}",
            eps.len()
        )));
    }
    if eps.iter().chain(magnitudes).any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Fit("epsilons and magnitudes must be strictly positive".into()));
    }
    let (lo, hi) = eps
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &e| (l.min(e), h.max(e)));
    if (hi / lo).log10() < MIN_FIT_DECADES - 1e-9 {
        return Err(Error::Fit(format!(
            "window [{lo:e}, {hi:e}] spans less than {MIN_FIT_DECADES} decades"
        )));
    }
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = magnitudes.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if syy <= 1e-24 * n {
        return Err(Error::Fit("track magnitude is constant over the window".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(ExponentFit {
        exponent: slope,
        r_squared: 1.0 - ss_res / syy,
        window: (lo, hi),
    })
}

/// Power-law fit of one matched track's magnitude.
pub fn fit_splitting_exponent(result: &SweepResult, track: usize) -> Result<ExponentFit> {
    let t = result
        .matched_tracks
        .get(track)
        .ok_or_else(|| Error::Fit(format!("track {track} out of range")))?;
    let mags: Vec<f64> = t.iter().map(|z| z.norm()).collect();
    fit_power_law(&result.epsilons, &mags)
}
