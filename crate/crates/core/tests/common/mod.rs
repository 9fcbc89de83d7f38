//! Test-side oracles. Nothing here calls into the library's numerical
//! kernels; each helper recomputes its quantity from the definition.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplexlat_core::{c, CMatrix, Complex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, scale: f64) -> Complex {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| random_complex(rng, 1.0))
}

/// Row-major digits of `flat` in base `dim`, most significant first.
pub fn digits(mut flat: usize, dim: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for k in (0..m).rev() {
        out[k] = flat % dim;
        flat /= dim;
    }
    out
}

/// `M_m[I, J] = Σ_k M_1[i_k, j_k]·Π_{l≠k} δ(i_l, j_l)`.
pub fn index_formula_mm(m1: &CMatrix, m: usize) -> CMatrix {
    let dim = m1.rows();
    let size = dim.pow(m as u32);
    CMatrix::from_fn(size, size, |r, col| {
        let i = digits(r, dim, m);
        let j = digits(col, dim, m);
        let mut acc = c(0.0, 0.0);
        for k in 0..m {
            if (0..m).all(|l| l == k || i[l] == j[l]) {
                acc += m1[(i[k], j[k])];
            }
        }
        acc
    })
}

pub fn triple_loop_matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = c(0.0, 0.0);
        for k in 0..a.cols() {
            acc += a[(i, k)] * b[(k, j)];
        }
        acc
    })
}

/// Multiplicity of every count vector over all `dim^m` words.
pub fn brute_force_counts(dim: usize, m: usize) -> BTreeMap<Vec<u32>, u64> {
    let mut tally = BTreeMap::new();
    for flat in 0..dim.pow(m as u32) {
        let mut counts = vec![0u32; dim];
        for d in digits(flat, dim, m) {
            counts[d] += 1;
        }
        *tally.entry(counts).or_insert(0) += 1;
    }
    tally
}

/// Characteristic polynomial coefficients (monic, highest degree first)
/// by the Faddeev–LeVerrier recursion.
pub fn char_poly(a: &CMatrix) -> Vec<Complex> {
    let n = a.rows();
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut mk = CMatrix::zeros(n, n);
    let mut ck = c(1.0, 0.0);
    for k in 1..=n {
        let shifted = CMatrix::from_fn(n, n, |i, j| mk[(i, j)] + if i == j { ck } else { c(0.0, 0.0) });
        mk = triple_loop_matmul(a, &shifted);
        let trace: Complex = (0..n).map(|i| mk[(i, i)]).sum();
        ck = -trace / k as f64;
        coeffs.push(ck);
    }
    coeffs
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
pub fn poly_roots(coeffs: &[Complex]) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex| coeffs.iter().fold(c(0.0, 0.0), |acc, &k| acc * z + k);
    let radius = 1.0 + coeffs[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex> = (0..n)
        .map(|k| Complex::from_polar(radius * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    roots
}

/// Largest distance in a nearest-unused pairing of two multisets. Pairs each
/// expected value with the closest unclaimed actual value.
pub fn multiset_distance(expected: &[Complex], actual: &[Complex]) -> f64 {
    assert_eq!(expected.len(), actual.len(), "multiset sizes differ");
    let mut used = vec![false; actual.len()];
    let mut worst = 0.0f64;
    for e in expected {
        let (k, d) = actual
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, a)| (k, (a - e).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("same length");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn max_norm(values: &[Complex]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frob(a: &CMatrix) -> f64 {
    a.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖_F / max(‖b‖_F, tiny)`.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    let num: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    num / frob(b).max(f64::MIN_POSITIVE)
}

/// Effective matrix from the hopping rule: moving one quantum from mode `b`
/// to mode `a` in class `n` lands in `n' = n + e_a − e_b` with weight
/// `n'_a·M_1[a, b]`; the diagonal is `Σ nᵢ·M_1[i, i]`.
pub fn hopping_rule_meff(m1: &CMatrix, classes: &[Vec<u32>]) -> CMatrix {
    let dim = m1.rows();
    let index: BTreeMap<&Vec<u32>, usize> = classes.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let s = classes.len();
    let mut out = CMatrix::zeros(s, s);
    for (col, n) in classes.iter().enumerate() {
        for a in 0..dim {
            out[(col, col)] += m1[(a, a)] * n[a] as f64;
            for b in 0..dim {
                if a == b || n[b] == 0 {
                    continue;
                }
                let mut to = n.clone();
                to[b] -= 1;
                to[a] += 1;
                let row = index[&to];
                out[(row, col)] += m1[(a, b)] * to[a] as f64;
            }
        }
    }
    out
}

/// `[[−iΔ, −g], [−g, iΔ]]` written out by hand.
pub fn subharmonic_by_hand(delta: f64, g: f64) -> CMatrix {
    CMatrix::from_rows(&[[c(0.0, -delta), c(-g, 0.0)], [c(-g, 0.0), c(0.0, delta)]]).unwrap()
}
