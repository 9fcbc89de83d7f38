//! Directed weighted simplex lattices.
//!
//! Sites are permutation classes, labelled by their exponent vectors. The
//! matrix convention is `row = to`, `column = from`: the weight of the edge
//! `from → to` is `M_eff[to, from]`, and the site potential is the diagonal.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cxmat::{c, frob_norm, CMatrix, Complex};
use crate::error::{Error, Result};
use crate::moments::{ExponentVector, ModeSystem};
use crate::reduction::{enumerate_classes, reduce, Mode, ReducedSystem, ZERO_SNAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeSource {
    Reduced,
    Hamiltonian,
}

impl LatticeSource {
    pub fn as_str(self) -> &'static str {
        match self {
            LatticeSource::Reduced => "reduced",
            LatticeSource::Hamiltonian => "hamiltonian",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSite {
    pub exponents: ExponentVector,
    pub potential: Complex,
    /// Barycentric embedding in `dim − 1` dimensions (unit-edge simplex).
    pub position: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedEdge {
    pub from: usize,
    pub to: usize,
    pub weight: Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGraph {
    pub m: usize,
    pub sites: Vec<LatticeSite>,
    pub edges: Vec<DirectedEdge>,
    pub source: LatticeSource,
}

impl LatticeGraph {
    /// Reads sites and edges off a square matrix. Off-diagonal entries below
    /// the zero-snap threshold are not edges.
    pub fn from_matrix(
        m: usize,
        exponents: Vec<ExponentVector>,
        matrix: &CMatrix,
        source: LatticeSource,
    ) -> Result<Self> {
        matrix.require_square()?;
        if exponents.len() != matrix.rows() {
            return Err(Error::DimensionMismatch {
                op: "LatticeGraph::from_matrix",
                detail: format!(
                    "{} sites for a {}x{} matrix",
                    exponents.len(),
                    matrix.rows(),
                    matrix.cols()
                ),
            });
        }
        let dim = exponents[0].dim();
        if let Some(bad) = exponents.iter().find(|e| e.dim() != dim || e.order() != m) {
            return Err(Error::InvalidArgument(format!(
                "site exponents ({bad}) do not sum to order {m}"
            )));
        }
        let vertices = simplex_vertices(dim);
        let sites = exponents
            .into_iter()
            .enumerate()
            .map(|(i, e)| LatticeSite {
                position: barycentric_position(&e, &vertices),
                potential: matrix[(i, i)],
                exponents: e,
            })
            .collect();
        let tol = ZERO_SNAP * frob_norm(matrix);
        let n = matrix.rows();
        let mut edges = Vec::new();
        for from in 0..n {
            for to in 0..n {
                let w = matrix[(to, from)];
                if to != from && w != c(0.0, 0.0) && w.norm() >= tol {
                    edges.push(DirectedEdge { from, to, weight: w });
                }
            }
        }
        Ok(Self {
            m,
            sites,
            edges,
            source,
        })
    }

    pub fn dim(&self) -> usize {
        self.sites[0].exponents.dim()
    }

    /// Adjacency matrix: potentials on the diagonal, `[to, from] = weight`.
    pub fn to_matrix(&self) -> CMatrix {
        let n = self.sites.len();
        let mut out = CMatrix::zeros(n, n);
        for (i, s) in self.sites.iter().enumerate() {
            out[(i, i)] = s.potential;
        }
        for e in &self.edges {
            out[(e.to, e.from)] = e.weight;
        }
        out
    }

    /// `to.exponents − from.exponents`.
    pub fn edge_direction(&self, e: &DirectedEdge) -> Vec<i64> {
        let a = self.sites[e.from].exponents.counts();
        let b = self.sites[e.to].exponents.counts();
        b.iter().zip(a).map(|(&t, &f)| t as i64 - f as i64).collect()
    }

    /// Whether `e` belongs to the family fed by the entry `M_1[row, col]`:
    /// edges that move one quantum out of mode `col` into mode `row`.
    pub fn in_family(&self, e: &DirectedEdge, row: usize, col: usize) -> bool {
        let dir = self.edge_direction(e);
        dir.iter().enumerate().all(|(k, &d)| {
            let expect = (k == row) as i64 - (k == col) as i64;
            d == expect
        })
    }

    pub fn out_neighbors(&self, site: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.from == site).map(|e| e.to).collect()
    }

    pub fn site_index(&self, exponents: &[u32]) -> Option<usize> {
        self.sites.iter().position(|s| s.exponents.counts() == exponents)
    }
}

/// Vertices of a unit-edge regular simplex with `dim` corners in `dim − 1`
/// dimensions, via the Helmert basis of the hyperplane `Σx = const`.
pub fn simplex_vertices(dim: usize) -> Vec<Vec<f64>> {
    (0..dim)
        .map(|i| {
            (1..dim)
                .map(|k| {
                    let norm = ((k * (k + 1)) as f64).sqrt() * core::f64::consts::SQRT_2;
                    let u = if i < k {
                        1.0
                    } else if i == k {
                        -(k as f64)
                    } else {
                        0.0
                    };
                    u / norm
                })
                .collect()
        })
        .collect()
}

/// `Σ (nᵢ/m)·vertexᵢ`.
pub fn barycentric_position(ev: &ExponentVector, vertices: &[Vec<f64>]) -> Vec<f64> {
    let m = ev.order() as f64;
    let d = vertices.first().map_or(0, |v| v.len());
    let mut pos = vec![0.0; d];
    for (&n, v) in ev.counts().iter().zip(vertices) {
        for (p, x) in pos.iter_mut().zip(v) {
            *p += n as f64 / m * x;
        }
    }
    pos
}

pub fn build_lattice(red: &ReducedSystem) -> Result<LatticeGraph> {
    let exps = red.classes.iter().map(|c| c.exponents.clone()).collect();
    LatticeGraph::from_matrix(red.order, exps, &red.meff, LatticeSource::Reduced)
}

/// Symmetric three-mode `M_1` with on-site terms `Δ₁, Δ₂, Δ₃` and couplings
/// `α` (1–2), `β` (2–3), `γ` (1–3).
pub fn trimer_m1(deltas: [Complex; 3], alpha: Complex, beta: Complex, gamma: Complex) -> ModeSystem {
    let [d1, d2, d3] = deltas;
    let m1 = CMatrix::from_rows(&[[d1, alpha, gamma], [alpha, d2, beta], [gamma, beta, d3]]).expect("3x3 rows");
    ModeSystem::new(m1, vec!["a1".into(), "a2".into(), "a3".into()]).expect("three labels")
}

/// Triangular-lattice Hamiltonian of order `n`, assembled site by site.
///
/// Site `(j, k, l)` with `j + k + l = n` carries `jΔ₁ + kΔ₂ + lΔ₃`. Each of
/// its six neighbours differs by moving one quantum between two modes; the
/// hop into site `x` that adds a quantum to mode `a` and removes one from
/// mode `b` has amplitude `f^ξ_q = q·ξ` with `q = x_a` and `ξ` the `a–b`
/// coupling. Rows follow [`enumerate_classes`] order.
pub fn trimer_hamiltonian(
    n: usize,
    deltas: [Complex; 3],
    alpha: Complex,
    beta: Complex,
    gamma: Complex,
) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("trimer order must be >= 1".into()));
    }
    let sites: Vec<ExponentVector> = enumerate_classes(3, n)?.into_iter().map(|c| c.exponents).collect();
    let index: BTreeMap<Vec<u32>, usize> = sites
        .iter()
        .enumerate()
        .map(|(i, e)| (e.counts().to_vec(), i))
        .collect();
    let coupling = |a: usize, b: usize| match (a.min(b), a.max(b)) {
        (0, 1) => alpha,
        (1, 2) => beta,
        (0, 2) => gamma,
        _ => unreachable!("distinct modes"),
    };

    let mut h = CMatrix::zeros(sites.len(), sites.len());
    for (row, x) in sites.iter().enumerate() {
        let counts = x.counts();
        h[(row, row)] = counts.iter().zip(deltas).map(|(&q, d)| d * q as f64).sum();
        for a in 0..3 {
            for b in 0..3 {
                if a == b || counts[a] == 0 {
                    continue;
                }
                let mut y = counts.to_vec();
                y[a] -= 1;
                y[b] += 1;
                let col = index[&y];
                h[(row, col)] = coupling(a, b) * counts[a] as f64;
            }
        }
    }
    Ok(h)
}

/// Replaces `M_1[row, col]` by `eta`, reduces (average mode) and builds the
/// lattice.
pub fn asymmetric_m1_probe(sys: &ModeSystem, row: usize, col: usize, eta: Complex, m: usize) -> Result<LatticeGraph> {
    let probed = sys.with_entry(row, col, eta)?;
    build_lattice(&reduce(&probed, m, Mode::Average)?)
}
