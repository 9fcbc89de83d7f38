//! JSON documents. Every object written here carries
//! `"schema": "simplexlat/1"` and a `"kind"` tag; complex numbers are
//! `[re, im]` pairs and floats are printed with 17 significant digits, so a
//! write/read cycle is lossless.
//!
//! Signals are the exception: a bare array of `[re, im]` pairs.

use std::io;

use serde::Serialize;
use serde_json::Value;
use simplexlat_core::cxmat::{c, CMatrix, Complex};
use simplexlat_core::dfrft::Signal;
use simplexlat_core::lattice::{LatticeGraph, LatticeSource};
use simplexlat_core::moments::TensorEigensystem;
use simplexlat_core::{ExponentVector, ModeSystem, ReducedSystem};

use crate::FormatError;

pub const SCHEMA: &str = "simplexlat/1";

type Pair = [f64; 2];

fn pair(z: Complex) -> Pair {
    [z.re, z.im]
}

fn rows(m: &CMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&z| pair(z)).collect())
        .collect()
}

/// `{:.16e}` for every float; everything else as compact JSON.
struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", crate::fmt_f64(value))
    }
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    doc.serialize(&mut ser)
        .expect("documents hold only finite numbers and strings");
    let mut text = String::from_utf8(out).expect("serde_json writes UTF-8");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct ModeSystemDoc<'a> {
    schema: &'static str,
    kind: &'static str,
    labels: &'a [String],
    matrix: Vec<Vec<Pair>>,
}

#[derive(Serialize)]
struct ClassDoc {
    exponents: Vec<u32>,
    degeneracy: usize,
}

#[derive(Serialize)]
struct ReducedDoc<'a> {
    schema: &'static str,
    kind: &'static str,
    order: usize,
    dim: usize,
    mode: &'static str,
    labels: &'a [String],
    classes: Vec<ClassDoc>,
    meff: Vec<Vec<Pair>>,
    eigenvalues: Vec<Pair>,
    eigenvectors: Vec<Vec<Pair>>,
}

#[derive(Serialize)]
struct SiteDoc<'a> {
    exponents: &'a [u32],
    potential: Pair,
    position: &'a [f64],
}

#[derive(Serialize)]
struct EdgeDoc {
    from: usize,
    to: usize,
    weight: Pair,
}

#[derive(Serialize)]
struct LatticeDoc<'a> {
    schema: &'static str,
    kind: &'static str,
    m: usize,
    dim: usize,
    source: &'static str,
    sites: Vec<SiteDoc<'a>>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize)]
struct HamiltonianDoc {
    schema: &'static str,
    kind: &'static str,
    order: usize,
    deltas: [Pair; 3],
    alpha: Pair,
    beta: Pair,
    gamma: Pair,
    sites: Vec<Vec<u32>>,
    matrix: Vec<Vec<Pair>>,
}

#[derive(Serialize)]
struct TensorDoc {
    schema: &'static str,
    kind: &'static str,
    order: usize,
    dim: usize,
    indices: Vec<Vec<usize>>,
    eigenvalues: Vec<Pair>,
}

pub fn write_mode_system(sys: &ModeSystem) -> String {
    to_text(&ModeSystemDoc {
        schema: SCHEMA,
        kind: "mode-system",
        labels: sys.labels(),
        matrix: rows(sys.m1()),
    })
}

pub fn write_reduced(red: &ReducedSystem, labels: &[String]) -> String {
    to_text(&ReducedDoc {
        schema: SCHEMA,
        kind: "reduced",
        order: red.order,
        dim: red.dim,
        mode: red.mode.as_str(),
        labels,
        classes: red
            .classes
            .iter()
            .map(|cl| ClassDoc {
                exponents: cl.exponents.counts().to_vec(),
                degeneracy: cl.size,
            })
            .collect(),
        meff: rows(&red.meff),
        eigenvalues: red.d.iter().map(|&z| pair(z)).collect(),
        eigenvectors: rows(&red.t),
    })
}

pub fn write_lattice(g: &LatticeGraph) -> String {
    to_text(&LatticeDoc {
        schema: SCHEMA,
        kind: "lattice",
        m: g.m,
        dim: g.dim(),
        source: g.source.as_str(),
        sites: g
            .sites
            .iter()
            .map(|s| SiteDoc {
                exponents: s.exponents.counts(),
                potential: pair(s.potential),
                position: &s.position,
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeDoc {
                from: e.from,
                to: e.to,
                weight: pair(e.weight),
            })
            .collect(),
    })
}

/// Parameters of a trimer Hamiltonian document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimerParams {
    pub deltas: [Complex; 3],
    pub alpha: Complex,
    pub beta: Complex,
    pub gamma: Complex,
}

pub fn write_hamiltonian(order: usize, p: &TrimerParams, sites: &[ExponentVector], h: &CMatrix) -> String {
    to_text(&HamiltonianDoc {
        schema: SCHEMA,
        kind: "hamiltonian",
        order,
        deltas: p.deltas.map(pair),
        alpha: pair(p.alpha),
        beta: pair(p.beta),
        gamma: pair(p.gamma),
        sites: sites.iter().map(|e| e.counts().to_vec()).collect(),
        matrix: rows(h),
    })
}

/// Analytic eigenvalues of `M_m`, one per multi-index (one-based indices).
pub fn write_tensor_spectrum(es: &TensorEigensystem) -> String {
    to_text(&TensorDoc {
        schema: SCHEMA,
        kind: "tensor-spectrum",
        order: es.order(),
        dim: es.dim(),
        indices: es
            .entries()
            .iter()
            .map(|(idx, _)| idx.as_slice().iter().map(|i| i + 1).collect())
            .collect(),
        eigenvalues: es.eigenvalues().map(pair).collect(),
    })
}

pub fn write_signal(sig: &Signal) -> String {
    let samples: Vec<Pair> = sig.samples.iter().map(|&z| pair(z)).collect();
    to_text(&samples)
}

/// A JSON value together with its path from the document root, for
/// diagnostics such as `matrix[1][0][0]: expected a number`.
struct Node<'a> {
    value: &'a Value,
    path: String,
}

impl<'a> Node<'a> {
    fn root(value: &'a Value) -> Self {
        Self {
            value,
            path: String::new(),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, FormatError> {
        let path = if self.path.is_empty() {
            "<root>".to_string()
        } else {
            self.path.clone()
        };
        Err(FormatError::Field {
            path,
            message: message.into(),
        })
    }

    fn child_path(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn get(&self, key: &str) -> Result<Option<Node<'a>>, FormatError> {
        let Some(obj) = self.value.as_object() else {
            return self.fail("expected an object");
        };
        Ok(obj.get(key).map(|value| Node {
            value,
            path: self.child_path(key),
        }))
    }

    fn key(&self, key: &str) -> Result<Node<'a>, FormatError> {
        match self.get(key)? {
            Some(node) => Ok(node),
            None => self.fail(format!("missing field \"{key}\"")),
        }
    }

    fn items(&self) -> Result<Vec<Node<'a>>, FormatError> {
        let Some(arr) = self.value.as_array() else {
            return self.fail("expected an array");
        };
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, value)| Node {
                value,
                path: format!("{}[{i}]", self.path),
            })
            .collect())
    }

    /// Numbers, plus the strings `"NaN"`, `"inf"` and `"-inf"` so that
    /// non-finite input is reported as such instead of as a type error.
    fn f64(&self) -> Result<f64, FormatError> {
        let x = match self.value {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => match s.to_ascii_lowercase().as_str() {
                "nan" => Some(f64::NAN),
                "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
                "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
                _ => None,
            },
            _ => None,
        };
        match x {
            Some(x) if x.is_finite() => Ok(x),
            Some(_) => self.fail("non-finite value"),
            None => self.fail("expected a number"),
        }
    }

    fn complex(&self) -> Result<Complex, FormatError> {
        let parts = self.items()?;
        if parts.len() != 2 {
            return self.fail(format!("expected [re, im], got {} elements", parts.len()));
        }
        Ok(c(parts[0].f64()?, parts[1].f64()?))
    }

    fn usize(&self) -> Result<usize, FormatError> {
        match self.value.as_u64().and_then(|n| usize::try_from(n).ok()) {
            Some(n) => Ok(n),
            None => self.fail("expected a non-negative integer"),
        }
    }

    fn u32(&self) -> Result<u32, FormatError> {
        match self.value.as_u64().and_then(|n| u32::try_from(n).ok()) {
            Some(n) => Ok(n),
            None => self.fail("expected a non-negative 32-bit integer"),
        }
    }

    fn str(&self) -> Result<&'a str, FormatError> {
        match self.value.as_str() {
            Some(s) => Ok(s),
            None => self.fail("expected a string"),
        }
    }

    fn matrix(&self) -> Result<CMatrix, FormatError> {
        let rows = self.items()?;
        if rows.is_empty() {
            return self.fail("matrix has no rows");
        }
        let mut data = Vec::new();
        let mut width = None;
        for row in &rows {
            let cells = row.items()?;
            match width {
                None if cells.is_empty() => return row.fail("matrix row is empty"),
                None => width = Some(cells.len()),
                Some(w) if w != cells.len() => {
                    return row.fail(format!("row has {} entries, expected {w}", cells.len()))
                }
                Some(_) => {}
            }
            for cell in &cells {
                data.push(cell.complex()?);
            }
        }
        let cols = width.expect("at least one row");
        Ok(CMatrix::from_vec(rows.len(), cols, data)?)
    }

    fn square_matrix(&self) -> Result<CMatrix, FormatError> {
        let m = self.matrix()?;
        if !m.is_square() {
            return self.fail(format!("matrix must be square, got {}x{}", m.rows(), m.cols()));
        }
        Ok(m)
    }

    fn exponents(&self) -> Result<ExponentVector, FormatError> {
        let counts = self.items()?.iter().map(Node::u32).collect::<Result<Vec<_>, _>>()?;
        ExponentVector::new(counts).or_else(|e| self.fail(e.to_string()))
    }
}

fn parse(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Rejects a document whose `schema` (if present) or `kind` (if present and
/// `kind` is given) does not match.
fn check_header(root: &Node<'_>, kind: Option<&str>) -> Result<(), FormatError> {
    if let Some(schema) = root.get("schema")? {
        let s = schema.str()?;
        if s != SCHEMA {
            return schema.fail(format!("unsupported schema \"{s}\", expected \"{SCHEMA}\""));
        }
    }
    if let (Some(want), Some(node)) = (kind, root.get("kind")?) {
        let got = node.str()?;
        if got != want {
            return node.fail(format!("expected a \"{want}\" document, got \"{got}\""));
        }
    }
    Ok(())
}

/// `{"labels": [...], "matrix": [[[re, im], ...], ...]}`. Labels are
/// optional and default to `"1"`, `"2"`, ….
pub fn parse_m1_json(text: &str) -> Result<ModeSystem, FormatError> {
    let value = parse(text)?;
    let root = Node::root(&value);
    check_header(&root, Some("mode-system"))?;
    let matrix = root.key("matrix")?.square_matrix()?;
    match root.get("labels")? {
        None => Ok(ModeSystem::unlabeled(matrix)?),
        Some(node) => {
            let items = node.items()?;
            if items.len() != matrix.rows() {
                return node.fail(format!(
                    "{} labels for a {}x{} matrix",
                    items.len(),
                    matrix.rows(),
                    matrix.rows()
                ));
            }
            let labels = items
                .iter()
                .map(|n| n.str().map(str::to_string))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ModeSystem::new(matrix, labels)?)
        }
    }
}

/// Any document with a square `"matrix"` field.
pub fn parse_matrix_json(text: &str) -> Result<CMatrix, FormatError> {
    let value = parse(text)?;
    let root = Node::root(&value);
    check_header(&root, None)?;
    root.key("matrix")?.square_matrix()
}

/// Rebuilds the lattice of a `reduced` document.
pub fn parse_reduced_lattice(text: &str) -> Result<LatticeGraph, FormatError> {
    let value = parse(text)?;
    let root = Node::root(&value);
    check_header(&root, Some("reduced"))?;
    let order = root.key("order")?.usize()?;
    let classes = root.key("classes")?.items()?;
    let exps = classes
        .iter()
        .map(|cl| cl.key("exponents")?.exponents())
        .collect::<Result<Vec<_>, _>>()?;
    let meff = root.key("meff")?.square_matrix()?;
    Ok(LatticeGraph::from_matrix(order, exps, &meff, LatticeSource::Reduced)?)
}

pub fn parse_lattice(text: &str) -> Result<LatticeGraph, FormatError> {
    let value = parse(text)?;
    let root = Node::root(&value);
    check_header(&root, Some("lattice"))?;
    let m = root.key("m")?.usize()?;
    let source_node = root.key("source")?;
    let source = match source_node.str()? {
        "reduced" => LatticeSource::Reduced,
        "hamiltonian" => LatticeSource::Hamiltonian,
        other => return source_node.fail(format!("unknown source \"{other}\"")),
    };
    let site_nodes = root.key("sites")?.items()?;
    if site_nodes.is_empty() {
        return root.key("sites")?.fail("lattice has no sites");
    }
    let n = site_nodes.len();
    let mut matrix = CMatrix::zeros(n, n);
    let mut exps = Vec::with_capacity(n);
    for (i, s) in site_nodes.iter().enumerate() {
        exps.push(s.key("exponents")?.exponents()?);
        matrix[(i, i)] = s.key("potential")?.complex()?;
    }
    for e in root.key("edges")?.items()? {
        let (from_node, to_node) = (e.key("from")?, e.key("to")?);
        let (from, to) = (from_node.usize()?, to_node.usize()?);
        if from >= n || to >= n || from == to {
            return e.fail(format!("edge {from} -> {to} is not between two distinct sites of {n}"));
        }
        matrix[(to, from)] = e.key("weight")?.complex()?;
    }
    let graph = LatticeGraph::from_matrix(m, exps, &matrix, source)?;
    Ok(graph)
}

pub fn parse_signal_json(text: &str) -> Result<Signal, FormatError> {
    let value = parse(text)?;
    let root = Node::root(&value);
    let samples = root.items()?.iter().map(Node::complex).collect::<Result<Vec<_>, _>>()?;
    if samples.is_empty() {
        return root.fail("signal has no samples");
    }
    Ok(Signal::new(samples))
}
