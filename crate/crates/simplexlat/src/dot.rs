//! GraphViz export.
//!
//! Nodes are named `s<index>` and labelled with their exponent vector and
//! potential; edges carry their complex weight as an `a+bi` label. `pos`
//! pins each node at its barycentric coordinates scaled to unit spacing
//! between neighbouring sites (first two coordinates; a chain gets `y = 0`).

use std::fmt::Write;

use simplexlat_core::lattice::LatticeGraph;

use crate::fmt_complex;

pub fn export_dot(g: &LatticeGraph) -> String {
    let mut out = String::new();
    let scale = g.m as f64;
    writeln!(out, "digraph simplex_lattice {{").unwrap();
    writeln!(
        out,
        "  // order {}, {} modes, source {}",
        g.m,
        g.dim(),
        g.source.as_str()
    )
    .unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for (i, s) in g.sites.iter().enumerate() {
        let x = s.position.first().copied().unwrap_or(0.0) * scale;
        let y = s.position.get(1).copied().unwrap_or(0.0) * scale;
        writeln!(
            out,
            "  s{i} [label=\"({})\\n{}\", pos=\"{x:.6},{y:.6}!\"];",
            s.exponents
                .counts()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(","),
            fmt_complex(s.potential)
        )
        .unwrap();
    }
    for e in &g.edges {
        writeln!(out, "  s{} -> s{} [label=\"{}\"];", e.from, e.to, fmt_complex(e.weight)).unwrap();
    }
    out.push_str("}\n");
    out
}
