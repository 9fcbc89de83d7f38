use simplexlat::{csv, dot, json};
use simplexlat_core::epsweep::{ddep_perturbation, log_spaced, perturb_sweep, subharmonic_m1, SubharmonicParams};
use simplexlat_core::lattice::{build_lattice, trimer_hamiltonian, trimer_m1, LatticeGraph, LatticeSource};
use simplexlat_core::moments::build_mm;
use simplexlat_core::reduction::{enumerate_classes, reduce};
use simplexlat_core::{c, Mode};

#[test]
fn lattice_json_roundtrip_is_exact() {
    let sys = trimer_m1(
        [c(0.1, -0.3), c(0.0, 0.2), c(-1.0 / 3.0, 0.0)],
        c(0.9, 0.1),
        c(1.2, 0.0),
        c(0.7, -0.4),
    );
    for mode in [Mode::Average, Mode::Normalized] {
        let g = build_lattice(&reduce(&sys, 3, mode).unwrap()).unwrap();
        let back = json::parse_lattice(&json::write_lattice(&g)).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_matrix(), g.to_matrix());
    }
}

#[test]
fn reduced_document_rebuilds_the_lattice() {
    let sys = subharmonic_m1(SubharmonicParams::new(0.25, 0.9).unwrap());
    let red = reduce(&sys, 5, Mode::Normalized).unwrap();
    let g = json::parse_reduced_lattice(&json::write_reduced(&red, sys.labels())).unwrap();
    assert_eq!(g, build_lattice(&red).unwrap());
}

#[test]
fn hamiltonian_lattice_exports() {
    let h = trimer_hamiltonian(2, [c(0.0, 0.0); 3], c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let exps = enumerate_classes(3, 2)
        .unwrap()
        .into_iter()
        .map(|cl| cl.exponents)
        .collect();
    let g = LatticeGraph::from_matrix(2, exps, &h, LatticeSource::Hamiltonian).unwrap();
    let text = dot::export_dot(&g);
    assert_eq!(text.matches(" -> ").count(), 18);
    assert!(text.contains("source hamiltonian"));
    let back = json::parse_lattice(&json::write_lattice(&g)).unwrap();
    assert_eq!(back.source, LatticeSource::Hamiltonian);
    assert_eq!(back.to_matrix(), h);
}

#[test]
fn lattice_document_validation() {
    let ok = r#"{"schema":"simplexlat/1","kind":"lattice","m":1,"dim":2,"source":"reduced",
        "sites":[{"exponents":[1,0],"potential":[0,0],"position":[0.5]},{"exponents":[0,1],"potential":[0,0],"position":[-0.5]}],
        "edges":[{"from":0,"to":1,"weight":[1,0]}]}"#;
    assert_eq!(json::parse_lattice(ok).unwrap().edges.len(), 1);
    let self_loop = ok.replace(r#""from":0,"to":1"#, r#""from":1,"to":1"#);
    assert!(json::parse_lattice(&self_loop)
        .unwrap_err()
        .to_string()
        .starts_with("edges[0]"));
    let wrong_kind = ok.replace(r#""kind":"lattice""#, r#""kind":"reduced""#);
    assert!(json::parse_lattice(&wrong_kind)
        .unwrap_err()
        .to_string()
        .starts_with("kind"));
    let bad_order = ok.replace(r#""m":1"#, r#""m":2"#);
    assert!(json::parse_lattice(&bad_order).is_err());
}

#[test]
fn sweep_table_layout() {
    let sys = subharmonic_m1(SubharmonicParams::new(1.0, 1.0).unwrap());
    let grid = log_spaced(1e-6, 1e-2, 10).unwrap();
    let sweep = perturb_sweep(&build_mm(&sys, 3).unwrap(), &ddep_perturbation(), &grid).unwrap();
    let text = csv::export_sweep_csv(&sweep);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 81);
    let field = |line: &str, k: usize| line.split(',').nth(k).unwrap().to_owned();
    assert_eq!(field(lines[1], 0).parse::<f64>().unwrap(), 1e-6);
    assert_eq!(field(lines[1], 1), "0");
    assert_eq!(field(lines[80], 0).parse::<f64>().unwrap(), 1e-2);
    assert_eq!(field(lines[80], 1), "7");
}
