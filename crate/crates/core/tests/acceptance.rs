//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.
//!
//!     cargo test -p simplexlat-core --test acceptance

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use simplexlat_core::cxmat::{eigenvalues, matmul, spectral_radius_bound};
use simplexlat_core::dfrft::{jx_matrix, similarity_s, sylvester_matrix, FrftPlan, JxSpec, Signal};
use simplexlat_core::epsweep::{
    ddep_perturbation, fit_splitting_exponent, log_spaced, perturb_sweep, subharmonic_m1, SubharmonicParams,
};
use simplexlat_core::lattice::{asymmetric_m1_probe, build_lattice, trimer_hamiltonian, trimer_m1};
use simplexlat_core::moments::{build_mm, degeneracy, tensor_eigensystem};
use simplexlat_core::reduction::{direct_collapse, enumerate_classes, reduce, s_dim};
use simplexlat_core::{c, CMatrix, Complex, ExponentVector, Mode, ModeSystem};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Draws `(Δ, g)` away from the exceptional point `g = |Δ|`.
fn draw_subharmonic(rng: &mut rand_chacha::ChaCha8Rng) -> (f64, f64) {
    loop {
        let delta = rng.gen_range(-2.0..2.0);
        let g = rng.gen_range(0.2..2.5);
        if (g - f64::abs(delta)).abs() > 0.1 {
            return (delta, g);
        }
    }
}

fn golden_matrices() -> Check {
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (d, g) = draw_subharmonic(&mut rng);
        let sys = subharmonic_m1(SubharmonicParams::new(d, g).map_err(err)?);
        let (z, i) = (c(0.0, 0.0), c(0.0, 1.0));
        let gg = c(-g, 0.0);
        let m2_expected = CMatrix::from_rows(&[
            [i * (-2.0 * d), gg, gg, z],
            [gg, z, z, gg],
            [gg, z, z, gg],
            [z, gg, gg, i * (2.0 * d)],
        ])
        .unwrap();
        let m2 = build_mm(&sys, 2).map_err(err)?;
        ensure(m2 == m2_expected, || format!("M2 differs at Δ={d}, g={g}"))?;

        let avg_expected =
            CMatrix::from_rows(&[[i * (-2.0 * d), gg * 2.0, z], [gg, z, gg], [z, gg * 2.0, i * (2.0 * d)]]).unwrap();
        let r2 = 2f64.sqrt();
        let sym_expected = CMatrix::from_rows(&[
            [i * (-2.0 * d), gg * r2, z],
            [gg * r2, z, gg * r2],
            [z, gg * r2, i * (2.0 * d)],
        ])
        .unwrap();
        let avg = reduce(&sys, 2, Mode::Average).map_err(err)?.meff;
        let sym = reduce(&sys, 2, Mode::Normalized).map_err(err)?.meff;
        let e_avg = avg.max_abs_diff(&avg_expected) / frob(&avg_expected);
        let e_sym = sym.max_abs_diff(&sym_expected) / frob(&sym_expected);
        ensure(e_avg <= 1e-12 && e_sym <= 1e-12, || {
            format!("reduced M2 off by {e_avg:.2e} (average) / {e_sym:.2e} (normalized) at Δ={d}, g={g}")
        })?;
        worst = worst.max(e_avg).max(e_sym);
    }
    Ok(format!("50 draws, worst entry error {worst:.1e}·norm"))
}

fn harmonic_spectrum() -> Check {
    let mut rng = rng(2);
    let (mut worst_mm, mut worst_meff): (f64, f64) = (0.0, 0.0);
    let mut checked = 0;
    for _ in 0..100 {
        let dim: usize = rng.gen_range(2..=4);
        let max_m = (1u32..).take_while(|&m| dim.pow(m) <= 256).last().unwrap() as usize;
        let m = rng.gen_range(1..=max_m);
        let sys = ModeSystem::unlabeled(random_matrix(&mut rng, dim)).unwrap();

        let analytic: Vec<Complex> = tensor_eigensystem(&sys, m).map_err(err)?.eigenvalues().collect();
        let qr = eigenvalues(&build_mm(&sys, m).map_err(err)?).map_err(err)?;
        let e = multiset_distance(&analytic, &qr) / max_norm(&analytic);
        ensure(e <= 1e-7, || format!("M_m spectrum off by {e:.2e} (dim {dim}, m {m})"))?;

        let red = reduce(&sys, m, Mode::Average).map_err(err)?;
        let eff = eigenvalues(&red.meff).map_err(err)?;
        let e2 = multiset_distance(&red.d, &eff) / max_norm(&red.d);
        ensure(e2 <= 1e-7, || {
            format!("meff spectrum off by {e2:.2e} (dim {dim}, m {m})")
        })?;
        worst_mm = worst_mm.max(e);
        worst_meff = worst_meff.max(e2);
        checked += 1;
    }
    Ok(format!(
        "{checked} systems, worst relative error {worst_mm:.1e} (M_m) / {worst_meff:.1e} (meff)"
    ))
}

fn cross_oracle_reduction() -> Check {
    let mut rng = rng(3);
    let mut systems = Vec::new();
    for _ in 0..40 {
        let dim = rng.gen_range(2..=4);
        let max_m = if dim == 2 { 6 } else { 4 };
        systems.push((
            ModeSystem::unlabeled(random_matrix(&mut rng, dim)).unwrap(),
            rng.gen_range(1..=max_m),
        ));
    }
    for m in 1..=4 {
        systems.push((subharmonic_m1(SubharmonicParams::new(0.4, 1.3).unwrap()), m));
        let deltas = [
            random_complex(&mut rng, 1.0),
            random_complex(&mut rng, 1.0),
            random_complex(&mut rng, 1.0),
        ];
        systems.push((
            trimer_m1(
                deltas,
                random_complex(&mut rng, 1.0),
                random_complex(&mut rng, 1.0),
                random_complex(&mut rng, 1.0),
            ),
            m,
        ));
    }
    let mut worst: f64 = 0.0;
    for (sys, m) in &systems {
        for mode in [Mode::Average, Mode::Normalized] {
            let direct = direct_collapse(sys, *m, mode).map_err(err)?;
            let red = reduce(sys, *m, mode).map_err(err)?.meff;
            let e = rel_diff(&red, &direct);
            ensure(e <= 1e-9, || {
                format!("{} mode off by {e:.2e} (dim {}, m {m})", mode.as_str(), sys.dim())
            })?;
            worst = worst.max(e);
        }
    }
    Ok(format!(
        "{} systems x 2 modes, worst relative error {worst:.1e}",
        systems.len()
    ))
}

fn hamiltonian_equivalence() -> Check {
    let mut rng = rng(4);
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for _ in 0..4 {
            let deltas = [
                random_complex(&mut rng, 1.0),
                random_complex(&mut rng, 1.0),
                random_complex(&mut rng, 1.0),
            ];
            let (al, be, ga) = (
                random_complex(&mut rng, 1.0),
                random_complex(&mut rng, 1.0),
                random_complex(&mut rng, 1.0),
            );
            let h = trimer_hamiltonian(n, deltas, al, be, ga).map_err(err)?;
            let meff = reduce(&trimer_m1(deltas, al, be, ga), n, Mode::Average)
                .map_err(err)?
                .meff;
            let e = rel_diff(&meff, &h);
            ensure(e <= 1e-9, || format!("N={n}: relative error {e:.2e}"))?;
            worst = worst.max(e);
        }
    }
    Ok(format!("N=1..5, 4 draws each, worst relative error {worst:.1e}"))
}

fn splitting_exponents() -> Check {
    let sys = subharmonic_m1(SubharmonicParams::new(1.0, 1.0).unwrap());
    let m3 = build_mm(&sys, 3).map_err(err)?;
    let radius = spectral_radius_bound(&m3).map_err(err)?;
    let scale = frob(&m3);
    ensure(radius <= 1e-8 * scale, || {
        format!("spectral radius bound {radius:.2e} at ε=0")
    })?;

    let grid = log_spaced(1e-6, 1e-2, 50).map_err(err)?;
    let sweep = perturb_sweep(&m3, &ddep_perturbation(), &grid).map_err(err)?;
    let mut exps: Vec<f64> = (0..sweep.track_count())
        .map(|k| fit_splitting_exponent(&sweep, k).map(|f| f.exponent))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    exps.sort_by(f64::total_cmp);
    let quarter = exps.iter().filter(|e| (*e - 0.25).abs() <= 0.05).count();
    let half = exps.iter().filter(|e| (*e - 0.5).abs() <= 0.05).count();
    let shown: Vec<String> = exps.iter().map(|e| format!("{e:.3}")).collect();
    ensure(quarter == 4 && half == 4, || {
        format!("exponents [{}]", shown.join(", "))
    })?;
    Ok(format!("radius bound {radius:.1e}, exponents [{}]", shown.join(", ")))
}

fn jx_correspondence() -> Check {
    let mut rng = rng(6);
    let mut worst_sim: f64 = 0.0;
    let mut worst_ft: f64 = 0.0;
    for n in 1..=64usize {
        let alpha = rng.gen_range(0.2..2.0);
        let a = c(alpha, 0.0);
        let spec = JxSpec::new(n, a).map_err(err)?;
        let syl = sylvester_matrix(n, a);
        let s = similarity_s(&syl).map_err(err)?;
        let s_inv = CMatrix::from_diag(&s.diagonal().iter().map(|z| z.inv()).collect::<Vec<_>>());
        let transformed = matmul(&matmul(&s_inv, &syl).unwrap(), &s).unwrap();
        let jx = jx_matrix(&spec);
        let e = rel_diff(&transformed, &jx);
        ensure(e <= 1e-10, || format!("N={n}: similarity off by {e:.2e}"))?;
        worst_sim = worst_sim.max(e);

        let mut vals: Vec<f64> = eigenvalues(&jx).map_err(err)?.iter().map(|z| z.re).collect();
        vals.sort_by(f64::total_cmp);
        for w in vals.windows(2) {
            let gap_err = ((w[1] - w[0]) - 2.0 * alpha).abs() / (2.0 * alpha);
            ensure(gap_err <= 1e-9, || format!("N={n}: ladder gap off by {gap_err:.2e}"))?;
        }

        let plan = FrftPlan::new(spec).map_err(err)?;
        let sig = Signal::new((0..=n).map(|_| random_complex(&mut rng, 1.0)).collect());
        let norm = sig.norm();
        let dist = |x: &Signal, y: &Signal| -> f64 {
            x.samples
                .iter()
                .zip(&y.samples)
                .map(|(p, q)| (p - q).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / norm
        };
        let (p, q) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let ident = dist(&plan.apply(&sig, 0.0).map_err(err)?, &sig);
        let step = plan.apply(&plan.apply(&sig, p).map_err(err)?, q).map_err(err)?;
        let additive = dist(&step, &plan.apply(&sig, p + q).map_err(err)?);
        let norm_err = (plan.apply(&sig, p).map_err(err)?.norm() - norm).abs() / norm;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let flipped = Signal::new(sig.samples.iter().map(|z| z * sign).collect());
        let period = dist(&plan.apply(&sig, 4.0).map_err(err)?, &flipped);
        let e = ident.max(additive).max(norm_err).max(period);
        ensure(e <= 1e-9, || {
            format!("N={n}: identity {ident:.1e}, additivity {additive:.1e}, norm {norm_err:.1e}, period {period:.1e}")
        })?;
        worst_ft = worst_ft.max(e);
    }
    Ok(format!(
        "N=1..64, similarity {worst_sim:.1e}, transform identities {worst_ft:.1e}"
    ))
}

fn combinatorics() -> Check {
    let mut vectors = 0;
    for dim in 1..=4usize {
        for m in 1..=6usize {
            let tally = brute_force_counts(dim, m);
            let mut total: u64 = 0;
            for (counts, &expected) in &tally {
                let got = degeneracy(&ExponentVector::new(counts.clone()).unwrap()).map_err(err)?;
                ensure(got == expected, || {
                    format!("degeneracy of {counts:?}: {got} vs {expected}")
                })?;
                total += got;
                vectors += 1;
            }
            ensure(total == (dim as u64).pow(m as u32), || {
                format!("dim {dim}, m {m}: total {total}")
            })?;
            let classes: Vec<Vec<u32>> = enumerate_classes(dim, m)
                .map_err(err)?
                .into_iter()
                .map(|c| c.exponents.counts().to_vec())
                .collect();
            let mut sorted = classes.clone();
            sorted.sort();
            ensure(sorted == tally.keys().cloned().collect::<Vec<_>>(), || {
                format!("dim {dim}, m {m}: class set")
            })?;
            ensure(s_dim(dim, m).map_err(err)? == tally.len(), || {
                format!("dim {dim}, m {m}: s_dim")
            })?;
        }
    }
    for n in 1..=40usize {
        ensure(s_dim(3, n).map_err(err)? == (n + 1) * (n + 2) / 2, || {
            format!("s_dim(3, {n})")
        })?;
        ensure(s_dim(2, n).map_err(err)? == n + 1, || format!("s_dim(2, {n})"))?;
    }
    Ok(format!("{vectors} exponent vectors match brute-force counts"))
}

fn eta_probe_locality() -> Check {
    let mut rng = rng(8);
    let mut families = 0;
    for draw in 0..6 {
        let deltas = [
            random_complex(&mut rng, 0.5),
            random_complex(&mut rng, 0.5),
            random_complex(&mut rng, 0.5),
        ];
        let alpha = c(rng.gen_range(0.5..1.5), rng.gen_range(-0.3..0.3));
        let (be, ga) = (c(rng.gen_range(0.5..1.5), 0.0), c(rng.gen_range(0.5..1.5), 0.0));
        let eta = c(rng.gen_range(0.2..2.0), rng.gen_range(-0.5..0.5));
        let sys = trimer_m1(deltas, alpha, be, ga);
        for m in [2usize, 3] {
            let base = build_lattice(&reduce(&sys, m, Mode::Average).map_err(err)?).map_err(err)?;
            let probed = asymmetric_m1_probe(&sys, 0, 1, eta, m).map_err(err)?;
            let (old, new) = (base.to_matrix(), probed.to_matrix());
            let ratio = eta / alpha;
            let mut in_family = 0;
            for from in 0..old.rows() {
                for to in 0..old.rows() {
                    let (w0, w1) = (old[(to, from)], new[(to, from)]);
                    let edge = simplexlat_core::lattice::DirectedEdge { from, to, weight: w0 };
                    let expected = if from != to && base.in_family(&edge, 0, 1) {
                        in_family += 1;
                        w0 * ratio
                    } else {
                        w0
                    };
                    let e = (w1 - expected).norm() / expected.norm().max(w1.norm()).max(f64::MIN_POSITIVE);
                    ensure(e <= 1e-12 || (w1 == expected), || {
                        format!("draw {draw}, m {m}: entry ({to},{from}) relative error {e:.2e}")
                    })?;
                }
            }
            let family_size = base.edges.iter().filter(|e| base.in_family(e, 0, 1)).count();
            ensure(in_family == family_size && family_size == m * (m + 1) / 2, || {
                format!("m {m}: family has {family_size} edges, checked {in_family}")
            })?;
            families += 1;
        }
    }
    Ok(format!("{families} probed lattices, only the M1(1,2) family rescaled"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 8] = [
        (
            "1 golden second-order matrices",
            Duration::from_secs(1),
            golden_matrices,
        ),
        (
            "2 harmonic spectrum oracle",
            Duration::from_secs(120),
            harmonic_spectrum,
        ),
        (
            "3 cross-oracle reduction",
            Duration::from_secs(60),
            cross_oracle_reduction,
        ),
        (
            "4 trimer Hamiltonian equivalence",
            Duration::from_secs(30),
            hamiltonian_equivalence,
        ),
        (
            "5 splitting exponents at the DDEP",
            Duration::from_secs(10),
            splitting_exponents,
        ),
        (
            "6 Sylvester/Jx correspondence and transform",
            Duration::from_secs(30),
            jx_correspondence,
        ),
        ("7 degeneracy combinatorics", Duration::from_secs(5), combinatorics),
        ("8 eta-probe locality", Duration::from_secs(5), eta_probe_locality),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > budget;
        match (&outcome, over) {
            (Ok(detail), false) => println!("PASS  criterion {name}: {detail} [{elapsed:.2?}]"),
            (Ok(detail), true) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}, but took {elapsed:.2?} > {budget:?}")
            }
            (Err(why), _) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} [{elapsed:.2?}]")
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
