//! Fixed-header CSV tables.
//!
//! * spectrum: `index,re,im,class_exponents,degeneracy`. Exponents are
//!   space-separated counts. Reduced tables have one row per class, full
//!   tables one row per multi-index of `M_m` (flat, zero-based order).
//! * sweep: `epsilon,track_id,re,im`, grouped by ε in ascending order.

use std::fmt::Write;

use simplexlat_core::epsweep::SweepResult;
use simplexlat_core::moments::{degeneracy, multiindex_to_exponents, TensorEigensystem};
use simplexlat_core::{Complex, ReducedSystem};

use crate::fmt_f64;

pub const SPECTRUM_HEADER: &str = "index,re,im,class_exponents,degeneracy";
pub const SWEEP_HEADER: &str = "epsilon,track_id,re,im";

fn spectrum_row(out: &mut String, index: usize, z: Complex, exps: &str, deg: u64) {
    writeln!(out, "{index},{},{},{exps},{deg}", fmt_f64(z.re), fmt_f64(z.im)).unwrap();
}

pub fn export_spectrum_csv(red: &ReducedSystem) -> String {
    let mut out = format!("{SPECTRUM_HEADER}\n");
    for (k, (cl, &d)) in red.classes.iter().zip(&red.d).enumerate() {
        spectrum_row(&mut out, k, d, &cl.exponents.to_string(), cl.size as u64);
    }
    out
}

pub fn export_full_spectrum_csv(es: &TensorEigensystem) -> simplexlat_core::Result<String> {
    let mut out = format!("{SPECTRUM_HEADER}\n");
    for (k, (idx, lambda)) in es.entries().iter().enumerate() {
        let exps = multiindex_to_exponents(idx, es.dim());
        spectrum_row(&mut out, k, *lambda, &exps.to_string(), degeneracy(&exps)?);
    }
    Ok(out)
}

pub fn export_sweep_csv(sweep: &SweepResult) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for (step, eps) in sweep.epsilons.iter().enumerate() {
        for (track, values) in sweep.matched_tracks.iter().enumerate() {
            let z = values[step];
            writeln!(out, "{},{track},{},{}", fmt_f64(*eps), fmt_f64(z.re), fmt_f64(z.im)).unwrap();
        }
    }
    out
}
