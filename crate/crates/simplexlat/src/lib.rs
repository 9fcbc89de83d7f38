//! File formats and the command-line front end for `simplexlat-core`.
//!
//! * [`json`]: versioned JSON documents (mode systems, reduced systems,
//!   lattices, Hamiltonians) and signal arrays.
//! * [`dot`]: GraphViz export of lattices.
//! * [`csv`]: spectrum and sweep tables.
//! * [`cli`]: the `simplexlat` binary.

pub mod cli;
pub mod csv;
pub mod dot;
pub mod json;

use simplexlat_core::Complex;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Core(#[from] simplexlat_core::Error),
}

/// 17 significant digits in exponent form; round-trips every finite `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `a+bi` / `a-bi` with the shortest round-trip representation of each part.
pub fn fmt_complex(z: Complex) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    format!("{}{im:+}i", z.re)
}

/// Parses `3`, `-2.5`, `1+2i`, `1.5e-3-0.25i`, `2i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
    let bad = || format!("cannot parse \"{s}\" as a complex number (try 1.5, 2i or 1-0.5i)");
    if t.is_empty() {
        return Err(bad());
    }
    let finite = |z: Complex| {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(bad())
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map(|re| Complex::new(re, 0.0))
            .map_err(|_| bad())
            .and_then(finite);
    };
    // split at the last sign that is not the leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |part: &str| -> Result<f64, String> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    let z = match split {
        Some(k) => Complex::new(body[..k].parse::<f64>().map_err(|_| bad())?, imag(&body[k..])?),
        None => Complex::new(0.0, imag(body)?),
    };
    finite(z)
}
