//! `simplexlat` command line.
//!
//! Exit status: 0 on success, 1 when the computation itself fails (for
//! example a reduction at an exceptional point), 2 for usage errors and
//! unreadable or malformed input files.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use simplexlat_core::dfrft::{FrftPlan, JxSpec};
use simplexlat_core::epsweep::{
    ddep_perturbation, fit_splitting_exponent, log_spaced, perturb_sweep, subharmonic_m1, SubharmonicParams,
};
use simplexlat_core::lattice::{build_lattice, trimer_hamiltonian, trimer_m1, LatticeGraph};
use simplexlat_core::moments::{build_mm_capped, tensor_eigensystem_capped, DEFAULT_SIZE_CAP};
use simplexlat_core::reduction::{enumerate_classes_capped, reduce_capped};
use simplexlat_core::{c, Complex, Mode, ModeSystem};

use crate::{csv, dot, json, parse_complex, FormatError};

/// Overrides the largest dense matrix dimension the tool will build.
pub const SIZE_CAP_ENV: &str = "SIMPLEXLAT_SIZE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "simplexlat",
    version,
    about = "Simplex lattices from moment dynamics of quadratic bosonic systems"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of M_m (full) or of the reduced matrix (--reduced) as CSV.
    Spectrum(SpectrumArgs),
    /// Reduced effective matrix, class list and eigen-decomposition as JSON.
    Reduce(ReduceArgs),
    /// Lattice graph of a reduced system as DOT and/or JSON.
    Lattice(LatticeArgs),
    /// Explicit three-mode triangular-lattice Hamiltonian as JSON.
    Hamiltonian(HamiltonianArgs),
    /// Eigenvalue tracks of M_m + εP over a logarithmic ε grid as CSV.
    Sweep(SweepArgs),
    /// Discrete fractional Fourier transform of a signal.
    Dfrft(DfrftArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// M_1 = [[-iΔ, -g], [-g, iΔ]] (uses --delta, --g).
    Subharmonic,
    /// Three modes with couplings α, β, γ (uses --alpha, --beta, --gamma, --deltas).
    SymmetricTrimer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Average,
    Normalized,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Average => Mode::Average,
            ModeArg::Normalized => Mode::Normalized,
        }
    }
}

fn complex_arg(s: &str) -> Result<Complex, String> {
    parse_complex(s)
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// First-order matrix file: {"labels": [...], "matrix": [[[re, im], ...], ...]}.
    #[arg(
        long,
        value_name = "FILE",
        required_unless_present = "preset",
        conflicts_with = "preset"
    )]
    pub m1: Option<PathBuf>,
    /// Built-in first-order system.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Detuning Δ of the subharmonic preset.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub delta: f64,
    /// Pump coupling g of the subharmonic preset.
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    /// Trimer coupling between modes 1 and 2.
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub alpha: Complex,
    /// Trimer coupling between modes 2 and 3.
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub beta: Complex,
    /// Trimer coupling between modes 1 and 3.
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub gamma: Complex,
    /// Trimer on-site terms Δ₁,Δ₂,Δ₃ (comma-separated, default 0,0,0).
    #[arg(long, value_delimiter = ',', value_parser = complex_arg, allow_hyphen_values = true)]
    pub deltas: Vec<Complex>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub order: usize,
    /// One row per permutation class instead of per multi-index.
    #[arg(long)]
    pub reduced: bool,
    #[arg(long, value_enum, default_value = "average")]
    pub mode: ModeArg,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "average")]
    pub mode: ModeArg,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("outputs").required(true).multiple(true).args(["dot", "json"])))]
pub struct LatticeArgs {
    /// Output of the `reduce` command; replaces the system options.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["m1", "preset"])]
    pub reduced: Option<PathBuf>,
    /// First-order matrix file.
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    pub m1: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub alpha: Complex,
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub beta: Complex,
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub gamma: Complex,
    #[arg(long, value_delimiter = ',', value_parser = complex_arg, allow_hyphen_values = true)]
    pub deltas: Vec<Complex>,
    #[arg(long, required_unless_present = "reduced")]
    pub order: Option<usize>,
    #[arg(long, value_enum, default_value = "average")]
    pub mode: ModeArg,
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HamiltonianArgs {
    #[arg(long)]
    pub order: usize,
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub alpha: Complex,
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub beta: Complex,
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub gamma: Complex,
    /// On-site terms Δ₁,Δ₂,Δ₃ (comma-separated, default 0,0,0).
    #[arg(long, value_delimiter = ',', value_parser = complex_arg, allow_hyphen_values = true)]
    pub deltas: Vec<Complex>,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub order: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Perturbation matrix file ({"matrix": ...}); defaults to
    /// diag[1,0,0,1,0,1,0,0] for 8×8 moment matrices.
    #[arg(long, value_name = "FILE")]
    pub perturbation: Option<PathBuf>,
    /// Print the fitted power-law exponent of every track to stderr.
    #[arg(long)]
    pub fit: bool,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DfrftArgs {
    /// Chain order N; signals have N + 1 samples.
    #[arg(long)]
    pub n: usize,
    /// Coupling α; a non-real value gives a non-unitary transform.
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    pub alpha: Complex,
    /// Fractional order a (a = 1 is a quarter period).
    #[arg(long = "fraction", visible_alias = "a", allow_hyphen_values = true)]
    pub fraction: f64,
    /// JSON array of [re, im] samples.
    #[arg(long, value_name = "FILE")]
    pub signal: PathBuf,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: FormatError },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Domain(#[from] simplexlat_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } | CliError::Read { .. } => 2,
            CliError::Write { .. } | CliError::Domain(_) => 1,
        }
    }
}

fn size_cap() -> Result<usize, CliError> {
    match std::env::var(SIZE_CAP_ENV) {
        Err(_) => Ok(DEFAULT_SIZE_CAP),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!(
                "{SIZE_CAP_ENV} must be a positive integer, got \"{v}\""
            ))),
        },
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn parsed<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
    f(&read(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn trimer_deltas(deltas: &[Complex]) -> Result<[Complex; 3], CliError> {
    match deltas {
        [] => Ok([c(0.0, 0.0); 3]),
        [a, b, d] => Ok([*a, *b, *d]),
        other => Err(CliError::Usage(format!(
            "--deltas takes exactly three values, got {}",
            other.len()
        ))),
    }
}

struct SystemSource<'a> {
    m1: Option<&'a Path>,
    preset: Option<Preset>,
    delta: f64,
    g: f64,
    alpha: Complex,
    beta: Complex,
    gamma: Complex,
    deltas: &'a [Complex],
}

impl SystemSource<'_> {
    fn load(&self) -> Result<ModeSystem, CliError> {
        match (self.m1, self.preset) {
            (Some(path), _) => parsed(path, json::parse_m1_json),
            (None, Some(Preset::Subharmonic)) => Ok(subharmonic_m1(SubharmonicParams::new(self.delta, self.g)?)),
            (None, Some(Preset::SymmetricTrimer)) => Ok(trimer_m1(
                trimer_deltas(self.deltas)?,
                self.alpha,
                self.beta,
                self.gamma,
            )),
            (None, None) => Err(CliError::Usage("either --m1 or --preset is required".into())),
        }
    }
}

impl<'a> From<&'a SystemArgs> for SystemSource<'a> {
    fn from(a: &'a SystemArgs) -> Self {
        Self {
            m1: a.m1.as_deref(),
            preset: a.preset,
            delta: a.delta,
            g: a.g,
            alpha: a.alpha,
            beta: a.beta,
            gamma: a.gamma,
            deltas: &a.deltas,
        }
    }
}

fn require_order(order: usize) -> Result<usize, CliError> {
    if order == 0 {
        return Err(CliError::Usage("--order must be at least 1".into()));
    }
    Ok(order)
}

pub fn dispatch(cfg: RunConfig) -> Result<(), CliError> {
    let cap = size_cap()?;
    match cfg.command {
        Command::Spectrum(a) => {
            let sys = SystemSource::from(&a.system).load()?;
            let m = require_order(a.order)?;
            let text = if a.reduced {
                csv::export_spectrum_csv(&reduce_capped(&sys, m, a.mode.into(), cap)?)
            } else {
                csv::export_full_spectrum_csv(&tensor_eigensystem_capped(&sys, m, cap)?)?
            };
            emit(a.output.as_deref(), &text)
        }
        Command::Reduce(a) => {
            let sys = SystemSource::from(&a.system).load()?;
            let red = reduce_capped(&sys, require_order(a.order)?, a.mode.into(), cap)?;
            emit(a.output.as_deref(), &json::write_reduced(&red, sys.labels()))
        }
        Command::Lattice(a) => {
            let graph: LatticeGraph = match &a.reduced {
                Some(path) => parsed(path, json::parse_reduced_lattice)?,
                None => {
                    let src = SystemSource {
                        m1: a.m1.as_deref(),
                        preset: a.preset,
                        delta: a.delta,
                        g: a.g,
                        alpha: a.alpha,
                        beta: a.beta,
                        gamma: a.gamma,
                        deltas: &a.deltas,
                    };
                    let sys = src.load()?;
                    let m = require_order(a.order.expect("clap requires --order without --reduced"))?;
                    build_lattice(&reduce_capped(&sys, m, a.mode.into(), cap)?)?
                }
            };
            if let Some(path) = &a.dot {
                emit(Some(path), &dot::export_dot(&graph))?;
            }
            if let Some(path) = &a.json {
                emit(Some(path), &json::write_lattice(&graph))?;
            }
            Ok(())
        }
        Command::Hamiltonian(a) => {
            let n = require_order(a.order)?;
            let sites: Vec<_> = enumerate_classes_capped(3, n, cap)?
                .into_iter()
                .map(|cl| cl.exponents)
                .collect();
            let params = json::TrimerParams {
                deltas: trimer_deltas(&a.deltas)?,
                alpha: a.alpha,
                beta: a.beta,
                gamma: a.gamma,
            };
            let h = trimer_hamiltonian(n, params.deltas, params.alpha, params.beta, params.gamma)?;
            emit(a.output.as_deref(), &json::write_hamiltonian(n, &params, &sites, &h))
        }
        Command::Sweep(a) => {
            let sys = SystemSource::from(&a.system).load()?;
            let mm = build_mm_capped(&sys, require_order(a.order)?, cap)?;
            let p = match &a.perturbation {
                Some(path) => parsed(path, json::parse_matrix_json)?,
                None if mm.rows() == 8 => ddep_perturbation(),
                None => {
                    return Err(CliError::Usage(format!(
                        "--perturbation is required for a {}x{} moment matrix",
                        mm.rows(),
                        mm.rows()
                    )))
                }
            };
            let grid = log_spaced(a.eps_min, a.eps_max, a.points)?;
            let sweep = perturb_sweep(&mm, &p, &grid)?;
            if a.fit {
                for k in 0..sweep.track_count() {
                    match fit_splitting_exponent(&sweep, k) {
                        Ok(f) => eprintln!("track {k}: exponent {:.4} (r² {:.4})", f.exponent, f.r_squared),
                        Err(e) => eprintln!("track {k}: {e}"),
                    }
                }
            }
            emit(a.output.as_deref(), &csv::export_sweep_csv(&sweep))
        }
        Command::Dfrft(a) => {
            let signal = parsed(&a.signal, json::parse_signal_json)?;
            let plan = FrftPlan::new(JxSpec::new(require_order(a.n)?, a.alpha)?)?;
            if !plan.unitary() {
                eprintln!(
                    "warning: coupling {} is not real; the transform is not unitary",
                    crate::fmt_complex(a.alpha)
                );
            }
            let out = plan.apply(&signal, a.fraction)?;
            emit(a.output.as_deref(), &json::write_signal(&out))
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cfg) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
