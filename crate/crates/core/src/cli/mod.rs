//! Command-line front end. Every subcommand writes CSV (or a text report)
//! to standard output or to `--out`.

mod figures;
pub mod format;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::entanglement::{pair_concurrence, single_qubit_concurrence};
use crate::error::{Error, Result};
use crate::model::{ground_state, Anisotropy, Boundary, ChainSpec};
use crate::scan::find_crossings;
use crate::thermal::{Temperature, ThermalSolver};

use format::Csv;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "necklace", version, about = "Entanglement in Kondo-necklace spin chains")]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Maximum number of fractional digits in CSV values.
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground energy, degeneracy and every pair and single-qubit concurrence.
    Ground(ModelArgs),
    /// Grid data behind one of the standard concurrence maps (2..=13).
    Figure(FigureArgs),
    /// Level crossings in the field and the critical field beyond which
    /// the chain is a product state.
    CriticalField(CriticalArgs),
    /// Cross-checks exact diagonalization against closed forms and monogamy.
    Verify,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 2)]
    pub n_sites: usize,
    #[arg(long, default_value = "xy")]
    pub anisotropy: Anisotropy,
    /// Kondo coupling (negative is ferromagnetic).
    #[arg(long, default_value_t = 1.0)]
    pub j: f64,
    /// Hopping.
    #[arg(long, default_value_t = 1.0)]
    pub w: f64,
    /// Uniform field.
    #[arg(long, default_value_t = 0.0)]
    pub b: f64,
    #[arg(long, default_value = "periodic")]
    pub boundary: Boundary,
}

impl ModelArgs {
    pub fn spec(&self) -> ChainSpec {
        ChainSpec {
            n_sites: self.n_sites,
            hopping: self.w,
            kondo: self.j,
            field: self.b,
            anisotropy: self.anisotropy,
            boundary: self.boundary,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FigureArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(2..=13))]
    pub number: u8,
    /// Samples per axis.
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u64).range(1..))]
    pub steps: u64,
    #[arg(long)]
    pub x_start: Option<f64>,
    #[arg(long)]
    pub x_stop: Option<f64>,
    #[arg(long)]
    pub y_start: Option<f64>,
    #[arg(long)]
    pub y_stop: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Upper end of the field scan; default 3·max(|J|, W).
    #[arg(long)]
    pub b_max: Option<f64>,
    /// Coarse sampling step; default b_max/300.
    #[arg(long)]
    pub step: Option<f64>,
    /// Bisection bracket width.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return EXIT_NUMERICAL;
            }
            EXIT_OK
        }
        Err(Failure::Check(text)) => {
            let _ = match &cli.out {
                Some(path) => std::fs::write(path, &text),
                None => stdout.write_all(text.as_bytes()),
            };
            EXIT_NUMERICAL
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Argument(_) | Error::QubitIndex { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

enum Failure {
    Lib(Error),
    /// A verification report in which some check failed.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn execute(cli: &Cli) -> std::result::Result<String, Failure> {
    let p = cli.precision;
    Ok(match &cli.command {
        Command::Ground(m) => ground_csv(&m.spec(), p)?,
        Command::Figure(f) => figures::figure_csv(f, p)?,
        Command::CriticalField(c) => critical_csv(c, p)?,
        Command::Verify => {
            let report = verify::run_checks()?;
            if !report.passed {
                return Err(Failure::Check(report.text));
            }
            report.text
        }
    })
}

/// `tau1, s1, tau2, s2, ...`
pub fn qubit_label(q: usize) -> String {
    let site = q / 2 + 1;
    if q.is_multiple_of(2) {
        format!("tau{site}")
    } else {
        format!("s{site}")
    }
}

fn ground_csv(spec: &ChainSpec, precision: usize) -> Result<String> {
    let g = ground_state(spec)?;
    let mixture = ThermalSolver::from_spectrum(g.spectrum.clone()).gibbs(Temperature::ZERO);
    let n = spec.n_qubits();
    let mut csv = Csv::new(precision, &["quantity", "value"]);
    csv.labeled("energy", g.energy);
    csv.raw_row(["degeneracy".to_string(), g.degeneracy.to_string()]);
    for a in 0..n {
        for b in a + 1..n {
            let c = pair_concurrence(&mixture, a, b)?;
            csv.labeled(&format!("c_{}_{}", qubit_label(a), qubit_label(b)), c);
        }
    }
    for q in 0..n {
        let c = single_qubit_concurrence(&g.state, q)?;
        csv.labeled(&format!("c_single_{}", qubit_label(q)), c);
    }
    Ok(csv.into_string())
}

fn critical_csv(args: &CriticalArgs, precision: usize) -> Result<String> {
    let spec = args.model.spec();
    let b_max = args.b_max.unwrap_or_else(|| {
        let scale = spec.kondo.abs().max(spec.hopping);
        if scale > 0.0 {
            3.0 * scale
        } else {
            3.0
        }
    });
    let step = args.step.unwrap_or(b_max / 300.0);
    let report = find_crossings(&spec, b_max, step, args.tol)?;
    let mut csv = Csv::new(
        precision,
        &["b_value", "fidelity_drop", "post_single_qubit_concurrence"],
    );
    for c in &report.crossings {
        csv.numbers(&[c.b_value, c.fidelity_drop, c.post_single_concurrence]);
    }
    let b_c = report.b_c.map_or_else(|| "NA".to_string(), |v| csv.num(v));
    csv.raw_row(["b_c".to_string(), b_c]);
    Ok(csv.into_string())
}
