//! Subcommands and exit-code contract: 0 success or obstructed, 1 verified
//! negative, 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use museb_core::compose::{run_recipe_with, tensor_families, Recipe, RecipeSpec};
use museb_core::construct::catalog::{catalog, CatalogEntry};
use museb_core::construct::{c23_partner, mub_prime, mumeb_qubit, weyl_meb, ThetaParams};
use museb_core::search::{closure_sweep, third_basis_search, ClosureCondition, SearchConfig};
use museb_core::trio::{dephased_obstruction, fourier, is_chm, theorem2_reproduce};
use museb_core::verify::check_museb_set;
use museb_core::{ComplexMatrix, Error, FamilySet, VerificationReport, VerifyConfig};

use crate::format::{self, FormatError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "museb", version, about = "Build and verify mutually unbiased Schmidt-coefficient bases")]
pub struct Cli {
    /// Absolute and overlap tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a constructed family set or matrix as JSON.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Check that a family file is a set of mutually unbiased SEBk.
    Verify {
        path: PathBuf,
        /// Override the Schmidt number declared in the file.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run a named recipe, or `tensor a.json b.json`.
    Compose {
        recipe: String,
        inputs: Vec<PathBuf>,
        /// Recipe parameter as key=value; repeatable.
        #[arg(short = 'p', long = "param", value_parser = parse_param)]
        params: Vec<(String, usize)>,
    },
    /// Look for the real-submatrix obstruction on a complex Hadamard matrix.
    ///
    /// One path is read as the matrix itself; two paths U, V give U†V.
    Trio {
        #[arg(long, conflicts_with = "paths")]
        builtin: bool,
        #[arg(num_args = 0..=2)]
        paths: Vec<PathBuf>,
    },
    /// Numerical experiments.
    Search {
        #[command(subcommand)]
        mode: SearchMode,
    },
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Shift-and-phase maximally entangled basis of C^d ⊗ C^d'.
    Weyl { d: usize, dprime: usize },
    /// The C² ⊗ C³ pair for angles in radians; θ3 is solved when omitted.
    C23 {
        #[arg(allow_negative_numbers = true)]
        theta1: f64,
        #[arg(allow_negative_numbers = true)]
        theta2: f64,
        #[arg(allow_negative_numbers = true)]
        theta3: Option<f64>,
    },
    /// p+1 mutually unbiased bases of C^p, p prime.
    Mub { p: usize },
    /// A printed family or matrix by name.
    Catalog { name: String },
    /// Three mutually unbiased maximally entangled bases of C² ⊗ C².
    MumebQubit,
    /// Normalized n×n Fourier matrix.
    Fourier { n: usize },
}

#[derive(Debug, Subcommand)]
pub enum SearchMode {
    /// Check that products of admissible θ-matrices leave the family.
    Closure {
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
    /// Look for a third MEB unbiased to both printed C² ⊗ C³ bases.
    ThirdBasis {
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        #[arg(long, default_value_t = 0.3)]
        step: f64,
    },
}

fn parse_param(s: &str) -> Result<(String, usize), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let v = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = VerifyConfig::uniform(cli.tol)
        .map_err(|_| CliError::Input(format!("--tol {} must lie in [0, 1e-3)", cli.tol)))?;
    let mut sink = Sink::new(cli.out.clone());
    let code = match &cli.command {
        Command::Generate { what } => generate(what, &cfg, &mut sink, stderr)?,
        Command::Verify { path, k } => verify(path, *k, &cfg, &mut sink)?,
        Command::Compose { recipe, inputs, params } => compose(recipe, inputs, params, &cfg, &mut sink, stderr)?,
        Command::Trio { builtin, paths } => trio(*builtin, paths, &cfg, &mut sink)?,
        Command::Search { mode } => search(mode, cli.seed, &mut sink)?,
    };
    sink.finish(stdout)?;
    Ok(code)
}

/// Buffers primary output, then writes it to `--out` or standard output.
struct Sink {
    path: Option<PathBuf>,
    buf: Vec<u8>,
}

impl Sink {
    fn new(path: Option<PathBuf>) -> Self {
        Self { path, buf: Vec::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.buf.extend_from_slice(s.as_ref().as_bytes());
        self.buf.push(b'\n');
    }

    fn finish(self, stdout: &mut dyn Write) -> std::io::Result<()> {
        match self.path {
            Some(p) => fs::write(p, &self.buf),
            None => stdout.write_all(&self.buf),
        }
    }
}

fn write_set(set: &FamilySet, sink: &mut Sink) -> Result<(), CliError> {
    sink.line(format::family_set_to_json(set)?);
    Ok(())
}

fn describe(set: &FamilySet) -> String {
    match set.dims() {
        Some((d, dp, k)) => format!("{} bases in C^{d} x C^{dp}, k = {k}", set.witness_count()),
        None => "empty set".into(),
    }
}

fn generate(what: &Generate, cfg: &VerifyConfig, sink: &mut Sink, stderr: &mut dyn Write) -> Result<u8, CliError> {
    let set = match what {
        Generate::Weyl { d, dprime } => FamilySet::new(vec![weyl_meb(*d, *dprime)?])?,
        Generate::C23 { theta1, theta2, theta3 } => {
            let theta = match theta3 {
                Some(t3) => ThetaParams::new(*theta1, *theta2, *t3),
                None => ThetaParams::completed(*theta1, *theta2),
            };
            let (phi, psi) = c23_partner(&theta)?;
            writeln!(stderr, "theta = ({}, {}, {})", theta.theta1, theta.theta2, theta.theta3)?;
            FamilySet::new(vec![phi, psi])?
        }
        Generate::Mub { p } => mub_prime(*p)?,
        Generate::Catalog { name } => match catalog(name)? {
            CatalogEntry::Family(f) => FamilySet::new(vec![f])?,
            CatalogEntry::Matrix(m) => return write_matrix(&m, sink, stderr),
        },
        Generate::MumebQubit => mumeb_qubit(),
        Generate::Fourier { n } => {
            if *n == 0 {
                return Err(CliError::Input("n must be positive".into()));
            }
            return write_matrix(&fourier(*n), sink, stderr);
        }
    };
    let report = check_museb_set(&set, cfg);
    if !report.passed {
        writeln!(stderr, "generated set fails verification: worst violation {:.3e}", report.worst_violation)?;
        return Ok(EXIT_NEGATIVE);
    }
    writeln!(stderr, "generated {}", describe(&set))?;
    write_set(&set, sink)?;
    Ok(EXIT_OK)
}

fn write_matrix(m: &ComplexMatrix, sink: &mut Sink, stderr: &mut dyn Write) -> Result<u8, CliError> {
    writeln!(stderr, "generated {}x{} matrix", m.rows(), m.cols())?;
    sink.line(format::matrix_to_json(m)?);
    Ok(EXIT_OK)
}

fn print_report(report: &VerificationReport, sink: &mut Sink) {
    sink.line(format!("checks_run: {}", report.checks_run));
    sink.line(format!("worst_violation: {:.6e}", report.worst_violation));
    if report.offenders.is_empty() {
        sink.line("offenders: none");
    } else {
        sink.line(format!("offenders: {} shown", report.offenders.len()));
        for o in &report.offenders {
            sink.line(format!(
                "  basis {} element {} / basis {} element {}: measured {:.6e}, deviation {:.6e}",
                o.family_a, o.element_a, o.family_b, o.element_b, o.measured, o.deviation
            ));
        }
    }
    for note in &report.notes {
        sink.line(format!("note: {note}"));
    }
}

fn verify(path: &Path, k: Option<usize>, cfg: &VerifyConfig, sink: &mut Sink) -> Result<u8, CliError> {
    let mut set = format::read_family_set(path)?;
    if let Some(k) = k {
        let families = set.into_families().into_iter().map(|f| f.with_k(k)).collect::<Result<Vec<_>, _>>()?;
        set = FamilySet::new(families)?;
    }
    let report = check_museb_set(&set, cfg);
    sink.line(format!("set: {}", describe(&set)));
    sink.line(format!("witness_count: {}", if report.passed { set.witness_count() } else { 0 }));
    sink.line(format!("passed: {}", report.passed));
    print_report(&report, sink);
    Ok(if report.passed { EXIT_OK } else { EXIT_NEGATIVE })
}

fn compose(
    recipe: &str,
    inputs: &[PathBuf],
    params: &[(String, usize)],
    cfg: &VerifyConfig,
    sink: &mut Sink,
    stderr: &mut dyn Write,
) -> Result<u8, CliError> {
    let set = if recipe.eq_ignore_ascii_case("tensor") {
        if inputs.len() != 2 || !params.is_empty() {
            return Err(CliError::Input("tensor takes exactly two family files and no parameters".into()));
        }
        let a = format::read_family_set(&inputs[0])?;
        let b = format::read_family_set(&inputs[1])?;
        tensor_families(&a, &b)?
    } else {
        let recipe: Recipe = recipe.parse().map_err(|_| {
            let names: Vec<&str> = Recipe::ALL.iter().map(|r| r.name()).collect();
            CliError::Input(format!("unknown recipe {recipe:?}; expected tensor or one of {}", names.join(", ")))
        })?;
        if !inputs.is_empty() {
            return Err(CliError::Input(format!("recipe {recipe} takes no input files")));
        }
        let spec = params.iter().fold(RecipeSpec::new(recipe), |s, (k, v)| s.with(k, *v));
        match run_recipe_with(&spec, cfg) {
            Ok(set) => set,
            Err(e @ Error::VerificationFailed { .. }) => {
                writeln!(stderr, "{e}")?;
                return Ok(EXIT_NEGATIVE);
            }
            Err(e) => return Err(e.into()),
        }
    };
    let report = check_museb_set(&set, cfg);
    if !report.passed {
        writeln!(stderr, "composed set fails verification: worst violation {:.3e}", report.worst_violation)?;
        return Ok(EXIT_NEGATIVE);
    }
    writeln!(stderr, "composed {}; worst violation {:.3e}", describe(&set), report.worst_violation)?;
    write_set(&set, sink)?;
    Ok(EXIT_OK)
}

fn trio(builtin: bool, paths: &[PathBuf], cfg: &VerifyConfig, sink: &mut Sink) -> Result<u8, CliError> {
    let w = match (builtin, paths) {
        (true, _) => {
            let report = theorem2_reproduce();
            sink.line(format!("builtin reproduction passed: {}", report.passed));
            for note in &report.notes {
                sink.line(format!("note: {note}"));
            }
            if !report.passed {
                return Ok(EXIT_NEGATIVE);
            }
            museb_core::construct::catalog::u().adjoint().matmul(&museb_core::construct::catalog::v())?
        }
        (false, [w]) => format::read_matrix(w)?,
        (false, [u, v]) => {
            let (u, v) = (format::read_matrix(u)?, format::read_matrix(v)?);
            if !u.is_square() || !v.is_square() {
                return Err(CliError::Input("U and V must be square".into()));
            }
            u.adjoint().matmul(&v)?
        }
        _ => return Err(CliError::Input("give --builtin, one matrix file, or two files U V".into())),
    };
    let chm = is_chm(&w, cfg)?;
    sink.line(format!("is_chm: {chm}"));
    if !chm {
        return Err(CliError::Input("matrix is not a complex Hadamard matrix".into()));
    }
    let f = dephased_obstruction(&w, cfg)?;
    sink.line(format!("obstructed: {}", f.obstructed));
    if !f.obstructed {
        sink.line("no real 2x3 submatrix after column dephasing of W or its transpose");
        return Ok(EXIT_NEGATIVE);
    }
    let phases: Vec<String> = f.phases
        .iter()
        .map(|z| {
            let a = z.arg();
            format!("{:.6}", if a.abs() < 5e-7 { 0.0 } else { a })
        })
        .collect();
    sink.line(format!("on_transpose: {}", f.on_transpose));
    sink.line(format!("row_pair: {} {}", f.row_pair.0, f.row_pair.1));
    sink.line(format!("columns: {:?}", f.columns));
    sink.line(format!("phase_args: [{}]", phases.join(", ")));
    sink.line(format!("witness_valid: {}", f.validate(&w, cfg)));
    sink.line("excluded from every MUB trio");
    Ok(EXIT_OK)
}

fn search(mode: &SearchMode, seed: u64, sink: &mut Sink) -> Result<u8, CliError> {
    match mode {
        SearchMode::Closure { pairs } => {
            if *pairs == 0 {
                return Err(CliError::Input("--pairs must be positive".into()));
            }
            let s = closure_sweep(*pairs, seed);
            sink.line(format!("seed: {seed}"));
            sink.line(format!("closure failures: {}/{}", s.failures, s.pairs));
            sink.line(format!("exceptions: {}", s.exceptions));
            for cond in [
                ClosureCondition::ModulusPattern,
                ClosureCondition::DiagonalPhase,
                ClosureCondition::AngleConstraint,
            ] {
                sink.line(format!("  {} violated: {}", cond.name(), s.per_condition[cond as usize]));
            }
            sink.line(format!("min_modulus_deviation: {:.6e}", s.min_modulus_deviation));
        }
        SearchMode::ThirdBasis { restarts, iterations, step } => {
            let cfg = SearchConfig::new(seed, *iterations, *step, *restarts)?;
            let o = third_basis_search(&cfg)?;
            sink.line(format!("seed: {seed}"));
            sink.line(format!("best_cost: {:.12e}", o.best_cost));
            sink.line(format!("converged_to_zero: {}", o.converged_to_zero));
            sink.line(format!("best_restart: {}", o.best_restart));
            sink.line(format!("iterations_used: {}", o.iterations_used));
            let costs: Vec<String> = o.restart_costs.iter().map(|c| format!("{c:.6e}")).collect();
            sink.line(format!("restart_costs: [{}]", costs.join(", ")));
            sink.line(format!("best_candidate: {}", format::matrix_to_json(&o.best_candidate)?));
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("d=2").unwrap(), ("d".into(), 2));
        assert!(parse_param("d").is_err());
        assert!(parse_param("d=-1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
