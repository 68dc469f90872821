//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 computation failure,
//! 3 at least one non-vacuous verification check failed.

mod commands;
mod domain_file;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use commands::{default_domains, execute, Outcome};
pub use domain_file::{load_domain_spec, parse_domain_spec};
pub use output::{
    decay_rows, gnuplot_script, write_results, AsymmetryRow, CheckRow, DecayRow, DiracRow,
    RunDirectory, SpectrumRow, TorsionRow,
};

use crate::geometry::DomainSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Environment variable that replaces `--out`.
pub const OUT_ENV: &str = "MAGSPEC_OUT";

pub const MIN_CLI_RESOLUTION: usize = 64;
pub const MAX_CLI_RESOLUTION: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Torsion function maximum and maximizer.
    Torsion,
    /// Lowest eigenvalues of the shifted magnetic Dirichlet Laplacian.
    Eigs,
    /// Upper and lower bounds for the positive Dirac eigenvalues.
    Dirac,
    /// Fraenkel asymmetry.
    Asymmetry,
    /// Inequality checks; exits with 3 if any non-vacuous check fails.
    Verify,
    /// Spectra over every (domain, B) pair, with plot data and a manifest.
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Torsion => "torsion",
            Command::Eigs => "eigs",
            Command::Dirac => "dirac",
            Command::Asymmetry => "asymmetry",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Discretization used by `eigs` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigMethod {
    #[default]
    TorsionGauge,
    Landau,
    /// Disks only.
    Radial,
}

/// Comma-separated list of non-negative field strengths.
#[derive(Debug, Clone, PartialEq)]
struct FieldList(Vec<f64>);

fn parse_fields(s: &str) -> Result<FieldList, String> {
    let values = s
        .split(',')
        .map(|t| {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| format!("`{}` is not a number", t.trim()))?;
            if !(v >= 0.0) || !v.is_finite() {
                return Err(format!("field strength must be finite and B >= 0, got {v}"));
            }
            Ok(v)
        })
        .collect::<Result<Vec<f64>, String>>()?;
    Ok(FieldList(values))
}

fn parse_resolution(s: &str) -> Result<usize, String> {
    let r: usize = s
        .parse()
        .map_err(|_| format!("`{s}` is not a positive integer"))?;
    if !(MIN_CLI_RESOLUTION..=MAX_CLI_RESOLUTION).contains(&r) {
        return Err(format!(
            "resolution must lie in [{MIN_CLI_RESOLUTION}, {MAX_CLI_RESOLUTION}]"
        ));
    }
    Ok(r)
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("expected an integer >= 1, got `{s}`")),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "magspec",
    version,
    about = "Magnetic spectral geometry of planar domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Domain file; repeat for several domains.
    #[arg(long = "domain", value_name = "FILE", global = true)]
    domains: Vec<PathBuf>,

    /// Field strengths, comma-separated.
    #[arg(long = "B", value_name = "LIST", global = true, allow_hyphen_values = true, value_parser = parse_fields)]
    fields: Option<FieldList>,

    /// Number of eigenvalues.
    #[arg(long, global = true, default_value = "3", value_parser = parse_positive)]
    n: usize,

    /// Grid cells per unit length.
    #[arg(long, global = true, default_value = "256", value_parser = parse_resolution)]
    resolution: usize,

    /// Output root; MAGSPEC_OUT takes precedence.
    #[arg(long, value_name = "DIR", global = true, default_value = "magspec-out")]
    out: PathBuf,

    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = parse_positive)]
    jobs: Option<usize>,

    #[arg(long, value_enum, global = true, default_value_t = EigMethod::TorsionGauge)]
    method: EigMethod,

    /// Highest monomial degree K of the Dirac trial space.
    #[arg(long = "basis-degree", global = true, default_value = "12")]
    basis_degree: usize,
}

/// Validated invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub domains: Vec<PathBuf>,
    /// Empty when `--B` was not given; each command then uses its default.
    #[serde(rename = "B")]
    pub fields: Vec<f64>,
    pub n: usize,
    pub resolution: usize,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
    pub method: EigMethod,
    pub basis_degree: usize,
}

/// Parses `argv` (including the program name). `out_override` replaces
/// `--out` when set.
pub fn parse_args_with<I, T>(
    argv: I,
    out_override: Option<OsString>,
) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let out = match out_override {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => cli.out,
    };
    Ok(RunConfig {
        command: cli.command,
        domains: cli.domains,
        fields: cli.fields.map(|f| f.0).unwrap_or_default(),
        n: cli.n,
        resolution: cli.resolution,
        out,
        format: cli.format,
        jobs: cli.jobs,
        method: cli.method,
        basis_degree: cli.basis_degree,
    })
}

/// Parses `argv`, honoring `MAGSPEC_OUT`.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_args_with(argv, std::env::var_os(OUT_ENV))
}

fn load_domains(config: &RunConfig) -> crate::Result<Vec<DomainSpec>> {
    config.domains.iter().map(|p| load_domain_spec(p)).collect()
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let domains = match load_domains(&config) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let needs_domain = matches!(
        config.command,
        Command::Torsion | Command::Eigs | Command::Dirac | Command::Asymmetry
    );
    if needs_domain && domains.is_empty() {
        eprintln!(
            "error: `{}` needs at least one --domain FILE",
            config.command
        );
        return EXIT_USAGE;
    }
    match execute(&config, &domains) {
        Ok(outcome) => {
            println!("{}", outcome.directory.display());
            for f in &outcome.files {
                println!("  {}", f.display());
            }
            if outcome.failed_checks > 0 {
                eprintln!("{} verification check(s) failed", outcome.failed_checks);
                EXIT_VERIFICATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_COMPUTATION
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig, clap::Error> {
        parse_args_with(
            std::iter::once("magspec").chain(args.split_whitespace()),
            None,
        )
    }

    #[test]
    fn eigs_example() {
        let c = parse("eigs --domain sq.dom --B 10,30 --n 3").unwrap();
        assert_eq!(c.command, Command::Eigs);
        assert_eq!(c.fields, vec![10.0, 30.0]);
        assert_eq!(c.n, 3);
        assert_eq!(c.domains, vec![PathBuf::from("sq.dom")]);
        assert_eq!((c.resolution, c.format), (256, OutputFormat::Csv));
    }

    #[test]
    fn rejections() {
        assert!(parse("eigs --B -5").is_err());
        assert!(parse("eigs --B 1,x").is_err());
        assert!(parse("eigs --resolution 32").is_err());
        assert!(parse("eigs --resolution 4096").is_err());
        assert!(parse("eigs --n 0").is_err());
        assert!(parse("eigs --colour red").is_err());
        assert!(parse("--B 1").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn out_override_wins() {
        let c = parse_args_with(["magspec", "torsion", "--out", "a"], Some("b".into())).unwrap();
        assert_eq!(c.out, PathBuf::from("b"));
        let c = parse_args_with(["magspec", "torsion", "--out", "a"], Some("".into())).unwrap();
        assert_eq!(c.out, PathBuf::from("a"));
    }

    #[test]
    fn flags_before_subcommand() {
        let c = parse("--format json --jobs 2 verify").unwrap();
        assert_eq!(
            (c.command, c.format, c.jobs),
            (Command::Verify, OutputFormat::Json, Some(2))
        );
        assert!(c.fields.is_empty() && c.domains.is_empty());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["magspec", "eigs"]), EXIT_USAGE);
        assert_eq!(
            run(["magspec", "eigs", "--domain", "/nonexistent/x.dom"]),
            EXIT_USAGE
        );
        assert_eq!(run(["magspec", "--help"]), EXIT_OK);
    }
}
