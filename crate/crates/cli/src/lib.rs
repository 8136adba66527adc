//! `bpblab` command-line front end.
//!
//! Exit statuses: 0 holds (or all rows match), 1 usage error,
//! 2 fails-witnessed or contract violated, 3 inconclusive,
//! 64 malformed space file, 65 dimension guard, 66 precondition failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use bpb_core::monotonicity::{CheckConfig, Method, Property};
use bpb_core::norms::file::parse_space;
use bpb_core::registry::{self, RegistrySpace};
use bpb_core::scalar::parse_rational;
use bpb_core::{AbsoluteSpec, Error, Scalar};

mod commands;

pub use commands::{reproduce_spaces, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILS: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_MALFORMED: i32 = 64;
pub const EXIT_GUARD: i32 = 65;
pub const EXIT_PRECONDITION: i32 = 66;

pub const TOL_RANGE: (f64, f64) = (1e-14, 1e-2);

#[derive(Parser, Debug)]
#[command(name = "bpblab", version, about = "Lattice monotonicity checks and norm-attaining corrections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run property checks on a space.
    Check(CheckArgs),
    /// Correct a near-attaining pair.
    Bpb(BpbArgs),
    /// Run the registry regression and print the table.
    Reproduce(ReproduceArgs),
    /// Write registry spaces as space files.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Registry space name.
    #[arg(long)]
    pub registry: Option<String>,
    /// Space-definition JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Comma-separated properties, or `all`.
    #[arg(long, default_value = "all")]
    pub property: String,
    /// Comma-separated ε grid; defaults to the standard grid.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Force orthant-exact moduli.
    #[arg(long)]
    pub exact: bool,
    /// Directory for the report text and CSV curves.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Classic,
    Positive,
    SmHnap,
    UmoeStrong,
}

#[derive(Args, Debug)]
pub struct BpbArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum)]
    pub variant: Variant,
    /// Point, comma-separated; entries may be `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Functional, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Take `x` and `f` from a stored registry witness.
    #[arg(long, conflicts_with_all = ["x", "f"])]
    pub witness: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Modulus value δ(ε) for sm-hnap and umoe-strong; defaults to ε.
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Directory for moduli CSVs of every registry space.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    /// One registry space; every standard space when omitted.
    #[arg(long)]
    pub registry: Option<String>,
    /// Output directory; a single space goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A command failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn io(e: std::io::Error) -> Self {
        Self::new(EXIT_USAGE, e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SpaceFile(_) => EXIT_MALFORMED,
            Error::DimensionGuard { .. } => EXIT_GUARD,
            Error::Precondition(_)
            | Error::NotAbsolute { .. }
            | Error::NotPolyhedral
            | Error::NotExact
            | Error::ZeroVector
            | Error::DimensionMismatch { .. } => EXIT_PRECONDITION,
            Error::NotFound { .. } => EXIT_INCONCLUSIVE,
            _ => EXIT_USAGE,
        };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::io(e)
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

/// A loaded space: registry entries keep their witnesses and seeds.
pub struct Space {
    pub name: String,
    pub spec: AbsoluteSpec,
    pub registry: Option<RegistrySpace>,
}

impl Space {
    pub fn config(&self, base: &CheckConfig) -> CheckConfig {
        match &self.registry {
            Some(r) => r.check_config(base),
            None => base.clone(),
        }
    }
}

pub fn load_space(source: &SourceArgs) -> CmdResult<Space> {
    if let Some(name) = &source.registry {
        let r = registry::lookup(name).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
        return Ok(Space { name: r.name.clone(), spec: r.spec.clone(), registry: Some(r) });
    }
    let path = source.file.as_ref().expect("clap requires a source");
    let malformed = |m: String| Failure::new(EXIT_MALFORMED, format!("{}: {m}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| malformed(e.to_string()))?;
    let loaded = parse_space(&text).map_err(|e| malformed(e.to_string()))?;
    let spec = AbsoluteSpec::certify(loaded.spec)?;
    Ok(Space { name: loaded.name, spec, registry: None })
}

pub fn parse_vector(s: &str) -> CmdResult<bpb_core::Vector64> {
    let coords = s
        .split(',')
        .map(|c| parse_rational(c).map(|q| q.to_f64()).ok_or_else(|| Failure::new(EXIT_USAGE, format!("not a number: {c:?}"))))
        .collect::<CmdResult<Vec<f64>>>()?;
    Ok(bpb_core::Vector::new(coords))
}

pub fn parse_properties(s: &str, dim: usize) -> CmdResult<Vec<Property>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Property::ALL.into_iter().filter(|p| *p != Property::StrictMono || dim == 2).collect());
    }
    s.split(',')
        .map(|p| Property::parse(p.trim()).ok_or_else(|| Failure::new(EXIT_USAGE, format!("unknown property {p:?}"))))
        .collect()
}

pub fn base_config(common: &CommonArgs, exact: bool) -> CmdResult<CheckConfig> {
    let (lo, hi) = TOL_RANGE;
    if !(lo..=hi).contains(&common.tol) {
        return Err(Failure::new(EXIT_USAGE, format!("--tol {} outside [{lo:e}, {hi:e}]", common.tol)));
    }
    Ok(CheckConfig {
        seed: common.seed,
        tol: common.tol,
        method: exact.then_some(Method::OrthantExact),
        ..CheckConfig::default()
    })
}

pub fn check_eps(eps: f64) -> CmdResult<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Failure::new(EXIT_USAGE, format!("ε = {eps} must lie in (0, 1)")))
    }
}

pub fn write_file(dir: &Path, name: &str, text: &str) -> CmdResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), text)?;
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Check(a) => commands::check(a, out),
        Command::Bpb(a) => commands::bpb(a, out),
        Command::Reproduce(a) => commands::reproduce(a, out),
        Command::Export(a) => commands::export(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
