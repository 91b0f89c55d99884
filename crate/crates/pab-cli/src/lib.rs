//! The `pab` command line: parse presentation files or catalog selectors,
//! run the abelianization pipeline and its oracles, and print deterministic
//! text or JSON reports.
//!
//! Exit codes: 0 success or agreement, 1 internal error, 2 invalid input,
//! 3 method disagreement or lemma violation, 4 enumeration cap exceeded.
//! Reports go to stdout, diagnostics to stderr; identical inputs and seeds
//! produce byte-identical stdout.

mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use pab_core::{
    analyze, catalog_family, check_lemmas, parse_presentation, render_presentation,
    AnalysisOptions, EngineError, Method, ParseError, PcPresentation, PipelineError,
    DEFAULT_ENUM_CAP, DEFAULT_LATTICE_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "pab",
    about = "Abelianization of finite p-groups of class 2 with |G'| = p",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Cap on element enumeration (census, closures)
    #[arg(long, global = true, env = "PAB_MAX_ENUM", default_value_t = DEFAULT_ENUM_CAP)]
    max_enum: u64,

    /// Cap on the subgroup-lattice oracle
    #[arg(long, global = true, default_value_t = DEFAULT_LATTICE_CAP)]
    max_lattice: u64,

    /// Pair budget for lemma checks; groups with |G|^2 within the budget
    /// are checked exhaustively
    #[arg(long, global = true, default_value_t = 65536)]
    sample: u64,

    /// Seed for all sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check presentation files against the model invariants
    Validate { files: Vec<PathBuf> },
    /// Compute G^ab by the selected method(s)
    Abelianize {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Paper)]
        method: MethodArg,
    },
    /// Compute the Frattini subgroup of G^ab and the case tag
    #[command(name = "frattini-ab")]
    FrattiniAb { files: Vec<PathBuf> },
    /// Report the case tag and the generalized-extraspecial flag
    Classify { files: Vec<PathBuf> },
    /// Check the power-map identities on element pairs
    Lemmas { files: Vec<PathBuf> },
    /// Run all applicable methods and require agreement
    Compare {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
    },
    /// Print a catalog presentation (summary, or the file itself with --emit)
    Catalog {
        #[arg(long)]
        family: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        size: u64,
        /// Print the presentation in the input file format
        #[arg(long)]
        emit: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Paper,
    Direct,
    Census,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Paper => vec![Method::Paper],
            MethodArg::Direct => vec![Method::Direct],
            MethodArg::Census => vec![Method::Census],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

/// Which lines a report should carry, per subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ReportScope {
    Abelianize,
    FrattiniAb,
    Classify,
    Compare,
}

/// Entry point shared by `main` and the test suite. Parses `argv`, runs the
/// subcommand, and returns the process exit code.
pub fn run<W: Write, E: Write>(
    argv: impl IntoIterator<Item = OsString>,
    stdout: &mut W,
    stderr: &mut E,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", err);
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", err);
                    EXIT_INVALID
                }
            };
        }
    };

    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn pipeline_exit_code(err: &PipelineError) -> i32 {
    match err {
        PipelineError::InvalidPresentation(_) => EXIT_INVALID,
        PipelineError::Engine(EngineError::EnumerationCapExceeded { .. }) => EXIT_CAP,
        PipelineError::Engine(EngineError::InvalidPresentation(_)) => EXIT_INVALID,
        _ => EXIT_INTERNAL,
    }
}

fn dispatch<W: Write, E: Write>(
    cli: &Cli,
    stdout: &mut W,
    stderr: &mut E,
) -> Result<i32, Failure> {
    match &cli.command {
        Command::Validate { files } => {
            let mut worst = EXIT_OK;
            for file in require_files(files)? {
                let code = run_validate(cli, &file, stdout)?;
                if worst == EXIT_OK {
                    worst = code;
                }
            }
            Ok(worst)
        }
        Command::Abelianize { files, method } => run_analysis(
            cli,
            files,
            method.methods(),
            ReportScope::Abelianize,
            stdout,
            stderr,
        ),
        Command::FrattiniAb { files } => run_analysis(
            cli,
            files,
            Vec::new(),
            ReportScope::FrattiniAb,
            stdout,
            stderr,
        ),
        Command::Classify { files } => run_analysis(
            cli,
            files,
            Vec::new(),
            ReportScope::Classify,
            stdout,
            stderr,
        ),
        Command::Compare { files, method } => run_analysis(
            cli,
            files,
            method.methods(),
            ReportScope::Compare,
            stdout,
            stderr,
        ),
        Command::Lemmas { files } => {
            let mut worst = EXIT_OK;
            for file in require_files(files)? {
                let code = run_lemmas(cli, &file, stdout)?;
                if worst == EXIT_OK {
                    worst = code;
                }
            }
            Ok(worst)
        }
        Command::Catalog {
            family,
            p,
            size,
            emit,
        } => run_catalog(cli, family, *p, *size, *emit, stdout),
    }
}

fn require_files(files: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    if files.is_empty() {
        return Err(Failure::new(EXIT_INVALID, "no input files given"));
    }
    Ok(files.to_vec())
}

fn load_presentation(path: &Path) -> Result<PcPresentation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::new(EXIT_INVALID, format!("cannot read {}: {}", path.display(), e))
    })?;
    parse_presentation(&text)
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {}", path.display(), e)))
}

fn run_validate<W: Write>(cli: &Cli, path: &Path, stdout: &mut W) -> Result<i32, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::new(EXIT_INVALID, format!("cannot read {}: {}", path.display(), e))
    })?;
    let outcome = parse_presentation(&text);
    let violations: Vec<String> = match &outcome {
        Ok(_) => Vec::new(),
        Err(ParseError::Invalid(v)) => v.iter().map(|v| v.to_string()).collect(),
        Err(other) => {
            return Err(Failure::new(
                EXIT_INVALID,
                format!("{}: {}", path.display(), other),
            ))
        }
    };
    let valid = violations.is_empty();
    if cli.json {
        let value = report::validate_json(path, valid, &violations);
        writeln!(stdout, "{}", value).map_err(io_failure)?;
    } else {
        writeln!(stdout, "file: {}", path.display()).map_err(io_failure)?;
        if valid {
            writeln!(stdout, "valid").map_err(io_failure)?;
        } else {
            for v in &violations {
                writeln!(stdout, "violation: {}", v).map_err(io_failure)?;
            }
        }
    }
    Ok(if valid { EXIT_OK } else { EXIT_INVALID })
}

fn run_analysis<W: Write, E: Write>(
    cli: &Cli,
    files: &[PathBuf],
    methods: Vec<Method>,
    scope: ReportScope,
    stdout: &mut W,
    stderr: &mut E,
) -> Result<i32, Failure> {
    let mut worst = EXIT_OK;
    for path in require_files(files)? {
        let pres = load_presentation(&path)?;
        let options = AnalysisOptions {
            methods: methods.clone(),
            enum_cap: cli.max_enum,
            seed: cli.seed,
        };
        let report = analyze(&pres, &options)
            .map_err(|e| Failure::new(pipeline_exit_code(&e), format!("{}: {}", path.display(), e)))?;
        for notice in &report.notices {
            writeln!(stderr, "notice: {}: {}", path.display(), notice).map_err(io_failure)?;
        }
        let rendered = if cli.json {
            format!("{}\n", report::analysis_json(&path, &report))
        } else {
            report::analysis_text(&path, &report, scope, files.len() > 1)
        };
        write!(stdout, "{}", rendered).map_err(io_failure)?;

        let code = if !methods.is_empty() && report.methods.is_empty() {
            EXIT_CAP
        } else if scope == ReportScope::Compare && !report.agreement {
            EXIT_DISAGREEMENT
        } else {
            EXIT_OK
        };
        if worst == EXIT_OK {
            worst = code;
        }
    }
    Ok(worst)
}

fn run_lemmas<W: Write>(cli: &Cli, path: &Path, stdout: &mut W) -> Result<i32, Failure> {
    let pres = load_presentation(path)?;
    let group = pab_core::build_group(&pres, cli.max_enum).map_err(|e| {
        let code = match e {
            EngineError::EnumerationCapExceeded { .. } => EXIT_CAP,
            EngineError::InvalidPresentation(_) => EXIT_INVALID,
            _ => EXIT_INTERNAL,
        };
        Failure::new(code, format!("{}: {}", path.display(), e))
    })?;
    let report = check_lemmas(&group, cli.sample, cli.seed)
        .map_err(|e| Failure::new(EXIT_INTERNAL, format!("{}: {}", path.display(), e)))?;
    if cli.json {
        let value = report::lemmas_json(path, &pres, &group, &report);
        writeln!(stdout, "{}", value).map_err(io_failure)?;
    } else {
        write!(stdout, "{}", report::lemmas_text(path, &pres, &group, &report))
            .map_err(io_failure)?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    })
}

fn run_catalog<W: Write>(
    cli: &Cli,
    family: &str,
    p: u64,
    size: u64,
    emit: bool,
    stdout: &mut W,
) -> Result<i32, Failure> {
    let pres = catalog_family(family, p, size)
        .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    if emit {
        write!(stdout, "{}", render_presentation(&pres)).map_err(io_failure)?;
    } else if cli.json {
        let value = report::catalog_json(family, size, &pres);
        writeln!(stdout, "{}", value).map_err(io_failure)?;
    } else {
        write!(stdout, "{}", report::catalog_text(family, size, &pres)).map_err(io_failure)?;
    }
    Ok(EXIT_OK)
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(EXIT_INTERNAL, format!("output stream: {}", e))
}
