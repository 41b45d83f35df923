//! Command-line driver. Exit codes: 0 success, 1 input error, 2 tolerance breach.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::padic::{commutation_check, ConductorMatrix};
use crate::special::Place;
use crate::testfn::{parse_literal, TestFunction};
use crate::weil::{
    explicit_formula_check, place_term_report, positivity_q, vonmangoldt_check, CsvRow, Method,
};
use crate::zeta::{find_zeros, ZeroTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BREACH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "eflab", version, about = "Explicit-formula laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find, validate or re-emit zero tables.
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Explicit-formula checks against a zero table.
    #[command(subcommand)]
    Ef(EfCommand),
    /// Local Weil term at one place by one or all methods.
    Weil(WeilArgs),
    /// Spectrum of the conductor operator on the cuspidal space.
    Conductor(ConductorArgs),
}

#[derive(Debug, Subcommand)]
pub enum ZerosCommand {
    /// Locate and certify all zeros up to a height.
    Find {
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read and certify a table.
    Import {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Read a table and write it back in canonical form.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EfCommand {
    /// Zero side against the sum of local terms.
    Check {
        #[arg(long)]
        testfn: String,
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Riemann–von Mangoldt formula for ψ(X).
    Vonmangoldt {
        #[arg(long = "X")]
        x: f64,
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Both sides of the quadratic functional `q(g ⋆ g^c)`.
    Positivity {
        #[arg(long)]
        testfn: String,
        #[arg(long)]
        zeros: PathBuf,
        /// Lower bound slack for the prime side.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct WeilArgs {
    /// `r` or a prime.
    #[arg(long)]
    pub place: String,
    /// A method name or `all`.
    #[arg(long, default_value = "all")]
    pub form: String,
    #[arg(long)]
    pub testfn: String,
    /// Bound on the spread between methods.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConductorArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u32,
    /// Also measure `‖HI − IH‖` over the basis.
    #[arg(long = "check-inversion")]
    pub check_inversion: bool,
    /// Bound on the distance of eigenvalue/log p to an integer.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long = "inversion-tol", default_value_t = 1e-9)]
    pub inversion_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `args` (program name first) and run, writing reports to `stdout` and
/// diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Zeros(cmd) => cmd_zeros(cmd, stdout, stderr),
        Command::Ef(cmd) => cmd_ef(cmd, stdout),
        Command::Weil(args) => cmd_weil(args, stdout),
        Command::Conductor(args) => cmd_conductor(args, stdout),
    }
}

fn open_table(path: &Path) -> Result<ZeroTable> {
    ZeroTable::import(BufReader::new(File::open(path)?))
}

fn testfn(literal: &str) -> Result<TestFunction> {
    parse_literal(literal)
}

/// Run `emit` against `--out` when given, otherwise against standard output.
fn emit<F>(out: Option<&Path>, stdout: &mut dyn Write, emit: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            emit(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => emit(stdout),
    }
}

fn exit_for(rows: &[CsvRow]) -> i32 {
    if rows.iter().any(|r| r.status == "breach") {
        EXIT_BREACH
    } else {
        EXIT_OK
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "breach"
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn cmd_zeros(cmd: ZerosCommand, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    // Some(out) writes the table to `out` or standard output
    let (table, out) = match cmd {
        ZerosCommand::Find { t_max, out } => (find_zeros(t_max)?, Some(out)),
        ZerosCommand::Import { input } => (open_table(&input)?, None),
        ZerosCommand::Export { input, out } => {
            (ZeroTable::read(BufReader::new(File::open(&input)?))?, Some(out))
        }
    };
    writeln!(
        stderr,
        "count={} t_max={} accuracy={}",
        table.len(),
        table.t_max(),
        table.accuracy()
    )?;
    if let Some(path) = out {
        emit(path.as_deref(), stdout, |w| table.write(w))?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_ef(cmd: EfCommand, stdout: &mut dyn Write) -> Result<i32> {
    let (rows, out) = match cmd {
        EfCommand::Check { testfn: literal, zeros, tol, out } => {
            let g = testfn(&literal)?;
            let report = explicit_formula_check(&g, &open_table(&zeros)?)?;
            let mut rows = vec![
                CsvRow::value("zero_side", "sum", report.zero_side, tol, "ok"),
                CsvRow::value("prime_side", "sum", report.prime_side, tol, "ok"),
            ];
            for (place, value) in &report.places {
                let method = if *place == Place::Real { "finite" } else { "direct" };
                rows.push(CsvRow::value(&format!("W_{place}"), method, *value, tol, "ok"));
            }
            rows.push(CsvRow::value("tail_estimate", "bound", real(report.tail_estimate), tol, "ok"));
            rows.push(CsvRow::value(
                "residual",
                "difference",
                report.residual,
                tol,
                status(report.residual.norm() <= tol),
            ));
            (rows, out)
        }
        EfCommand::Vonmangoldt { x, zeros, tol, out } => {
            let report = vonmangoldt_check(x, &open_table(&zeros)?)?;
            let rows = vec![
                CsvRow::value("psi", "sieve", report.prime_side, tol, "ok"),
                CsvRow::value("zero_side", "sum", report.zero_side, tol, "ok"),
                CsvRow::value("tail_estimate", "heuristic", real(report.tail_estimate), tol, "ok"),
                CsvRow::value(
                    "residual",
                    "difference",
                    report.residual,
                    tol,
                    status(report.residual.norm() <= tol),
                ),
            ];
            (rows, out)
        }
        EfCommand::Positivity { testfn: literal, zeros, tol, out } => {
            let g = testfn(&literal)?;
            let report = positivity_q(&g, &open_table(&zeros)?)?;
            let rows = vec![
                CsvRow::value(
                    "prime_side_q",
                    "local_terms",
                    real(report.prime_side_q),
                    tol,
                    status(report.prime_side_q >= -tol),
                ),
                CsvRow::value("zero_side_q", "sum", real(report.zero_side_q), tol, "ok"),
                CsvRow::value("tail_estimate", "bound", real(report.tail_estimate), tol, "ok"),
            ];
            (rows, out)
        }
    };
    emit(out.as_deref(), stdout, |w| CsvRow::write_all(&rows, w))?;
    Ok(exit_for(&rows))
}

fn parse_place(text: &str) -> Result<Place> {
    if text.eq_ignore_ascii_case("r") {
        return Ok(Place::Real);
    }
    let p = text
        .parse::<u64>()
        .map_err(|_| Error::InvalidArgument(format!("place must be `r` or a prime, got `{text}`")))?;
    Place::prime(p)
}

pub fn cmd_weil(args: WeilArgs, stdout: &mut dyn Write) -> Result<i32> {
    let place = parse_place(&args.place)?;
    let g = testfn(&args.testfn)?;
    let methods: Vec<Method> = if args.form == "all" {
        Method::at(place).to_vec()
    } else {
        let method = Method::parse(&args.form)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown form `{}`", args.form)))?;
        if !Method::at(place).contains(&method) {
            return Err(Error::InvalidArgument(format!(
                "form {method} does not exist at place {place}"
            )));
        }
        vec![method]
    };
    let report = place_term_report(&g, place, &methods)?;
    if args.form != "all" && report.admissible().next().is_none() {
        // a single explicitly requested form that cannot run
        if let Some((_, crate::weil::MethodValue::Inadmissible(why))) = report.values.first() {
            return Err(Error::InvalidArgument(why.clone()));
        }
    }
    let rows = report.rows(args.tol);
    emit(args.out.as_deref(), stdout, |w| CsvRow::write_all(&rows, w))?;
    Ok(exit_for(&rows))
}

pub fn cmd_conductor(args: ConductorArgs, stdout: &mut dyn Write) -> Result<i32> {
    let (p, n) = (args.p, args.n);
    if p.checked_pow(n).is_none_or(|size| size > 2048) {
        return Err(Error::InvalidArgument(format!("{p}^{n} exceeds the desk-scale limit 2048")));
    }
    let matrix = ConductorMatrix::new(p, n)?;
    let spectrum = matrix.eigenvalues()?;
    let log_p = (p as f64).ln();
    let tol = args.tol;
    let mut rows = vec![
        CsvRow::value("dimension", "basis", real(matrix.dimension() as f64), 0.0, "ok"),
        CsvRow::value(
            "hermitian_defect",
            "matrix",
            real(matrix.hermitian_defect()),
            1e-12,
            status(matrix.hermitian_defect() <= 1e-12),
        ),
    ];
    for (i, &lambda) in spectrum.iter().enumerate() {
        let ratio = lambda / log_p;
        let defect = (ratio - ratio.round()).abs();
        let quantity = format!("lambda_{i}");
        rows.push(CsvRow::value(&quantity, "eigenvalue", real(lambda), tol, "ok"));
        rows.push(CsvRow::value(&quantity, "ratio", real(ratio), tol, "ok"));
        rows.push(CsvRow::value(&quantity, "defect", real(defect), tol, status(defect <= tol)));
    }
    if args.check_inversion {
        let defect = commutation_check(p, n)?;
        rows.push(CsvRow::value(
            "commutation",
            "HI-IH",
            real(defect),
            args.inversion_tol,
            status(defect <= args.inversion_tol),
        ));
    }
    emit(args.out.as_deref(), stdout, |w| CsvRow::write_all(&rows, w))?;
    Ok(exit_for(&rows))
}

/// Entry point of the binary.
pub fn main_with_env() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
