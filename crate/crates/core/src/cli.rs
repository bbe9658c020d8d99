//! Command-line driver behind the `qpe` binary.
//!
//! Exit status: 0 on success, 2 on usage errors, 1 on runtime errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{accuracy_sweep, fit_scaling, run_bench, write_csv, BenchPlan, BenchScope, DEFAULT_MEM_CAP_BYTES};
use crate::circuit::{run_qpe, PhaseTimers, PowerMode, QpeConfig};
use crate::error::QpeError;
use crate::extraction::{absolute_phase_error, extract, marginal_distribution, phase_error, ExtractionMethod};
use crate::io::{read_problem, read_statevector, write_problem, write_statevector};
use crate::problems::{gen_analytic, gen_random_unitary, SpectralProblem, MAX_GENERATED_QUBITS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qpe", version, about = "Statevector quantum phase estimation emulator and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a test problem, one HDF5 file per eigenpair
    Gen(GenArgs),
    /// Run phase estimation on a problem file and write the final statevector
    Run(RunArgs),
    /// Extract an eigenphase estimate from a statevector file
    Extract(ExtractArgs),
    /// Time circuit runs or single kernel launches over a size grid
    Bench(BenchArgs),
    /// Mean phase error against reference spectra over a range of n_meas
    Accuracy(AccuracyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Analytic,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Repeat,
    Square,
}

impl From<ModeArg> for PowerMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Repeat => PowerMode::RepeatedApplication,
            ModeArg::Square => PowerMode::RepeatedSquaring,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Max,
    Weighted,
    Circular,
}

impl From<MethodArg> for ExtractionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Max => ExtractionMethod::MaxNorm,
            MethodArg::Weighted => ExtractionMethod::WeightedAverage,
            MethodArg::Circular => ExtractionMethod::WeightedCircular,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    Qpe,
    Kernel,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n_mat: usize,
    #[arg(long, default_value_t = 12345)]
    seed: u64,
    /// Output path; eigenpair j is written to <stem>_<j>.<ext>
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long)]
    n_meas: usize,
    #[arg(long, value_enum, default_value = "repeat")]
    mode: ModeArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// `weighted` also reports the circular variant
    #[arg(long, value_enum, default_value = "max")]
    method: MethodArg,
    /// Reference eigenphase in [0, 1) to report the error against
    #[arg(long)]
    reference: Option<f64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// List or range, e.g. `4`, `2,4,6` or `2..6`
    #[arg(long)]
    n_mat: String,
    #[arg(long)]
    n_meas: String,
    #[arg(long, value_enum, default_value = "repeat")]
    mode: ModeArg,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MEM_CAP_BYTES)]
    mem_cap_bytes: u64,
    /// `qpe` times whole circuits, `kernel` a single controlled-U launch
    #[arg(long, value_enum, default_value = "qpe")]
    scope: ScopeArg,
}

#[derive(Debug, Args)]
struct AccuracyArgs {
    #[arg(long, value_enum, default_value = "random")]
    kind: Kind,
    #[arg(long)]
    n_mat: usize,
    #[arg(long, default_value_t = 12345)]
    seed: u64,
    /// List or range, e.g. `4..12`
    #[arg(long)]
    n_meas: String,
    /// Repeatable; all methods when omitted
    #[arg(long, value_enum)]
    method: Vec<MethodArg>,
    #[arg(long, value_enum, default_value = "square")]
    mode: ModeArg,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(QpeError),
}

impl From<QpeError> for CliError {
    fn from(e: QpeError) -> Self {
        CliError::Runtime(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(QpeError::Io(e))
    }
}

type CliResult = std::result::Result<(), CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `a`, `a,b,c`, `a..b` or `a-b` (ranges inclusive).
pub fn parse_size_list(spec: &str) -> Result<Vec<usize>, String> {
    let spec = spec.trim();
    let range = spec.split_once("..").or_else(|| spec.split_once('-'));
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("bad size '{s}': {e}"));
    let values: Vec<usize> = if let Some((lo, hi)) = range {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        (parse(lo)?..=parse(hi)?).collect()
    } else if spec.is_empty() {
        Vec::new()
    } else {
        spec.split(',').map(parse).collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(format!("'{spec}' describes an empty list"));
    }
    Ok(values)
}

fn sizes(flag: &str, spec: &str) -> std::result::Result<Vec<usize>, CliError> {
    let v = parse_size_list(spec).map_err(|e| usage(format!("--{flag}: {e}")))?;
    if v.contains(&0) {
        return Err(usage(format!("--{flag}: sizes must be at least 1")));
    }
    Ok(v)
}

fn check_n_mat(n_mat: usize) -> CliResult {
    if !(1..=MAX_GENERATED_QUBITS).contains(&n_mat) {
        return Err(usage(format!("--n-mat must be in 1..={MAX_GENERATED_QUBITS}")));
    }
    Ok(())
}

fn make_problem(kind: Kind, n_mat: usize, seed: u64) -> std::result::Result<SpectralProblem, CliError> {
    check_n_mat(n_mat)?;
    Ok(match kind {
        Kind::Analytic => gen_analytic(n_mat)?,
        Kind::Random => gen_random_unitary(n_mat, seed)?,
    })
}

/// `dir/name.h5` → `dir/name_<j>.h5`.
pub fn eigenpair_path(out: &Path, j: usize) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_{j}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{j}"),
    };
    out.with_file_name(name)
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> CliResult {
    let problem = make_problem(a.kind, a.n_mat, a.seed)?;
    let phases = problem.reference_phases.clone().unwrap_or_default();
    writeln!(out, "index,reference_phase,path")?;
    for j in 0..problem.eigenvectors.len() {
        let path = eigenpair_path(&a.out, j);
        write_problem(&path, &problem, j)?;
        writeln!(out, "{j},{},{}", phases[j], path.display())?;
    }
    Ok(())
}

fn cmd_run(a: RunArgs, out: &mut dyn Write) -> CliResult {
    if a.n_meas == 0 {
        return Err(usage("--n-meas must be at least 1"));
    }
    let problem = read_problem(&a.input)?;
    let mode = PowerMode::from(a.mode);
    let config = QpeConfig::new(a.n_meas, mode)?;
    let run = run_qpe(&problem, 0, &config)?;
    write_statevector(&a.out, &run.state)?;
    writeln!(out, "n_mat,n_meas,power_mode,controlled_applications,{}", PhaseTimers::CSV_HEADER)?;
    writeln!(
        out,
        "{},{},{},{},{}",
        problem.n_mat,
        a.n_meas,
        mode,
        run.controlled_applications,
        run.timers.csv_row()
    )?;
    Ok(())
}

fn cmd_extract(a: ExtractArgs, out: &mut dyn Write) -> CliResult {
    if let Some(r) = a.reference {
        if !(0.0..1.0).contains(&r) {
            return Err(usage("--reference must lie in [0, 1)"));
        }
    }
    let state = read_statevector(&a.input)?;
    let dist = marginal_distribution(&state);
    let methods: Vec<ExtractionMethod> = match a.method {
        MethodArg::Weighted => vec![ExtractionMethod::WeightedAverage, ExtractionMethod::WeightedCircular],
        m => vec![m.into()],
    };
    writeln!(out, "method,estimate,peak_index,reference,error,absolute_error")?;
    for method in methods {
        let est = match extract(&dist, method) {
            Ok(e) => e,
            // the companion circular row may be undefined on its own
            Err(QpeError::DegenerateDistribution(_)) if a.method == MethodArg::Weighted => {
                writeln!(out, "{method},NaN,,,,")?;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let peak = est.peak_index.map(|m| m.to_string()).unwrap_or_default();
        match a.reference {
            Some(r) => writeln!(
                out,
                "{method},{},{peak},{r},{},{}",
                est.value,
                phase_error(est.value, r),
                absolute_phase_error(est.value, r)
            )?,
            None => writeln!(out, "{method},{},{peak},,,", est.value)?,
        }
    }
    Ok(())
}

fn open_csv(path: &Option<PathBuf>) -> std::result::Result<Option<fs::File>, CliError> {
    Ok(match path {
        Some(p) => Some(fs::File::create(p)?),
        None => None,
    })
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if a.reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let n_mat = sizes("n-mat", &a.n_mat)?;
    for &n in &n_mat {
        check_n_mat(n)?;
    }
    let plan = BenchPlan {
        n_mat,
        n_meas: sizes("n-meas", &a.n_meas)?,
        mode: a.mode.into(),
        reps: a.reps,
        mem_cap_bytes: a.mem_cap_bytes,
        scope: match a.scope {
            ScopeArg::Qpe => BenchScope::Qpe,
            ScopeArg::Kernel => BenchScope::Kernel,
        },
    };
    let records = run_bench(&plan, |r| {
        let _ = writeln!(err, "# n_mat={} n_meas={} wall_seconds={}", r.n_mat, r.n_meas, r.wall_seconds);
    })?;
    let fit = fit_scaling(&records, 0.0);
    match open_csv(&a.csv)? {
        Some(f) => {
            write_csv(f, &records)?;
            if let Some(fit) = fit {
                writeln!(
                    out,
                    "power_law_exponent={} log2_time_per_qubit={} points={}",
                    fit.power_law_exponent, fit.log2_time_per_qubit, fit.points
                )?;
            }
        }
        None => {
            write_csv(&mut *out, &records)?;
            if let Some(fit) = fit {
                writeln!(
                    err,
                    "# power_law_exponent={} log2_time_per_qubit={} points={}",
                    fit.power_law_exponent, fit.log2_time_per_qubit, fit.points
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_accuracy(a: AccuracyArgs, out: &mut dyn Write) -> CliResult {
    let n_meas = sizes("n-meas", &a.n_meas)?;
    let problem = make_problem(a.kind, a.n_mat, a.seed)?;
    let methods: Vec<ExtractionMethod> = if a.method.is_empty() {
        ExtractionMethod::ALL.to_vec()
    } else {
        a.method.iter().map(|&m| m.into()).collect()
    };
    let records = accuracy_sweep(&problem, &n_meas, &methods, a.mode.into())?;
    match open_csv(&a.csv)? {
        Some(f) => write_csv(f, &records)?,
        None => write_csv(&mut *out, &records)?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Run(a) => cmd_run(a, out),
        Command::Extract(a) => cmd_extract(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Accuracy(a) => cmd_accuracy(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Entry point for the binary: process arguments and standard streams.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_size_list("4").unwrap(), vec![4]);
        assert_eq!(parse_size_list("2,4, 6").unwrap(), vec![2, 4, 6]);
        assert_eq!(parse_size_list("4..7").unwrap(), vec![4, 5, 6, 7]);
        assert_eq!(parse_size_list("4..=5").unwrap(), vec![4, 5]);
        assert_eq!(parse_size_list("3-5").unwrap(), vec![3, 4, 5]);
        assert!(parse_size_list("").is_err());
        assert!(parse_size_list("5..4").is_err());
        assert!(parse_size_list("x").is_err());
    }

    #[test]
    fn eigenpair_paths() {
        assert_eq!(eigenpair_path(Path::new("/tmp/p.h5"), 3), PathBuf::from("/tmp/p_3.h5"));
        assert_eq!(eigenpair_path(Path::new("prob"), 0), PathBuf::from("prob_0"));
    }
}
