mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sdi_selftest::{Error, Exec};

use output::{OutDir, RunManifest};

#[derive(Parser, Debug)]
#[command(
    name = "sdi-selftest",
    version,
    about = "Semi-device-independent self-testing toolkit"
)]
struct Cli {
    /// Output directory for CSV files, strategies and manifests.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (1 runs sequentially). Falls back to SDI_SELFTEST_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Analytic compatibility bounds applicable to a strategy.
    Bounds(BoundsArgs),
    /// Fidelity curves: the linear lower bound, the two conjectured families, the upper line.
    Curve(CurveArgs),
    /// Seesaw optimisation of a witness in a fixed dimension.
    Seesaw(SeesawArgs),
    /// Random-strategy sweep of witness value against both fidelities.
    Sweep(SweepArgs),
    /// Swap-method SDP lower bounds on the preparation fidelity.
    SdpFidelity(SdpArgs),
    /// Operator-inequality sweep over the dephasing angle.
    Verify(VerifyArgs),
    /// Exact classical bound by enumeration.
    Classical(ClassicalArgs),
    /// Re-run a recorded manifest and compare its outputs.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    /// Strategy JSON file or builtin:rac2|example2|s2|s3.
    #[arg(long)]
    strategy: String,
    /// Bias for the biased RAC bound.
    #[arg(long)]
    q: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Which {
    Lower,
    States,
    Meas,
    UpperConjecture,
}

#[derive(Args, Debug, Serialize)]
struct CurveArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Alignment restarts for the directly evaluated families.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct SeesawArgs {
    /// Witness JSON file or builtin:rac2|rac3|racN|biased:q|example2.
    #[arg(long)]
    witness: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    /// builtin:rac2 or builtin:example2 (compared with their ideal strategies).
    #[arg(long, default_value = "builtin:rac2")]
    witness: String,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Alignment restarts per point.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FieldArg {
    Complex,
    Real,
}

#[derive(Args, Debug, Serialize)]
struct SdpArgs {
    #[arg(long, default_value = "builtin:rac2")]
    witness: String,
    /// Witness threshold; with --grid, the upper end of the grid.
    #[arg(long = "a-star")]
    a_star: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of thresholds from the classical bound up to --a-star.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
    field: FieldArg,
    /// Sample only rank-one observables.
    #[arg(long)]
    no_trivial: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum IneqArg {
    Prep,
    Meas,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    ineq: IneqArg,
    /// Slope s, or `auto` for 4(1+√2).
    #[arg(long, default_value = "auto")]
    s: String,
    #[arg(long, default_value_t = 721)]
    grid: usize,
}

#[derive(Args, Debug, Serialize)]
struct ClassicalArgs {
    #[arg(long)]
    witness: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Args, Debug, Serialize)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Io(std::io::Error),
    /// A check that ran to completion and failed.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("malformed JSON: {e}"))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                Error::NoConvergence(_)
                | Error::EigenNoConvergence { .. }
                | Error::SpanBudget(_) => 3,
                Error::Domain { .. } | Error::Parse(_) | Error::Budget { .. } => 2,
                _ => 1,
            },
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// What a subcommand produced: stdout text, files to write, and the seed it used.
pub struct Report {
    pub stdout: String,
    pub files: Vec<(String, String)>,
    pub seed: Option<u64>,
}

fn exec_mode(threads: Option<usize>) -> Result<(Exec, Option<usize>), CliError> {
    let threads = match threads {
        Some(t) => Some(t),
        None => match std::env::var("SDI_SELFTEST_THREADS") {
            Ok(v) if !v.trim().is_empty() => Some(v.trim().parse().map_err(|_| {
                CliError::Usage(format!("SDI_SELFTEST_THREADS=`{v}` is not a number"))
            })?),
            _ => None,
        },
    };
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(1) => Ok((Exec::Sequential, Some(1))),
        Some(k) => {
            // the global pool can only be configured once per process
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global();
            Ok((Exec::Parallel, Some(k)))
        }
        None => Ok((Exec::Parallel, None)),
    }
}

/// Arguments after the program name with the output directory removed.
fn replayable_argv(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Bounds(_) => "bounds",
        Command::Curve(_) => "curve",
        Command::Seesaw(_) => "seesaw",
        Command::Sweep(_) => "sweep",
        Command::SdpFidelity(_) => "sdp-fidelity",
        Command::Verify(_) => "verify",
        Command::Classical(_) => "classical",
        Command::Replay(_) => "replay",
    }
}

fn dispatch(cmd: &Command, exec: Exec) -> Result<Report, CliError> {
    match cmd {
        Command::Bounds(a) => commands::bounds(a),
        Command::Curve(a) => commands::curve(a, exec),
        Command::Seesaw(a) => commands::seesaw(a, exec),
        Command::Sweep(a) => commands::sweep(a, exec),
        Command::SdpFidelity(a) => commands::sdp_fidelity(a, exec),
        Command::Verify(a) => commands::verify(a, exec),
        Command::Classical(a) => commands::classical(a, exec),
        Command::Replay(_) => unreachable!("replay is handled before dispatch"),
    }
}

fn run(args: Vec<String>) -> Result<(), CliError> {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code == 0 {
                return Ok(());
            }
            return Err(CliError::Usage(String::new()));
        }
    };
    if let Command::Replay(r) = &cli.command {
        return replay(&r.manifest, &args);
    }
    let (exec, threads) = exec_mode(cli.threads)?;
    let start = Instant::now();
    let report = dispatch(&cli.command, exec)?;
    let mut out = OutDir::new(&cli.out)?;
    for (name, contents) in &report.files {
        out.write(name, contents)?;
    }
    let name = subcommand_name(&cli.command);
    let mut params = serde_json::to_value(&cli.command)?;
    if let Some(inner) = params.get(name).cloned() {
        params = inner;
    }
    let manifest = RunManifest {
        tool: "sdi-selftest".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: name.into(),
        argv: replayable_argv(&args),
        parameters: params,
        seed: report.seed,
        threads,
        wall_ms: start.elapsed().as_millis(),
        outputs: out
            .written
            .iter()
            .map(|p| p.display().to_string())
            .collect(),
    };
    out.write(
        &format!("{name}.manifest.json"),
        &serde_json::to_string_pretty(&manifest)?,
    )?;
    print!("{}", report.stdout);
    Ok(())
}

/// Re-runs the manifest's arguments into `<manifest dir>/replay` and compares every CSV output,
/// ignoring wall-clock columns.
fn replay(path: &std::path::Path, args: &[String]) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)?;
    let manifest: RunManifest = serde_json::from_str(&text)?;
    let dir = path.parent().unwrap_or(std::path::Path::new("."));
    let target = dir.join("replay");
    let mut argv = vec![args[0].clone()];
    argv.extend(manifest.argv.iter().cloned());
    argv.push("--out".into());
    argv.push(target.display().to_string());
    run(argv)?;
    let mut mismatches = Vec::new();
    for out in manifest.outputs.iter().filter(|o| o.ends_with(".csv")) {
        let name = std::path::Path::new(out)
            .file_name()
            .expect("output file name");
        let old = std::fs::read_to_string(dir.join(name))?;
        let new = std::fs::read_to_string(target.join(name))?;
        if !output::csv_equal_except(&old, &new, &["solve_ms"]) {
            mismatches.push(name.to_string_lossy().into_owned());
        }
    }
    if mismatches.is_empty() {
        println!("REPLAY MATCH {}", manifest.subcommand);
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "REPLAY MISMATCH {}",
            mismatches.join(" ")
        )))
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
