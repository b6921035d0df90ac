//! `qhsiegel`: runs the verification suites, evaluates kernels and writes tables.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use qhsiegel::greens;
use qhsiegel::table::{emit_table, Grid, TableKind};
use qhsiegel::verify::{run_suite, Suite};
use qhsiegel::{Error, QuadratureSpec, Quaternion};
use serde_json::json;

const EXIT_USAGE: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "qhsiegel", version, about = "Quaternionic Siegel half-space kernels: checks, evaluation, tables")]
struct Cli {
    #[command(flatten)]
    quad: QuadArgs,

    /// Worker threads for the parallel loops (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

/// Overrides for the default quadrature spec.
#[derive(Debug, Args)]
struct QuadArgs {
    #[arg(long, global = true, value_name = "TOL")]
    rel_tol: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    abs_tol: Option<f64>,
    /// Gauss-Legendre nodes per angular dimension on spheres.
    #[arg(long, global = true, value_name = "N")]
    sphere_order: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    max_subdiv: Option<usize>,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        let mut spec = QuadratureSpec::default();
        if let Some(v) = self.rel_tol {
            spec.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            spec.abs_tol = v;
        }
        if let Some(v) = self.sphere_order {
            spec.sphere_order = v;
        }
        if let Some(v) = self.max_subdiv {
            spec.max_subdivisions = v;
        }
        spec
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a check suite and report one line per check.
    Verify {
        #[arg(value_parser = parse_suite, conflicts_with = "suite_flag")]
        suite: Option<Suite>,
        #[arg(long = "suite", id = "suite_flag", value_parser = parse_suite, value_name = "SUITE")]
        suite_flag: Option<Suite>,
        /// Write the report as JSON (`-` for stdout).
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        /// Write the report as CSV (`-` for stdout).
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Evaluate a kernel at one point and print JSON.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Tabulate a kernel over a grid, e.g. `--grid "x=0.5:2:4; t=-1,0,1"`.
    Table {
        #[arg(value_parser = parse_table_kind)]
        kind: TableKind,
        #[arg(long, value_parser = parse_grid, default_value = "")]
        grid: Grid,
        /// Output CSV (`-` for stdout).
        #[arg(long, value_name = "FILE", default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum EvalCommand {
    /// K_λ(x, t) from the polar-reduced integral.
    Klambda {
        #[arg(long, value_parser = parse_vec::<4>, allow_hyphen_values = true)]
        x: [f64; 4],
        #[arg(long, value_parser = parse_vec::<3>, allow_hyphen_values = true)]
        t: [f64; 3],
        #[arg(long, value_parser = parse_vec::<3>, allow_hyphen_values = true, default_value = "0,0,0")]
        lambda: [f64; 3],
    },
    /// The Heisenberg kernel, by quadrature when |λ| < 2 and in closed form otherwise.
    Heis {
        #[arg(long, value_parser = parse_vec::<4>, allow_hyphen_values = true)]
        x: [f64; 4],
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        lambda: f64,
        /// Use the Γ-product closed form even inside the quadrature range.
        #[arg(long)]
        closed: bool,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_table_kind(s: &str) -> Result<TableKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_vec<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let n = values.len();
    values.try_into().map_err(|_| format!("expected {N} comma-separated numbers, got {n}"))
}

/// `-` is stdout.
fn open(path: &Path) -> io::Result<Box<dyn Write>> {
    if path == Path::new("-") {
        Ok(Box::new(io::stdout().lock()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(if err.is_nonconvergence() { EXIT_NONCONVERGENCE } else { EXIT_USAGE })
}

fn io_fail(path: &Path, err: io::Error) -> ExitCode {
    eprintln!("error: {}: {err}", path.display());
    ExitCode::from(EXIT_USAGE)
}

fn verify(suite: Suite, spec: &QuadratureSpec, json_out: Option<&Path>, csv_out: Option<&Path>) -> ExitCode {
    let start = Instant::now();
    let report = match run_suite(suite, spec) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    eprintln!("{} finished in {:.2} s", suite, start.elapsed().as_secs_f64());
    let to_stdout = |p: Option<&Path>| p == Some(Path::new("-"));
    if !to_stdout(json_out) && !to_stdout(csv_out) {
        println!("{report}");
    }
    if let Some(path) = json_out {
        let written = open(path).and_then(|mut w| writeln!(w, "{}", report.to_json()).and_then(|_| w.flush()));
        if let Err(e) = written {
            return io_fail(path, e);
        }
    }
    if let Some(path) = csv_out {
        let written = open(path).map_err(|e| Error::Io(e.to_string())).and_then(|w| report.write_csv(w));
        if let Err(e) = written {
            return fail(&e);
        }
    }
    ExitCode::from(report.verdict().exit_code() as u8)
}

fn print_eval(kernel: &str, inputs: serde_json::Value, value: Quaternion, error: f64, converged: bool) -> ExitCode {
    let out = json!({
        "kernel": kernel,
        "inputs": inputs,
        "value": value,
        "error": error,
        "converged": converged,
    });
    println!("{out}");
    if converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NONCONVERGENCE)
    }
}

fn eval(cmd: &EvalCommand, spec: &QuadratureSpec) -> ExitCode {
    match *cmd {
        EvalCommand::Klambda { x, t, lambda } => match greens::k_lambda(&x, t, lambda, spec) {
            Ok(e) => print_eval("klambda", json!({ "x": x, "t": t, "lambda": lambda }), e.value, e.error, e.converged),
            Err(e) => fail(&e),
        },
        EvalCommand::Heis { x, t, lambda, closed } => {
            let inputs = json!({ "x": x, "t": t, "lambda": lambda });
            let result = if closed || lambda.abs() >= 2.0 {
                greens::heis_k_closed(&x, t, lambda).map(|v| (v, 0.0, true))
            } else {
                greens::heis_k_quadrature(&x, t, lambda, spec).map(|e| (e.value, e.error, e.converged))
            };
            match result {
                Ok((v, err, converged)) => print_eval("heis", inputs, v, err, converged),
                Err(e) => fail(&e),
            }
        }
    }
}

fn table(kind: TableKind, grid: &Grid, spec: &QuadratureSpec, out: &Path) -> ExitCode {
    let start = Instant::now();
    let writer = match open(out) {
        Ok(w) => w,
        Err(e) => return io_fail(out, e),
    };
    match emit_table(kind, grid, spec, writer) {
        Ok(summary) => {
            eprintln!(
                "{} rows ({} skipped, {} not converged) in {:.2} s",
                summary.rows,
                summary.skipped,
                summary.nonconverged,
                start.elapsed().as_secs_f64()
            );
            if summary.nonconverged > 0 {
                ExitCode::from(EXIT_NONCONVERGENCE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(&e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let spec = cli.quad.spec();
    if let Err(e) = spec.validate() {
        return fail(&Error::from(e));
    }
    match &cli.command {
        Command::Verify {
            suite,
            suite_flag,
            json,
            csv,
        } => {
            let suite = suite.or(*suite_flag).unwrap_or(Suite::All);
            verify(suite, &spec, json.as_deref(), csv.as_deref())
        }
        Command::Eval(cmd) => eval(cmd, &spec),
        Command::Table { kind, grid, out } => table(*kind, grid, &spec, out),
    }
}
