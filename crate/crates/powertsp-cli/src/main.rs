use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use powertsp_cli::verify::{run_suite, Suite};
use powertsp_cli::{
    classify_error, cmd_generate, cmd_solve, parse_weights, Algorithm, GenerateKind, SolveArgs,
    EXIT_OK, EXIT_VIOLATION,
};

/// Tours under powered Euclidean distances: generate instances, run the
/// tree-cube and exact solvers, verify the cost bounds.
#[derive(Parser)]
#[command(name = "powertsp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file (.csv or .json by extension).
    Generate {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run a solver on an instance file.
    Solve {
        /// Instance file (.csv or .json).
        instance: PathBuf,
        #[arg(long, value_enum)]
        alg: Alg,
        /// Distance exponent; overrides the instance file's value.
        #[arg(long)]
        alpha: Option<f64>,
        /// Attach the exact optimum (instances up to 22 points).
        #[arg(long)]
        with_opt: bool,
        /// Write the JSON run report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write an SVG drawing here (planar instances).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run randomized property suites; exits 1 on any violation.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Uniform points in the unit cube.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Equally spaced points on a line.
    Chain {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integer grid points.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// 3-d embedding of a {1,2}-weighted complete graph (.json only).
    Gadget {
        /// Source graph vertex count (>= 3).
        #[arg(long)]
        n: usize,
        /// Comma-separated edge weights in canonical order, e.g. 1,1,2.
        #[arg(long)]
        weights: String,
        /// Cities per unit length.
        #[arg(long, default_value_t = 4.0)]
        density: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    GeoT3,
    T3,
    DoubleTree,
    Exact,
    RevtspExact,
}

impl From<Alg> for Algorithm {
    fn from(a: Alg) -> Algorithm {
        match a {
            Alg::GeoT3 => Algorithm::GeoT3,
            Alg::T3 => Algorithm::T3,
            Alg::DoubleTree => Algorithm::DoubleTree,
            Alg::Exact => Algorithm::Exact,
            Alg::RevtspExact => Algorithm::RevtspExact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum SuiteArg {
    Lemmas,
    Bounds,
    Gabriel,
    Gadget,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Lemmas => Suite::Lemmas,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Gabriel => Suite::Gabriel,
            SuiteArg::Gadget => Suite::Gadget,
            SuiteArg::All => Suite::All,
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Generate { kind } => {
            let (kind, alpha, out) = match kind {
                GenKind::Random { n, d, seed, alpha, out } => {
                    (GenerateKind::Random { n, d, seed }, alpha, out)
                }
                GenKind::Chain { n, spacing, alpha, out } => {
                    (GenerateKind::Chain { n, spacing }, alpha, out)
                }
                GenKind::Grid { rows, cols, alpha, out } => {
                    (GenerateKind::Grid { rows, cols }, alpha, out)
                }
                GenKind::Gadget { n, weights, density, out } => (
                    GenerateKind::Gadget {
                        n,
                        weights: parse_weights(&weights)?,
                        density,
                    },
                    2.0,
                    out,
                ),
            };
            let n = cmd_generate(&kind, alpha, &out)?;
            println!("wrote {} ({n} points)", out.display());
            Ok(EXIT_OK)
        }
        Command::Solve {
            instance,
            alg,
            alpha,
            with_opt,
            report,
            svg,
        } => {
            let result = cmd_solve(&SolveArgs {
                instance: &instance,
                alg: alg.into(),
                alpha,
                with_opt,
                report: report.as_deref(),
                svg: svg.as_deref(),
            })?;
            println!("{}", result.summary_line());
            Ok(EXIT_OK)
        }
        Command::Verify { suite, seed, trials } => {
            let suite: Suite = suite.into();
            let summary = run_suite(suite, seed, trials);
            for (check, count) in &summary.checks {
                println!("ok {check} ({count} trials)");
            }
            if summary.passed() {
                println!(
                    "suite {}: all {} checks passed (seed {seed}, trials {trials})",
                    suite.name(),
                    summary.checks.len()
                );
                Ok(EXIT_OK)
            } else {
                for v in &summary.violations {
                    eprintln!("FAIL {}: {}", v.check, v.detail);
                }
                if let Some(v) = summary.violations.iter().find(|v| v.instance.is_some()) {
                    let path = format!("counterexample-{}.json", suite.name());
                    powertsp::instances::io::write_instance_json(
                        &path,
                        v.instance.as_ref().unwrap(),
                    )?;
                    eprintln!("counterexample instance written to {path}");
                }
                eprintln!(
                    "suite {}: {} violation(s)",
                    suite.name(),
                    summary.violations.len()
                );
                Ok(EXIT_VIOLATION)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify_error(&err) as u8)
        }
    }
}
