use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use circle_ideals::roots::RootConfig;

mod commands;
mod render;

use render::Output;

/// Ideals of real-analytic functions on the circle, computed through
/// trigonometric polynomials.
#[derive(Parser, Debug)]
#[command(name = "circle-ideals", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(flatten)]
    roots: RootArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Root-finding settings shared by every subcommand.
#[derive(clap::Args, Debug)]
struct RootArgs {
    /// Roots with ||z| - 1| above this are off the circle.
    #[arg(long, global = true)]
    tol_radius: Option<f64>,
    /// Residual threshold relative to the coefficient scale.
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    /// Iteration budget of the simultaneous root iteration.
    #[arg(long, global = true)]
    max_iter: Option<u32>,
    /// Roots closer than this are one cluster.
    #[arg(long, global = true)]
    cluster_radius: Option<f64>,
    /// Samples used by sign-change counts.
    #[arg(long, global = true)]
    grid_size: Option<usize>,
}

impl RootArgs {
    fn config(&self) -> RootConfig {
        let d = RootConfig::default();
        RootConfig {
            tol_radius: self.tol_radius.unwrap_or(d.tol_radius),
            tol_residual: self.tol_residual.unwrap_or(d.tol_residual),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            cluster_radius: self.cluster_radius.unwrap_or(d.cluster_radius),
            grid_size: self.grid_size.unwrap_or(d.grid_size),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Zeros on the circle, with multiplicity, of a trigonometric polynomial.
    Roots {
        /// Expression in x, e.g. "cos(x)^2".
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// The ideal generated by one or more elements. Put expressions that
    /// start with '-' after `--`.
    Ideal {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Real generator of the ideal with the given divisor.
    Generator {
        /// Points as "theta:mult, ...", e.g. "pi/2:2, 3*pi/2:2".
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// All irreducible factorizations of the element with the given divisor.
    Factorizations {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Report counts and lengths only.
        #[arg(long)]
        summary: bool,
    },
    /// Generator of the corresponding ideal of the complex ring.
    ComplexGenerator {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Worked demonstrations.
    Demo {
        #[arg(value_enum)]
        which: Demo,
    },
    /// Seeded self-check of every invariant.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random cases per check, overriding the defaults.
        #[arg(long)]
        cases: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Demo {
    /// cos²x = (1 + sin x)(1 − sin x).
    Nonufd,
}

/// Failure with its exit code. Some failures still have a report to print.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub output: Option<Output>,
}

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = cli.roots.config();
    let result = match &cli.command {
        Command::Roots { expr } => commands::roots(expr, &cfg),
        Command::Ideal { exprs } => commands::ideal(exprs, &cfg),
        Command::Generator { points } => commands::generator(points, &cfg),
        Command::Factorizations { points, summary } => commands::factorizations(points, *summary, &cfg),
        Command::ComplexGenerator { points } => commands::complex_generator(points, &cfg),
        Command::Demo { which: Demo::Nonufd } => commands::demo_nonufd(&cfg),
        Command::Verify { seed, cases } => commands::verify(*seed, *cases, &cfg),
    };
    match result {
        Ok(out) => {
            emit(&out, cli.format);
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(out) = &f.output {
                emit(out, cli.format);
            }
            report_error(&f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: &Output, format: Format) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("values are finite"),
        Format::Text => out.text.trim_end().to_string(),
    };
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{text}");
}

fn report_error(message: &str) {
    diagnostic("error", "1;31", message);
}

pub fn warn(message: &str) {
    diagnostic("warning", "1;33", message);
}

/// One line on stderr, colored only on a terminal and when NO_COLOR is unset.
fn diagnostic(label: &str, ansi: &str, message: &str) {
    let stderr = std::io::stderr();
    let color = stderr.is_terminal() && std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty());
    let _ = if color {
        writeln!(stderr.lock(), "\x1b[{ansi}m{label}\x1b[0m: {message}")
    } else {
        writeln!(stderr.lock(), "{label}: {message}")
    };
}
