use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use confmax::cli::commands::{
    character_report, export_field, gram_report, parse_family, planewave_report, MinkowskiGrid,
};
use confmax::cli::{run_suite, Format, SuiteConfig};
use confmax::fields::{MaxwellBasisLabel, Sign};
use confmax::linalg::c;
use confmax::par::{self, Exec};
use confmax::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Maxwell fields on U(2), the conformal U(2,2) action and its invariants.
#[derive(Parser, Debug)]
#[command(name = "confmax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// json or csv.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    Verify {
        /// geometry, ktypes, maxwell, conformal, pairing, lie-action, branching, planewave or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 5)]
        k_max: u32,
        /// Random points per check (default: each check's own count).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 20_240_101)]
        seed: u64,
        /// Quadrature order, or truncation order for branching; "auto" by default.
        #[arg(long, default_value = "auto")]
        order: String,
        /// Tolerance override, name=value. Repeatable.
        #[arg(long = "tol")]
        tol: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Gram matrix of one family of basis solutions.
    Gram {
        /// L+, L-, R+ or R-.
        #[arg(long, default_value = "L+")]
        family: String,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Character series of the Maxwell representations to a given order.
    Character {
        #[arg(long, default_value_t = 40)]
        order: u32,
        /// + or -.
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        family: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sample E and H of a basis solution on a Minkowski grid (CSV).
    ExportField {
        /// Basis label such as 0L+ or 2R-.
        #[arg(long, default_value = "0L+")]
        label: String,
        /// Points per axis.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Half-width of the box [-w, w]^4.
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Plane wave with wave vector u, frequency freq and amplitude E0.
    Planewave {
        /// u1,u2,u3
        #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        freq: f64,
        /// Real amplitude e1,e2,e3.
        #[arg(long, default_value = "1,0,0", allow_hyphen_values = true)]
        e0: String,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidLabel(_) | Error::Constraint(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn parse_vec3(s: &str) -> Result<[f64; 3], Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("expected three comma-separated numbers, got {s:?}")))?;
    parts.try_into().map_err(|_| Failure::Usage(format!("expected three components, got {s:?}")))
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    let res = match output {
        Some(p) => std::fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::Runtime(format!("writing output: {e}")))
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Failure::Runtime(e.to_string()))
}

fn json_only(format: &str) -> Result<(), Failure> {
    match format {
        "json" => Ok(()),
        f => Err(Failure::Usage(format!("this command writes json only, got format {f:?}"))),
    }
}

/// Returns whether all checks passed.
fn run(cli: Cli) -> Result<bool, Failure> {
    let exec = Exec::default();
    match cli.command {
        Command::Verify { suite, k_max, samples, seed, order, tol, common } => {
            let format: Format = common.format.parse()?;
            let order = match order.as_str() {
                "auto" => None,
                s => Some(
                    s.parse::<u32>()
                        .map_err(|_| Failure::Usage(format!("order must be a number or auto, got {s:?}")))?,
                ),
            };
            let mut cfg = SuiteConfig {
                suite,
                k_max,
                samples,
                seed,
                order,
                output: common.output.as_ref().map(|p| p.display().to_string()),
                format,
                ..SuiteConfig::default()
            };
            for t in &tol {
                cfg.set_tolerance(t)?;
            }
            cfg.validate()?;
            let report = run_suite(&cfg, exec)?;
            emit(&report.render(format)?, &common.output)?;
            for f in report.failures() {
                eprintln!(
                    "FAIL {}: measured {:e}, expected {:e}, tol {:e} {}",
                    f.id, f.measured, f.expected, f.tolerance, f.detail
                );
            }
            Ok(report.passed)
        }
        Command::Gram { family, k_max, common } => {
            json_only(&common.format)?;
            let (side, sign) = parse_family(&family)?;
            emit(&json(&gram_report(side, sign, k_max, exec)?)?, &common.output)?;
            Ok(true)
        }
        Command::Character { order, family, common } => {
            json_only(&common.format)?;
            let sign = match family.as_str() {
                "+" | "plus" => Sign::Plus,
                "-" | "minus" => Sign::Minus,
                f => return Err(Failure::Usage(format!("family must be + or -, got {f:?}"))),
            };
            let r = character_report(order, sign)?;
            emit(&json(&r)?, &common.output)?;
            Ok(r.check.passed())
        }
        Command::ExportField { label, samples, half_width, output } => {
            let label: MaxwellBasisLabel = label.parse()?;
            let grid = MinkowskiGrid { points: samples, half_width };
            grid.coordinates().map_err(|e| Failure::Usage(e.to_string()))?;
            match output {
                Some(p) => {
                    let f = File::create(&p).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?;
                    export_field(label, grid, io::BufWriter::new(f), exec)?;
                }
                None => {
                    export_field(label, grid, io::stdout().lock(), exec)?;
                }
            }
            Ok(true)
        }
        Command::Planewave { u, freq, e0, common } => {
            json_only(&common.format)?;
            let u = parse_vec3(&u)?;
            let e0 = parse_vec3(&e0)?.map(|v| c(v, 0.0));
            emit(&json(&planewave_report(u, freq, e0)?)?, &common.output)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("CONFMAX_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => par::init_threads(n),
            _ => {
                eprintln!("error: CONFMAX_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
