//! `lgi-pt` command line.
//!
//! Exit codes: 0 success, 1 runtime failure (including a failed `verify`),
//! 2 invalid flags. Data goes to stdout or `--out`; diagnostics to stderr.

use std::f64::consts::{FRAC_PI_4, PI};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::correlations::Method;
use crate::error::LgiError;
use crate::export::{self, Destination, Format};
use crate::par::Execution;
use crate::pt_core::{Alpha, PtHamiltonian, DEFAULT_EP_GUARD};
use crate::qmath::{Complex, ComplexVec2};
use crate::scan::{self, MaxSearch, ScanRow, SweepConfig, DEFAULT_GRID_POINTS};
use crate::verify::{verify_closed_forms, VerifyConfig};

pub const THREADS_ENV: &str = "LGI_PT_THREADS";

/// Parses an angle in radians; a trailing `pi` multiplies by π (`0.25pi`, `pi`).
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let value = match t.strip_suffix("pi") {
        Some("") => PI,
        Some("-") => -PI,
        Some(prefix) => {
            prefix
                .parse::<f64>()
                .map_err(|_| format!("invalid angle '{text}'"))?
                * PI
        }
        None => t
            .parse::<f64>()
            .map_err(|_| format!("invalid angle '{text}'"))?,
    };
    if !value.is_finite() {
        return Err(format!("angle '{text}' is not finite"));
    }
    Ok(value)
}

fn parse_steps(text: &str) -> Result<usize, String> {
    let n: usize = text
        .parse()
        .map_err(|_| format!("invalid step count '{text}'"))?;
    if n < 2 {
        return Err(format!("steps must be at least 2, got {n}"));
    }
    Ok(n)
}

fn parse_positive(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{text}'")),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lgi-pt",
    version,
    about = "Leggett-Garg K3 for a qubit under PT-symmetric non-unitary dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format
    #[arg(long, default_value = "csv", value_parser = str::parse::<Format>)]
    pub format: Format,
    /// Output file (defaults to standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Guard {
    /// Distance kept from the exceptional point alpha = pi/2 (radians, `pi` suffix allowed)
    #[arg(long = "ep-guard", default_value_t = DEFAULT_EP_GUARD, value_parser = parse_angle)]
    pub ep_guard: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// K3 over an (alpha, tau) grid
    Sweep {
        /// Comma-separated angles in radians (`0.25pi` accepted)
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse_angle)]
        alpha: Vec<f64>,
        #[arg(long = "tau-min", default_value_t = 0.0, value_parser = parse_angle)]
        tau_min: f64,
        #[arg(long = "tau-max", default_value_t = PI, value_parser = parse_angle)]
        tau_max: f64,
        /// Number of tau points including both ends (at least 2)
        #[arg(long, default_value_t = 256, value_parser = parse_steps)]
        steps: usize,
        #[arg(long, default_value = "sim", value_parser = str::parse::<Method>)]
        method: Method,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        guard: Guard,
    },
    /// Maximum of K3 over tau and the smallest maximizing tau
    K3max {
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse_angle)]
        alpha: Vec<f64>,
        /// Refinement tolerance in tau
        #[arg(long, default_value_t = scan::DEFAULT_REFINE_TOL, value_parser = parse_positive)]
        tol: f64,
        /// Grid points in the search window
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS, value_parser = parse_steps)]
        grid: usize,
        /// Upper end of the search window; correlations are pi-periodic in tau
        #[arg(long = "tau-window", default_value_t = FRAC_PI_4, value_parser = parse_angle)]
        tau_window: f64,
        #[arg(long, default_value = "sim", value_parser = str::parse::<Method>)]
        method: Method,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        guard: Guard,
    },
    /// Correlations and K3 at a single (alpha, tau)
    Corr {
        #[arg(long, value_parser = parse_angle)]
        alpha: f64,
        #[arg(long, value_parser = parse_angle)]
        tau: f64,
        #[arg(long, default_value = "sim", value_parser = str::parse::<Method>)]
        method: Method,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        guard: Guard,
    },
    /// Correlations at tau = pi/4
    Quarter {
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse_angle)]
        alpha: Vec<f64>,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        guard: Guard,
    },
    /// Compare both closed forms against simulation on seeded random points
    Verify {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
        tol: f64,
        /// Largest sampled alpha
        #[arg(long = "alpha-max", default_value_t = 0.49 * PI, value_parser = parse_angle)]
        alpha_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        guard: Guard,
    },
    /// Spectrum, eigenvectors and PT diagnostics of H(s, alpha)
    Eigen {
        #[arg(long, value_parser = parse_angle)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[command(flatten)]
        guard: Guard,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

fn usage(e: LgiError) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn alphas(values: &[f64], guard: &Guard) -> Result<Vec<Alpha>, CliError> {
    values
        .iter()
        .map(|&a| Alpha::with_guard(a, guard.ep_guard).map_err(usage))
        .collect()
}

/// Rendered output of a successful command.
struct Rendered {
    text: String,
    destination: Destination,
    /// Set when the command produced data but must still exit nonzero.
    failure: Option<String>,
}

fn destination(out: &Option<PathBuf>) -> Destination {
    out.clone().map_or(Destination::Stdout, Destination::File)
}

fn fmt_complex(z: Complex) -> String {
    format!("{}{:+}i", export::format_g17(z.re), z.im)
}

fn fmt_vec(v: &ComplexVec2) -> String {
    format!("({}, {})", fmt_complex(v.v1), fmt_complex(v.v2))
}

fn execute(command: &Command) -> Result<Rendered, CliError> {
    let g17 = export::format_g17;
    match command {
        Command::Sweep {
            alpha,
            tau_min,
            tau_max,
            steps,
            method,
            output,
            guard,
        } => {
            let mut config = SweepConfig::new(alphas(alpha, guard)?, *tau_min, *tau_max, *steps);
            config.method = *method;
            config.validate().map_err(usage)?;
            let points = scan::sweep_k3(&config).map_err(runtime)?;
            let mut rows = Vec::with_capacity(points.len());
            let mut failed = Vec::new();
            for p in points {
                match p {
                    Ok(r) => rows.push(r),
                    Err(e) => failed.push(format!("alpha={} tau={}: {}", e.alpha, e.tau, e.error)),
                }
            }
            Ok(Rendered {
                text: export::render_scan(&rows, output.format),
                destination: destination(&output.out),
                failure: (!failed.is_empty()).then(|| failed.join("\n")),
            })
        }
        Command::K3max {
            alpha,
            tol,
            grid,
            tau_window,
            method,
            output,
            guard,
        } => {
            if !(*tau_window > 0.0) {
                return Err(CliError::Usage("--tau-window must be positive".into()));
            }
            let search = MaxSearch {
                grid_points: *grid,
                window_max: *tau_window,
                refine_tol: *tol,
                method: *method,
                execution: Execution::default(),
            };
            let records = scan::k3_max_scan(&alphas(alpha, guard)?, &search).map_err(runtime)?;
            Ok(Rendered {
                text: export::render_extrema(&records, output.format),
                destination: destination(&output.out),
                failure: None,
            })
        }
        Command::Corr {
            alpha,
            tau,
            method,
            output,
            guard,
        } => {
            let a = Alpha::with_guard(*alpha, guard.ep_guard).map_err(usage)?;
            if !(*tau >= 0.0) {
                return Err(usage(LgiError::InvalidTau(*tau)));
            }
            let row = ScanRow::evaluate(a, *tau, *method).map_err(runtime)?;
            Ok(Rendered {
                text: export::render_scan(&[row], output.format),
                destination: destination(&output.out),
                failure: None,
            })
        }
        Command::Quarter {
            alpha,
            output,
            guard,
        } => {
            let rows =
                scan::correlations_at_quarter_tau(&alphas(alpha, guard)?).map_err(runtime)?;
            Ok(Rendered {
                text: export::render_scan(&rows, output.format),
                destination: destination(&output.out),
                failure: None,
            })
        }
        Command::Verify {
            samples,
            seed,
            tol,
            alpha_max,
            out,
            guard,
        } => {
            Alpha::with_guard(*alpha_max, guard.ep_guard).map_err(usage)?;
            let config = VerifyConfig {
                samples: *samples,
                seed: *seed,
                alpha_max: *alpha_max,
                tol: *tol,
                execution: Execution::default(),
            };
            let report = verify_closed_forms(&config).map_err(usage)?;
            let failure = (!report.passed()).then(|| {
                format!(
                    "closed-repaired deviates from simulation by {:e} (tolerance {:e})",
                    report.repaired.max_abs_dev, tol
                )
            });
            Ok(Rendered {
                text: format!("{report}\n"),
                destination: destination(out),
                failure,
            })
        }
        Command::Eigen { alpha, s, guard } => {
            let a = Alpha::with_guard(*alpha, guard.ep_guard).map_err(usage)?;
            let h = PtHamiltonian::new(*s, a).map_err(usage)?;
            let es = h.eigensystem();
            let text = format!(
                "alpha={}\ns={}\ne_plus={}\ne_minus={}\ndelta_e={}\nv_plus={}\nv_minus={}\n\
                 normalized_overlap={}\nresidual={}\npt_defect={}\n",
                g17(a.value()),
                g17(*s),
                g17(es.e_plus),
                g17(es.e_minus),
                g17(es.delta_e),
                fmt_vec(&es.v_plus),
                fmt_vec(&es.v_minus),
                g17(es.normalized_overlap()),
                g17(es.residual(h.matrix())),
                g17(h.pt_defect()),
            );
            Ok(Rendered {
                text,
                destination: Destination::Stdout,
                failure: None,
            })
        }
    }
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

fn execute_with_threads(command: &Command) -> Result<Rendered, CliError> {
    let cap = thread_cap()?;
    #[cfg(feature = "parallel")]
    if let Some(n) = cap {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(runtime)?;
        return pool.install(|| execute(command));
    }
    let _ = cap;
    execute(command)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };

    let result = execute_with_threads(&cli.command).and_then(|rendered| {
        match &rendered.destination {
            Destination::Stdout => out.write_all(rendered.text.as_bytes()).map_err(runtime)?,
            dest => export::write_text(&rendered.text, dest).map_err(runtime)?,
        }
        match rendered.failure {
            Some(msg) => Err(CliError::Runtime(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}
