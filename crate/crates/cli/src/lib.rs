//! Command-line front end: evaluation, tables, divergence scans and
//! verification suites. Numbers are printed with 17 significant digits.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use binet::fmt::g17;
use binet::kernel::{delta, delta_prime, delta_second, KernelParams};
use binet::quad::{divergence_scan, QuadConfig, DEFAULT_SCAN_EPSILONS};
use binet::remainder::{f_pq, theta_alpha_deriv, FpqParams, Method, MAX_DERIV};
use binet::verify::{
    merged_claims, run_suites, write_csv, GridSpec, PropertyReport, Status, Suite,
};
use binet::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit code for success and all-pass verification.
pub const EXIT_OK: i32 = 0;
/// Exit code for a verification violation or a failed computation.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit code for usage errors and invalid arguments.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "binet",
    version,
    about = "Extended Binet remainder of log-gamma and its kernel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kernel δ_{a,b}(t) or one of its first two derivatives.
    EvalDelta {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Derivative order, 0 to 2.
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=2))]
        deriv: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Extended remainder θ_α(x) or its k-th derivative.
    EvalTheta {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        x: f64,
        /// Derivative order, 0 to 6.
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        #[command(flatten)]
        output: Output,
    },
    /// f_{p,q;α}(x) = θ_α(px) − q θ_α(x).
    EvalF {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        #[command(flatten)]
        output: Output,
    },
    /// Table of θ_α^{(k)} over log-spaced x, or of the kernel over
    /// log-spaced t when --a and --b are given.
    Table {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true, requires = "b")]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true, requires = "a")]
        b: Option<f64>,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        /// Number of rows.
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(2..=100_000))]
        samples: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Growth of the truncated kernel integral against ln(1/ε).
    Divergence {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run verification suites.
    Verify {
        /// theorem1, theorem2, theorem3, remark or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random samples per claim.
        #[arg(long)]
        samples: Option<usize>,
        /// Also write the CSV report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Quad,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => Method::Closed,
            MethodArg::Quad => Method::Quad,
            MethodArg::Both => Method::Both,
        }
    }
}

/// Failure of a command after parsing.
enum Failure {
    Usage(String),
    Violation(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => Failure::Violation(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Data goes to `out`, diagnostics to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Violation(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_VIOLATION
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_VIOLATION
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::EvalDelta {
            a,
            b,
            t,
            deriv,
            output,
        } => eval_delta(a, b, t, deriv, output.format, out),
        Command::EvalTheta {
            alpha,
            x,
            deriv,
            method,
            output,
        } => eval_theta(alpha, x, deriv, method.into(), output.format, out),
        Command::EvalF {
            p,
            q,
            alpha,
            x,
            method,
            output,
        } => eval_f(p, q, alpha, x, method.into(), output.format, out),
        Command::Table {
            alpha,
            a,
            b,
            deriv,
            method,
            samples,
            output,
        } => match (a, b) {
            (Some(a), Some(b)) => kernel_table(a, b, samples as usize, output.format, out),
            _ => theta_table(
                alpha,
                deriv,
                method.into(),
                samples as usize,
                output.format,
                out,
            ),
        },
        Command::Divergence { a, b, x, output } => divergence(a, b, x, output.format, out),
        Command::Verify {
            suite,
            seed,
            samples,
            report,
            output,
        } => verify(&suite, seed, samples, report, output.format, out, err),
    }
}

fn csv_line(out: &mut dyn Write, fields: &[String]) -> io::Result<()> {
    writeln!(out, "{}", fields.join(","))
}

fn eval_delta(
    a: f64,
    b: f64,
    t: f64,
    deriv: u32,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let params = KernelParams::new(a, b)?;
    let value = match deriv {
        0 => delta(params, t)?,
        1 => delta_prime(params, t)?,
        _ => delta_second(params, t)?,
    };
    match format {
        Format::Plain => writeln!(out, "{}", g17(value))?,
        Format::Csv => {
            writeln!(out, "a,b,t,deriv,value")?;
            csv_line(
                out,
                &[g17(a), g17(b), g17(t), deriv.to_string(), g17(value)],
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn check_deriv(k: u32) -> std::result::Result<(), Failure> {
    if k > MAX_DERIV {
        return Err(Failure::Usage(format!(
            "--deriv must be at most {MAX_DERIV}, got {k}"
        )));
    }
    Ok(())
}

/// Columns: closed, quad, disagreement; absent routes print as empty.
fn theta_fields(
    alpha: f64,
    x: f64,
    k: u32,
    method: Method,
    cfg: &QuadConfig,
) -> std::result::Result<[String; 3], Failure> {
    let ev = theta_alpha_deriv(alpha, x, k, method, cfg)?;
    if let Some(q) = &ev.quadrature {
        if !q.converged {
            return Err(Failure::Violation(format!(
                "quadrature did not converge at alpha={}, x={} (error estimate {})",
                g17(alpha),
                g17(x),
                g17(q.err_estimate)
            )));
        }
    }
    let closed = ev.closed.map(g17).unwrap_or_default();
    let quad = ev.quadrature.map(|q| g17(q.value)).unwrap_or_default();
    let disagreement = if method == Method::Both {
        g17(ev.disagreement)
    } else {
        String::new()
    };
    Ok([closed, quad, disagreement])
}

fn eval_theta(
    alpha: f64,
    x: f64,
    k: u32,
    method: Method,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    check_deriv(k)?;
    let [closed, quad, disagreement] = theta_fields(alpha, x, k, method, &QuadConfig::default())?;
    match format {
        Format::Plain => match method {
            Method::Closed => writeln!(out, "{closed}")?,
            Method::Quad => writeln!(out, "{quad}")?,
            Method::Both => {
                writeln!(out, "closed {closed}")?;
                writeln!(out, "quad {quad}")?;
                writeln!(out, "disagreement {disagreement}")?;
            }
        },
        Format::Csv => {
            writeln!(out, "alpha,x,deriv,method,closed,quad,disagreement")?;
            csv_line(
                out,
                &[
                    g17(alpha),
                    g17(x),
                    k.to_string(),
                    method.to_string(),
                    closed,
                    quad,
                    disagreement,
                ],
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn eval_f(
    p: f64,
    q: f64,
    alpha: f64,
    x: f64,
    method: Method,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let params = FpqParams::new(p, q, alpha)?;
    let value = f_pq(params, x, method, &QuadConfig::default())?;
    match format {
        Format::Plain => writeln!(out, "{}", g17(value))?,
        Format::Csv => {
            writeln!(out, "p,q,alpha,x,method,value")?;
            csv_line(
                out,
                &[
                    g17(p),
                    g17(q),
                    g17(alpha),
                    g17(x),
                    method.to_string(),
                    g17(value),
                ],
            )?;
        }
    }
    Ok(EXIT_OK)
}

/// `n` log-spaced points on [lo, hi].
fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

const TABLE_X: (f64, f64) = (0.05, 50.0);
const TABLE_T: (f64, f64) = (1e-3, 50.0);

fn theta_table(
    alpha: f64,
    k: u32,
    method: Method,
    n: usize,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    check_deriv(k)?;
    let cfg = QuadConfig::default();
    let header = "alpha,x,deriv,closed,quad,disagreement";
    match format {
        Format::Plain => writeln!(out, "# {}", header.replace(',', " "))?,
        Format::Csv => writeln!(out, "{header}")?,
    }
    let sep = if format == Format::Csv { "," } else { " " };
    for x in log_points(TABLE_X.0, TABLE_X.1, n) {
        let [closed, quad, disagreement] = theta_fields(alpha, x, k, method, &cfg)?;
        let row = [
            g17(alpha),
            g17(x),
            k.to_string(),
            closed,
            quad,
            disagreement,
        ];
        writeln!(out, "{}", row.join(sep))?;
    }
    Ok(EXIT_OK)
}

fn kernel_table(a: f64, b: f64, n: usize, format: Format, out: &mut dyn Write) -> CmdResult {
    let params = KernelParams::new(a, b)?;
    let header = "a,b,t,delta,delta_prime,delta_second";
    let sep = if format == Format::Csv { "," } else { " " };
    match format {
        Format::Plain => writeln!(out, "# {}", header.replace(',', " "))?,
        Format::Csv => writeln!(out, "{header}")?,
    }
    for t in log_points(TABLE_T.0, TABLE_T.1, n) {
        let row = [
            g17(a),
            g17(b),
            g17(t),
            g17(delta(params, t)?),
            g17(delta_prime(params, t)?),
            g17(delta_second(params, t)?),
        ];
        writeln!(out, "{}", row.join(sep))?;
    }
    Ok(EXIT_OK)
}

fn divergence(a: f64, b: f64, x: f64, format: Format, out: &mut dyn Write) -> CmdResult {
    let params = KernelParams::new(a, b)?;
    let fit = divergence_scan(params, x, &DEFAULT_SCAN_EPSILONS, &QuadConfig::default())?;
    match format {
        Format::Plain => {
            writeln!(out, "slope {}", g17(fit.slope))?;
            writeln!(out, "expected_slope {}", g17(params.mid()))?;
            writeln!(out, "intercept {}", g17(fit.intercept))?;
            writeln!(out, "residual {}", g17(fit.residual))?;
            for (e, v) in fit.epsilons.iter().zip(&fit.values) {
                writeln!(out, "integral epsilon={} {}", g17(*e), g17(*v))?;
            }
        }
        Format::Csv => {
            writeln!(out, "a,b,x,epsilon,integral,slope,intercept")?;
            for (e, v) in fit.epsilons.iter().zip(&fit.values) {
                csv_line(
                    out,
                    &[
                        g17(a),
                        g17(b),
                        g17(x),
                        g17(*e),
                        g17(*v),
                        g17(fit.slope),
                        g17(fit.intercept),
                    ],
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn parse_suites(name: &str) -> std::result::Result<Vec<Suite>, Failure> {
    if name == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    name.parse::<Suite>().map(|s| vec![s]).map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        Failure::Usage(format!(
            "unknown suite {name:?}; expected one of {} or all",
            names.join(", ")
        ))
    })
}

fn verify(
    suite: &str,
    seed: u64,
    samples: Option<usize>,
    report: Option<PathBuf>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let suites = parse_suites(suite)?;
    let mut grid = GridSpec::default().with_seed(seed);
    if let Some(n) = samples {
        grid = grid.with_samples(n);
    }
    let reports = run_suites(&suites, &grid)?;
    let claims = merged_claims(&reports);
    match format {
        Format::Plain => {
            for c in &claims {
                writeln!(out, "{c}")?;
            }
        }
        Format::Csv => write_csv(&claims, &mut *out)?,
    }
    if let Some(path) = report {
        let file = File::create(&path)?;
        write_csv(&claims, file)?;
    }
    let failed: Vec<&PropertyReport> = claims.iter().filter(|c| c.status == Status::Fail).collect();
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        for c in failed {
            writeln!(
                err,
                "violation: {} worst_margin={} at {}",
                c.claim_id,
                g17(c.worst_margin),
                c.coordinates_string()
            )?;
        }
        Ok(EXIT_VIOLATION)
    }
}
