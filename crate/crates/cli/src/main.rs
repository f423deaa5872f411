//! `invmean`: evaluate means, build complementary pairs and run the
//! verification scans from the command line.
//!
//! Exit status: 0 on success or a passing check, 1 when a check fails,
//! 2 on usage, parse or domain errors.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use invariant_means::iterate::gap;
use invariant_means::multivar::counterexample_ratio;
use invariant_means::verify::{
    check_flags, check_invariance, check_meanness, check_monotone, check_monotone_trace,
    check_trace_meanness, log_grid,
};
use invariant_means::{
    general_pair, invariant_value_along_trajectory, iterate_pair, parse_mean, parse_pair, xy_pair,
    ConeSet, MeanError, MeanFn, MeanPair, MeanSpec, ScanConfig, ScanReport,
};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "invmean",
    version,
    about = "Invariant means and complementary pairs"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Scan domain and resolution, `lo:hi:points_per_axis`.
    #[arg(long, global = true, value_name = "LO:HI:N")]
    grid: Option<String>,
    /// Relative tolerance for scans.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for the random part of the scans.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of text reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    Mean,
    Trace,
    Monotone,
    Invariance,
    Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Table,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a mean at one point.
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long)]
        mean: String,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Run a verification scan.
    Check {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, conflicts_with = "pair", required_unless_present = "pair")]
        mean: Option<String>,
        #[arg(long)]
        pair: Option<String>,
    },
    /// Build a complementary pair for a mean and tabulate it.
    #[command(allow_negative_numbers = true)]
    Complement {
        #[arg(long)]
        mean: String,
        #[arg(long, requires = "d", conflicts_with = "cone")]
        c: Option<String>,
        #[arg(long, requires = "c")]
        d: Option<String>,
        /// Build the projective pair over a built-in cone set instead.
        #[arg(long, required_unless_present = "c")]
        cone: Option<String>,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Iterate the mean-type mapping of a pair.
    #[command(allow_negative_numbers = true)]
    Iterate {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        y0: f64,
        /// Stop once the relative gap is at most this.
        #[arg(long, default_value_t = 1e-14)]
        stop: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// The n-variable counterexample ratio.
    #[command(allow_negative_numbers = true)]
    Counterexample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        x: f64,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Mean(#[from] MeanError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

struct Ctx {
    cfg: ScanConfig,
    has_grid: bool,
    json: bool,
}

impl Ctx {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let mut cfg = ScanConfig::default().with_seed(cli.seed);
        if let Some(g) = &cli.grid {
            let parts: Vec<&str> = g.split(':').collect();
            let bad = || CliError::Usage(format!("--grid expects lo:hi:n, got `{g}`"));
            if parts.len() != 3 {
                return Err(bad());
            }
            cfg.lo = parts[0].parse().map_err(|_| bad())?;
            cfg.hi = parts[1].parse().map_err(|_| bad())?;
            cfg.points_per_axis = parts[2].parse().map_err(|_| bad())?;
        }
        if let Some(t) = cli.tol {
            cfg = cfg.with_tol(t);
        }
        cfg.validate()?;
        Ok(Ctx {
            cfg,
            has_grid: cli.grid.is_some(),
            json: cli.json,
        })
    }

    fn header(&self) -> String {
        format!(
            "seed {}  grid {:e}:{:e}:{}  tol {:e}",
            self.cfg.seed, self.cfg.lo, self.cfg.hi, self.cfg.points_per_axis, self.cfg.rel_tol
        )
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let ctx = Ctx::from_cli(cli)?;
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Eval { mean, x, y } => {
            let m = parse_mean(mean)?;
            if !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()) {
                return Err(CliError::Usage(format!(
                    "means take positive finite arguments, got ({x}, {y})"
                )));
            }
            let v = m.eval(*x, *y);
            if ctx.json {
                writeln!(
                    out,
                    "{}",
                    json!({"mean": m.label(), "x": x, "y": y, "value": v})
                )?;
            } else {
                writeln!(out, "{v}")?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { what, mean, pair } => {
            let spec = match (mean, pair) {
                (Some(s), _) => MeanSpec::Mean(parse_mean(s)?),
                (None, Some(s)) => MeanSpec::Pair(parse_pair(s)?),
                (None, None) => unreachable!("clap requires one of --mean, --pair"),
            };
            check(&ctx, *what, &spec, &mut out)
        }
        Command::Complement {
            mean,
            c,
            d,
            cone,
            t,
            emit,
        } => {
            let m = parse_mean(mean)?;
            let pair = match (c, d, cone) {
                (Some(c), Some(d), _) => general_pair(&m, &parse_mean(c)?, &parse_mean(d)?, *t)?,
                (_, _, Some(a)) => xy_pair(&m, *t, &ConeSet::builtin(a)?)?,
                _ => return Err(CliError::Usage("give either --c and --d, or --cone".into())),
            };
            complement(&ctx, &pair, *emit, &mut out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Iterate {
            pair,
            x0,
            y0,
            stop,
            max_iter,
            emit,
        } => {
            let pair = parse_pair(pair)?;
            iterate(&ctx, &pair, (*x0, *y0), *stop, *max_iter, *emit, &mut out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Counterexample { n, t, x } => {
            let ratio = counterexample_ratio(*n, *t, *x)?;
            let limit = *n as f64 - 1.0;
            if ctx.json {
                writeln!(
                    out,
                    "{}",
                    json!({"n": n, "t": t, "x": x, "ratio": ratio, "limit": limit})
                )?;
            } else {
                writeln!(out, "ratio {ratio}")?;
                writeln!(out, "limit {limit}")?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    target: &'a str,
    seed: u64,
    #[serde(flatten)]
    report: &'a ScanReport,
}

fn run_one(ctx: &Ctx, what: What, f: &MeanFn) -> Result<ScanReport, CliError> {
    let cfg = &ctx.cfg;
    Ok(match what {
        What::Mean => check_meanness(f, cfg),
        What::Trace => check_trace_meanness(f, cfg)?,
        What::Monotone => {
            let fl = f.flags();
            if fl.symmetric && fl.homogeneous {
                check_monotone_trace(f, cfg)?
            } else {
                check_monotone(f, cfg)
            }
        }
        What::Flags => check_flags(f, cfg),
        What::Invariance => unreachable!(),
    })
}

fn check(
    ctx: &Ctx,
    what: What,
    spec: &MeanSpec,
    out: &mut impl Write,
) -> Result<ExitCode, CliError> {
    let reports: Vec<(String, ScanReport)> = match (what, spec) {
        (What::Invariance, MeanSpec::Pair(p)) => {
            vec![(p.label().to_string(), check_invariance(p, &ctx.cfg))]
        }
        (What::Invariance, MeanSpec::Mean(_)) => {
            return Err(CliError::Usage("--what invariance needs --pair".into()))
        }
        (_, MeanSpec::Mean(m)) => vec![(m.label().to_string(), run_one(ctx, what, m)?)],
        (_, MeanSpec::Pair(p)) => vec![
            (format!("k:({})", p.label()), run_one(ctx, what, p.k())?),
            (format!("l:({})", p.label()), run_one(ctx, what, p.l())?),
        ],
    };
    let passed = reports.iter().all(|(_, r)| r.passed);
    if ctx.json {
        for (target, report) in &reports {
            let j = JsonReport {
                target,
                seed: ctx.cfg.seed,
                report,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string(&j).expect("report serializes")
            )?;
        }
    } else {
        writeln!(out, "{}", ctx.header())?;
        for (target, r) in &reports {
            let status = if r.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{status} {} {target}", r.check)?;
            writeln!(out, "  worst_violation {:e}", r.worst_violation)?;
            let w: Vec<String> = r.witness.iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "  witness [{}]", w.join(", "))?;
            writeln!(out, "  samples {}", r.samples_checked)?;
            if let Some(d) = &r.detail {
                writeln!(out, "  detail {d}")?;
            }
        }
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Sample points for the complement table: five log-spaced values per axis
/// over the scan domain, or over `[0.01, 100]` without `--grid`.
fn table_points(ctx: &Ctx) -> Vec<(f64, f64)> {
    let axis = if ctx.has_grid {
        log_grid(ctx.cfg.lo, ctx.cfg.hi, 5)
    } else {
        log_grid(1e-2, 1e2, 5)
    };
    axis.iter()
        .flat_map(|&x| axis.iter().map(move |&y| (x, y)))
        .collect()
}

fn complement(
    ctx: &Ctx,
    pair: &MeanPair,
    emit: Emit,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let m = pair.target();
    let rows: Vec<[f64; 7]> = table_points(ctx)
        .into_iter()
        .map(|(x, y)| {
            let (k, l) = pair.apply(x, y);
            let lhs = m.eval(k, l);
            let rhs = m.eval(x, y);
            [x, y, k, l, lhs, rhs, (lhs - rhs).abs() / rhs]
        })
        .collect();
    match emit {
        Emit::Csv => {
            eprintln!("{}", pair.description());
            writeln!(out, "x,y,K,L,M(K;L),M(x;y),residual")?;
            for r in &rows {
                let cells: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Emit::Table if ctx.json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| json!({"x": r[0], "y": r[1], "k": r[2], "l": r[3], "m_kl": r[4], "m_xy": r[5], "residual": r[6]}))
                .collect();
            writeln!(
                out,
                "{}",
                json!({"pair": pair.label(), "description": pair.description(), "rows": rows})
            )?;
        }
        Emit::Table => {
            writeln!(out, "{}", pair.label())?;
            writeln!(out, "{}", pair.description())?;
            writeln!(
                out,
                "{:>12} {:>12} {:>22} {:>22} {:>22} {:>22} {:>10}",
                "x", "y", "K", "L", "M(K,L)", "M(x,y)", "residual"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>12.4e} {:>12.4e} {:>22.15e} {:>22.15e} {:>22.15e} {:>22.15e} {:>10.2e}",
                    r[0], r[1], r[2], r[3], r[4], r[5], r[6]
                )?;
            }
        }
    }
    Ok(())
}

fn iterate(
    ctx: &Ctx,
    pair: &MeanPair,
    (x0, y0): (f64, f64),
    stop: f64,
    max_iter: usize,
    emit: Emit,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let trace = iterate_pair(pair, x0, y0, stop, max_iter)?;
    let invariant = invariant_value_along_trajectory(pair, &trace);
    let m = pair.target();
    match emit {
        Emit::Csv => {
            writeln!(out, "n,x_n,y_n,gap,M")?;
            for (n, &(x, y)) in trace.iterates.iter().enumerate() {
                writeln!(
                    out,
                    "{n},{x:.16e},{y:.16e},{:.16e},{:.16e}",
                    gap(x, y),
                    m.eval(x, y)
                )?;
            }
            eprintln!(
                "converged {} after {} iterations, limit {:e}",
                trace.converged, trace.iterations, trace.limit
            );
        }
        Emit::Table if ctx.json => {
            writeln!(
                out,
                "{}",
                json!({
                    "pair": pair.label(),
                    "trace": trace,
                    "order_estimate": trace.order_estimate(),
                    "invariant": invariant,
                })
            )?;
        }
        Emit::Table => {
            writeln!(out, "{}", pair.label())?;
            writeln!(
                out,
                "{:>4} {:>24} {:>24} {:>10} {:>24}",
                "n", "x_n", "y_n", "gap", "M"
            )?;
            for (n, &(x, y)) in trace.iterates.iter().enumerate() {
                writeln!(
                    out,
                    "{n:>4} {x:>24.16e} {y:>24.16e} {:>10.2e} {:>24.16e}",
                    gap(x, y),
                    m.eval(x, y)
                )?;
            }
            writeln!(out, "converged {}", trace.converged)?;
            writeln!(out, "iterations {}", trace.iterations)?;
            writeln!(out, "limit {}", trace.limit)?;
            writeln!(out, "final_gap {:e}", trace.final_gap)?;
            if let Some(o) = trace.order_estimate() {
                writeln!(out, "order_estimate {o:.3}")?;
            }
            if !trace.gap_increases.is_empty() {
                writeln!(out, "gap_increases {:?}", trace.gap_increases)?;
            }
            let status = if invariant.passed {
                "constant"
            } else {
                "NOT constant"
            };
            writeln!(
                out,
                "target along trajectory: {status} (worst {:e})",
                invariant.worst_violation
            )?;
        }
    }
    Ok(())
}
