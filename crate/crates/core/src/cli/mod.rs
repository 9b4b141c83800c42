//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code: 0 success, 1 a check found a counterexample,
//! 2 usage or domain error.

mod table;

pub use table::{figure_table, limit_table, limit_target, Table, FIGURE_IDS};

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::polydg::{log_barnes_g, psi2_didouble, psi2_eval, PolyDoubleArg};
use crate::specfun::Precision;
use crate::verify::{
    audit_identities, canonical_id, default_requests, lemma_grid, ratio_grid, run_check,
    AuditEntry, AuditStatus, CheckReport, CheckRequest, FParams, GParams, Grid, HankelParams,
    Spacing, SubAddParams, DEFAULT_SEED,
};
use crate::{EvalResult, Method};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "polydouble",
    version,
    about = "Poly-double gamma functions: evaluation, checks, audit and figure data"
)]
pub struct Cli {
    /// Absolute tolerance for series and special-function evaluation.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate ψ₂⁽ⁿ⁾(x), ψ₂(x) or log G(x).
    Eval(EvalArgs),
    /// Run one check or the whole suite.
    Check(CheckArgs),
    /// Audit printed identities against the series.
    Audit,
    /// Emit the CSV data of a figure.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        id: u8,
    },
    /// Tabulate x^(n-1) psi2^(n)(x) approaching its limit.
    Limit {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long = "x-max", default_value_t = 40_000.0)]
        x_max: f64,
        #[arg(long, default_value_t = 25)]
        count: usize,
    },
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("function").required(true).args(["n", "psi2", "log_g"])))]
struct EvalArgs {
    /// Order n >= 2 of the poly-double gamma.
    #[arg(long)]
    n: Option<u32>,
    /// The di-double gamma ψ₂.
    #[arg(long)]
    psi2: bool,
    /// log G, Barnes G.
    #[arg(long = "log-g")]
    log_g: bool,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Series,
    PolygammaRelation,
    ZetaClosedForm,
    Integral,
    Asymptotic,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Series => Method::Series,
            MethodArg::PolygammaRelation => Method::PolygammaRelation,
            MethodArg::ZetaClosedForm => Method::ZetaClosedForm,
            MethodArg::Integral => Method::Integral,
            MethodArg::Asymptotic => Method::Asymptotic,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["suite", "id"])))]
struct CheckArgs {
    /// Named suite; only "all" exists.
    #[arg(long)]
    suite: Option<String>,
    /// Check id: cm, turan, ratio, F-cm, lemma-I1, subadditivity,
    /// G-convexity, hankel, cauchy-schwarz.
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long)]
    j: Option<u32>,
    /// Domain bound (subadditivity) or Hankel size.
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    samples: Option<usize>,
    /// Quadrature tolerance for lemma-I1.
    #[arg(long = "quad-tol")]
    quad_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_enum)]
    spacing: Option<SpacingArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpacingArg {
    Linear,
    Logarithmic,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            eprintln!("run with --help for usage");
            EXIT_USAGE
        }
    }
}

fn precision(cli: &Cli) -> anyhow::Result<Precision> {
    let p = match cli.tol {
        Some(t) => Precision::with_tol(t),
        None => Precision::default(),
    };
    p.validate()?;
    Ok(p)
}

fn output(cli: &Cli) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(cli: &Cli) -> anyhow::Result<i32> {
    let prec = precision(cli)?;
    match &cli.command {
        Command::Eval(a) => {
            let r = eval(a, prec)?;
            let mut w = output(cli)?;
            write_eval(&mut w, cli.format, a, &r)?;
            w.flush()?;
            Ok(EXIT_OK)
        }
        Command::Check(a) => {
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            let requests = check_requests(a, seed)?;
            let reports = requests
                .iter()
                .map(|r| run_check(r, prec))
                .collect::<crate::Result<Vec<_>>>()?;
            let mut w = output(cli)?;
            write_reports(&mut w, cli.format, &reports, a.suite.is_some())?;
            w.flush()?;
            Ok(if reports.iter().all(|r| r.passed) {
                EXIT_OK
            } else {
                EXIT_COUNTEREXAMPLE
            })
        }
        Command::Audit => {
            let entries = audit_identities(prec)?;
            let mut w = output(cli)?;
            write_audit(&mut w, cli.format, &entries)?;
            w.flush()?;
            Ok(EXIT_OK)
        }
        Command::Figure { id } => {
            if cli.format == Format::Json {
                bail!("figure data is emitted as csv only");
            }
            let t = figure_table(*id, prec)?;
            let mut w = output(cli)?;
            t.write_csv(&mut w)?;
            w.flush()?;
            Ok(EXIT_OK)
        }
        Command::Limit { n, x_max, count } => {
            let t = limit_table(*n, *x_max, *count, prec)?;
            let mut w = output(cli)?;
            match cli.format {
                Format::Csv => t.write_csv(&mut w)?,
                Format::Json => {
                    let rows: Vec<serde_json::Map<String, serde_json::Value>> = t
                        .rows
                        .iter()
                        .map(|r| {
                            t.headers
                                .iter()
                                .cloned()
                                .zip(r.iter().map(|v| serde_json::json!(v)))
                                .collect()
                        })
                        .collect();
                    serde_json::to_writer_pretty(&mut w, &rows)?;
                    writeln!(w)?;
                }
                Format::Human => {
                    writeln!(
                        w,
                        "{:>14} {:>22} {:>6} {:>12}",
                        "x", "x^(n-1) psi2^(n)", "limit", "deviation"
                    )?;
                    for r in &t.rows {
                        writeln!(
                            w,
                            "{:>14.4} {:>22.15} {:>6} {:>12.3e}",
                            r[0], r[1], r[2], r[3]
                        )?;
                    }
                }
            }
            w.flush()?;
            Ok(EXIT_OK)
        }
    }
}

fn eval(a: &EvalArgs, prec: Precision) -> anyhow::Result<EvalResult> {
    if a.psi2 || a.log_g {
        if a.method != MethodArg::Auto {
            bail!("--method applies only to --n");
        }
        let r = if a.psi2 {
            psi2_didouble(a.x, prec)?
        } else {
            log_barnes_g(a.x, prec)?
        };
        return Ok(r);
    }
    let n = a.n.expect("clap group requires one function");
    Ok(psi2_eval(
        PolyDoubleArg::new(n, a.x)?,
        a.method.into(),
        prec,
    )?)
}

fn write_eval(
    w: &mut dyn Write,
    format: Format,
    a: &EvalArgs,
    r: &EvalResult,
) -> anyhow::Result<()> {
    let function = match (a.n, a.psi2) {
        (_, true) => "psi2".to_string(),
        (Some(n), _) => format!("psi2^({n})"),
        _ => "log_barnes_g".to_string(),
    };
    match format {
        Format::Human => writeln!(
            w,
            "{function}({}) = {:.15e}  +/- {:.1e}  [{}]",
            a.x,
            r.to_f64(),
            r.error,
            r.method
        )?,
        Format::Json => {
            let v = serde_json::json!({
                "function": function,
                "n": a.n,
                "x": a.x,
                "value": r.to_f64(),
                "value_lo": r.value.lo(),
                "error": r.error,
                "method": r.method,
            });
            serde_json::to_writer_pretty(&mut *w, &v)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(w, "function,x,value,error,method")?;
            writeln!(
                w,
                "{function},{:.16e},{:.16e},{:.16e},{}",
                a.x,
                r.to_f64(),
                r.error,
                r.method
            )?;
        }
    }
    Ok(())
}

fn grid_override(a: &CheckArgs, default: Grid) -> anyhow::Result<Grid> {
    if a.lo.is_none() && a.hi.is_none() && a.count.is_none() && a.spacing.is_none() {
        return Ok(default);
    }
    let spacing = match a.spacing {
        Some(SpacingArg::Linear) => Spacing::Linear,
        Some(SpacingArg::Logarithmic) => Spacing::Logarithmic,
        None => default.spacing,
    };
    let g = Grid::new(
        a.lo.unwrap_or(default.lo),
        a.hi.unwrap_or(default.hi),
        a.count.unwrap_or(default.count),
        spacing,
    )?;
    Ok(g)
}

fn check_requests(a: &CheckArgs, seed: u64) -> anyhow::Result<Vec<CheckRequest>> {
    if let Some(s) = &a.suite {
        if s != "all" {
            bail!("unknown suite '{s}'; the only suite is 'all'");
        }
        return Ok(default_requests(seed));
    }
    let id = canonical_id(a.id.as_deref().expect("clap group requires one"))?;
    let grid = |d: Grid| grid_override(a, d);
    let whole_m = |default: u32| -> anyhow::Result<u32> {
        match a.m {
            None => Ok(default),
            Some(m) if m >= 0.0 && m.fract() == 0.0 => Ok(m as u32),
            Some(m) => bail!("Hankel size m must be a whole number, got {m}"),
        }
    };
    let req = match id {
        "cm" => CheckRequest::Cm {
            n: a.n.unwrap_or(2),
            depth: a.depth.unwrap_or(6),
            grid: grid(Grid::default_grid())?,
        },
        "turan" => CheckRequest::Turan {
            n: a.n.unwrap_or(2),
            grid: grid(Grid::default_grid())?,
        },
        "ratio" => CheckRequest::Ratio {
            n: a.n.unwrap_or(3),
            grid: grid(ratio_grid())?,
        },
        "F-cm" => {
            let n = a.n.unwrap_or(3);
            let base = FParams {
                n,
                omega: 0.0,
                depth: a.depth.unwrap_or(6),
            };
            let omega = a
                .omega
                .unwrap_or_else(|| if n >= 2 { base.lower_constant() } else { 0.0 });
            CheckRequest::FCm {
                params: FParams { omega, ..base },
                grid: grid(Grid::default_grid())?,
            }
        }
        "lemma-I1" => CheckRequest::LemmaI1 {
            n: a.n.unwrap_or(3),
            grid: grid(lemma_grid())?,
            tol: a.quad_tol.unwrap_or(1e-10),
        },
        "subadditivity" => CheckRequest::Subadditivity {
            params: SubAddParams {
                n: a.n.unwrap_or(2),
                r: a.r.map(|r| r as u32).unwrap_or(0),
                m: a.m.unwrap_or(2.0),
                samples: a.samples.unwrap_or(200),
            },
            seed,
        },
        "G-convexity" => CheckRequest::GConvexity {
            params: GParams {
                n: a.n.unwrap_or(3),
                r: a.r.unwrap_or(1.0),
            },
            grid: grid(Grid::default_grid())?,
            seed,
        },
        "hankel" => CheckRequest::Hankel {
            params: HankelParams {
                n: a.n.unwrap_or(2),
                j: a.j.unwrap_or(1),
                m: whole_m(1)?,
            },
            depth: a.depth.unwrap_or(1),
            grid: grid(Grid::default_grid())?,
        },
        "cauchy-schwarz" => CheckRequest::CauchySchwarz {
            n: a.n.unwrap_or(3),
            grid: grid(Grid::default_grid())?,
        },
        other => bail!("unhandled check id {other}"),
    };
    if id == "subadditivity" {
        if let Some(r) = a.r {
            if r < 0.0 || r.fract() != 0.0 {
                bail!("subadditivity shift r must be a non-negative whole number, got {r}");
            }
        }
    }
    Ok(vec![req])
}

const HUMAN_COUNTEREXAMPLES: usize = 5;

fn write_reports(
    w: &mut dyn Write,
    format: Format,
    reports: &[CheckReport],
    as_suite: bool,
) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            if as_suite {
                serde_json::to_writer_pretty(&mut *w, reports)?;
            } else {
                serde_json::to_writer_pretty(&mut *w, &reports[0])?;
            }
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(
                w,
                "check_id,points,label,relation,lhs,rhs,margin,error,verdict"
            )?;
            for r in reports {
                for x in &r.witnesses {
                    let pts: Vec<String> = x.points.iter().map(|p| format!("{p:.16e}")).collect();
                    writeln!(
                        w,
                        "{},{},\"{}\",{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                        r.check_id,
                        pts.join(" "),
                        x.label.replace('"', "'"),
                        serde_json::to_value(x.relation)?
                            .as_str()
                            .unwrap_or_default(),
                        x.lhs,
                        x.rhs,
                        x.margin,
                        x.error,
                        serde_json::to_value(x.verdict)?
                            .as_str()
                            .unwrap_or_default(),
                    )?;
                }
            }
        }
        Format::Human => {
            for r in reports {
                let params: Vec<String> = r
                    .params
                    .iter()
                    .filter(|(k, v)| !v.is_object() && k.as_str() != "strictness_factor")
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                writeln!(w, "{}  [{}]", r.headline(), params.join(" "))?;
                if let Some(m) = r.min_margin() {
                    writeln!(w, "    min margin {m:.3e}")?;
                }
                for (k, v) in &r.summary {
                    writeln!(w, "    {k} = {v:.12e}")?;
                }
                for c in r.counterexamples.iter().take(HUMAN_COUNTEREXAMPLES) {
                    writeln!(
                        w,
                        "    counterexample at {:?}: {}  lhs={:.6e} rhs={:.6e} margin={:.3e} err={:.1e}",
                        c.points, c.label, c.lhs, c.rhs, c.margin, c.error
                    )?;
                }
                if r.counterexamples.len() > HUMAN_COUNTEREXAMPLES {
                    writeln!(
                        w,
                        "    ... {} more",
                        r.counterexamples.len() - HUMAN_COUNTEREXAMPLES
                    )?;
                }
                for n in r.notes.iter().skip(1) {
                    writeln!(w, "    note: {n}")?;
                }
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            writeln!(
                w,
                "{} checks, {} passed, {} failed",
                reports.len(),
                reports.len() - failed,
                failed
            )?;
        }
    }
    Ok(())
}

fn write_audit(w: &mut dyn Write, format: Format, entries: &[AuditEntry]) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, entries)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(w, "identity_id,status,max_deviation,error,probes")?;
            for e in entries {
                let status = if e.status == AuditStatus::Confirmed {
                    "confirmed"
                } else {
                    "discrepancy"
                };
                writeln!(
                    w,
                    "{},{},{:.16e},{:.16e},{}",
                    e.identity_id, status, e.max_deviation, e.error, e.probes
                )?;
            }
        }
        Format::Human => {
            for e in entries {
                let status = if e.status == AuditStatus::Confirmed {
                    "confirmed"
                } else {
                    "DISCREPANCY"
                };
                writeln!(
                    w,
                    "{:<28} {:<11} max_dev={:.3e} err={:.1e} probes={}",
                    e.identity_id, status, e.max_deviation, e.error, e.probes
                )?;
                writeln!(w, "    {}", e.anchor)?;
                writeln!(w, "    {}", e.note)?;
            }
            let bad = entries
                .iter()
                .filter(|e| e.status == AuditStatus::Discrepancy)
                .count();
            writeln!(
                w,
                "{} identities, {} confirmed, {} discrepancies",
                entries.len(),
                entries.len() - bad,
                bad
            )?;
        }
    }
    Ok(())
}
