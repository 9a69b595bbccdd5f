//! Subcommand definitions and execution.

use crate::config::Config;
use crate::fixtures::{self, Quantity};
use crate::render::{self, Cell, Format, Report};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hlb_core::{
    hyper_estimate, lower_bound_family, optimize_parameters, parameter_sweep, sup_norm, FamilyId,
    OptimizeMode,
};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Md,
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Md => Format::Md,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Md)]
    pub format: OutputFormat,
    /// Flat key=value config file
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for every randomized component
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sphere grid size (odd)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Local refinement tolerance
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Family name: P2, P3, P5, P6, P7, P8, P10
    #[arg(long)]
    pub family: String,
    /// Comma-separated parameter values
    #[arg(long, allow_hyphen_values = true)]
    pub params: String,
    /// Ball exponent, a number above the degree, or "inf"
    #[arg(long)]
    pub p: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Family name: P2, P3, P5, P6, P7, P8, P10
    #[arg(long)]
    pub family: String,
    /// Ball exponent, a number above the degree, or "inf"
    #[arg(long)]
    pub p: String,
    /// Search strategy
    #[arg(long, default_value = "grid-simplex")]
    pub mode: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Two-parameter family: P3, P6, P8, P10
    #[arg(long)]
    pub family: String,
    /// Ball exponent, a number above the degree, or "inf"
    #[arg(long)]
    pub p: String,
    /// Ratio range lo:hi:step for b with a fixed to 1
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct HyperArgs {
    /// Family name: P2, P3, P5, P6, P7, P8, P10
    #[arg(long)]
    pub family: String,
    /// Comma-separated parameter values
    #[arg(long, allow_hyphen_values = true)]
    pub params: String,
    /// Power applied to the family polynomial
    #[arg(long)]
    pub power: u32,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Table id: s2, s3, s4a, s4b, s4c, or all
    #[arg(long)]
    pub table: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Sup norm of a family polynomial on the l_p unit sphere
    Norm(PointArgs),
    /// Coefficient-norm over sup-norm lower bound at one parameter point
    Bound(PointArgs),
    /// Search for the best parameters of a family at fixed p
    Optimize(OptimizeArgs),
    /// Lower bound as a function of the coefficient ratio b/a
    Sweep(SweepArgs),
    /// Finite-degree h estimate from a power of a family polynomial
    Hyper(HyperArgs),
    /// Recompute the bundled reference tables and compare
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Parser)]
#[command(
    name = "hlb",
    version,
    about = "Lower bounds for the constants of the real polynomial Hardy-Littlewood \
             inequality on two-variable l_p balls"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

/// Runs a parsed invocation and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let common = match &cli.cmd {
        Cmd::Norm(a) | Cmd::Bound(a) => &a.common,
        Cmd::Optimize(a) => &a.common,
        Cmd::Sweep(a) => &a.common,
        Cmd::Hyper(a) => &a.common,
        Cmd::Reproduce(a) => &a.common,
    };
    let format: Format = common.format.into();
    let cfg = match resolve_config(common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    cfg.init_threads();
    let outcome = match &cli.cmd {
        Cmd::Norm(a) => cmd_norm(a, &cfg),
        Cmd::Bound(a) => cmd_bound(a, &cfg),
        Cmd::Optimize(a) => cmd_optimize(a, &cfg),
        Cmd::Sweep(a) => cmd_sweep(a, &cfg),
        Cmd::Hyper(a) => cmd_hyper(a, &cfg),
        Cmd::Reproduce(a) => cmd_reproduce(a, &cfg),
    };
    match outcome {
        Ok((report, ok)) => {
            print!("{}", render::render(&report, format));
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn resolve_config(common: &CommonArgs) -> Result<Config, String> {
    let mut cfg = match &common.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    cfg.apply_env()?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(grid) = common.grid {
        cfg.grid = grid;
    }
    if let Some(tol) = common.tol {
        cfg.tol = tol;
    }
    Ok(cfg)
}

fn parse_family(s: &str) -> Result<FamilyId, String> {
    FamilyId::from_str(s).map_err(|e| e.to_string())
}

fn parse_params(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| format!("bad parameter value '{t}'"))
        })
        .collect()
}

fn parse_p(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    t.parse::<f64>()
        .map_err(|_| format!("bad value '{t}' for p"))
}

fn parse_lambda(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:step, got '{s}'"));
    }
    let mut vals = [0.0; 3];
    for (v, part) in vals.iter_mut().zip(&parts) {
        *v = part
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad range component '{}'", part.trim()))?;
    }
    Ok((vals[0], vals[1], vals[2]))
}

type CmdResult = Result<(Report, bool), String>;

fn report(cfg: &Config, columns: Vec<&'static str>) -> Report {
    Report {
        config: cfg.pairs(),
        columns,
        rows: Vec::new(),
        notes: Vec::new(),
    }
}

fn cmd_norm(args: &PointArgs, cfg: &Config) -> CmdResult {
    let family = parse_family(&args.family)?;
    let params = parse_params(&args.params)?;
    let p = parse_p(&args.p)?;
    let poly = family.build(&params).map_err(|e| e.to_string())?;
    let norm = sup_norm(&poly, p, &cfg.opt()).map_err(|e| e.to_string())?;
    let mut rep = report(
        cfg,
        vec![
            "family",
            "params",
            "p",
            "sup_norm",
            "argmax_x",
            "argmax_y",
            "est_error",
        ],
    );
    rep.rows.push(vec![
        Cell::Str(family.name().to_string()),
        Cell::List(params),
        Cell::Num(p),
        Cell::Num(norm.value),
        Cell::Num(norm.argmax.0),
        Cell::Num(norm.argmax.1),
        Cell::Num(norm.est_error),
    ]);
    Ok((rep, true))
}

const BOUND_COLUMNS: [&str; 9] = [
    "family",
    "params",
    "m",
    "p",
    "q",
    "coeff_norm",
    "sup_norm",
    "lower_bound",
    "per_degree_root",
];

fn bound_row(r: &hlb_core::BoundReport) -> Vec<Cell> {
    vec![
        Cell::Str(
            r.family
                .map_or_else(|| "-".to_string(), |f| f.name().to_string()),
        ),
        Cell::List(r.params.clone()),
        Cell::Int(r.m as i64),
        Cell::Num(r.p),
        Cell::Num(r.q),
        Cell::Num(r.coeff_norm),
        Cell::Num(r.sup_norm),
        Cell::Num(r.lower_bound),
        Cell::Num(r.per_degree_root),
    ]
}

fn cmd_bound(args: &PointArgs, cfg: &Config) -> CmdResult {
    let family = parse_family(&args.family)?;
    let params = parse_params(&args.params)?;
    let p = parse_p(&args.p)?;
    let bound = lower_bound_family(family, &params, p, &cfg.opt()).map_err(|e| e.to_string())?;
    let mut rep = report(cfg, BOUND_COLUMNS.to_vec());
    rep.rows.push(bound_row(&bound));
    Ok((rep, true))
}

fn cmd_optimize(args: &OptimizeArgs, cfg: &Config) -> CmdResult {
    let family = parse_family(&args.family)?;
    let p = parse_p(&args.p)?;
    let mode = OptimizeMode::from_str(&args.mode).map_err(|e| e.to_string())?;
    let outcome = optimize_parameters(family, p, mode, &cfg.opt()).map_err(|e| e.to_string())?;
    let mut rep = report(
        cfg,
        vec![
            "family",
            "mode",
            "evaluations",
            "params",
            "m",
            "p",
            "q",
            "coeff_norm",
            "sup_norm",
            "lower_bound",
            "per_degree_root",
        ],
    );
    let mut row = vec![
        Cell::Str(family.name().to_string()),
        Cell::Str(outcome.mode.to_string()),
        Cell::Int(outcome.evaluations as i64),
    ];
    row.extend(bound_row(&outcome.report).into_iter().skip(1));
    rep.rows.push(row);
    Ok((rep, true))
}

fn cmd_sweep(args: &SweepArgs, cfg: &Config) -> CmdResult {
    let family = parse_family(&args.family)?;
    let p = parse_p(&args.p)?;
    let range = parse_lambda(&args.lambda)?;
    let points = parameter_sweep(family, p, range, &cfg.opt()).map_err(|e| e.to_string())?;
    let mut rep = report(cfg, vec!["family", "p", "lambda", "lower_bound"]);
    let name = family.name();
    for (lambda, lb) in points {
        rep.rows.push(vec![
            Cell::Str(name.to_string()),
            Cell::Num(p),
            Cell::Num(lambda),
            Cell::Num(lb),
        ]);
    }
    rep.notes
        .push("sweep fixes a = 1 and sets b = lambda in the family pattern".to_string());
    Ok((rep, true))
}

fn cmd_hyper(args: &HyperArgs, cfg: &Config) -> CmdResult {
    let family = parse_family(&args.family)?;
    let params = parse_params(&args.params)?;
    let hyper =
        hyper_estimate(family, &params, args.power, &cfg.opt()).map_err(|e| e.to_string())?;
    let mut rep = report(
        cfg,
        vec![
            "base_family",
            "base_params",
            "power",
            "m_total",
            "p",
            "lower_bound",
            "h_estimate",
        ],
    );
    rep.rows.push(vec![
        Cell::Str(hyper.base_family.name().to_string()),
        Cell::List(hyper.base_params.clone()),
        Cell::Int(hyper.k as i64),
        Cell::Int(hyper.m_total as i64),
        Cell::Num(hyper.p),
        Cell::Num(hyper.lower_bound),
        Cell::Num(hyper.h_estimate),
    ]);
    rep.notes.push(format!(
        "h_estimate is the finite-degree value lower_bound^(1/{}), not a limit",
        hyper.m_total
    ));
    Ok((rep, true))
}

/// Compares one check against its recomputation. Returns the rendered row,
/// whether the row counts as a failure, and an optional note.
fn run_check(
    table: &fixtures::Table,
    check: &fixtures::Check,
    cfg: &Config,
) -> Result<(Vec<Cell>, bool, Option<String>), String> {
    let opt = cfg.opt();
    let p = 2.0 * (check.family.degree() * check.power as usize) as f64;
    let (computed, reference, pass, tol_text) = match check.quantity {
        Quantity::SupNorm { printed } => {
            let poly = check
                .family
                .build(check.params)
                .map_err(|e| e.to_string())?;
            let value = sup_norm(&poly, p, &opt).map_err(|e| e.to_string())?.value;
            (value, printed, (value - printed).abs() <= 1e-6, "1e-6 abs")
        }
        Quantity::LowerBound { printed } => {
            let value = lower_bound_family(check.family, check.params, p, &opt)
                .map_err(|e| e.to_string())?
                .lower_bound;
            let rel = ((value - printed) / printed).abs();
            (value, printed, rel <= 1e-5, "1e-5 rel")
        }
        Quantity::HEstimate { printed } => {
            let value = hyper_estimate(check.family, check.params, check.power, &opt)
                .map_err(|e| e.to_string())?
                .h_estimate;
            (value, printed, (value - printed).abs() <= 1e-4, "1e-4 abs")
        }
        Quantity::Floor { base, .. } => {
            let value = lower_bound_family(check.family, check.params, p, &opt)
                .map_err(|e| e.to_string())?
                .lower_bound;
            let floor = base.powi(check.family.degree() as i32);
            (value, floor, value > floor, "margin > 0")
        }
    };
    let annotated = check.annotation.is_some();
    let status = if annotated {
        "annotated"
    } else if pass {
        "ok"
    } else {
        "FAIL"
    };
    let row = vec![
        Cell::Str(table.id.to_string()),
        Cell::Str(check.family.name().to_string()),
        Cell::Int(check.power as i64),
        Cell::Str(check.quantity.label().to_string()),
        Cell::List(check.params.to_vec()),
        Cell::Num(computed),
        Cell::Num(reference),
        Cell::Num((computed - reference).abs()),
        Cell::Str(tol_text.to_string()),
        Cell::Str(status.to_string()),
    ];
    let note = check.annotation.map(|text| {
        format!(
            "{}/{}/{}: {text}",
            table.id,
            check.family.name(),
            check.quantity.label()
        )
    });
    let failed = !annotated && !pass;
    Ok((row, failed, note))
}

fn cmd_reproduce(args: &ReproduceArgs, cfg: &Config) -> CmdResult {
    let id = args.table.trim().to_ascii_lowercase();
    let tables: Vec<&fixtures::Table> = if id == "all" {
        fixtures::TABLES.to_vec()
    } else {
        vec![fixtures::find(&id).ok_or_else(|| {
            format!("unknown table '{id}'; expected s2, s3, s4a, s4b, s4c, or all")
        })?]
    };
    let mut rep = report(
        cfg,
        vec![
            "table",
            "family",
            "power",
            "quantity",
            "params",
            "computed",
            "reference",
            "abs_diff",
            "tolerance",
            "status",
        ],
    );
    let mut all_ok = true;
    for table in tables {
        for check in table.checks {
            let (row, failed, note) = run_check(table, check, cfg)?;
            rep.rows.push(row);
            if let Some(note) = note {
                rep.notes.push(note);
            }
            all_ok &= !failed;
        }
    }
    Ok((rep, all_ok))
}
