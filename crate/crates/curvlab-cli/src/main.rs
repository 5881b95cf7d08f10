//! Command-line front end: verify the built-in family claims, analyze user
//! metrics from the text format, and run the whole claim battery.
//!
//! Exit codes: 0 success, 1 claim failure, 2 usage or input parse error,
//! 3 internal inconsistency (an exact identity that can never fail did).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use curvlab::{
    family_metric, gf_metric, higher_order_jacobi, jacobi_operator, parse_metric_text,
    parse_rational, poly_parse, ricci_operator, skew_curvature_operator, szabo_operator,
    Curvature, FamilyKind, MetricSpec, OperatorKind, OperatorMatrix, Rational, Sign, VarTable,
};

use curvlab_cli::claims::{claim_for_family, claim_for_gf, Claim};
use curvlab_cli::report::{
    analyze_operator, claim_json, invariant_battery, metric_summary, operator_summary,
    render_text, spectrum_consistent, Report, RequestEcho, Timing,
};

const EXIT_CLAIM_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Exact curvature-operator laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Szabo,
    Jacobi,
    Skew,
    #[value(name = "higher-jacobi")]
    HigherJacobi,
    Ricci,
}

impl OperatorArg {
    fn kind(self) -> OperatorKind {
        match self {
            OperatorArg::Szabo => OperatorKind::Szabo,
            OperatorArg::Jacobi => OperatorKind::Jacobi,
            OperatorArg::Skew => OperatorKind::SkewCurvature,
            OperatorArg::HigherJacobi => OperatorKind::HigherJacobi,
            OperatorArg::Ricci => OperatorKind::Ricci,
        }
    }
}

#[derive(Args)]
struct CommonOpts {
    /// Operator to build and analyze.
    #[arg(long, value_enum)]
    operator: OperatorArg,

    /// Coordinate point `x=0,u=1,...` (all coordinates required).
    #[arg(long)]
    point: Option<String>,

    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,

    /// Seed for witness search and random sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named family metric and verify its claimed order and signature.
    Verify {
        /// Family: szabo, osserman, pointwise-szabo, pointwise-osserman, gf.
        #[arg(long)]
        family: String,

        /// Nilpotency order parameter (n >= 2); required except for `gf`.
        #[arg(long)]
        n: Option<usize>,

        /// For `gf`: the polynomial f in variables u1..uk.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,

        /// For `gf`: path to a file with the constant symmetric matrix Xi,
        /// one row per line, entries separated by whitespace or commas.
        #[arg(long)]
        xi: Option<PathBuf>,

        #[command(flatten)]
        common: CommonOpts,
    },

    /// Analyze a metric from the text format.
    Check {
        /// Metric file path.
        file: PathBuf,

        #[command(flatten)]
        common: CommonOpts,
    },

    /// Run the full claim battery up to an order bound.
    Suite {
        #[arg(long, default_value_t = 5)]
        n_max: usize,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
}

fn usage_error(message: String) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn parse_point(spec: &str) -> Result<Vec<(String, Rational)>, String> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("point entry `{part}` is not `name=value`"))?;
        let value = parse_rational(value)
            .ok_or_else(|| format!("invalid rational `{}` in point", value.trim()))?;
        out.push((name.trim().to_string(), value));
    }
    Ok(out)
}

fn build_operator(curv: &Curvature, kind: OperatorKind) -> OperatorMatrix {
    match kind {
        OperatorKind::Szabo => szabo_operator(curv),
        OperatorKind::Jacobi => jacobi_operator(curv),
        OperatorKind::SkewCurvature => skew_curvature_operator(curv),
        OperatorKind::HigherJacobi => higher_order_jacobi(curv, &[Sign::Plus, Sign::Minus]),
        OperatorKind::Ricci => ricci_operator(curv),
    }
}

fn parse_xi_file(path: &PathBuf) -> Result<Vec<Vec<Rational>>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<Rational>, String> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| parse_rational(s).ok_or_else(|| format!("line {}: bad entry `{s}`", i + 1)))
            .collect();
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err("Xi file has no rows".into());
    }
    Ok(rows)
}

/// Shared analysis: build the operator, decide nilpotency, run the invariant
/// battery, assemble the report, choose the exit code.
#[allow(clippy::too_many_arguments)]
fn analyze_and_report(
    metric: MetricSpec,
    claim: Option<Claim>,
    request: RequestEcho,
    kind: OperatorKind,
    point: Option<Vec<(String, Rational)>>,
    format: OutputFormat,
    seed: u64,
    started: Instant,
) -> ExitCode {
    let curv = Curvature::compute(&metric);
    let op = build_operator(&curv, kind);
    let point_refs: Option<Vec<(&str, Rational)>> = point
        .as_ref()
        .map(|p| p.iter().map(|(n, v)| (n.as_str(), v.clone())).collect());
    let analyzed = match analyze_operator(&op, point_refs.as_deref(), seed) {
        Ok(a) => a,
        Err(e) => return usage_error(e.to_string()),
    };
    let (nilpotency, spectrum, order) = analyzed;
    let invariants = invariant_battery(&curv, &op);
    let internal_ok =
        invariants.iter().all(|i| i.passed) && spectrum_consistent(&nilpotency, &spectrum);

    let claim_result = claim.as_ref().map(|c| {
        let signature_ok = c
            .signature
            .map(|s| s == metric.signature())
            .unwrap_or(true);
        let matched = signature_ok && c.order.matched(order);
        claim_json(c, matched)
    });
    let matched = claim_result.as_ref().map(|c| c.matched).unwrap_or(true);

    let report = Report {
        request,
        metric: metric_summary(&curv),
        operator: operator_summary(&op),
        nilpotency,
        spectrum,
        invariants,
        claim: claim_result,
        timing: Timing {
            total_ms: started.elapsed().as_millis(),
        },
    };
    match format {
        OutputFormat::Text => print!("{}", render_text(&report)),
        OutputFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
    }
    if !internal_ok {
        eprintln!("error: internal inconsistency: an exact identity failed");
        return ExitCode::from(EXIT_INTERNAL);
    }
    if !matched {
        return ExitCode::from(EXIT_CLAIM_FAILURE);
    }
    ExitCode::SUCCESS
}

fn cmd_verify(
    family: String,
    n: Option<usize>,
    f: Option<String>,
    xi: Option<PathBuf>,
    common: CommonOpts,
) -> ExitCode {
    let started = Instant::now();
    let kind = common.operator.kind();
    let point = match common.point.as_deref().map(parse_point).transpose() {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    let format_name = match common.format {
        OutputFormat::Text => "text",
        OutputFormat::Json => "json",
    };

    let (metric, claim, request_f) = if family == "gf" {
        let Some(f_expr) = f else {
            return usage_error("family `gf` requires --f".into());
        };
        let Some(xi_path) = xi else {
            return usage_error("family `gf` requires --xi".into());
        };
        let xi_rows = match parse_xi_file(&xi_path) {
            Ok(r) => r,
            Err(e) => return usage_error(e),
        };
        let nu = xi_rows.len();
        let names: Vec<String> = (1..=nu).map(|i| format!("u{i}")).collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mids = match VarTable::coordinates(&name_refs) {
            Ok(t) => t,
            Err(e) => return usage_error(e.to_string()),
        };
        let f_poly = match poly_parse(&f_expr, &mids) {
            Ok(p) => p,
            Err(e) => return usage_error(e.to_string()),
        };
        let metric = match gf_metric(&f_poly, &xi_rows) {
            Ok(m) => m,
            Err(e) => return usage_error(e.to_string()),
        };
        (metric, claim_for_gf(kind), Some(f_expr))
    } else {
        let Some(family_kind) = FamilyKind::parse(&family) else {
            return usage_error(format!(
                "unknown family `{family}` (expected szabo, osserman, pointwise-szabo, pointwise-osserman, gf)"
            ));
        };
        let Some(n) = n else {
            return usage_error("--n is required for this family".into());
        };
        let metric = match family_metric(family_kind, n) {
            Ok(m) => m,
            Err(e) => return usage_error(e.to_string()),
        };
        let at_origin = point.as_ref().map(|p| {
            p.iter()
                .all(|(_, v)| v == &Rational::from_integer(0.into()))
        });
        (
            metric,
            claim_for_family(family_kind, n, kind, at_origin),
            None,
        )
    };

    let request = RequestEcho {
        command: "verify".into(),
        family: Some(family),
        n,
        metric_file: None,
        f: request_f,
        operator: kind.name().into(),
        point: point.as_ref().map(|p| {
            p.iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect::<BTreeMap<_, _>>()
        }),
        format: format_name.into(),
        seed: common.seed,
    };
    analyze_and_report(
        metric,
        Some(claim),
        request,
        kind,
        point,
        common.format,
        common.seed,
        started,
    )
}

fn cmd_check(file: PathBuf, common: CommonOpts) -> ExitCode {
    let started = Instant::now();
    let kind = common.operator.kind();
    let point = match common.point.as_deref().map(parse_point).transpose() {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("cannot read {}: {e}", file.display())),
    };
    let metric = match parse_metric_text(&text) {
        Ok(m) => m,
        Err(e) => return usage_error(e.to_string()),
    };
    let format_name = match common.format {
        OutputFormat::Text => "text",
        OutputFormat::Json => "json",
    };
    let request = RequestEcho {
        command: "check".into(),
        family: None,
        n: None,
        metric_file: Some(file.display().to_string()),
        f: None,
        operator: kind.name().into(),
        point: point.as_ref().map(|p| {
            p.iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect::<BTreeMap<_, _>>()
        }),
        format: format_name.into(),
        seed: common.seed,
    };
    analyze_and_report(
        metric,
        None,
        request,
        kind,
        point,
        common.format,
        common.seed,
        started,
    )
}

fn cmd_suite(n_max: usize, seed: u64, format: OutputFormat) -> ExitCode {
    if n_max < 2 {
        return usage_error("--n-max must be at least 2".into());
    }
    let started = Instant::now();
    let rows = curvlab_cli::suite::run_suite(n_max, seed);
    let all_passed = rows.iter().all(|r| r.passed);
    match format {
        OutputFormat::Text => {
            for r in &rows {
                println!(
                    "{} {} | {} | {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.description,
                    r.detail
                );
            }
            println!(
                "suite: {}/{} rows passed in {} ms",
                rows.iter().filter(|r| r.passed).count(),
                rows.len(),
                started.elapsed().as_millis()
            );
        }
        OutputFormat::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "command": "suite",
                    "n_max": n_max,
                    "seed": seed,
                    "rows": rows,
                    "passed": all_passed,
                }))
                .expect("suite serializes")
            );
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CLAIM_FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            family,
            n,
            f,
            xi,
            common,
        } => cmd_verify(family, n, f, xi, common),
        Command::Check { file, common } => cmd_check(file, common),
        Command::Suite { n_max, seed, format } => cmd_suite(n_max, seed, format),
    }
}
