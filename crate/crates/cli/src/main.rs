//! Command-line front end: parse probability inputs, dispatch to the library,
//! render CSV or JSON reports. Exit code 0 on success, 1 when a verification
//! suite records violations, 2 on input or validation errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use charlier_core::bounds::{
    literature_bound, literature_catalog, paper_bound_opts, reference_value, BoundFamily,
    BoundKind, BoundOptions, BoundResult, BoundTarget, ReferenceName,
};
use charlier_core::expansion::{charlier_coefficients, shorgin_envelope, ExpansionVariant};
use charlier_core::measures::{signed_measure_pmf, Approximant};
use charlier_core::metrics::{distance, DistanceKind};
use charlier_core::params::{params_from_json, BernoulliParams};
use charlier_core::pmf::poisson_pmf;
use charlier_core::verify::{
    default_grid, dominance_sweep, inequality_battery, truncation_check, BatteryReport,
    SweepFamily, SweepInstance,
};

#[derive(Parser)]
#[command(
    name = "charlier",
    about = "Distances between Poisson-binomial and Poisson laws, with verified closed-form bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxTarget {
    /// Plain Poisson with the same mean.
    Poisson,
    /// Poisson corrected by the degree-2 Charlier term (signed).
    P1,
    /// The exponential quadratic-tilt approximant (signed).
    P2,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// The factor f itself.
    Full,
    /// f - 1: deviation from the Poisson baseline.
    Poisson,
    /// f minus the degree-2 correction polynomial.
    P1,
    /// f minus the exponential quadratic tilt.
    P2,
}

impl From<VariantArg> for ExpansionVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => ExpansionVariant::FullF,
            VariantArg::Poisson => ExpansionVariant::MinusPoisson,
            VariantArg::P1 => ExpansionVariant::MinusP1,
            VariantArg::P2 => ExpansionVariant::MinusP2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Battery,
    Dominance,
    Truncation,
}

#[derive(Args)]
struct InputArg {
    /// JSON input: {"probs": [..]} or {"uniform": {"n": .., "p": ..}}
    #[arg(long, value_name = "FILE")]
    probs: std::path::PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// All six exact distances against a chosen reference measure.
    Distances {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "poisson")]
        approx: ApproxTarget,
        /// Comma-separated subset of tv,chi2,kl,wasserstein,kolmogorov,point.
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Every closed-form bound with its validity flag and the exact distance.
    Bounds {
        #[command(flatten)]
        input: InputArg,
        /// Evaluate the nonuniform bounds at this point as well.
        #[arg(long)]
        m: Option<usize>,
        /// Replace the leading 1/2^(3/2) of the second-family tv bound by 3/(4e).
        #[arg(long)]
        roos_leading: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Charlier-Jordan coefficients of a chosen deviation family.
    Expand {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 30)]
        order: usize,
        #[arg(long, value_enum, default_value = "poisson")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the inequality battery and dominance sweeps; exit 0 iff clean.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Rank every total-variation bound against the exact distance.
    Compare {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn main() -> ExitCode {
    reset_sigpipe();
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// Die quietly when a downstream pipe closes (e.g. `charlier bounds | head`).
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

/// CHARLIER_THREADS caps sweep parallelism; default is the hardware count.
fn init_thread_pool() {
    if let Ok(value) = std::env::var("CHARLIER_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        } else {
            eprintln!("warning: ignoring unparsable CHARLIER_THREADS={value:?}");
        }
    }
}

fn load_params(input: &InputArg) -> Result<BernoulliParams, charlier_core::Error> {
    let text = std::fs::read_to_string(&input.probs).map_err(|e| {
        charlier_core::Error::InvalidInput(format!("cannot read {}: {e}", input.probs.display()))
    })?;
    params_from_json(&text)
}

/// 17 significant digits: enough for a lossless parse back to the same f64.
fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn run(command: Command) -> Result<ExitCode, charlier_core::Error> {
    match command {
        Command::Distances {
            input,
            approx,
            kinds,
            format,
        } => distances_cmd(&load_params(&input)?, approx, &kinds, format),
        Command::Bounds {
            input,
            m,
            roos_leading,
            format,
        } => bounds_cmd(&load_params(&input)?, m, roos_leading, format),
        Command::Expand {
            input,
            order,
            variant,
            format,
        } => expand_cmd(&load_params(&input)?, order, variant.into(), format),
        Command::Verify {
            suite,
            seed,
            samples,
            format,
        } => verify_cmd(suite, seed, samples, format),
        Command::Compare { input, format } => compare_cmd(&load_params(&input)?, format),
    }
}

fn parse_kinds(kinds: &[String]) -> Result<Vec<DistanceKind>, charlier_core::Error> {
    if kinds.is_empty() {
        return Ok(DistanceKind::ALL.to_vec());
    }
    kinds.iter().map(|k| k.parse()).collect()
}

fn distances_cmd(
    params: &BernoulliParams,
    approx: ApproxTarget,
    kinds: &[String],
    format: Format,
) -> Result<ExitCode, charlier_core::Error> {
    let kinds = parse_kinds(kinds)?;
    let pb = charlier_core::pmf::poisson_binomial_pmf(params)?;
    let lambda = params.lambda();
    let hi = pb
        .support()
        .1
        .max((lambda + 20.0 * lambda.sqrt() + 20.0).ceil() as usize);
    let pois = poisson_pmf(lambda, Some((0, hi)))?;
    let signed = match approx {
        ApproxTarget::Poisson => None,
        ApproxTarget::P1 => Some(signed_measure_pmf(params, Approximant::P1, Some((0, hi)))?),
        ApproxTarget::P2 => Some(signed_measure_pmf(params, Approximant::P2, Some((0, hi)))?),
    };
    let mut values: Vec<(DistanceKind, Option<f64>)> = Vec::new();
    for kind in kinds {
        let value = match (&signed, kind) {
            // kl against a signed approximant is undefined
            (Some(_), DistanceKind::Kl) => None,
            (Some(sm), DistanceKind::Chi2) => Some(distance(kind, &pb, sm, Some(&pois))?.value),
            (Some(sm), _) => Some(distance(kind, &pb, sm, None)?.value),
            (None, _) => Some(distance(kind, &pb, &pois, None)?.value),
        };
        values.push((kind, value));
    }
    match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = values
                .iter()
                .map(|(k, v)| (k.name().to_string(), json!(v)))
                .collect();
            println!("{}", serde_json::Value::Object(map));
        }
        Format::Csv => {
            println!("kind,value");
            for (k, v) in values {
                println!("{},{}", k.name(), v.map_or_else(String::new, fmt));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct BoundRow {
    result: BoundResult,
    exact: Option<f64>,
}

impl BoundRow {
    fn slack_ratio(&self) -> Option<f64> {
        match (self.result.valid, self.exact) {
            (true, Some(e)) if e > 0.0 => Some(self.result.value / e),
            _ => None,
        }
    }
}

fn collect_bound_rows(
    params: &BernoulliParams,
    m: Option<usize>,
    opts: &BoundOptions,
) -> Result<Vec<BoundRow>, charlier_core::Error> {
    let instance = SweepInstance::build(params, true, true)?;
    let mut rows = Vec::new();
    let paper_kinds: [(BoundFamily, &[BoundKind]); 3] = [
        (
            BoundFamily::First,
            &[
                BoundKind::Chi2,
                BoundKind::Tv,
                BoundKind::Kl,
                BoundKind::Wasserstein,
                BoundKind::Kolmogorov,
                BoundKind::Point,
                BoundKind::NonuniformK,
                BoundKind::NonuniformP,
            ],
        ),
        (
            BoundFamily::Second,
            &[
                BoundKind::Chi2,
                BoundKind::Tv,
                BoundKind::TvApprox,
                BoundKind::Wasserstein,
                BoundKind::NonuniformK,
                BoundKind::NonuniformP,
            ],
        ),
        (
            BoundFamily::Signed,
            &[
                BoundKind::Chi2,
                BoundKind::Tv,
                BoundKind::TvApprox,
                BoundKind::Wasserstein,
                BoundKind::NonuniformK,
                BoundKind::NonuniformP,
            ],
        ),
    ];
    let exact_at_m = |gaps: &[charlier_core::metrics::GapPoint], kind: BoundKind, point: usize| {
        gaps.iter().find(|g| g.m == point).map(|g| match kind {
            BoundKind::NonuniformK => g.cdf_gap,
            _ => g.pmf_gap,
        })
    };
    for (family, kinds) in paper_kinds {
        for &kind in kinds {
            if kind.needs_m() && m.is_none() {
                continue;
            }
            let result = paper_bound_opts(family, kind, params, m, opts)?;
            let exact = if kind.needs_m() {
                exact_at_m(&instance.gaps(result.target), kind, m.unwrap())
            } else {
                instance.exact(family, kind, result.target)?
            };
            rows.push(BoundRow { result, exact });
        }
    }
    for entry in literature_catalog() {
        if entry.needs_m && m.is_none() {
            continue;
        }
        let result = literature_bound(entry.citation_id, params, m)?;
        let exact = if entry.needs_m {
            exact_at_m(&instance.gaps(entry.target), entry.kind, m.unwrap())
        } else {
            instance.exact(BoundFamily::Literature, entry.kind, entry.target)?
        };
        rows.push(BoundRow { result, exact });
    }
    for name in ReferenceName::ALL {
        let result = reference_value(name, params)?;
        let exact = instance.exact(BoundFamily::Reference, result.kind, result.target)?;
        rows.push(BoundRow { result, exact });
    }
    Ok(rows)
}

fn bound_row_json(row: &BoundRow) -> serde_json::Value {
    json!({
        "citation_id": row.result.citation_id,
        "family": row.result.family.name(),
        "kind": row.result.kind.name(),
        "target": row.result.target,
        "lhs": row.result.lhs,
        "value": if row.result.value.is_nan() { None } else { Some(row.result.value) },
        "valid": row.result.valid,
        "validity_reason": row.result.validity_reason,
        "exact_distance": row.exact,
        "slack_ratio": row.slack_ratio(),
    })
}

fn bounds_cmd(
    params: &BernoulliParams,
    m: Option<usize>,
    roos_leading: bool,
    format: Format,
) -> Result<ExitCode, charlier_core::Error> {
    let rows = collect_bound_rows(params, m, &BoundOptions { roos_leading })?;
    match format {
        Format::Csv => {
            println!("citation_id,family,kind,target,value,valid,exact_distance,slack_ratio,lhs");
            for row in &rows {
                println!(
                    "{},{},{},{},{},{},{},{},\"{}\"",
                    row.result.citation_id,
                    row.result.family.name(),
                    row.result.kind.name(),
                    row.result.target.name(),
                    if row.result.value.is_nan() {
                        String::new()
                    } else {
                        fmt(row.result.value)
                    },
                    row.result.valid,
                    row.exact.map_or_else(String::new, fmt),
                    row.slack_ratio().map_or_else(String::new, fmt),
                    row.result.lhs,
                );
            }
        }
        Format::Json => {
            let items: Vec<_> = rows.iter().map(bound_row_json).collect();
            println!("{}", serde_json::Value::Array(items));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn expand_cmd(
    params: &BernoulliParams,
    order: usize,
    variant: ExpansionVariant,
    format: Format,
) -> Result<ExitCode, charlier_core::Error> {
    let expansion = charlier_coefficients(params, variant, order)?;
    let lambda2 = params.lambda2();
    match format {
        Format::Csv => {
            println!("j,a_j,shorgin_bound,method_disagreement");
            for (j, &a) in expansion.coeffs.iter().enumerate() {
                let shorgin = if j >= 2 {
                    fmt(shorgin_envelope(j, lambda2))
                } else {
                    String::new()
                };
                println!(
                    "{j},{},{shorgin},{}",
                    fmt(a),
                    fmt(expansion.method_disagreement[j])
                );
            }
        }
        Format::Json => {
            let coeffs: Vec<_> = expansion
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, &a)| {
                    json!({
                        "j": j,
                        "a_j": a,
                        "shorgin_bound": (j >= 2).then(|| shorgin_envelope(j, lambda2)),
                        "method_disagreement": expansion.method_disagreement[j],
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "variant": expansion.variant,
                    "lambda": expansion.lambda,
                    "method": expansion.method,
                    "condition_estimate": expansion.condition_estimate,
                    "coefficients": coeffs,
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(
    suite: SuiteArg,
    seed: u64,
    samples: usize,
    format: Format,
) -> Result<ExitCode, charlier_core::Error> {
    let grid = default_grid();
    let all_kinds = [
        BoundKind::Chi2,
        BoundKind::Tv,
        BoundKind::TvApprox,
        BoundKind::Kl,
        BoundKind::Wasserstein,
        BoundKind::Kolmogorov,
        BoundKind::Point,
        BoundKind::NonuniformK,
        BoundKind::NonuniformP,
    ];
    let mut reports: Vec<(&str, BatteryReport)> = Vec::new();
    if matches!(suite, SuiteArg::All | SuiteArg::Battery) {
        reports.push(("battery", inequality_battery(seed, samples)));
    }
    if matches!(suite, SuiteArg::All | SuiteArg::Dominance) {
        reports.push((
            "dominance",
            dominance_sweep(&grid, &SweepFamily::ALL, &all_kinds)?,
        ));
    }
    if matches!(suite, SuiteArg::All | SuiteArg::Truncation) {
        reports.push(("truncation", truncation_check(&grid, 6)?));
    }
    let clean = reports.iter().all(|(_, r)| r.passed());
    match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = reports
                .iter()
                .map(|(name, r)| (name.to_string(), serde_json::to_value(r).unwrap()))
                .collect();
            println!("{}", serde_json::Value::Object(map));
        }
        Format::Csv => {
            println!("suite,samples,violations");
            for (name, r) in &reports {
                println!("{name},{},{}", r.samples, r.violations.len());
            }
        }
    }
    for (name, r) in &reports {
        for v in &r.violations {
            eprintln!(
                "violation [{name}/{}]: lhs {} > rhs {} ({})",
                v.check_id, v.lhs, v.rhs, v.inputs
            );
        }
    }
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn compare_cmd(
    params: &BernoulliParams,
    format: Format,
) -> Result<ExitCode, charlier_core::Error> {
    let instance = SweepInstance::build(params, false, false)?;
    let exact_tv = distance(DistanceKind::Tv, instance.pb(), instance.poisson(), None)?.value;
    let mut rows: Vec<BoundResult> = Vec::new();
    for family in [BoundFamily::First, BoundFamily::Second, BoundFamily::Signed] {
        rows.push(paper_bound_opts(
            family,
            BoundKind::Tv,
            params,
            None,
            &BoundOptions::default(),
        )?);
    }
    for entry in literature_catalog() {
        if entry.kind == BoundKind::Tv && matches!(entry.target, BoundTarget::Poisson) {
            rows.push(literature_bound(entry.citation_id, params, None)?);
        }
    }
    // valid bounds ranked by tightness; inapplicable ones trail
    rows.sort_by(|a, b| match (a.valid, b.valid) {
        (true, true) => a.value.total_cmp(&b.value),
        (true, false) => std::cmp::Ordering::Less,
        (false, true) => std::cmp::Ordering::Greater,
        (false, false) => a.citation_id.cmp(&b.citation_id),
    });
    match format {
        Format::Csv => {
            println!("rank,citation_id,family,value,valid,exact_tv,ratio_to_exact,dominates_exact");
            for (rank, row) in rows.iter().enumerate() {
                let (ratio, dominates) = if row.valid {
                    (
                        fmt(row.value / exact_tv),
                        (row.value + 1e-12 >= exact_tv).to_string(),
                    )
                } else {
                    (String::new(), String::new())
                };
                println!(
                    "{},{},{},{},{},{},{},{}",
                    rank + 1,
                    row.citation_id,
                    row.family.name(),
                    if row.value.is_nan() {
                        String::new()
                    } else {
                        fmt(row.value)
                    },
                    row.valid,
                    fmt(exact_tv),
                    ratio,
                    dominates,
                );
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .enumerate()
                .map(|(rank, row)| {
                    json!({
                        "rank": rank + 1,
                        "citation_id": row.citation_id,
                        "family": row.family.name(),
                        "value": if row.value.is_nan() { None } else { Some(row.value) },
                        "valid": row.valid,
                        "exact_tv": exact_tv,
                        "ratio_to_exact": row.valid.then(|| row.value / exact_tv),
                        "dominates_exact": row.valid.then_some(row.value + 1e-12 >= exact_tv),
                    })
                })
                .collect();
            println!("{}", serde_json::Value::Array(items));
        }
    }
    Ok(ExitCode::SUCCESS)
}
