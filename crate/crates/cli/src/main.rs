//! `partcount`: command-line front end for the partition counting toolkit.
//!
//! Every subcommand prints a single JSON document to stdout:
//!
//! ```json
//! {"schema_version": 1, "status": "...", "elapsed_ms": ..., "payload": {...}}
//! ```
//!
//! Counts are decimal strings (they routinely exceed 64 bits). Exit codes:
//! 0 ok, 1 error, 2 certified UNSAT, 3 conjecture counterexample found.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::Zero;
use serde_json::{json, Value};

use partcount_core::conjecture::{self, Counterexample, ScanReport};
use partcount_core::estimator::{self, Verdict};
use partcount_core::io::{
    estimate_report_json, scan_report_json, FamilyManifest, InstanceFile, ManifestMember,
    SCHEMA_VERSION,
};
use partcount_core::model;
use partcount_core::reduction::{self, ReductionVariant};
use partcount_core::{modular, spectral, PartitionInstance};

#[derive(Parser)]
#[command(name = "partcount", version, about = "Zero-partition counting toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count zero partitions of an instance file by one or all methods.
    Count(CountArgs),
    /// Reduce a DIMACS CNF formula to a multi-radix partition family.
    Reduce(ReduceArgs),
    /// Sieve a formula's reduction family to bound #SAT.
    Estimate(EstimateArgs),
    /// Scan small instances for violations of the extremal-count bound.
    Scan(ScanArgs),
    /// Report variance, correlation, and residue statistics of an instance.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Dp,
    Residue,
    Quadrature,
    Modular,
    All,
}

#[derive(Args)]
struct CountArgs {
    /// Instance file: {"numbers": ["..."], "radix": ..., "source": "..."}.
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    method: Method,
    /// Quadrature node multiplier (nodes = oversample * (total + 1)).
    #[arg(long, default_value_t = 1)]
    oversample: u64,
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS CNF file (3-CNF).
    cnf: PathBuf,
    /// Comma-separated radices, each >= 6.
    #[arg(long, value_delimiter = ',', default_values_t = estimator::DEFAULT_RADICES)]
    radices: Vec<u32>,
    #[arg(long, value_enum, default_value = "parsimonious")]
    variant: VariantArg,
    /// Output directory for instance files and the family manifest.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Parsimonious,
    Classic,
}

impl From<VariantArg> for ReductionVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Parsimonious => ReductionVariant::Parsimonious,
            VariantArg::Classic => ReductionVariant::Classic,
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// DIMACS CNF file (3-CNF).
    cnf: PathBuf,
    /// Comma-separated sieve primes.
    #[arg(long, value_delimiter = ',', default_values_t = estimator::DEFAULT_PRIMES)]
    primes: Vec<u64>,
    /// Comma-separated radices, each >= 6.
    #[arg(long, value_delimiter = ',', default_values_t = estimator::DEFAULT_RADICES)]
    radices: Vec<u32>,
}

#[derive(Args)]
struct ScanArgs {
    /// Inclusive length range, e.g. 2..5.
    #[arg(long, default_value = "2..5", value_parser = parse_range)]
    n_range: (usize, usize),
    /// Largest element value to consider.
    #[arg(long, default_value_t = 8)]
    element_bound: u64,
    /// If set, sample this many random vectors per length instead of
    /// scanning exhaustively.
    #[arg(long)]
    samples: Option<u64>,
    /// Seed for random sampling (deterministic given the seed).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct StatsArgs {
    /// Instance file: {"numbers": ["..."], "radix": ..., "source": "..."}.
    instance: PathBuf,
    /// Also report the residue spectrum and divisible-class variance mod N.
    #[arg(long)]
    modulus: Option<u64>,
    /// Also report the sign correlation of elements i and j (0-based).
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pair: Option<Vec<usize>>,
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got '{text}'"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad lower bound '{lo}'"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad upper bound '{hi}'"))?;
    Ok((lo, hi))
}

/// Process status; determines the exit code.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Certified,
    Counterexample,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Certified => "certified",
            Status::Counterexample => "counterexample",
        }
    }

    fn exit_code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::Certified => ExitCode::from(2),
            Status::Counterexample => ExitCode::from(3),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Count(args) => cmd_count(&args),
        Command::Reduce(args) => cmd_reduce(&args),
        Command::Estimate(args) => cmd_estimate(&args),
        Command::Scan(args) => cmd_scan(&args),
        Command::Stats(args) => cmd_stats(&args),
    };
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok((status, payload)) => {
            emit(status.label(), elapsed_ms, payload);
            status.exit_code()
        }
        Err(message) => {
            emit("error", elapsed_ms, json!({ "message": message }));
            ExitCode::FAILURE
        }
    }
}

fn emit(status: &str, elapsed_ms: f64, payload: Value) {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "status": status,
        "elapsed_ms": elapsed_ms,
        "payload": payload,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
}

type CmdResult = Result<(Status, Value), String>;

fn load_instance(path: &PathBuf) -> Result<PartitionInstance, String> {
    InstanceFile::load(path)
        .map_err(|e| format!("{}: {e}", path.display()))?
        .to_instance()
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_formula(path: &PathBuf) -> Result<reduction::CnfFormula, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    reduction::parse_dimacs(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Run one counting method, reporting its own wall time.
fn run_method(
    inst: &PartitionInstance,
    method: Method,
    oversample: u64,
) -> Result<(BigUint, Value), String> {
    let started = Instant::now();
    let (count, extra) = match method {
        Method::Oracle => (model::count_zero_oracle(inst).map_err(|e| e.to_string())?, None),
        Method::Dp => (model::count_zero_dp(inst).map_err(|e| e.to_string())?, None),
        Method::Residue => {
            // With modulus total + 1 no nonzero size aliases into class 0.
            let modulus = inst
                .total_u64()
                .ok_or_else(|| "total too large for the residue method".to_string())?
                + 1;
            let spectrum = model::residue_spectrum_dp(inst, modulus).map_err(|e| e.to_string())?;
            (spectrum.count(0).clone(), None)
        }
        Method::Quadrature => {
            let result = spectral::count_zero_quadrature(inst, oversample)
                .map_err(|e| e.to_string())?;
            let extra = json!({
                "raw": result.raw,
                "residual": result.residual,
                "nodes": result.node_count,
            });
            (BigUint::from(result.rounded), Some(extra))
        }
        Method::Modular => (model_modular(inst)?, None),
        Method::All => unreachable!("dispatched by caller"),
    };
    let mut report = json!({
        "count": count.to_string(),
        "elapsed_ms": started.elapsed().as_secs_f64() * 1e3,
    });
    if let Some(extra) = extra {
        report["detail"] = extra;
    }
    Ok((count, report))
}

fn model_modular(inst: &PartitionInstance) -> Result<BigUint, String> {
    modular::count_zero_modular(inst).map_err(|e| e.to_string())
}

fn cmd_count(args: &CountArgs) -> CmdResult {
    let inst = load_instance(&args.instance)?;
    if args.method != Method::All {
        let (count, report) = run_method(&inst, args.method, args.oversample)?;
        return Ok((
            Status::Ok,
            json!({
                "n": inst.n(),
                "total": inst.total().to_string(),
                "count": count.to_string(),
                "methods": { method_name(args.method): report },
            }),
        ));
    }
    // Method "all": run everything feasible, then insist the answers agree.
    let mut methods = serde_json::Map::new();
    let mut skipped = serde_json::Map::new();
    let mut agreed: Option<(BigUint, &'static str)> = None;
    let mut conflict: Option<Value> = None;
    for method in [
        Method::Oracle,
        Method::Dp,
        Method::Residue,
        Method::Quadrature,
        Method::Modular,
    ] {
        let name = method_name(method);
        match run_method(&inst, method, args.oversample) {
            Ok((count, report)) => {
                methods.insert(name.to_string(), report);
                match &agreed {
                    None => agreed = Some((count, name)),
                    Some((first, first_name)) => {
                        if *first != count && conflict.is_none() {
                            conflict = Some(json!({
                                "message": "exact methods disagree",
                                "first_method": first_name,
                                "first_count": first.to_string(),
                                "method": name,
                                "count": count.to_string(),
                            }));
                        }
                    }
                }
            }
            // Infeasible on this instance (size guard tripped): record why.
            Err(reason) => {
                skipped.insert(name.to_string(), Value::String(reason));
            }
        }
    }
    let (count, _) = agreed.ok_or_else(|| {
        format!("no counting method is feasible: {}", json!(skipped))
    })?;
    if let Some(diag) = conflict {
        let mut full = diag;
        full["methods"] = Value::Object(methods);
        return Err(full.to_string());
    }
    Ok((
        Status::Ok,
        json!({
            "n": inst.n(),
            "total": inst.total().to_string(),
            "count": count.to_string(),
            "methods": methods,
            "skipped": skipped,
        }),
    ))
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Oracle => "oracle",
        Method::Dp => "dp",
        Method::Residue => "residue",
        Method::Quadrature => "quadrature",
        Method::Modular => "modular",
        Method::All => "all",
    }
}

fn cmd_reduce(args: &ReduceArgs) -> CmdResult {
    let formula = load_formula(&args.cnf)?;
    let variant: ReductionVariant = args.variant.into();
    let family = reduction::multi_radix_family(&formula, &args.radices, variant)
        .map_err(|e| e.to_string())?;
    fs::create_dir_all(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    let source = args.cnf.display().to_string();
    let mut members = Vec::new();
    let mut files = Vec::new();
    for member in &family {
        let file_name = format!("instance-r{}.json", member.radix);
        let path = args.out.join(&file_name);
        InstanceFile::from_instance(&member.partition, Some(member.radix), &source)
            .save(&path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        members.push(ManifestMember {
            file: file_name.clone(),
            radix: member.radix,
        });
        files.push(file_name);
    }
    let count_relation = match variant {
        ReductionVariant::Parsimonious => {
            "zero_partitions = 2 * satisfying_assignments".to_string()
        }
        ReductionVariant::Classic => {
            "zero_partitions = 2 * sum over satisfying assignments of \
             2^(clauses with exactly two true literals)"
                .to_string()
        }
    };
    let manifest = FamilyManifest {
        schema_version: SCHEMA_VERSION,
        source_cnf: source,
        variant: match variant {
            ReductionVariant::Parsimonious => "parsimonious".to_string(),
            ReductionVariant::Classic => "classic".to_string(),
        },
        count_relation: count_relation.clone(),
        members,
    };
    let manifest_path = args.out.join("family.json");
    manifest
        .save(&manifest_path)
        .map_err(|e| format!("{}: {e}", manifest_path.display()))?;
    Ok((
        Status::Ok,
        json!({
            "variables": formula.num_vars(),
            "clauses": formula.clauses().len(),
            "radices": args.radices,
            "count_relation": count_relation,
            "manifest": manifest_path.display().to_string(),
            "instances": files,
        }),
    ))
}

fn cmd_estimate(args: &EstimateArgs) -> CmdResult {
    let formula = load_formula(&args.cnf)?;
    let report = estimator::estimate_sharp_sat(
        &formula,
        &args.radices,
        &args.primes,
        ReductionVariant::Parsimonious,
    )
    .map_err(|e| e.to_string())?;
    let status = match report.verdict {
        Verdict::UnsatCertified => Status::Certified,
        Verdict::Unknown => Status::Ok,
    };
    Ok((status, estimate_report_json(&report)))
}

fn cmd_scan(args: &ScanArgs) -> CmdResult {
    let mut report = match args.samples {
        None => conjecture::scan_exhaustive(args.n_range, args.element_bound)
            .map_err(|e| e.to_string())?,
        Some(samples) => {
            let (lo, hi) = args.n_range;
            if lo == 0 || hi < lo {
                return Err(format!("invalid scan range: n range {lo}..={hi}"));
            }
            let mut merged: Option<ScanReport> = None;
            for n in lo..=hi {
                let part = conjecture::scan_random(n, args.element_bound, samples, args.seed)
                    .map_err(|e| e.to_string())?;
                merged = Some(match merged {
                    None => part,
                    Some(mut acc) => {
                        acc.instances_checked += part.instances_checked;
                        if part.max_ratio > acc.max_ratio {
                            acc.max_ratio = part.max_ratio;
                            acc.witness = part.witness;
                        }
                        acc.counterexamples.extend(part.counterexamples);
                        acc.partial |= part.partial;
                        acc.n_range = (lo, n);
                        acc
                    }
                });
            }
            merged.expect("nonempty range")
        }
    };
    // Test-harness hook: pretend a counterexample was found so scripts can
    // exercise the exit-code path without one existing.
    if std::env::var_os("PARTCOUNT_INJECT_COUNTEREXAMPLE").is_some() {
        report.counterexamples.push(Counterexample {
            numbers: vec![0],
            zero_count: BigUint::zero(),
            bound: BigUint::zero(),
        });
    }
    let status = if report.counterexamples.is_empty() {
        Status::Ok
    } else {
        Status::Counterexample
    };
    Ok((status, scan_report_json(&report)))
}

fn cmd_stats(args: &StatsArgs) -> CmdResult {
    let inst = load_instance(&args.instance)?;
    let mut payload = serde_json::Map::new();
    payload.insert("n".into(), json!(inst.n()));
    payload.insert("total".into(), json!(inst.total().to_string()));
    // Variance of the full size spectrum; cross-checked against Σ x² when
    // the spectrum is small enough to build.
    match spectral::variance_total_verified(&inst) {
        Ok((variance, _mass_check)) => {
            payload.insert("variance".into(), json!(variance.to_string()));
            payload.insert("variance_verified".into(), json!(true));
        }
        Err(_) => {
            payload.insert(
                "variance".into(),
                json!(spectral::variance_total(&inst).to_string()),
            );
            payload.insert("variance_verified".into(), json!(false));
        }
    }
    payload.insert(
        "gaussian_limit_constant".into(),
        json!(spectral::gaussian_limit_constant(&inst)),
    );
    match modular::hyperbolic_expectation(&inst) {
        Ok(expectation) => {
            let normalized = expectation.normalized();
            payload.insert(
                "hyperbolic_expectation".into(),
                json!({
                    "numerator": normalized.numerator.to_string(),
                    "log2_denominator": normalized.log2_denominator,
                    "approx": normalized.to_f64(),
                }),
            );
        }
        Err(e) => {
            payload.insert("hyperbolic_expectation_skipped".into(), json!(e.to_string()));
        }
    }
    if let Some(modulus) = args.modulus {
        let spectrum = model::residue_spectrum_dp(&inst, modulus).map_err(|e| e.to_string())?;
        let map: serde_json::Map<String, Value> = spectrum
            .counts()
            .iter()
            .enumerate()
            .map(|(j, c)| (j.to_string(), json!(c.to_string())))
            .collect();
        payload.insert(
            "residue_spectrum".into(),
            json!({ "modulus": modulus, "counts": map }),
        );
        match spectral::variance_divisible(&inst, modulus) {
            Ok(value) => {
                payload.insert("variance_divisible".into(), json!(value));
            }
            Err(e) => {
                payload.insert("variance_divisible_skipped".into(), json!(e.to_string()));
            }
        }
    }
    if let Some(pair) = &args.pair {
        let (i, j) = (pair[0], pair[1]);
        let correlation = spectral::sign_correlation(&inst, i, j).map_err(|e| e.to_string())?;
        payload.insert(
            "sign_correlation".into(),
            json!({
                "i": i,
                "j": j,
                "raw": correlation.raw,
                "rounded": correlation.rounded.to_string(),
                "reliable": correlation.reliable(),
            }),
        );
    }
    Ok((Status::Ok, Value::Object(payload)))
}
