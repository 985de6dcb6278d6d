//! `ideal-lab`: surveys and single-ideal queries.
//!
//! Exit codes: 0 success, 1 a proven-scope check failed, 2 usage, 3 budget or
//! Weyl-group cap, 4 I/O, 5 bad type or ideal specification.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ideal_lab::ideals::{Ideal, IdealJson};
use ideal_lab::rootsys::cache::load_or_enumerate;
use ideal_lab::rootsys::DEFAULT_WEYL_CAP;
use ideal_lab::survey::{ideal_record, run_survey, Check, CheckOutcome, ExitClass, SurveyOptions, SurveyReport};
use ideal_lab::{build_root_system, CartanType, Exec, RootSet, RootSystem, WeylGroup};

const CACHE_ENV: &str = "IDEAL_LAB_CACHE_DIR";

#[derive(Parser)]
#[command(name = "ideal-lab", version, about = "Exact checks of ideal factorizations in root systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on every ideal of a type.
    Survey(SurveyArgs),
    /// Run checks on one ideal given by generators.
    Ideal(IdealArgs),
    /// List the positive roots with their indices.
    Roots(TypeArgs),
}

#[derive(Args)]
struct TypeArgs {
    /// Type letter (A–G), or a full name such as F4.
    #[arg(long = "type")]
    kind: String,
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(Args)]
struct CommonArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Largest Weyl group to enumerate.
    #[arg(long, default_value_t = DEFAULT_WEYL_CAP)]
    cap: u64,
    /// Limit on lattice flats and on certificate-search nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Drop timings and timestamps so output is byte-stable.
    #[arg(long)]
    reproducible: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SurveyFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct SurveyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_delimiter = ',', default_value = "thm1,thm2,free")]
    checks: Vec<Check>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: SurveyFormat,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdealFormat {
    Text,
    Json,
}

#[derive(Args)]
struct IdealArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated root indices, or theta, empty, full.
    #[arg(long = "ideal")]
    spec: String,
    /// Treat the roots as the whole ideal instead of upper-closing them.
    #[arg(long)]
    no_close: bool,
    #[arg(long, value_delimiter = ',', default_value = "thm1,thm2")]
    checks: Vec<Check>,
    #[arg(long, value_enum, default_value = "text")]
    format: IdealFormat,
}

/// A malformed type or ideal specification.
#[derive(Debug)]
struct SpecError(String);

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SpecError {}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    use ideal_lab::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::GroupTooLarge { .. } | E::BudgetExceeded { .. } | E::ComplementTooLarge { .. } => 3,
                E::Io(_) => 4,
                E::UnsupportedType { .. } | E::InvalidIdeal(_) | E::InvalidArrangement(_) => 5,
                _ => 1,
            };
        }
        if cause.is::<SpecError>() {
            return 5;
        }
        if cause.is::<io::Error>() || cause.is::<csv::Error>() {
            return 4;
        }
    }
    1
}

fn cartan_type(args: &TypeArgs) -> anyhow::Result<CartanType> {
    let s = args.kind.trim();
    let kind = match (s.len(), args.rank) {
        (1, Some(rank)) => CartanType::new(s.chars().next().unwrap(), rank)?,
        (1, None) => bail!(SpecError(format!("type {s} needs --rank"))),
        (_, rank) => {
            let kind: CartanType = s.parse()?;
            if rank.is_some_and(|r| r != kind.rank) {
                bail!(SpecError(format!("--type {s} disagrees with --rank {}", rank.unwrap())));
            }
            kind
        }
    };
    Ok(kind)
}

fn load_weyl(rs: &RootSystem, cap: u64) -> anyhow::Result<WeylGroup> {
    let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    Ok(load_or_enumerate(rs, Some(cap), dir.as_deref())?)
}

fn options(common: &CommonArgs, checks: &[Check]) -> SurveyOptions {
    let mut opts =
        SurveyOptions { checks: checks.to_vec(), reproducible: common.reproducible, ..SurveyOptions::default() };
    if let Some(b) = common.budget {
        opts.budget.max_flats = b;
        opts.budget.certificate_nodes = b;
    }
    opts
}

fn dedup_checks(checks: &[Check]) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for &c in checks {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce(Exec) -> T + Send) -> anyhow::Result<T> {
    match jobs {
        Some(0) => bail!(SpecError("--jobs must be at least 1".into())),
        Some(1) => Ok(f(Exec::Sequential)),
        #[cfg(feature = "parallel")]
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(|| f(Exec::Parallel)))
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => {
            log::warn!("built without parallel support; running sequentially");
            Ok(f(Exec::Sequential))
        }
        None => Ok(f(Exec::default())),
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn verdict_cell(o: Option<&CheckOutcome>) -> &'static str {
    o.map_or("", |o| o.verdict.as_str())
}

fn write_csv(report: &SurveyReport, out: Box<dyn Write>) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["ideal_id", "k", "exponents", "thm1", "thm2", "free", "millis"])?;
    for r in &report.records {
        let exps: Vec<String> = r.exponents.iter().map(|m| m.to_string()).collect();
        w.write_record([
            r.ideal_id.to_string().as_str(),
            r.k.to_string().as_str(),
            exps.join(";").as_str(),
            verdict_cell(r.outcome(Check::Thm1)),
            verdict_cell(r.outcome(Check::Thm2)),
            verdict_cell(r.outcome(Check::Free)),
            r.millis.map(|m| m.to_string()).unwrap_or_default().as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn survey(args: SurveyArgs) -> anyhow::Result<ExitCode> {
    let kind = cartan_type(&args.common.ty)?;
    let rs = build_root_system(kind.letter, kind.rank)?;
    let checks = dedup_checks(&args.checks);
    let weyl = if checks.iter().any(|c| c.needs_weyl()) { Some(load_weyl(&rs, args.common.cap)?) } else { None };
    let mut opts = options(&args.common, &checks);
    let report = with_jobs(args.jobs, |exec| {
        opts.exec = exec;
        run_survey(&rs, weyl.as_ref(), &opts)
    })??;

    let mut out = open_output(args.output.as_deref())?;
    match args.format {
        SurveyFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
            out.flush()?;
        }
        SurveyFormat::Csv => write_csv(&report, out)?,
    }

    for s in &report.summary {
        eprintln!(
            "{} {}: {} ideals, equal {}, mismatch {}, found {}, not_found {}, budget {} ({:?})",
            report.kind, s.check, report.ideal_count, s.equal, s.mismatch, s.found, s.not_found, s.budget, s.scope
        );
    }
    Ok(match report.exit_class() {
        ExitClass::Ok => ExitCode::SUCCESS,
        ExitClass::ProvenFailure => ExitCode::from(1),
        ExitClass::BudgetStop => ExitCode::from(3),
    })
}

fn parse_ideal(rs: &RootSystem, spec: &str, no_close: bool) -> anyhow::Result<Ideal> {
    match spec.trim() {
        "theta" => return Ok(Ideal::theta(rs)),
        "empty" => return Ok(Ideal::empty(rs)),
        "full" => return Ok(Ideal::full(rs)),
        _ => {}
    }
    let mut roots = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let j: usize = part.parse().map_err(|_| SpecError(format!("bad root index {part:?} in ideal spec")))?;
        if j >= rs.num_positive() {
            bail!(SpecError(format!(
                "root index {j} out of range: {} has {} positive roots (see `ideal-lab roots`)",
                rs.kind(),
                rs.num_positive()
            )));
        }
        roots.push(j);
    }
    if no_close {
        return Ok(Ideal::new(rs, roots.into_iter().collect())?);
    }
    let ideal = Ideal::upper_closure(rs, &roots)?;
    let given: RootSet = roots.iter().copied().collect();
    if ideal.members() != given {
        eprintln!(
            "note: upper-closed {:?} to an ideal of {} roots {:?}",
            given.to_vec(),
            ideal.len(),
            ideal.members().to_vec()
        );
    }
    Ok(ideal)
}

#[derive(Serialize)]
struct IdealOutput {
    #[serde(flatten)]
    ideal: IdealJson,
    generators: Vec<usize>,
    k: usize,
    checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    millis: Option<u64>,
}

fn ideal(args: IdealArgs) -> anyhow::Result<ExitCode> {
    let kind = cartan_type(&args.common.ty)?;
    let rs = build_root_system(kind.letter, kind.rank)?;
    let ideal = parse_ideal(&rs, &args.spec, args.no_close)?;
    let checks = dedup_checks(&args.checks);
    let weyl = if checks.iter().any(|c| c.needs_weyl()) { Some(load_weyl(&rs, args.common.cap)?) } else { None };
    let opts = options(&args.common, &checks);
    let rec = ideal_record(&rs, weyl.as_ref(), 0, &ideal, &opts)?;

    let mut out = io::stdout().lock();
    match args.format {
        IdealFormat::Json => {
            let o = IdealOutput {
                ideal: IdealJson::new(&rs, &ideal),
                generators: rec.generators.clone(),
                k: rec.k,
                checks: rec.checks.clone(),
                millis: rec.millis,
            };
            serde_json::to_writer_pretty(&mut out, &o)?;
            writeln!(out)?;
        }
        IdealFormat::Text => {
            writeln!(
                out,
                "{}  ideal {:?}  generators {:?}  ({} of {} positive roots)",
                rs.kind(),
                rec.ideal_roots,
                rec.generators,
                ideal.len(),
                rs.num_positive()
            )?;
            let exps: Vec<String> = rec.exponents.iter().map(|m| m.to_string()).collect();
            writeln!(out, "lambda {:?}  k = {}  exponents ({})", rec.lambda, rec.k, exps.join(", "))?;
            for o in &rec.checks {
                let scope = format!("{:?}", o.scope).to_lowercase();
                writeln!(out, "{}: {} [{}]", o.check, o.verdict.as_str(), scope)?;
                if let (Some(l), Some(r)) = (&o.lhs_coeffs, &o.rhs_coeffs) {
                    writeln!(out, "  lhs {l}")?;
                    writeln!(out, "  rhs {r}")?;
                }
                if let Some(d) = &o.detail {
                    writeln!(out, "  {d}")?;
                }
            }
        }
    }
    out.flush()?;
    let failed = rec.checks.iter().any(CheckOutcome::is_proven_failure);
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn roots(args: TypeArgs) -> anyhow::Result<ExitCode> {
    let kind = cartan_type(&args)?;
    let rs = build_root_system(kind.letter, kind.rank)?;
    let mut out = io::stdout().lock();
    writeln!(out, "index\theight\tcoords")?;
    for r in rs.roots() {
        let c: Vec<String> = r.coords.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}\t{}\t{}", r.index, r.height, c.join(" "))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Survey(a) => survey(a),
        Command::Ideal(a) => ideal(a),
        Command::Roots(a) => roots(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(exit_code_for(&e))
    })
}
