//! `opnorm`: operator norms between weighted l_p spaces.
//!
//! Three subcommands: `norm` computes one certificate (or evaluates an
//! extension norm on a vector), `verify` runs a verification suite and
//! writes CSV + JSONL reports, `fixtures` regenerates or checks the
//! committed counterexample fixtures. Exit codes: 0 on success, 2 when
//! a search did not converge, 1 for malformed input or any violation.

mod fixtures;
mod io;
mod manifest;
mod suites;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use opnorm_core::engine::{opnorm_exact, opnorm_search, Field, OperatorSpec, SearchConfig};
use opnorm_core::extension::{extension_norm_eval, ExtensionNorm, NuFunctional};
use opnorm_core::norm::BaseNorm;

#[derive(Parser)]
#[command(
    name = "opnorm",
    version,
    about = "Real and complex operator norms between weighted l_p spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an operator norm certificate, or evaluate an extension
    /// norm on a vector (with --vector)
    Norm(NormArgs),
    /// Run a verification suite and write CSV + JSONL reports
    Verify(VerifyArgs),
    /// Regenerate or check the committed counterexample fixtures
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct NormArgs {
    /// Matrix file: headerless CSV rows (real) or JSON {"re", "im"}
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Source exponent, a decimal >= 1 or "inf"
    #[arg(long)]
    p: Option<String>,
    /// Target exponent, a decimal >= 1 or "inf"
    #[arg(long)]
    q: Option<String>,
    /// Scalar field: real or complex
    #[arg(long, default_value = "complex")]
    field: String,
    /// Multistart budget for the ascent search
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the result JSON here (a manifest lands next to it)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Vector file; switches to extension-norm evaluation
    #[arg(long)]
    vector: Option<PathBuf>,
    /// Base norm exponent for the extension norm
    #[arg(long)]
    ext_base: Option<String>,
    /// Circle functional for the extension norm: "sup" or "l<s>"
    #[arg(long, default_value = "l2")]
    nu: String,
    /// Circle grid size for the extension norm
    #[arg(long, default_value_t = 4096)]
    nu_grid: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// bounds, equality, counterexamples, extension, or all
    suite: String,
    /// Random cases per suite (where the suite is randomized)
    #[arg(long, default_value_t = 50)]
    cases: usize,
    /// Largest random matrix dimension
    #[arg(long, default_value_t = 5)]
    max_dim: usize,
    /// Exponent set for random cases
    #[arg(long, default_value = "1,1.5,2,3,inf")]
    exponents: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Multistart budget per searched norm
    #[arg(long, default_value_t = 24)]
    restarts: usize,
    /// Report directory: summary.csv, cases.jsonl, manifest.json
    #[arg(long, default_value = "reports")]
    out: PathBuf,
}

#[derive(Args)]
struct FixturesArgs {
    /// regenerate or check
    action: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Norm(args) => run_norm(args),
        Command::Verify(args) => run_verify(args),
        Command::Fixtures(args) => run_fixtures(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {:#}", err);
            ExitCode::from(1)
        }
    }
}

fn parse_field(s: &str) -> Result<Field> {
    match s.trim().to_ascii_lowercase().as_str() {
        "real" => Ok(Field::Real),
        "complex" => Ok(Field::Complex),
        other => bail!("unknown field {:?}; expected real or complex", other),
    }
}

fn parse_nu(s: &str, grid: usize) -> Result<NuFunctional> {
    let s = s.trim().to_ascii_lowercase();
    if s == "sup" {
        return Ok(NuFunctional::sup(grid)?);
    }
    let Some(rest) = s.strip_prefix('l') else {
        bail!("unknown circle functional {:?}; expected sup or l<s> such as l2", s);
    };
    let exponent: f64 = rest
        .parse()
        .with_context(|| format!("bad circle exponent in {:?}", s))?;
    Ok(NuFunctional::lp(exponent, grid)?)
}

fn run_norm(args: &NormArgs) -> Result<u8> {
    if let Some(vector_path) = &args.vector {
        if args.matrix.is_some() {
            bail!("--vector and --matrix are mutually exclusive");
        }
        let base_arg = args
            .ext_base
            .as_deref()
            .context("extension evaluation needs --ext-base")?;
        let base = io::parse_exponent(base_arg)?;
        let x = io::read_vector(vector_path)?;
        let nu = parse_nu(&args.nu, args.nu_grid)?;
        let ext = ExtensionNorm::new(BaseNorm::holder(base), x.len(), nu)?;
        let value = extension_norm_eval(&ext, &x)?;
        let doc = json!({
            "value": value,
            "base_exponent": io::exponent_json(base),
            "nu": args.nu,
            "nu_grid": args.nu_grid,
            "dim": x.len(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        if let Some(out) = &args.out {
            io::write_json_file(out, &doc)?;
            let mut run = manifest::RunManifest::from_argv(
                args.seed,
                json!({ "nu": args.nu, "nu_grid": args.nu_grid }),
            );
            run.input(vector_path)?;
            run.output(out);
            run.write(&manifest_path_for(out))?;
        }
        return Ok(0);
    }

    let matrix_path = args
        .matrix
        .as_ref()
        .context("norm needs --matrix (or --vector for extension norms)")?;
    let p = io::parse_exponent(args.p.as_deref().context("norm needs --p")?)?;
    let q = io::parse_exponent(args.q.as_deref().context("norm needs --q")?)?;
    let field = parse_field(&args.field)?;
    let a = io::read_matrix(matrix_path)?;
    let spec = OperatorSpec::counting(a, p, q);
    let cfg = SearchConfig::default()
        .with_restarts(args.restarts)
        .with_seed(args.seed);
    let cert = match opnorm_exact(&spec, field) {
        Some(cert) => cert,
        None => opnorm_search(&spec, field, &cfg),
    };
    let doc = json!({
        "p": io::exponent_json(p),
        "q": io::exponent_json(q),
        "rows": spec.matrix().rows(),
        "cols": spec.matrix().cols(),
        "certificate": io::certificate_json(&cert),
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    if let Some(out) = &args.out {
        io::write_json_file(out, &doc)?;
        let mut run = manifest::RunManifest::from_argv(
            args.seed,
            json!({ "restarts": args.restarts, "field": field.to_string() }),
        );
        run.input(matrix_path)?;
        run.output(out);
        run.write(&manifest_path_for(out))?;
    }
    Ok(if cert.converged { 0 } else { 2 })
}

fn manifest_path_for(out: &std::path::Path) -> PathBuf {
    let mut name = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    name.push_str(".manifest.json");
    out.with_file_name(name)
}

fn run_verify(args: &VerifyArgs) -> Result<u8> {
    let exponents = io::parse_exponent_list(&args.exponents)?;
    if args.max_dim < 2 {
        bail!("--max-dim must be at least 2");
    }
    let opts = suites::SuiteOptions {
        cases: args.cases,
        max_dim: args.max_dim,
        exponents,
        seed: args.seed,
        restarts: args.restarts.max(1),
    };
    let ran = suites::run(&args.suite, &opts)?;

    let mut records: Vec<suites::CaseRecord> =
        ran.iter().flat_map(|(_, recs)| recs.iter().cloned()).collect();
    records.sort_by(|a, b| a.case_id.cmp(&b.case_id));

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating report directory {}", args.out.display()))?;
    let csv_path = args.out.join("summary.csv");
    let jsonl_path = args.out.join("cases.jsonl");
    write_summary_csv(&csv_path, &records)?;
    write_cases_jsonl(&jsonl_path, &records)?;

    let mut violations = 0usize;
    for (suite, recs) in &ran {
        let ok = recs.iter().filter(|r| r.is_ok()).count();
        violations += recs.len() - ok;
        println!("suite {}: {} cases, {} ok", suite, recs.len(), ok);
        for rec in recs.iter().filter(|r| !r.is_ok()) {
            println!("  {}: {}", rec.case_id, rec.status);
        }
    }
    let total: usize = ran.iter().map(|(_, recs)| recs.len()).sum();
    println!(
        "verify {}: {} cases, {} violations; reports in {}",
        args.suite,
        total,
        violations,
        args.out.display()
    );

    let mut run = manifest::RunManifest::from_argv(
        args.seed,
        json!({
            "suite": args.suite,
            "cases": args.cases,
            "max_dim": args.max_dim,
            "exponents": args.exponents,
            "restarts": args.restarts,
        }),
    );
    run.output(&csv_path);
    run.output(&jsonl_path);
    run.write(&args.out.join("manifest.json"))?;

    Ok(if violations == 0 { 0 } else { 1 })
}

fn float_cell(v: Option<f64>) -> String {
    v.map(|v| format!("{}", v)).unwrap_or_default()
}

fn write_summary_csv(path: &std::path::Path, records: &[suites::CaseRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("writing {}", path.display()))?;
    writer.write_record(["case_id", "p", "q", "real", "complex", "gap", "bound", "status"])?;
    for rec in records {
        writer.write_record([
            rec.case_id.as_str(),
            rec.p.as_str(),
            rec.q.as_str(),
            &float_cell(rec.real),
            &float_cell(rec.complex),
            &float_cell(rec.gap),
            &float_cell(rec.bound),
            rec.status.as_str(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn write_cases_jsonl(path: &std::path::Path, records: &[suites::CaseRecord]) -> Result<()> {
    let mut text = String::new();
    for rec in records {
        text.push_str(&serde_json::to_string(&rec.jsonl_value())?);
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run_fixtures(args: &FixturesArgs) -> Result<u8> {
    let dir = fixtures::fixtures_dir();
    match args.action.trim() {
        "regenerate" => {
            let written = fixtures::regenerate(&dir)?;
            for path in &written {
                println!("wrote {}", path.display());
            }
            let mut run = manifest::RunManifest::from_argv(42, json!({ "action": "regenerate" }));
            for path in &written {
                run.output(path);
            }
            run.write(&dir.join("manifest.json"))?;
            println!("fixtures regenerate: {} files in {}", written.len(), dir.display());
            Ok(0)
        }
        "check" => {
            let checked = fixtures::check(&dir)?;
            println!("fixtures check: {} fixtures match in {}", checked, dir.display());
            Ok(0)
        }
        other => bail!("unknown fixtures action {:?}; expected regenerate or check", other),
    }
}
