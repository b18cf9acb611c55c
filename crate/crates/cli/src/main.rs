//! Command-line front end: ingest ring files, build mapping-space models,
//! compute self-closeness numbers, and run the identity suite.
//!
//! Exit codes: 0 success, 1 ring validation failure, 2 internal-verification
//! failure, 3 I/O or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mapsphere::bs_models::{
    component_model, export_model, full_model, homotopy_ranks, minimal_k0, minimal_k1,
};
use mapsphere::poincare::{parse_and_validate, PoincareData, RingDescription};
use mapsphere::selfclose::{export_report, self_closeness};
use mapsphere::verify::{all_passed, run_identity_suite};
use mapsphere::{Error, Result};

#[derive(Parser)]
#[command(name = "mapsphere", version, about = "Mapping-space models for sphere targets")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Ring description file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Component degree k.
    #[arg(long, global = true)]
    component: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Emit the minimal model instead of the raw quotient.
    #[arg(long, global = true)]
    minimal: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that the input is a Poincaré duality ring of even formal dimension.
    Validate,
    /// Dump a mapping-space model: full by default, component with --component,
    /// minimal with --minimal.
    Model,
    /// Self-closeness number of one component, with a verified witness map.
    Selfclose,
    /// Run the full identity suite on the ring.
    Verify,
    /// Rational homotopy rank table of a minimal component model.
    Ranks,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            for line in e.to_string().lines() {
                eprintln!("error: {line}");
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse(_) => 3,
        Error::Validation(_) => 1,
        _ => 2,
    }
}

fn load(cli: &Cli) -> Result<PoincareData> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Error::Parse("missing --input <path>".into()))?;
    let text = std::fs::read_to_string(path)?;
    let desc = RingDescription::from_json(&text)?;
    parse_and_validate(&desc)
}

fn component_or(cli: &Cli, default: i64) -> i64 {
    cli.component.unwrap_or(default)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match cli.command {
        Cmd::Validate => cmd_validate(cli),
        Cmd::Model => cmd_model(cli),
        Cmd::Selfclose => cmd_selfclose(cli),
        Cmd::Verify => cmd_verify(cli),
        Cmd::Ranks => cmd_ranks(cli),
    }
}

fn cmd_validate(cli: &Cli) -> Result<ExitCode> {
    let pd = load(cli)?;
    let name = &pd.ring.name;
    let dim = pd.dimension();
    match cli.format {
        Format::Text => println!(
            "ok: {name} is a Poincaré duality ring of formal dimension {dim} (n = {})",
            pd.n
        ),
        Format::Json => println!(
            "{}",
            json!({ "valid": true, "name": name, "dimension": dim, "n": pd.n })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_model(cli: &Cli) -> Result<ExitCode> {
    let pd = load(cli)?;
    let name = &pd.ring.name;
    let (model, title, eta) = if cli.minimal {
        match component_or(cli, 0) {
            0 => {
                let m0 = minimal_k0(&pd)?;
                (m0.model, format!("{name}: minimal model, component 0"), None)
            }
            1 => {
                let m1 = minimal_k1(&pd)?;
                let eta = m1.model.format_poly(&m1.eta);
                (m1.model, format!("{name}: minimal model, component 1"), Some(eta))
            }
            k => {
                return Err(Error::Unsupported(format!(
                    "minimal models are built for components 0 and 1 only, got {k}"
                )))
            }
        }
    } else {
        let full = full_model(&pd)?;
        match cli.component {
            None => (full.algebra, format!("{name}: full mapping-space model"), None),
            Some(k) => {
                let comp = component_model(&full, &pd, k)?;
                (comp.algebra, format!("{name}: component {k} model"), None)
            }
        }
    };
    let d_squared_zero = model.check_d_squared().is_ok();
    let export = export_model(&model, &title);
    match cli.format {
        Format::Text => {
            println!("{title}");
            println!("d² = 0: {d_squared_zero}");
            if let Some(eta) = &eta {
                println!("η = {eta}");
            }
            println!("generators:");
            for g in model.generators() {
                println!("  {} (degree {})", g.label, g.degree);
            }
            println!("differentials:");
            for g in model.generators() {
                println!(
                    "  d({}) = {}",
                    g.label,
                    model.format_poly(model.differential_of(g.id))
                );
            }
        }
        Format::Json => {
            let mut value =
                serde_json::to_value(&export).map_err(|e| Error::Internal(e.to_string()))?;
            value["d_squared_zero"] = json!(d_squared_zero);
            if let Some(eta) = &eta {
                value["eta"] = json!(eta);
            }
            println!("{value}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selfclose(cli: &Cli) -> Result<ExitCode> {
    let pd = load(cli)?;
    let k = component_or(cli, 0);
    let report = self_closeness(&pd, k)?;
    match cli.format {
        Format::Text => {
            println!("ring: {}", pd.ring.name);
            println!("component: {}", report.component);
            println!("self-closeness: {}", report.ne);
            println!("primitive: {}", report.primitive);
            println!("d(X): {}", report.d_of_x);
            println!(
                "witness first singular degree: {}",
                report
                    .witness
                    .first_singular_degree
                    .map_or("none".to_string(), |d| d.to_string())
            );
            println!("lower bound: {}", report.lower_bound);
            println!("upper bound: {}", report.upper_bound);
            println!("witness map:");
            for (label, image) in &report.witness_images {
                println!("  {label} ↦ {image}");
            }
        }
        Format::Json => {
            let export = export_report(&report, &pd.ring.name);
            let text =
                serde_json::to_string(&export).map_err(|e| Error::Internal(e.to_string()))?;
            println!("{text}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli) -> Result<ExitCode> {
    let pd = load(cli)?;
    let results = run_identity_suite(&pd)?;
    let passed = all_passed(&results);
    match cli.format {
        Format::Text => {
            for r in &results {
                if r.passed {
                    println!("PASS {}", r.name);
                } else {
                    println!("FAIL {}: {}", r.name, r.detail);
                }
            }
            let failures = results.iter().filter(|r| !r.passed).count();
            println!("{} checks, {} failures", results.len(), failures);
        }
        Format::Json => {
            println!(
                "{}",
                json!({ "name": pd.ring.name, "all_passed": passed, "checks": results })
            );
        }
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_ranks(cli: &Cli) -> Result<ExitCode> {
    let pd = load(cli)?;
    let k = component_or(cli, 0);
    let model = match k {
        0 => minimal_k0(&pd)?.model,
        1 => minimal_k1(&pd)?.model,
        _ => {
            return Err(Error::Unsupported(format!(
                "rank tables are built for components 0 and 1 only, got {k}"
            )))
        }
    };
    let ranks = homotopy_ranks(&model)?;
    match cli.format {
        Format::Text => {
            println!("ring: {}, component: {k}", pd.ring.name);
            for (degree, rank) in &ranks {
                println!("  degree {degree}: rank {rank}");
            }
        }
        Format::Json => {
            println!(
                "{}",
                json!({ "name": pd.ring.name, "component": k, "ranks": ranks })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
