use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use haar_young::catalog::{catalog_consistency_check, Catalog, ConsistencyReport, LieGroupDescriptor};
use haar_young::report::{exact_report, render, SavedReport, Tabular};
use haar_young::verify::{run_battery, VerifyOptions};
use haar_young::{estimate, Error, EstimatorConfig, Format, GroupModel, YoungExponents};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "haar-young", version, about = "Sharp Young convolution constants on locally compact groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// json, csv or text.
    #[arg(long, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExponentArgs {
    /// Rational such as `4/3`, or `inf`.
    #[arg(long)]
    p1: String,
    #[arg(long)]
    p2: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Corruption {
    Delta,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form constants and catalog bounds.
    Exact {
        #[command(flatten)]
        exponents: ExponentArgs,
        /// Catalog name, or a model selector with a catalog counterpart.
        #[arg(long, default_value = "R")]
        group: String,
        #[command(flatten)]
        out: Output,
    },
    /// Numerical lower bound on a discretized group.
    Estimate {
        #[command(flatten)]
        exponents: ExponentArgs,
        /// Model selector (`Zmod:8`, `AffF:5`, `Rline:h=0.05,L=8`,
        /// `R2:h=0.25,L=3`, `Affine:ht=0.25,hb=0.25,T=1.5,B=2`, `Table:file.json`)
        /// or one of the catalog names `R`, `R2`, `Aff+`.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Property battery; exits 5 on the first failing check.
    Verify {
        /// Only the proof-chain trials.
        #[arg(long)]
        proof_chain: bool,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// Negative control.
        #[arg(long)]
        corrupt: Option<Corruption>,
        /// Skip the subgroup audit (the slowest item).
        #[arg(long)]
        no_audit: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Catalog entries and consistency checks.
    Catalog {
        /// Catalog JSON to check instead of the shipped one.
        #[arg(long)]
        file: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Re-render a saved JSON report.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

enum Failure {
    Lib(Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidExponent(_) | Error::Inadmissible(_) => 2,
        Error::UnknownGroup(_) => 3,
        Error::InvalidModel(_) | Error::InvalidTable(_) | Error::NotSubgroup(_) => 4,
        _ => 1,
    }
}

fn emit(text: &str, out: &Output) -> std::io::Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Default discretizations for catalog names.
fn model_for(group: &str) -> Result<GroupModel, Error> {
    let sel = match group {
        "R" => "Rline:h=0.1,L=6",
        "R2" => "R2:h=0.25,L=3",
        "Aff+" => "Affine:ht=0.25,hb=0.25,T=1.5,B=2",
        s if s.contains(':') => s,
        s => {
            Catalog::shipped().get(s)?;
            return Err(Error::InvalidModel(format!("no discretized model for catalog entry `{s}`")));
        }
    };
    GroupModel::from_selector(sel)
}

fn catalog_name(group: &str) -> Result<String, Error> {
    if !group.contains(':') {
        return Ok(group.to_string());
    }
    let m = GroupModel::from_selector(group)?;
    m.catalog_name().map(str::to_string).ok_or_else(|| Error::UnknownGroup(group.to_string()))
}

#[derive(Serialize)]
struct CatalogView {
    entries: Vec<LieGroupDescriptor>,
    consistency: ConsistencyReport,
}

impl Tabular for CatalogView {
    fn header(&self) -> Vec<&'static str> {
        vec!["name", "dim", "r", "in_class_A", "compact", "solvable", "nilpotent", "simply_connected", "unimodular", "links"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|d| {
                let f = &d.flags;
                let links: Vec<String> = d.links.iter().map(|l| format!("{}|{}", l.normal_subgroup, l.quotient)).collect();
                vec![
                    d.name.clone(),
                    d.dim.to_string(),
                    d.r.to_string(),
                    f.in_class_a.to_string(),
                    f.compact.to_string(),
                    f.solvable.to_string(),
                    f.nilpotent.to_string(),
                    f.simply_connected.to_string(),
                    f.unimodular.to_string(),
                    links.join(";"),
                ]
            })
            .collect()
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Exact { exponents, group, out } => {
            let ex = YoungExponents::parse(&exponents.p1, &exponents.p2)?;
            let name = catalog_name(&group)?;
            let r = exact_report(&Catalog::shipped(), &name, &ex)?;
            emit(&render(&r, out.format)?, &out)?;
        }
        Command::Estimate { exponents, group, restarts, iters, tol, seed, out } => {
            let ex = YoungExponents::parse(&exponents.p1, &exponents.p2)?;
            if ex.is_boundary() {
                return Err(Error::Inadmissible(format!("{ex} is a boundary triple with constant 1; use `exact`")).into());
            }
            let model = model_for(&group)?.into_arc();
            let cfg = EstimatorConfig { restarts, max_iters: iters, tol, seed };
            let rep = estimate(&model, &ex, &cfg)?;
            if !rep.converged {
                eprintln!("warning: best restart stopped at the iteration cap without converging");
            }
            emit(&render(&rep, out.format)?, &out)?;
            let summary = format!(
                "{} {}: lower bound {} (best upper reference {})",
                rep.group,
                ex,
                rep.lower_bound,
                rep.best_upper_bound()
            );
            if out.output.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
        }
        Command::Verify { proof_chain, seeds, corrupt, no_audit, out } => {
            let opts = VerifyOptions {
                seeds,
                corrupt_delta: matches!(corrupt, Some(Corruption::Delta)),
                proof_chain_only: proof_chain,
                audit: !no_audit,
                ..Default::default()
            };
            let rep = run_battery(&opts)?;
            emit(&render(&rep, out.format)?, &out)?;
            if let Some(name) = rep.first_failure() {
                return Err(Failure::Verify(name));
            }
        }
        Command::Catalog { file, out } => {
            let cat = match file {
                Some(path) => Catalog::load(path)?,
                None => Catalog::shipped(),
            };
            let consistency = catalog_consistency_check(&cat);
            let view = CatalogView { entries: cat.entries, consistency };
            emit(&render(&view, out.format)?, &out)?;
            if let Some(v) = view.consistency.violations.first() {
                return Err(Failure::Verify(format!("catalog:{} [{}] {}", v.check, v.group, v.detail)));
            }
        }
        Command::Report { input, out } => {
            let saved = SavedReport::from_json(&std::fs::read_to_string(input)?)?;
            emit(&saved.render(out.format)?, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Verify(name)) => {
            eprintln!("verify failed: {name}");
            ExitCode::from(5)
        }
    }
}
