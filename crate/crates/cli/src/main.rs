//! `qrtmodal`: validate QRT files, translate them into Kripke models, check
//! formulas, and run the theorem harness.
//!
//! Exit codes: 0 pass, 1 falsified or invalid, 2 input error, 3 inconclusive.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qrtmodal_core::corpus;
use qrtmodal_core::format::{record_to_json, FormatError, ModelFile, QrtFile, RecordFile};
use qrtmodal_core::generate::{generate_family, GenerateError, GeneratorConfig};
use qrtmodal_core::harness::{run_theorems, HarnessOptions, Injected, TheoremsReport};
use qrtmodal_core::kripke::KripkeModel;
use qrtmodal_core::linalg::LinalgError;
use qrtmodal_core::logic::{evaluate, is_valid, parse, DomainWarning};
use qrtmodal_core::qrt::{complete_composition, validate_qrt, Qrt, ValidationReport};
use qrtmodal_core::translate::{functor_f, functor_f_star};
use qrtmodal_core::Tolerances;

const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

/// Family used by `theorems` when no files or config are given.
const DEFAULT_FAMILY_SIZE: usize = 20;
const DEFAULT_FAMILY_STATES: usize = 8;

#[derive(Parser)]
#[command(name = "qrtmodal", version, about = "Finite quantum resource theories as S4 Kripke models")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Sets every numerical tolerance, including the state-matching radius.
    #[arg(long, global = true, value_name = "FLOAT")]
    tolerance: Option<f64>,
    /// Node cap for isomorphism searches.
    #[arg(long, global = true, value_name = "INT")]
    cap: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a QRT file against every QRT invariant.
    Validate {
        file: PathBuf,
        /// Close the channel set under composition before validating.
        #[arg(long)]
        complete: bool,
    },
    /// Translate a QRT into its Kripke model with the name maps.
    Translate {
        file: PathBuf,
        /// Attach the convertibility preorder as the `order` field.
        #[arg(long)]
        star: bool,
        #[arg(long)]
        complete: bool,
        /// Write the record here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a formula on a model file or translation record.
    Check {
        model: PathBuf,
        formula: String,
        /// Evaluate at one world instead of checking validity.
        #[arg(long)]
        world: Option<String>,
    },
    /// Run every theorem check over a family of QRTs.
    Theorems {
        /// QRT files forming the family; a generated family is used when empty.
        files: Vec<PathBuf>,
        /// Generator config (JSON) for the family.
        #[arg(long, conflicts_with = "files")]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// Extra Kripke model checked against the F-image conditions (repeatable).
        #[arg(long = "model", value_name = "FILE")]
        models: Vec<PathBuf>,
        /// Extra translation record checked against the free-to-free schema (repeatable).
        #[arg(long = "record", value_name = "FILE")]
        records: Vec<PathBuf>,
        /// Skip the shipped xi pairs in the injectivity check.
        #[arg(long)]
        no_xi: bool,
        #[arg(long)]
        complete: bool,
    },
    /// Generate a seeded family of valid QRTs.
    Generate {
        /// Generator config (JSON); omitted fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// Write one file per QRT into this directory instead of a JSON array on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the shipped example corpus.
    Corpus {
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

/// `Err` is an input error; every other outcome is an exit code.
fn run(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    let mut tol = Tolerances::default().with_env_overrides();
    if let Some(eps) = g.tolerance {
        if !(eps.is_finite() && eps > 0.0) {
            bail!("--tolerance must be a positive number");
        }
        tol = tol.with_uniform_eps(eps);
    }
    if let Some(cap) = g.cap {
        tol.max_iso_nodes = cap;
    }
    match cli.command {
        Command::Validate { file, complete } => validate(&file, tol, complete, g.json),
        Command::Translate { file, star, complete, out } => translate(&file, tol, star, complete, out.as_deref()),
        Command::Check { model, formula, world } => check(&model, &formula, world.as_deref(), g.json),
        Command::Theorems { files, config, seed, count, models, records, no_xi, complete } => {
            let family = if files.is_empty() {
                let config = generator_config(config.as_deref(), seed, count, true)?;
                match generate_family(&config, tol) {
                    Ok(f) => f.into_iter().enumerate().map(|(i, q)| (format!("q{i}"), q)).collect(),
                    Err(e) => return generation_failed(e),
                }
            } else {
                let mut family = Vec::new();
                for f in &files {
                    match load_valid(f, tol, complete, g.json)? {
                        Ok(q) => family.push((stem(f), q)),
                        Err(code) => return Ok(code),
                    }
                }
                family
            };
            let mut injected = Injected::default();
            for m in &models {
                injected.models.push((stem(m), read_model(m)?));
            }
            for r in &records {
                let file: RecordFile = serde_json::from_str(&read(r)?).with_context(|| format!("{}", r.display()))?;
                injected.records.push((stem(r), file.to_record().with_context(|| format!("{}", r.display()))?));
            }
            if !no_xi {
                injected.pairs.push(("xi_pair".into(), corpus::xi_pair_x(), corpus::xi_pair_y()));
                injected.pairs.extend(corpus::xi_sweep());
            }
            let options = HarnessOptions { seed: seed.unwrap_or(1), ..Default::default() };
            let report = run_theorems(&family, &injected, &options)?;
            print_theorems(&report, g.json)?;
            Ok(report.exit_code() as u8)
        }
        Command::Generate { config, seed, count, out } => {
            let config = generator_config(config.as_deref(), seed, count, false)?;
            let family = match generate_family(&config, tol) {
                Ok(f) => f,
                Err(e) => return generation_failed(e),
            };
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    for (i, q) in family.iter().enumerate() {
                        write(&dir.join(format!("q{i}.qrt.json")), &qrt_json(q)?)?;
                    }
                    eprintln!("wrote {} QRTs to {}", family.len(), dir.display());
                }
                None => {
                    let files: Vec<QrtFile> = family.iter().map(QrtFile::from_qrt).collect();
                    println!("{}", serde_json::to_string_pretty(&files)?);
                }
            }
            Ok(0)
        }
        Command::Corpus { out } => {
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            for (name, text) in corpus::corpus_files() {
                write(&out.join(&name), &text)?;
                println!("{}", out.join(&name).display());
            }
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn stem(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    name.split('.').next().unwrap_or(&name).to_owned()
}

fn qrt_json(q: &Qrt) -> Result<String> {
    Ok(serde_json::to_string_pretty(&QrtFile::from_qrt(q))? + "\n")
}

fn generation_failed(e: GenerateError) -> Result<u8> {
    match e {
        GenerateError::Config(_) => Err(e.into()),
        e => {
            eprintln!("generation failed: {e}");
            Ok(EXIT_FAILED)
        }
    }
}

fn generator_config(path: Option<&Path>, seed: Option<u64>, count: Option<usize>, theorem_default: bool) -> Result<GeneratorConfig> {
    let mut config = match path {
        Some(p) => serde_json::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display()))?,
        None if theorem_default => GeneratorConfig {
            count: DEFAULT_FAMILY_SIZE,
            max_total_states: Some(DEFAULT_FAMILY_STATES),
            ..Default::default()
        },
        None => GeneratorConfig::default(),
    };
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(c) = count {
        config.count = c;
    }
    config.validate()?;
    Ok(config)
}

#[derive(Serialize)]
struct ValidationOutput<'a> {
    file: String,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a ValidationReport>,
}

/// Loads and validates a QRT. The inner `Err` is the exit code of an
/// invalid theory, already reported.
fn load_valid(path: &Path, tol: Tolerances, complete: bool, json: bool) -> Result<Result<Qrt, u8>> {
    let file: QrtFile = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let q = match file.to_qrt(tol) {
        Ok(q) => q,
        Err(FormatError::Linalg { context, source: LinalgError::NotDensity(v) }) => {
            let error = format!("{context}: not a density matrix: {v}");
            emit_validation(path, false, Some(error), None, json)?;
            return Ok(Err(EXIT_FAILED));
        }
        Err(e) => return Err(anyhow::Error::new(e).context(format!("{}", path.display()))),
    };
    let q = if complete {
        match complete_composition(&q) {
            Ok(c) => c,
            Err(e) => {
                emit_validation(path, false, Some(format!("completion failed: {e}")), None, json)?;
                return Ok(Err(EXIT_FAILED));
            }
        }
    } else {
        q
    };
    let report = validate_qrt(&q);
    if report.is_valid() {
        Ok(Ok(q))
    } else {
        emit_validation(path, false, None, Some(&report), json)?;
        Ok(Err(EXIT_FAILED))
    }
}

fn emit_validation(path: &Path, valid: bool, error: Option<String>, report: Option<&ValidationReport>, json: bool) -> Result<()> {
    if json {
        let out = ValidationOutput { file: path.display().to_string(), valid, error, report };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else if valid {
        println!("{}: valid", path.display());
    } else {
        println!("{}: INVALID", path.display());
        if let Some(e) = error {
            println!("  {e}");
        }
        if let Some(r) = report {
            for line in r.to_string().lines() {
                println!("  {line}");
            }
            if r.is_completable() {
                println!("  (only composition closure is missing; rerun with --complete)");
            }
        }
    }
    Ok(())
}

fn validate(path: &Path, tol: Tolerances, complete: bool, json: bool) -> Result<u8> {
    match load_valid(path, tol, complete, json)? {
        Ok(q) => {
            if json {
                let out = ValidationOutput { file: path.display().to_string(), valid: true, error: None, report: Some(&ValidationReport::default()) };
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!(
                    "{}: valid ({} systems, {} named states, {} channels)",
                    path.display(),
                    q.systems().len(),
                    q.n_states(),
                    q.channels().len()
                );
            }
            Ok(0)
        }
        Err(code) => Ok(code),
    }
}

fn translate(path: &Path, tol: Tolerances, star: bool, complete: bool, out: Option<&Path>) -> Result<u8> {
    let q = match load_valid(path, tol, complete, false)? {
        Ok(q) => q,
        Err(code) => return Ok(code),
    };
    let rec = if star { functor_f_star(&q)? } else { functor_f(&q)? };
    let text = record_to_json(&rec);
    match out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

/// Accepts a bare model file or a translation record.
fn read_model(path: &Path) -> Result<KripkeModel> {
    let value: serde_json::Value = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let file: ModelFile = if value.get("model").is_some() {
        serde_json::from_value::<RecordFile>(value)?.model
    } else {
        serde_json::from_value(value)?
    };
    file.to_model().with_context(|| format!("{}", path.display()))
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    world: Option<&'a str>,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_world: Option<String>,
    warnings: Vec<DomainWarning>,
}

fn check(path: &Path, formula: &str, world: Option<&str>, json: bool) -> Result<u8> {
    let m = read_model(path)?;
    let f = parse(formula).with_context(|| format!("formula {formula:?}"))?;
    let out = match world {
        Some(w) => {
            let e = evaluate(&m, &f, w)?;
            CheckOutput { formula: f.to_string(), world: Some(w), valid: e.value, failing_world: None, warnings: e.warnings }
        }
        None => {
            let v = is_valid(&m, &f)?;
            CheckOutput { formula: f.to_string(), world: None, valid: v.valid, failing_world: v.failing_world, warnings: v.warnings }
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        match (world, &out.failing_world) {
            (Some(w), _) => println!("{} at {w}: {}", out.formula, if out.valid { "true" } else { "false" }),
            (None, Some(w)) => println!("invalid: {} fails at world {w}", out.formula),
            (None, None) => println!("valid: {}", out.formula),
        }
        for w in &out.warnings {
            eprintln!("warning: atom {} read outside the domain of {}", w.atom, w.world);
        }
    }
    Ok(if out.valid { 0 } else { EXIT_FAILED })
}

fn print_theorems(report: &TheoremsReport, json: bool) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(report)?);
        return Ok(());
    }
    println!("family of {} QRTs", report.family.len());
    println!("{:<24} {:<13} {:>8} {:>9} {:>13}", "check", "status", "checked", "failures", "inconclusive");
    for s in &report.sections {
        let status = serde_json::to_value(s.status)?;
        println!(
            "{:<24} {:<13} {:>8} {:>9} {:>13}",
            s.name,
            status.as_str().unwrap_or_default(),
            s.checked,
            s.failures.len(),
            s.inconclusive
        );
        for f in s.failures.iter().take(5) {
            println!("    {f}");
        }
        if s.failures.len() > 5 {
            println!("    ... {} more", s.failures.len() - 5);
        }
    }
    if !report.resource_destroying.is_empty() {
        println!("resource-destroying members: {}", report.resource_destroying.join(", "));
    }
    let status = serde_json::to_value(report.status())?;
    println!("overall: {}", status.as_str().unwrap_or_default());
    Ok(())
}
