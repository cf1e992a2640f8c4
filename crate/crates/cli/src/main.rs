mod args;
mod report;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Parser;
use sha2::{Digest, Sha256};
use synth_audit::{evaluate_all, load_dataset, MetricConfig, MetricId, Role};

use args::{Cli, Command, EvaluateArgs, ListFormat};
use report::{Inputs, Report, ResultEntry, RunConfig};

const INPUT_ERROR: u8 = 2;
const METRIC_ERROR: u8 = 3;

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `real_index,synthetic_index` rows; every real row must appear exactly once.
fn parse_generation_map(bytes: &[u8], real_rows: usize) -> Result<Vec<usize>> {
    let mut reader = csv::Reader::from_reader(bytes);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["real_index", "synthetic_index"] {
        bail!("generation map header must be `real_index,synthetic_index`");
    }
    let mut map: Vec<Option<usize>> = vec![None; real_rows];
    for (line, row) in reader.records().enumerate() {
        let row = row?;
        let parse = |i: usize| -> Result<usize> {
            row[i]
                .trim()
                .parse()
                .with_context(|| format!("generation map row {}: `{}` is not an index", line + 1, &row[i]))
        };
        let (r, s) = (parse(0)?, parse(1)?);
        let slot = map
            .get_mut(r)
            .with_context(|| format!("generation map row {}: real index {r} out of range", line + 1))?;
        if slot.replace(s).is_some() {
            bail!("generation map lists real index {r} twice");
        }
    }
    map.into_iter()
        .enumerate()
        .map(|(i, s)| s.with_context(|| format!("generation map has no entry for real index {i}")))
        .collect()
}

fn metric_config(a: &EvaluateArgs) -> Result<MetricConfig> {
    let mut c = match &a.config {
        Some(p) => serde_json::from_slice(&read(p)?)
            .with_context(|| format!("invalid configuration file {}", p.display()))?,
        None => MetricConfig::default(),
    };
    if !a.keys.is_empty() {
        c.key_attributes = a.keys.iter().map(|k| k.trim().to_string()).collect();
    }
    if let Some(s) = &a.sensitive {
        c.sensitive_attribute = Some(s.clone());
    }
    macro_rules! set {
        ($field:ident, $value:expr) => {
            if let Some(v) = $value {
                c.$field = v.into();
            }
        };
    }
    set!(seed, a.seed);
    set!(cvp_threshold, a.cvp_threshold);
    set!(dvp_threshold, a.dvp_threshold);
    set!(air_relative_band, a.air_band);
    set!(air_f1_mode, a.air_f1);
    set!(hitr_divisor, a.hitr_divisor);
    set!(minkowski_p, a.minkowski_p);
    set!(projection_scaling, a.projection_scaling);
    set!(id_weighting, a.id_weighting);
    set!(kfold_k, a.kfold_k);
    set!(mir_test_fraction, a.mir_test_fraction);
    set!(epsilon, a.epsilon);
    if a.projection_k.is_some() {
        c.projection_k = a.projection_k;
    }
    c.validate()?;
    Ok(c)
}

/// Loads inputs and builds the report. Errors here are input errors.
fn prepare(a: &EvaluateArgs) -> Result<(RunConfig, synth_audit::Dataset, synth_audit::Dataset, Inputs)> {
    let real_bytes = read(&a.real)?;
    let synth_bytes = read(&a.synth)?;
    let schema_bytes = read(&a.schema)?;
    let y = load_dataset(&real_bytes[..], &schema_bytes[..], Role::Real)
        .with_context(|| format!("loading {}", a.real.display()))?;
    let z = load_dataset(&synth_bytes[..], &schema_bytes[..], Role::Synthetic)
        .with_context(|| format!("loading {}", a.synth.display()))?;
    let mut metrics = metric_config(a)?;
    let map_bytes = a.gen_map.as_deref().map(read).transpose()?;
    if let Some(bytes) = &map_bytes {
        metrics.generation_map = Some(parse_generation_map(bytes, y.len())?);
    }
    let selection = a
        .select
        .iter()
        .map(|s| s.parse::<MetricId>())
        .collect::<Result<Vec<_>, _>>()?;
    let inputs = Inputs {
        real_sha256: sha256(&real_bytes),
        synth_sha256: sha256(&synth_bytes),
        schema_sha256: sha256(&schema_bytes),
        generation_map_sha256: map_bytes.as_deref().map(sha256),
        real_rows: y.len(),
        synth_rows: z.len(),
    };
    let run = RunConfig {
        real: a.real.clone(),
        synth: a.synth.clone(),
        schema: a.schema.clone(),
        generation_map: a.gen_map.clone(),
        metrics,
        selection,
        format: a.format,
    };
    Ok((run, y, z, inputs))
}

fn evaluate(a: &EvaluateArgs) -> Result<u8> {
    let start = Instant::now();
    let (run, y, z, inputs) = match prepare(a) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return Ok(INPUT_ERROR);
        }
    };
    let results: Vec<ResultEntry> = evaluate_all(&y, &z, &run.metrics, &run.selection)
        .into_iter()
        .map(ResultEntry::from)
        .collect();
    let report = Report {
        tool: "synth-audit",
        version: env!("CARGO_PKG_VERSION"),
        inputs,
        config: run,
        results,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let text = report.render(a.format);
    match &a.out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
        None => print!("{text}"),
    }
    for r in &report.results {
        if let Some(e) = &r.error {
            eprintln!("metric {} failed: {e}", r.id);
        }
    }
    Ok(if report.has_errors() { METRIC_ERROR } else { 0 })
}

fn list_metrics(format: ListFormat) {
    match format {
        ListFormat::Json => {
            let rows: Vec<serde_json::Value> = MetricId::ALL
                .iter()
                .map(|id| {
                    serde_json::json!({
                        "id": id,
                        "description": id.description(),
                        "direction": id.direction(),
                        "required_config": id.required_config(),
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("serializable"));
        }
        ListFormat::Text => {
            println!("{:<16} {:<22} {:<30} description", "id", "direction", "requires");
            for id in MetricId::ALL {
                println!(
                    "{:<16} {:<22} {:<30} {}",
                    id.as_str(),
                    id.direction().to_string(),
                    id.required_config(),
                    id.description()
                );
            }
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SYNTH_AUDIT_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("SYNTH_AUDIT_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(INPUT_ERROR);
    }
    let code = match cli.command {
        Command::Evaluate(a) => match evaluate(&a) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e:#}");
                INPUT_ERROR
            }
        },
        Command::ListMetrics { format } => {
            list_metrics(format);
            0
        }
        Command::Oracle { trials, max_n, seed } => {
            let report = synth_audit_oracle::run(trials as usize, max_n as usize, seed);
            println!("{report}");
            if report.passed() {
                0
            } else {
                1
            }
        }
    };
    ExitCode::from(code)
}
