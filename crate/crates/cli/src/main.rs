mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;
use serde_json::json;

use args::{Cli, OutputArgs};
use commands::{Output, Table};

/// Version of the JSON record layout.
const SCHEMA_VERSION: u32 = 1;

fn exit_code(err: &anyhow::Error) -> u8 {
    use blockforge::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded(_)) => 3,
        Some(Error::InvariantViolation(_)) => 4,
        _ => 2,
    }
}

fn write_csv(path: &std::path::Path, table: &Table) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn emit(cli: &Cli, out: &Output, elapsed_ms: f64) -> anyhow::Result<()> {
    let OutputArgs { out: path, csv, timing, .. } = &cli.output;
    let (name, params) = match serde_json::to_value(&cli.command)? {
        serde_json::Value::Object(m) => m.into_iter().next().expect("one variant"),
        v => (v.as_str().unwrap_or_default().to_string(), json!({})),
    };
    let mut record = json!({
        "schema_version": SCHEMA_VERSION,
        "artifact_version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "params": params,
        "result": out.result,
    });
    if *timing {
        record["wall_time_ms"] = json!(elapsed_ms);
    }
    let mut text = serde_json::to_string_pretty(&record)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    if let Some(p) = csv {
        write_csv(p, &out.table)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match cli.output.threads {
        Some(0) => Err(blockforge::Error::InvalidInput("--threads must be positive".into()).into()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("starting worker threads")
            .and_then(|pool| pool.install(|| commands::run(&cli.command))),
        None => commands::run(&cli.command),
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Err(e) = emit(&cli, &out, elapsed_ms) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(out.status.unwrap_or(0))
}
