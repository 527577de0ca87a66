//! Writing results and their run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use nearfield_core::format::round_sig12;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

/// Rounds every number in `v` to 12 significant digits.
pub fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !(n.is_i64() || n.is_u64()) => {
                serde_json::Number::from_f64(round_sig12(x)).map_or(Value::Null, Value::Number)
            }
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(round_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_numbers(v))).collect()),
        other => other,
    }
}

pub fn to_json_text<T: Serialize>(value: &T) -> CliResult<String> {
    let v = round_numbers(serde_json::to_value(value)?);
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
struct OutputDigest {
    path: String,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    argv: Vec<String>,
    config: Value,
    seed: Option<u64>,
    rng: Option<&'a str>,
    started_utc: String,
    finished_utc: String,
    outputs: Vec<OutputDigest>,
}

/// What a command produced and how it was configured.
pub struct Emission {
    pub command: &'static str,
    pub body: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn timestamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Writes `body` to `out` plus a manifest next to it, or to stdout.
pub fn emit(e: &Emission, out: Option<&Path>, started: DateTime<Utc>) -> CliResult<()> {
    let Some(out) = out else {
        std::io::stdout().lock().write_all(e.body.as_bytes())?;
        return Ok(());
    };
    fs::write(out, &e.body)?;
    let digest = Sha256::digest(e.body.as_bytes());
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: e.command,
        argv: std::env::args().collect(),
        config: round_numbers(e.config.clone()),
        seed: e.seed,
        rng: e.rng,
        started_utc: timestamp(started),
        finished_utc: timestamp(Utc::now()),
        outputs: vec![OutputDigest {
            path: out.display().to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            bytes: e.body.len(),
        }],
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(manifest_path(out), text)?;
    Ok(())
}
