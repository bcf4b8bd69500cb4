//! Report plumbing: schema-versioned JSON and fixed-column CSV, written to
//! stdout or a file, byte-identical for identical (config, seed).

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

pub fn code_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// The envelope every report is wrapped in.
#[derive(Serialize)]
pub struct Report<C: Serialize, R: Serialize> {
    pub schema: u32,
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config: C,
    pub results: R,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(command: &'static str, seed: u64, config: C, results: R) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command,
            version: code_version(),
            seed,
            config,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Emits a rendered report to `--out` or stdout.
pub fn emit(out: &Option<PathBuf>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, body)?;
            eprintln!("report written to {}", path.display());
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

/// One CSV document: a fixed header row plus data rows, RFC-style quoting
/// for fields containing commas or quotes.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let quoted: Vec<String> = row.iter().map(|f| quote(f)).collect();
        out.push_str(&quoted.join(","));
        out.push('\n');
    }
    out
}

fn quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Formats an optional float for CSV.
pub fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// FNV-1a over bytes; stable digest for transcript accounting.
pub fn fnv1a(bytes: &[u8], state: u64) -> u64 {
    let mut hash = state;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

pub const FNV_SEED: u64 = 0xcbf29ce484222325;
