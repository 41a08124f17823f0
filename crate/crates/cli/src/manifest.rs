//! Data files and the run manifest written next to them.

use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::config::{Format, ScanKind, Settings};
use crate::output::{rows_to_json, write_csv};
use crate::scan::ScanOutput;

/// `<version>-<git describe>` when built from a checkout.
pub const VERSION: &str = env!("XXZ_NESS_VERSION");

/// Deterministic description of a run: everything needed to repeat it.
pub fn spec_echo(kind: ScanKind, settings: &Settings, out: &ScanOutput) -> Json {
    let mut resolved = serde_json::to_value(settings).unwrap_or(Json::Null);
    if let Json::Object(m) = &mut resolved {
        m.retain(|_, v| !v.is_null());
        // where the file lands and how many threads ran do not change it
        m.remove("out");
        m.remove("threads");
    }
    json!({
        "tool": "xxz-ness",
        "version": VERSION,
        "scan": kind.name(),
        "settings": resolved,
        "notes": out.notes,
    })
}

/// Serialized data file.
pub fn render(kind: ScanKind, settings: &Settings, out: &ScanOutput) -> Vec<u8> {
    match settings.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&out.rows, &mut buf).expect("writing to memory");
            buf
        }
        Format::Json => {
            let doc = json!({
                "manifest": spec_echo(kind, settings, out),
                "rows": rows_to_json(&out.rows),
            });
            let mut buf = serde_json::to_vec_pretty(&doc).expect("serializing json");
            buf.push(b'\n');
            buf
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn manifest_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

pub fn manifest(kind: ScanKind, settings: &Settings, out: &ScanOutput, data: &[u8], path: &Path, wall: Duration) -> Json {
    json!({
        "spec": spec_echo(kind, settings, out),
        "output": path.display().to_string(),
        "rows": out.rows.len(),
        "failures": out.failures(),
        "sha256": sha256_hex(data),
        "wall_time_s": wall.as_secs_f64(),
    })
}

/// Writes the data file and its manifest; returns the digest.
pub fn write_all(kind: ScanKind, settings: &Settings, out: &ScanOutput, path: &Path, wall: Duration) -> std::io::Result<String> {
    let data = render(kind, settings, out);
    std::fs::write(path, &data)?;
    let m = manifest(kind, settings, out, &data, path, wall);
    let mut text = serde_json::to_vec_pretty(&m).map_err(std::io::Error::other)?;
    text.push(b'\n');
    std::fs::write(manifest_path(path), text)?;
    Ok(sha256_hex(&data))
}
