//! Run plumbing: canonical JSON artifacts, atomic writes, input digests,
//! per-call seed streams, and the append-only experiment log.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use color_energy::coloring::ColoringFile;
use color_energy::{ColoredCompleteGraph, PrunePlan};

/// Derives an independent 64-bit seed from the root seed, one stream per
/// module call, so a run replays piecewise under the same `--seed`.
pub fn stream_seed(root: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update(b":");
    h.update(label.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 8 bytes"))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// serde_json maps are ordered, so round-tripping through `Value` puts
/// every object in canonical key order.
pub fn canonical<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).context("serializing result")
}

/// Counts too large for a JSON number degrade to decimal strings.
pub fn big(x: u128) -> Value {
    u64::try_from(x)
        .map(Value::from)
        .unwrap_or_else(|_| Value::from(x.to_string()))
}

/// A finished run's payload, rendered per `--format`.
pub enum Artifact {
    Json(Value),
    Csv(String),
}

impl Artifact {
    pub fn bytes(&self) -> Vec<u8> {
        match self {
            Artifact::Json(v) => {
                let mut s =
                    serde_json::to_string_pretty(v).expect("Value serializes infallibly");
                s.push('\n');
                s.into_bytes()
            }
            Artifact::Csv(s) => s.clone().into_bytes(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Writes through a sibling temp file and a rename, so readers never see a
/// half-written artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// One log line per successful run. Replaying (command, params, seed) on
/// the same input digest reproduces `output_digest` exactly.
#[derive(Debug, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub version: String,
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub started_ms: u64,
    pub finished_ms: u64,
    pub input_digest: Option<String>,
    pub output_digest: String,
    pub output_path: Option<String>,
    pub status: String,
}

pub fn append_record(log: &Path, record: &ExperimentRecord) -> Result<()> {
    let mut line = serde_json::to_string(&canonical(record)?)?;
    line.push('\n');
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(log)
        .with_context(|| format!("opening log {}", log.display()))?;
    f.write_all(line.as_bytes())
        .with_context(|| format!("appending to log {}", log.display()))
}

/// On-disk host: the coloring plus, for planted instances, the partition
/// plan that places the plant inside the pruned graph. Consumers that only
/// want the coloring can ignore the plan.
#[derive(Debug, Serialize, Deserialize)]
pub struct HostFile {
    #[serde(flatten)]
    pub coloring: ColoringFile,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub plan: Option<PrunePlan>,
}

pub struct LoadedHost {
    pub graph: ColoredCompleteGraph,
    pub plan: Option<PrunePlan>,
    pub digest: String,
}

pub fn load_host(path: &Path) -> Result<LoadedHost> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let file: HostFile = serde_json::from_slice(&bytes)
        .with_context(|| format!("parsing coloring file {}", path.display()))?;
    let graph = ColoredCompleteGraph::from_file(&file.coloring)
        .with_context(|| format!("loading coloring from {}", path.display()))?;
    Ok(LoadedHost {
        graph,
        plan: file.plan,
        digest: sha256_hex(&bytes),
    })
}
