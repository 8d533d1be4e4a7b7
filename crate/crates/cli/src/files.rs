//! Atomic file writing, the fields sidecar format, and run manifests.
//!
//! Output files are written to a temporary sibling and renamed into place
//! so failures never leave partial files behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use nlslab_core::grid::{RadialField, RadialGrid};

use crate::json::{GridJson, SCHEMA_VERSION};

pub fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// FNV-1a 64-bit digest of a byte stream, recorded in manifests.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[derive(Debug, Serialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub fnv1a64: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub grid: Option<GridJson>,
    pub wall_clock_s: f64,
    pub outputs: Vec<ManifestEntry>,
}

/// Collects outputs as they are written and lands the manifest last.
pub struct ManifestBuilder {
    command: String,
    grid: Option<GridJson>,
    started: Instant,
    outputs: Vec<ManifestEntry>,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> Self {
        ManifestBuilder {
            command: command.to_string(),
            grid: None,
            started: Instant::now(),
            outputs: Vec::new(),
        }
    }

    pub fn set_grid(&mut self, grid: &RadialGrid) {
        self.grid = Some(GridJson {
            r_max: grid.r_max(),
            n: grid.n(),
        });
    }

    /// Write one output file atomically and record it.
    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> std::io::Result<()> {
        atomic_write(path, bytes)?;
        self.outputs.push(ManifestEntry {
            path: path.display().to_string(),
            bytes: bytes.len() as u64,
            fnv1a64: format!("{:016x}", fnv1a64(bytes)),
        });
        Ok(())
    }

    /// Write run_manifest.json into the directory holding `anchor`.
    pub fn finish(self, anchor: &Path) -> std::io::Result<PathBuf> {
        let dir = anchor.parent().filter(|p| !p.as_os_str().is_empty());
        let manifest_path = match dir {
            Some(d) => d.join("run_manifest.json"),
            None => PathBuf::from("run_manifest.json"),
        };
        let manifest = RunManifest {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command,
            argv: std::env::args().collect(),
            grid: self.grid,
            wall_clock_s: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs,
        };
        let body = serde_json::to_vec_pretty(&manifest)?;
        atomic_write(&manifest_path, &body)?;
        Ok(manifest_path)
    }
}

const FIELDS_MAGIC: &[u8; 8] = b"NLSF0001";

/// Binary sidecar with the stored fields of a trace:
/// magic, n (u64), count (u64), r_max (f64), then per snapshot
/// t (f64) followed by n interleaved (re, im) f64 pairs, little endian.
pub fn encode_fields(grid: &RadialGrid, fields: &[(f64, RadialField)]) -> Vec<u8> {
    let n = grid.n();
    let mut out = Vec::with_capacity(8 + 24 + fields.len() * (8 + 16 * n));
    out.extend_from_slice(FIELDS_MAGIC);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&(fields.len() as u64).to_le_bytes());
    out.extend_from_slice(&grid.r_max().to_le_bytes());
    for (t, u) in fields {
        out.extend_from_slice(&t.to_le_bytes());
        for v in u.values() {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    out
}

/// Grid and time-stamped fields recovered from a sidecar.
pub type StoredFields = (Arc<RadialGrid>, Vec<(f64, RadialField)>);

pub fn decode_fields(bytes: &[u8]) -> Result<StoredFields, String> {
    let take_u64 =
        |b: &[u8], at: usize| -> u64 { u64::from_le_bytes(b[at..at + 8].try_into().unwrap()) };
    let take_f64 =
        |b: &[u8], at: usize| -> f64 { f64::from_le_bytes(b[at..at + 8].try_into().unwrap()) };
    if bytes.len() < 32 || &bytes[..8] != FIELDS_MAGIC {
        return Err("fields sidecar: bad magic".into());
    }
    let n = take_u64(bytes, 8) as usize;
    let count = take_u64(bytes, 16) as usize;
    let r_max = take_f64(bytes, 24);
    let expect = 32 + count * (8 + 16 * n);
    if bytes.len() != expect {
        return Err(format!(
            "fields sidecar: expected {expect} bytes, found {}",
            bytes.len()
        ));
    }
    let grid =
        Arc::new(RadialGrid::new(r_max, n).map_err(|e| format!("fields sidecar grid: {e}"))?);
    let mut fields = Vec::with_capacity(count);
    let mut at = 32;
    for _ in 0..count {
        let t = take_f64(bytes, at);
        at += 8;
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let re = take_f64(bytes, at);
            let im = take_f64(bytes, at + 8);
            at += 16;
            values.push(nlslab_core::num_complex::Complex64::new(re, im));
        }
        fields.push((
            t,
            RadialField::new(grid.clone(), values).map_err(|e| format!("fields sidecar: {e}"))?,
        ));
    }
    Ok((grid, fields))
}

/// Path of the fields sidecar belonging to a trace CSV.
pub fn fields_path(trace: &Path) -> PathBuf {
    trace.with_extension("fields.bin")
}

/// Path of the summary sidecar belonging to a trace CSV.
pub fn summary_path(trace: &Path) -> PathBuf {
    trace.with_extension("summary.json")
}
