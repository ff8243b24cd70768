use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<PathBuf> {
    if let Some(parent) = path.parent() {
        ensure_dir(parent)?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<PathBuf> {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    write_file(path, &s)
}

/// Everything needed to redo a run: the effective config (seed override
/// applied), its hash, the resolved scenario's hash and the tool version.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub config_sha256: String,
    pub scenario: String,
    pub scenario_sha256: String,
    pub seed: u64,
    pub files: Vec<String>,
    pub errors: Vec<String>,
}

impl Manifest {
    pub fn new(
        command: &str,
        config: Value,
        scenario_name: &str,
        scenario_json: &str,
        seed: u64,
    ) -> Self {
        let canonical = serde_json::to_string(&config).expect("plain data serializes");
        Manifest {
            tool: "ib",
            version: VERSION,
            command: command.into(),
            config_sha256: sha256_hex(canonical.as_bytes()),
            config,
            scenario: scenario_name.into(),
            scenario_sha256: sha256_hex(scenario_json.as_bytes()),
            seed,
            files: Vec::new(),
            errors: Vec::new(),
        }
    }

    /// Record output files relative to `root`.
    pub fn add_files(&mut self, root: &Path, paths: &[PathBuf]) {
        for p in paths {
            let rel = p.strip_prefix(root).unwrap_or(p);
            self.files.push(rel.display().to_string());
        }
    }
}

/// Thread count from the flag, else `IB_THREADS`, else rayon's default.
pub fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("IB_THREADS") {
        Ok(v) if !v.trim().is_empty() => v.trim().parse::<usize>().map(Some).map_err(|_| {
            CliError::Schema(format!("IB_THREADS must be a positive integer, got `{v}`"))
        }),
        _ => Ok(None),
    }
}

/// Run `f` on a pool of `threads` workers (the global pool when `None`).
pub fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Schema("thread count must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Runtime(format!("cannot start thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
