use std::env;
use std::path::{Path, PathBuf};

use rq_core::mobius::{cache, mobius_sieve, MobiusTable};

use crate::error::CliResult;

pub const CACHE_DIR_ENV: &str = "RQ_CACHE_DIR";
pub const CACHE_FILE: &str = "mobius.rqmu";

/// An explicit `--cache-path` wins; otherwise `RQ_CACHE_DIR` overrides the
/// config's `cache_path`, and the fallback is `./rq-cache/mobius.rqmu`.
pub fn resolve_cache_path(flag: Option<&Path>, config: Option<&Path>, base_dir: &Path) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(dir) = env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
        return PathBuf::from(dir).join(CACHE_FILE);
    }
    match config {
        Some(p) if p.is_relative() => base_dir.join(p),
        Some(p) => p.to_path_buf(),
        None => Path::new("rq-cache").join(CACHE_FILE),
    }
}

/// A table covering at least `limit`, reusing the cache at `path` when its
/// header says it is large enough. An unreadable or corrupt cache is an
/// integrity error and is left untouched.
pub fn obtain(path: &Path, limit: u64, segment: u64) -> CliResult<MobiusTable> {
    if path.exists() {
        let have = cache::peek_limit(path)?;
        if have >= limit {
            let table = cache::load(path)?;
            eprintln!("rq: reusing {} (limit {have})", path.display());
            return Ok(table);
        }
        eprintln!("rq: {} covers only {have}; rebuilding to {limit}", path.display());
    }
    let table = mobius_sieve(limit, segment)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    cache::save(&table, path)?;
    eprintln!("rq: wrote {} (limit {limit})", path.display());
    Ok(table)
}
