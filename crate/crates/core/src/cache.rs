//! On-disk persistence of the straightening memo table.
//!
//! One JSON file per root system. A file whose schema version or root-system
//! fingerprint does not match is treated as stale and ignored.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pbw::{Monomial, Uea};
use crate::roots::RootSystem;

pub const CACHE_SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "WHITTAKER_CACHE_DIR";

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheFile {
    pub schema_version: u32,
    pub fingerprint: String,
    pub entries: Vec<CacheEntry>,
}

/// `symbol * monomial = sum of terms`; monomials are dense exponent vectors.
#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub symbol: usize,
    pub monomial: Vec<u16>,
    pub terms: Vec<(Vec<u16>, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadOutcome {
    Loaded(usize),
    Missing,
    Stale,
}

pub fn cache_path(dir: &Path, uea: &Uea) -> PathBuf {
    dir.join(format!("pbw-{}.json", uea.system().label()))
}

pub fn load(uea: &Uea, path: &Path) -> Result<LoadOutcome> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(LoadOutcome::Missing),
        Err(e) => return Err(e.into()),
    };
    let file: CacheFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(_) => return Ok(LoadOutcome::Stale),
    };
    if file.schema_version != CACHE_SCHEMA_VERSION || file.fingerprint != uea.system().fingerprint() {
        return Ok(LoadOutcome::Stale);
    }
    let dim = uea.dim();
    let count = file.entries.len();
    for entry in file.entries {
        if entry.monomial.len() != dim || entry.symbol >= dim {
            return Err(Error::Cache(format!("malformed entry in {}", path.display())));
        }
        let mut terms = Vec::with_capacity(entry.terms.len());
        for (m, c) in entry.terms {
            if m.len() != dim {
                return Err(Error::Cache(format!("malformed term in {}", path.display())));
            }
            let c = BigInt::from_str(&c).map_err(|_| Error::Cache(format!("bad coefficient {c:?}")))?;
            terms.push((Monomial::from_exponents(m), c));
        }
        uea.insert_cached(entry.symbol, Monomial::from_exponents(entry.monomial), terms);
    }
    Ok(LoadOutcome::Loaded(count))
}

/// Writes the table atomically (temporary file, then rename).
pub fn save(uea: &Uea, path: &Path) -> Result<usize> {
    let entries: Vec<CacheEntry> = uea
        .cached_entries()
        .into_iter()
        .map(|((symbol, m), terms)| CacheEntry {
            symbol,
            monomial: m.exponents().to_vec(),
            terms: terms
                .iter()
                .map(|(t, c)| (t.exponents().to_vec(), c.to_string()))
                .collect(),
        })
        .collect();
    let count = entries.len();
    let file = CacheFile {
        schema_version: CACHE_SCHEMA_VERSION,
        fingerprint: uea.system().fingerprint(),
        entries,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("json.tmp");
    {
        let mut out = fs::File::create(&tmp)?;
        serde_json::to_writer(&mut out, &file)?;
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(count)
}

/// Header information of a cache file, without loading its entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheSummary {
    pub file: String,
    pub fingerprint: String,
    pub entries: usize,
    /// Schema and fingerprint match the current build of the root system.
    pub fresh: bool,
}

/// Every `pbw-*.json` file in a directory, sorted by name.
pub fn cache_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(e.into()),
    };
    for entry in entries {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("pbw-") && name.ends_with(".json") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

pub fn summarize(path: &Path) -> Result<CacheSummary> {
    let file: CacheFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("").to_string();
    let label = name.trim_start_matches("pbw-").trim_end_matches(".json");
    let fresh = file.schema_version == CACHE_SCHEMA_VERSION
        && label
            .get(..1)
            .zip(label.get(1..).and_then(|r| r.parse::<usize>().ok()))
            .and_then(|(t, r)| RootSystem::from_label(t, r).ok())
            .is_some_and(|sys| sys.fingerprint() == file.fingerprint);
    Ok(CacheSummary {
        file: name,
        fingerprint: file.fingerprint,
        entries: file.entries.len(),
        fresh,
    })
}
