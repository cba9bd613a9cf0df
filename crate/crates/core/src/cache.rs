//! Caches for form enumerations: an in-process map and an optional on-disk
//! store under `COCYCLE_CACHE_DIR`, keyed by a content hash.

use crate::error::{Error, Result};
use crate::quadforms::{enumerate_simple, BinaryQF};
use num_bigint::BigInt;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

pub const CACHE_ENV: &str = "COCYCLE_CACHE_DIR";

type FormMap = HashMap<BigInt, Arc<Vec<BinaryQF>>>;

fn memory() -> &'static Mutex<FormMap> {
    static CACHE: OnceLock<Mutex<FormMap>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn disk_dir() -> &'static Mutex<Option<PathBuf>> {
    static DIR: OnceLock<Mutex<Option<PathBuf>>> = OnceLock::new();
    DIR.get_or_init(|| Mutex::new(std::env::var_os(CACHE_ENV).map(PathBuf::from)))
}

/// Overrides the on-disk cache directory; `None` disables the disk layer.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *disk_dir().lock().unwrap() = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    disk_dir().lock().unwrap().clone()
}

pub fn content_key(kind: &str, payload: &str) -> String {
    let mut h = Sha256::new();
    h.update(kind.as_bytes());
    h.update(b"\0");
    h.update(payload.as_bytes());
    hex::encode(h.finalize())
}

fn load(dir: &Path, key: &str) -> Option<Vec<BinaryQF>> {
    let text = std::fs::read_to_string(dir.join(format!("{key}.json"))).ok()?;
    serde_json::from_str(&text).ok()
}

fn store(dir: &Path, key: &str, forms: &[BinaryQF]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
    let text = serde_json::to_string(forms).map_err(|e| Error::Io(e.to_string()))?;
    let tmp = dir.join(format!("{key}.tmp{}", std::process::id()));
    std::fs::write(&tmp, text).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::rename(&tmp, dir.join(format!("{key}.json"))).map_err(|e| Error::Io(e.to_string()))
}

/// Simple forms of discriminant d, memoized.
pub fn simple_forms(d: &BigInt) -> Result<Arc<Vec<BinaryQF>>> {
    if let Some(v) = memory().lock().unwrap().get(d) {
        return Ok(v.clone());
    }
    let dir = cache_dir();
    let key = content_key("simple", &d.to_string());
    let forms = match dir.as_ref().and_then(|dir| load(dir, &key)) {
        Some(f) => f,
        None => {
            let f = enumerate_simple(d)?;
            if let Some(dir) = dir.as_ref() {
                if let Err(e) = store(dir, &key, &f) {
                    log::warn!("form cache write failed: {e}");
                }
            }
            f
        }
    };
    let arc = Arc::new(forms);
    memory().lock().unwrap().insert(d.clone(), arc.clone());
    Ok(arc)
}

type LinkKey = (BigInt, crate::quadforms::Cusp, crate::quadforms::Cusp);
type LinkMap = HashMap<LinkKey, Arc<Vec<(BinaryQF, i32)>>>;

fn linked_memory() -> &'static Mutex<LinkMap> {
    static CACHE: OnceLock<Mutex<LinkMap>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Linked forms of discriminant d for (r, s), memoized.
pub fn linked_forms_cached(
    d: &BigInt,
    r: &crate::quadforms::Cusp,
    s: &crate::quadforms::Cusp,
) -> Result<Arc<Vec<(BinaryQF, i32)>>> {
    let key = (d.clone(), r.clone(), s.clone());
    if let Some(v) = linked_memory().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(crate::quadforms::linked_forms(d, r, s)?);
    linked_memory().lock().unwrap().insert(key, v.clone());
    Ok(v)
}
