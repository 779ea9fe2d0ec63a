//! The cl-map cache: with `MZV_CACHE_DIR` set, the corrections for one
//! `(spec, n, p, i)` are stored as `<dir>/<spec>/n<n>-p<p>-i<i>.json`, where
//! `<spec>` is the registry name with `/` and `,` replaced by `_`.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use mzv_core::descent::{enumerate_basis, Descent};
use mzv_core::words::{LinComb, MzvSymbol};
use mzv_core::{MzvError, Result};

use crate::doc::{parse, render, serialize, Meta};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "MZV_CACHE_DIR";

/// Path of the cache file for `(spec, n, p, i)` under `root`.
pub fn cache_path(root: &Path, spec: &str, n: u32, p: usize, i: u32) -> PathBuf {
    let dir: String = spec
        .chars()
        .map(|c| if c == '/' || c == ',' { '_' } else { c })
        .collect();
    root.join(dir).join(format!("n{n}-p{p}-i{i}.json"))
}

type ClMap = Vec<(MzvSymbol, LinComb<MzvSymbol>)>;

fn compute(engine: &Descent, n: u32, p: usize, i: u32) -> Result<ClMap> {
    let spec = engine.spec();
    enumerate_basis(spec.modulus(), n, p, |b| spec.level(b) <= i)?
        .into_iter()
        .map(|b| {
            let cl = engine.solve_correction(&b, i)?;
            Ok((b, cl))
        })
        .collect()
}

fn to_json(engine: &Descent, n: u32, p: usize, i: u32, map: &ClMap) -> Value {
    let spec = engine.spec();
    let entries: Vec<Value> = map
        .iter()
        .map(|(b, cl)| json!({"element": b.to_string(), "cl": serialize(cl, Meta::of(cl, spec.modulus(), n))}))
        .collect();
    json!({"spec": spec.name(), "n": n, "p": p, "i": i, "entries": entries})
}

fn from_json(v: &Value) -> Result<ClMap> {
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| MzvError::Malformed("cache file has no entries".into()))?;
    entries
        .iter()
        .map(|e| {
            let element = e
                .get("element")
                .and_then(Value::as_str)
                .ok_or_else(|| MzvError::Malformed("cache entry has no element".into()))?;
            let cl = e
                .get("cl")
                .ok_or_else(|| MzvError::Malformed("cache entry has no cl".into()))?;
            Ok((element.parse()?, parse(cl)?.0))
        })
        .collect()
}

fn io_error(path: &Path, e: std::io::Error) -> MzvError {
    MzvError::InvalidArgument(format!("cache {}: {e}", path.display()))
}

/// `cl` for every depth-`p` basis element of weight `n` and level `<= i`,
/// read from and written to the cache when `MZV_CACHE_DIR` is set.
pub fn cl_map(engine: &Descent, n: u32, p: usize, i: u32) -> Result<ClMap> {
    let Some(root) = std::env::var_os(CACHE_ENV) else {
        return compute(engine, n, p, i);
    };
    cl_map_in(Path::new(&root), engine, n, p, i)
}

/// As [`cl_map`], with an explicit cache directory. Unreadable entries are recomputed.
pub fn cl_map_in(root: &Path, engine: &Descent, n: u32, p: usize, i: u32) -> Result<ClMap> {
    let path = cache_path(root, engine.spec().name(), n, p, i);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(map) = serde_json::from_str::<Value>(&text)
            .map_err(|e| MzvError::Malformed(e.to_string()))
            .and_then(|v| from_json(&v))
        {
            return Ok(map);
        }
    }
    let map = compute(engine, n, p, i)?;
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    fs::write(&path, render(&to_json(engine, n, p, i, &map))).map_err(|e| io_error(&path, e))?;
    Ok(map)
}
