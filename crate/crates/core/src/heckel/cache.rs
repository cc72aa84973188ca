//! Integral ideals by norm, optionally cached on disk.
//!
//! With `CMEIS_CACHE_DIR` set, tables are stored there as
//! `ideals-d{d_K}-n{N}.json`:
//!
//! ```text
//! {"version": 1, "d_k": 4, "bound": 10000, "ideals": [[norm, a, b], ...]}
//! ```
//!
//! one entry per ideal, `a + b·ω_K` its normalized generator, sorted by norm
//! then generator.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::field::{IdealRep, ImagQuadField};

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "CMEIS_CACHE_DIR";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    d_k: u32,
    bound: u64,
    ideals: Vec<(i128, i128, i128)>,
}

/// All integral ideals of norm at most `bound`.
#[derive(Clone, Debug)]
pub struct IdealTable {
    pub field: ImagQuadField,
    pub bound: u64,
    pub ideals: Vec<IdealRep>,
}

impl IdealTable {
    pub fn build(field: ImagQuadField, bound: u64) -> Self {
        let ideals = field.ideals_up_to_norm(bound as i128);
        IdealTable { field, bound, ideals }
    }

    /// Reads the table from the cache directory if present and valid,
    /// otherwise builds it and tries to store it. Cache I/O failures are
    /// not errors.
    pub fn load_or_build(field: ImagQuadField, bound: u64) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) => Self::load_or_build_in(Path::new(&dir), field, bound),
            None => Self::build(field, bound),
        }
    }

    pub fn load_or_build_in(dir: &Path, field: ImagQuadField, bound: u64) -> Self {
        let path = cache_path(dir, field, bound);
        if let Some(t) = Self::read(&path, field, bound) {
            return t;
        }
        let t = Self::build(field, bound);
        t.write(&path);
        t
    }

    fn read(path: &Path, field: ImagQuadField, bound: u64) -> Option<Self> {
        let text = std::fs::read_to_string(path).ok()?;
        let f: CacheFile = serde_json::from_str(&text).ok()?;
        if f.version != CACHE_VERSION || f.d_k != field.d_k() || f.bound != bound {
            return None;
        }
        let mut ideals = Vec::with_capacity(f.ideals.len());
        for (n, a, b) in f.ideals {
            let r = IdealRep::new(field.elem(a, b));
            if r.norm() != n || r.gen.a != a || r.gen.b != b {
                return None;
            }
            ideals.push(r);
        }
        Some(IdealTable { field, bound, ideals })
    }

    fn write(&self, path: &Path) {
        let f = CacheFile {
            version: CACHE_VERSION,
            d_k: self.field.d_k(),
            bound: self.bound,
            ideals: self.ideals.iter().map(|r| (r.norm(), r.gen.a, r.gen.b)).collect(),
        };
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        let tmp = path.with_extension("json.tmp");
        if let Ok(text) = serde_json::to_string(&f) {
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(&tmp, path);
            }
        }
    }
}

pub fn cache_path(dir: &Path, field: ImagQuadField, bound: u64) -> PathBuf {
    dir.join(format!("ideals-d{}-n{}.json", field.d_k(), bound))
}
