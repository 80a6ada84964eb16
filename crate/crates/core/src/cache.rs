//! On-disk cache of complete resolution windows.
//!
//! Files are JSON, keyed by a SHA-256 of the module and window, and carry a SHA-256 of their
//! payload. A loaded complex is re-verified (`∂∘∂ = 0` and exactness) before use, so a corrupt
//! or stale file is rebuilt rather than trusted.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::ModuleRep;
use crate::error::{Error, Result};
use crate::resolution::{complete_resolution, Complex};

/// Bumped whenever the serialized layout of a complex changes.
pub const CACHE_SCHEMA: u32 = 1;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "TATE_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: u32,
    key: String,
    checksum: String,
    complex: Complex,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn sha(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct ResolutionCache {
    dir: PathBuf,
}

impl ResolutionCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ResolutionCache { dir: dir.into() }
    }

    /// `explicit`, else `$TATE_CACHE_DIR`, else no cache.
    pub fn from_env(explicit: Option<&Path>) -> Option<Self> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(m: &ModuleRep, n_min: i64, n_max: i64) -> Result<String> {
        let body = serde_json::to_vec(&(CACHE_SCHEMA, m, n_min, n_max)).map_err(|e| Error::Cache(e.to_string()))?;
        Ok(sha(&body))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("res-{key}.json"))
    }

    /// Reads a cached window, or `None` if it is absent, from another schema, or fails its checks.
    pub fn load(&self, m: &ModuleRep, n_min: i64, n_max: i64) -> Result<Option<Complex>> {
        let key = Self::key(m, n_min, n_max)?;
        let text = match std::fs::read(self.path(&key)) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let Ok(entry) = serde_json::from_slice::<Entry>(&text) else { return Ok(None) };
        if entry.schema != CACHE_SCHEMA || entry.key != key {
            return Ok(None);
        }
        let payload = serde_json::to_vec(&entry.complex).map_err(|e| Error::Cache(e.to_string()))?;
        if sha(&payload) != entry.checksum {
            return Ok(None);
        }
        let mut c = entry.complex;
        c.reset_caches();
        if c.module() != m || c.n_min() != n_min || c.n_max() != n_max || c.verify().is_err() {
            return Ok(None);
        }
        Ok(Some(c))
    }

    pub fn store(&self, c: &Complex) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let key = Self::key(c.module(), c.n_min(), c.n_max())?;
        let payload = serde_json::to_vec(c).map_err(|e| Error::Cache(e.to_string()))?;
        let entry = Entry { schema: CACHE_SCHEMA, key: key.clone(), checksum: sha(&payload), complex: c.clone() };
        let body = serde_json::to_vec(&entry).map_err(|e| Error::Cache(e.to_string()))?;
        // write then rename so readers never see a partial file
        let tmp = self.dir.join(format!(".res-{key}.{}.tmp", std::process::id()));
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, self.path(&key))?;
        Ok(())
    }

    /// Loads the window if cached, otherwise computes and stores it.
    pub fn complete_resolution(&self, m: &ModuleRep, n_min: i64, n_max: i64) -> Result<Complex> {
        if let Some(c) = self.load(m, n_min, n_max)? {
            return Ok(c);
        }
        let c = complete_resolution(m, n_min, n_max)?;
        self.store(&c)?;
        Ok(c)
    }
}

/// Computes a complete resolution window, going through `cache` when one is given.
pub fn resolve(m: &ModuleRep, n_min: i64, n_max: i64, cache: Option<&ResolutionCache>) -> Result<Complex> {
    match cache {
        Some(c) => c.complete_resolution(m, n_min, n_max),
        None => complete_resolution(m, n_min, n_max),
    }
}
