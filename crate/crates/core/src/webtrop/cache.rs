//! On-disk cache of expanded web models, one JSON file per `(k, n)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExponentSet, WebError, WebModel};
use crate::subsets;

/// Bumped whenever the matrix convention or the file layout changes.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Environment variable overriding the default cache directory.
pub const CACHE_DIR_ENV: &str = "POSITROIDAL_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    k: usize,
    n: usize,
    version: u32,
    minors: serde_json::Map<String, serde_json::Value>,
}

/// What happened when a model was requested from the cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "event")]
pub enum CacheEvent {
    Hit,
    Built,
    /// A stale file was discarded and the model rebuilt.
    Invalidated { found_version: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CacheEntry {
    pub file: String,
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub version: Option<u32>,
    pub bytes: u64,
    pub current: bool,
}

#[derive(Debug, Clone)]
pub struct WebCache {
    dir: PathBuf,
}

impl WebCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        WebCache { dir: dir.into() }
    }

    /// `$POSITROIDAL_CACHE_DIR`, else `$XDG_CACHE_HOME/positroidal`, else
    /// `~/.cache/positroidal`, else a directory under the system temp dir.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
            return PathBuf::from(d);
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
            return PathBuf::from(d).join("positroidal");
        }
        if let Some(h) = std::env::var_os("HOME").filter(|d| !d.is_empty()) {
            return PathBuf::from(h).join(".cache").join("positroidal");
        }
        std::env::temp_dir().join("positroidal-cache")
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, k: usize, n: usize) -> PathBuf {
        self.dir.join(format!("web-k{k}-n{n}.json"))
    }

    fn io_err(path: &Path, source: std::io::Error) -> WebError {
        WebError::CacheIo { path: path.display().to_string(), source }
    }

    fn format_err(path: &Path, reason: impl Into<String>) -> WebError {
        WebError::CacheFormat { path: path.display().to_string(), reason: reason.into() }
    }

    /// Reads a cached model. `Ok(Err(v))` reports a stale file with version `v`.
    fn read(&self, k: usize, n: usize) -> Result<Option<Result<WebModel, u32>>, WebError> {
        let path = self.path(k, n);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Self::io_err(&path, e)),
        };
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| Self::format_err(&path, e.to_string()))?;
        if file.version != CACHE_FORMAT_VERSION {
            return Ok(Some(Err(file.version)));
        }
        if (file.k, file.n) != (k, n) {
            return Err(Self::format_err(&path, format!("holds (k,n)=({},{})", file.k, file.n)));
        }
        let mut minors = Vec::with_capacity(file.minors.len());
        for subset in subsets::k_subsets(n, k) {
            let key = subsets::render(&subset);
            let raw = file
                .minors
                .get(&key)
                .ok_or_else(|| Self::format_err(&path, format!("missing minor {key}")))?;
            let terms: Vec<(Vec<u8>, u64)> =
                serde_json::from_value(raw.clone()).map_err(|e| Self::format_err(&path, e.to_string()))?;
            let dim = (k - 1) * (n - k);
            if terms.iter().any(|(e, _)| e.len() != dim) {
                return Err(Self::format_err(&path, format!("bad exponent length in minor {key}")));
            }
            let set = ExponentSet::new(terms)
                .ok_or_else(|| Self::format_err(&path, format!("minor {key} is not canonical")))?;
            minors.push(set);
        }
        Ok(Some(Ok(WebModel::from_parts(k, n, minors))))
    }

    /// Writes a model atomically (temp file in the same directory, then rename).
    pub fn store(&self, model: &WebModel) -> Result<PathBuf, WebError> {
        fs::create_dir_all(&self.dir).map_err(|e| Self::io_err(&self.dir, e))?;
        let (k, n) = (model.k(), model.n());
        let mut minors = serde_json::Map::new();
        for (subset, set) in subsets::k_subsets(n, k).iter().zip(model.minors()) {
            minors.insert(
                subsets::render(subset),
                serde_json::to_value(set.terms()).expect("serializable terms"),
            );
        }
        let file = CacheFile { k, n, version: CACHE_FORMAT_VERSION, minors };
        let path = self.path(k, n);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| Self::io_err(&self.dir, e))?;
        serde_json::to_writer(&mut tmp, &file).map_err(|e| Self::format_err(&path, e.to_string()))?;
        tmp.flush().map_err(|e| Self::io_err(&path, e))?;
        tmp.persist(&path).map_err(|e| Self::io_err(&path, e.error))?;
        Ok(path)
    }

    /// Loads `(k, n)` from disk or builds and stores it.
    pub fn get_or_build(&self, k: usize, n: usize, max_monomials: u64) -> Result<(WebModel, CacheEvent), WebError> {
        if k == 0 || k >= n || n > 32 {
            return Err(WebError::Shape { k, n });
        }
        let event = match self.read(k, n)? {
            Some(Ok(model)) => return Ok((model, CacheEvent::Hit)),
            Some(Err(found_version)) => {
                let path = self.path(k, n);
                fs::remove_file(&path).map_err(|e| Self::io_err(&path, e))?;
                CacheEvent::Invalidated { found_version }
            }
            None => CacheEvent::Built,
        };
        let model = WebModel::build(k, n, max_monomials)?;
        self.store(&model)?;
        Ok((model, event))
    }

    /// Lists cache files.
    pub fn status(&self) -> Result<Vec<CacheEntry>, WebError> {
        let mut out = Vec::new();
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(Self::io_err(&self.dir, e)),
        };
        for entry in entries {
            let entry = entry.map_err(|e| Self::io_err(&self.dir, e))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if !(name.starts_with("web-k") && name.ends_with(".json")) {
                continue;
            }
            let bytes = entry.metadata().map(|m| m.len()).unwrap_or(0);
            let header = fs::read_to_string(entry.path())
                .ok()
                .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok());
            let field = |key: &str| header.as_ref().and_then(|h| h.get(key)).and_then(|v| v.as_u64());
            let version = field("version").map(|v| v as u32);
            out.push(CacheEntry {
                file: name,
                k: field("k").map(|v| v as usize),
                n: field("n").map(|v| v as usize),
                version,
                bytes,
                current: version == Some(CACHE_FORMAT_VERSION),
            });
        }
        out.sort_by(|a, b| (a.k, a.n, &a.file).cmp(&(b.k, b.n, &b.file)));
        Ok(out)
    }

    /// Removes every cache file; returns how many were removed.
    pub fn clear(&self) -> Result<usize, WebError> {
        let entries = self.status()?;
        for e in &entries {
            let path = self.dir.join(&e.file);
            match fs::remove_file(&path) {
                Ok(()) => {}
                Err(err) if err.kind() == std::io::ErrorKind::NotFound => {}
                Err(err) => return Err(Self::io_err(&path, err)),
            }
        }
        Ok(entries.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::webtrop::DEFAULT_MAX_MONOMIALS;

    #[test]
    fn roundtrip_and_invalidation() {
        let dir = tempfile::tempdir().unwrap();
        let cache = WebCache::new(dir.path());
        assert!(cache.status().unwrap().is_empty());
        let (built, ev) = cache.get_or_build(2, 5, DEFAULT_MAX_MONOMIALS).unwrap();
        assert_eq!(ev, CacheEvent::Built);
        let (loaded, ev) = cache.get_or_build(2, 5, DEFAULT_MAX_MONOMIALS).unwrap();
        assert_eq!(ev, CacheEvent::Hit);
        assert_eq!(built, loaded);

        let path = cache.path(2, 5);
        let text = fs::read_to_string(&path).unwrap().replace("\"version\":1", "\"version\":0");
        fs::write(&path, text).unwrap();
        assert!(!cache.status().unwrap()[0].current);
        let (_, ev) = cache.get_or_build(2, 5, DEFAULT_MAX_MONOMIALS).unwrap();
        assert_eq!(ev, CacheEvent::Invalidated { found_version: 0 });
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.status().unwrap().is_empty());
    }
}
