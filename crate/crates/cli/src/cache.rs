//! On-disk cache of result listings, keyed by a canonical request string.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema: u32,
    pub key: String,
    pub hash: String,
    pub lines: Vec<String>,
}

impl CacheEntry {
    pub fn new(key: &str, lines: Vec<String>) -> Self {
        CacheEntry {
            schema: SCHEMA,
            key: key.to_string(),
            hash: entry_digest(key, &lines),
            lines,
        }
    }

    pub fn is_intact(&self) -> bool {
        self.schema == SCHEMA && self.hash == entry_digest(&self.key, &self.lines)
    }
}

/// Hash over the key and the payload.
fn entry_digest(key: &str, lines: &[String]) -> String {
    digest(&format!("{key}\n{}", lines.join("\n")))
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

#[derive(Debug)]
pub enum Lookup {
    Hit(Vec<String>),
    Miss,
    /// An entry exists but its hash does not match its payload.
    Corrupt,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// Opens an existing directory.
    pub fn open(dir: &Path) -> Result<Cache, CliError> {
        if !dir.is_dir() {
            return Err(CliError::Cache(format!("cache directory {} does not exist", dir.display())));
        }
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", digest(key)))
    }

    pub fn load(&self, key: &str) -> Lookup {
        let Ok(bytes) = fs::read(self.path(key)) else {
            return Lookup::Miss;
        };
        match serde_json::from_slice::<CacheEntry>(&bytes) {
            Ok(e) if e.key == key && e.is_intact() => Lookup::Hit(e.lines),
            _ => Lookup::Corrupt,
        }
    }

    pub fn store(&self, key: &str, lines: &[String]) -> Result<(), CliError> {
        let entry = CacheEntry::new(key, lines.to_vec());
        let text = serde_json::to_string(&entry).map_err(|e| CliError::Cache(e.to_string()))?;
        fs::write(self.path(key), text).map_err(|e| CliError::Io(e.to_string()))
    }

    /// Every entry file with its parse result, in file-name order.
    pub fn entries(&self) -> Result<Vec<(PathBuf, Option<CacheEntry>)>, CliError> {
        let mut paths: Vec<PathBuf> = fs::read_dir(&self.dir)
            .map_err(|e| CliError::Io(e.to_string()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        Ok(paths
            .into_iter()
            .map(|p| {
                let e = fs::read(&p).ok().and_then(|b| serde_json::from_slice(&b).ok());
                (p, e)
            })
            .collect())
    }

    pub fn clear(&self) -> Result<usize, CliError> {
        let entries = self.entries()?;
        for (p, _) in &entries {
            fs::remove_file(p).map_err(|e| CliError::Io(e.to_string()))?;
        }
        Ok(entries.len())
    }

    /// Returns the cached listing or computes and stores it. A corrupt entry
    /// is recomputed with a warning on stderr.
    pub fn get_or_compute(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<Vec<String>, CliError>,
    ) -> Result<Vec<String>, CliError> {
        match self.load(key) {
            Lookup::Hit(lines) => return Ok(lines),
            Lookup::Corrupt => eprintln!("warning: cache entry for {key} is corrupt; recomputing"),
            Lookup::Miss => {}
        }
        let lines = compute()?;
        self.store(key, &lines)?;
        Ok(lines)
    }
}

/// Runs `compute` through the cache when one is configured.
pub fn cached(
    cache: Option<&Cache>,
    key: &str,
    compute: impl FnOnce() -> Result<Vec<String>, CliError>,
) -> Result<Vec<String>, CliError> {
    match cache {
        Some(c) => c.get_or_compute(key, compute),
        None => compute(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let lines = vec!["a".to_string(), "b".to_string()];
        c.store("k", &lines).unwrap();
        assert!(matches!(c.load("k"), Lookup::Hit(l) if l == lines));
        assert!(matches!(c.load("other"), Lookup::Miss));
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        c.store("k", &["x".to_string()]).unwrap();
        let p = c.path("k");
        let text = fs::read_to_string(&p).unwrap().replace("\"x\"", "\"y\"");
        fs::write(&p, text).unwrap();
        assert!(matches!(c.load("k"), Lookup::Corrupt));
        let again = c.get_or_compute("k", || Ok(vec!["x".to_string()])).unwrap();
        assert_eq!(again, vec!["x".to_string()]);
        assert!(matches!(c.load("k"), Lookup::Hit(_)));
    }

    #[test]
    fn missing_directory() {
        assert!(Cache::open(Path::new("/nonexistent/cache/dir")).is_err());
    }
}
