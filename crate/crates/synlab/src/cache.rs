//! Content-addressed result cache.
//!
//! One JSON file per key under the cache directory.  The key is the
//! SHA-256 of the artifact version, the command name and its canonical
//! parameters, so a version bump invalidates every entry.  Entries are
//! written to a temporary file in the same directory and renamed into
//! place, so readers never see a partial entry.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Artifact version included in every key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub payload: String,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
}

/// The key of a command and its parameters.
pub fn cache_key(command: &str, params: &impl Serialize) -> String {
    let canonical = serde_json::json!({
        "version": VERSION,
        "command": command,
        "params": params,
    });
    let bytes = serde_json::to_vec(&canonical).expect("parameters serialise");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The cached payload, if a well-formed entry with this key exists.
    pub fn get(&self, key: &str) -> Option<String> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key).then_some(entry.payload)
    }

    /// Stores a payload atomically.
    pub fn put(&self, key: &str, payload: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry {
            key: key.to_string(),
            payload: payload.to_string(),
            created_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(
            serde_json::to_string(&entry)
                .expect("entries serialise")
                .as_bytes(),
        )?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// The cached payload, or the result of `compute`, which is then stored.
    pub fn get_or_compute<E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<String, E>,
    ) -> Result<String, E>
    where
        E: From<std::io::Error>,
    {
        if let Some(hit) = self.get(key) {
            return Ok(hit);
        }
        let payload = compute()?;
        self.put(key, &payload)?;
        Ok(payload)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_depend_on_everything() {
        let a = cache_key("tc", &serde_json::json!({"p": 3}));
        assert_eq!(a, cache_key("tc", &serde_json::json!({"p": 3})));
        assert_ne!(a, cache_key("tc", &serde_json::json!({"p": 5})));
        assert_ne!(a, cache_key("ktheory", &serde_json::json!({"p": 3})));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        assert_eq!(c.get("k"), None);
        c.put("k", "payload").unwrap();
        assert_eq!(c.get("k").as_deref(), Some("payload"));
        std::fs::write(dir.path().join("k.json"), "{ not json").unwrap();
        assert_eq!(c.get("k"), None);
        let v: Result<String, std::io::Error> = c.get_or_compute("k", || Ok("fresh".into()));
        assert_eq!(v.unwrap(), "fresh");
        assert_eq!(c.get("k").as_deref(), Some("fresh"));
    }
}
