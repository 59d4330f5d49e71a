//! On-disk cache of finished chamber crossings, keyed by a SHA-256 content hash of the
//! surface lattice, its embedding and the Weyl vector of the chamber reached.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::json::DecimalJson;

/// Environment variable naming the cache directory; overrides the default location.
pub const CACHE_DIR_ENV: &str = "K3AUT_CACHE_DIR";

/// Directory used when neither a flag nor the environment names one.
pub const DEFAULT_CACHE_DIR: &str = ".k3aut-cache";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// The cache directory: an explicit flag first, then [`CACHE_DIR_ENV`], then the default.
    pub fn resolve(flag: Option<&Path>) -> Self {
        match flag {
            Some(p) => Self::new(p),
            None => match std::env::var_os(CACHE_DIR_ENV) {
                Some(p) if !p.is_empty() => Self::new(p),
                _ => Self::new(DEFAULT_CACHE_DIR),
            },
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the canonical JSON of `(gram, embedding, weyl)`.
    pub fn key(gram: &[Vec<i64>], embedding: &[Vec<i64>], weyl: &[i64]) -> String {
        let doc: Value = json!({
            "gram": gram.to_vec().to_json(),
            "embedding": embedding.to_vec().to_json(),
            "weyl": weyl.to_vec().to_json(),
        });
        let digest = Sha256::digest(doc.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, kind: &str, key: &str) -> PathBuf {
        self.dir.join(kind).join(format!("{key}.json"))
    }

    /// The stored entry, if present and readable; unreadable entries count as misses.
    pub fn load<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(kind, key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes an entry atomically (temporary file, then rename).
    pub fn store<T: Serialize>(&self, kind: &str, key: &str, value: &T) -> io::Result<()> {
        let path = self.path(kind, key);
        let dir = path.parent().expect("entry path has a parent");
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_depend_on_every_component() {
        let g = vec![vec![2, 1], vec![1, 2]];
        let e = vec![vec![1, 0]];
        let k = Cache::key(&g, &e, &[1, 0]);
        assert_eq!(k.len(), 64);
        assert_eq!(k, Cache::key(&g, &e, &[1, 0]));
        assert_ne!(k, Cache::key(&g, &e, &[0, 1]));
        assert_ne!(k, Cache::key(&g, &[vec![0, 1]], &[1, 0]));
        assert_ne!(k, Cache::key(&[vec![2, 0], vec![0, 2]], &e, &[1, 0]));
    }

    #[test]
    fn entries_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        assert_eq!(c.load::<Vec<u32>>("x", "abc"), None);
        c.store("x", "abc", &vec![1u32, 2]).unwrap();
        assert_eq!(c.load::<Vec<u32>>("x", "abc"), Some(vec![1, 2]));
    }

    #[test]
    fn explicit_directory_wins() {
        assert_eq!(Cache::resolve(Some(Path::new("/tmp/a"))).dir(), Path::new("/tmp/a"));
    }
}
