//! Append-only JSON-lines store of finished results.

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

const FILE_NAME: &str = "results.jsonl";

/// One finished command. `payload` is reproducible byte for byte from the
/// key fields; `elapsed_ms` is not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub key: String,
    pub command: String,
    pub parameters: Value,
    pub primes: Vec<u32>,
    pub seed: u64,
    pub version: String,
    pub pass: bool,
    pub payload: Value,
    pub elapsed_ms: u64,
}

/// Hex SHA-256 of the canonical JSON of the key fields.
pub fn cache_key(
    command: &str,
    parameters: &Value,
    primes: &[u32],
    seed: u64,
    version: &str,
) -> String {
    let canonical = serde_json::json!({
        "command": command,
        "parameters": parameters,
        "primes": primes,
        "seed": seed,
        "version": version,
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache {
            path: dir.join(FILE_NAME),
        })
    }

    /// First stored record with this key. Unreadable lines are skipped.
    pub fn lookup(&self, key: &str) -> Result<Option<ResultRecord>> {
        let file = match fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e).context("opening cache"),
        };
        for line in BufReader::new(file).lines() {
            let line = line.context("reading cache")?;
            if let Ok(rec) = serde_json::from_str::<ResultRecord>(&line) {
                if rec.key == key {
                    return Ok(Some(rec));
                }
            }
        }
        Ok(None)
    }

    pub fn append(&self, record: &ResultRecord) -> Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .context("opening cache for append")?;
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        f.write_all(line.as_bytes()).context("writing cache")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(key: &str) -> ResultRecord {
        ResultRecord {
            key: key.to_string(),
            command: "check".into(),
            parameters: serde_json::json!({"k": 2}),
            primes: vec![32003],
            seed: 1,
            version: "0".into(),
            pass: true,
            payload: serde_json::json!([1, 2]),
            elapsed_ms: 3,
        }
    }

    #[test]
    fn key_depends_on_every_field() {
        let p = serde_json::json!({"k": 2, "n": 6});
        let base = cache_key("check", &p, &[32003], 1, "0.1.0");
        assert_eq!(base, cache_key("check", &p, &[32003], 1, "0.1.0"));
        assert_ne!(base, cache_key("scan", &p, &[32003], 1, "0.1.0"));
        assert_ne!(
            base,
            cache_key(
                "check",
                &serde_json::json!({"k": 3, "n": 6}),
                &[32003],
                1,
                "0.1.0"
            )
        );
        assert_ne!(base, cache_key("check", &p, &[46337], 1, "0.1.0"));
        assert_ne!(base, cache_key("check", &p, &[32003], 2, "0.1.0"));
        assert_ne!(base, cache_key("check", &p, &[32003], 1, "0.1.1"));
    }

    #[test]
    fn append_then_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert_eq!(cache.lookup("a").unwrap(), None);
        cache.append(&record("a")).unwrap();
        cache.append(&record("b")).unwrap();
        fs::OpenOptions::new()
            .append(true)
            .open(dir.path().join(FILE_NAME))
            .unwrap()
            .write_all(b"not json\n")
            .unwrap();
        assert_eq!(cache.lookup("b").unwrap(), Some(record("b")));
        assert_eq!(cache.lookup("c").unwrap(), None);
    }
}
