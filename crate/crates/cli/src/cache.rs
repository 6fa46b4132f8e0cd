//! Normal forms cached as JSON files named by a SHA-256 of their key.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use freeboundary::ktheory::{CacheKey, IntMatrix, MatrixCache};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct DirCache {
    dir: PathBuf,
}

impl DirCache {
    pub fn new(dir: PathBuf) -> anyhow::Result<DirCache> {
        fs::create_dir_all(&dir)?;
        Ok(DirCache { dir })
    }

    fn header(key: &CacheKey<'_>) -> Value {
        json!({
            "d": key.rank,
            "relation": key.relation,
            "level": key.level,
            "role": key.role,
        })
    }

    fn path(&self, key: &CacheKey<'_>) -> PathBuf {
        let mut h = Sha256::new();
        h.update(Self::header(key).to_string().as_bytes());
        h.update(serde_json::to_vec(key.matrix).expect("matrix serializes"));
        self.dir.join(format!("{}.json", hex::encode(h.finalize())))
    }
}

impl MatrixCache for DirCache {
    fn load(&self, key: &CacheKey<'_>) -> Option<Vec<IntMatrix>> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v.get("key")? != &Self::header(key) {
            return None;
        }
        let input: IntMatrix = serde_json::from_value(v.get("input")?.clone()).ok()?;
        if &input != key.matrix {
            return None;
        }
        serde_json::from_value(v.get("value")?.clone()).ok()
    }

    fn store(&self, key: &CacheKey<'_>, value: &[IntMatrix]) {
        let doc = json!({
            "key": Self::header(key),
            "input": key.matrix,
            "value": value,
        });
        let path = self.path(key);
        let tmp = path.with_extension("tmp");
        let written = fs::File::create(&tmp)
            .and_then(|mut f| f.write_all(doc.to_string().as_bytes()))
            .and_then(|_| fs::rename(&tmp, &path));
        if let Err(e) = written {
            eprintln!("warning: cache write to {} failed: {e}", path.display());
        }
    }
}
