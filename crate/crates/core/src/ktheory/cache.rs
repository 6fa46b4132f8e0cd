//! Pluggable storage for expensive normal forms.

use std::collections::HashMap;
use std::sync::Mutex;

use super::matrix::IntMatrix;

/// Identifies one cached computation; `matrix` is its input.
#[derive(Clone, Copy, Debug)]
pub struct CacheKey<'a> {
    pub rank: usize,
    pub relation: &'a str,
    pub level: usize,
    pub role: &'static str,
    pub matrix: &'a IntMatrix,
}

/// Implementations must return exactly what was stored under an equal key;
/// callers still validate what they load.
pub trait MatrixCache: Send + Sync {
    fn load(&self, key: &CacheKey<'_>) -> Option<Vec<IntMatrix>>;
    fn store(&self, key: &CacheKey<'_>, value: &[IntMatrix]);
}

type MemKey = (usize, String, usize, &'static str, IntMatrix);

/// In-process cache.
#[derive(Default)]
pub struct MemoryCache {
    map: Mutex<HashMap<MemKey, Vec<IntMatrix>>>,
}

impl MemoryCache {
    pub fn new() -> MemoryCache {
        MemoryCache::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn mem_key(k: &CacheKey<'_>) -> MemKey {
    (k.rank, k.relation.to_string(), k.level, k.role, k.matrix.clone())
}

impl MatrixCache for MemoryCache {
    fn load(&self, key: &CacheKey<'_>) -> Option<Vec<IntMatrix>> {
        self.map.lock().expect("cache lock").get(&mem_key(key)).cloned()
    }

    fn store(&self, key: &CacheKey<'_>, value: &[IntMatrix]) {
        self.map
            .lock()
            .expect("cache lock")
            .insert(mem_key(key), value.to_vec());
    }
}
