use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::sun::{sun_with_cap, DEFAULT_WEIGHT_CAP};
use crate::error::Result;
use crate::modular::{ModularData, ModularDataFile, Tolerances};

/// Disk cache for SU(N)_k modular data.
///
/// Entries are "modular-data v1" files with a provenance header and an
/// integrity hash. Unreadable or mismatching entries are regenerated.
/// Writes go to a temporary file that is renamed into place.
#[derive(Clone, Debug)]
pub struct SunCache {
    dir: PathBuf,
    cap: usize,
}

impl SunCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SunCache {
            dir: dir.into(),
            cap: DEFAULT_WEIGHT_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, n: u32, k: u32) -> PathBuf {
        self.dir.join(format!("suN-N{n}-k{k}.json"))
    }

    /// Cached data if a valid entry exists.
    pub fn lookup(&self, n: u32, k: u32) -> Option<ModularData> {
        let text = fs::read_to_string(self.path(n, k)).ok()?;
        let file: ModularDataFile = serde_json::from_str(&text).ok()?;
        if file.provenance != Some(provenance(n, k)) {
            return None;
        }
        file.to_data(&Tolerances::default()).ok()
    }

    pub fn load_or_generate(&self, n: u32, k: u32) -> Result<ModularData> {
        if let Some(md) = self.lookup(n, k) {
            return Ok(md);
        }
        let md = sun_with_cap(n, k, self.cap)?;
        self.store(n, k, &md)?;
        Ok(md)
    }

    fn store(&self, n: u32, k: u32, md: &ModularData) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let text = ModularDataFile::from_data(md, Some(provenance(n, k))).to_string_pretty();
        let target = self.path(n, k);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.persist(&target).map_err(|e| e.error)?;
        Ok(())
    }
}

fn provenance(n: u32, k: u32) -> serde_json::Value {
    json!({"family": "suN", "N": n, "k": k})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SunCache::new(dir.path());
        let md = cache.load_or_generate(3, 2).unwrap();
        assert!(cache.path(3, 2).exists());
        assert_eq!(cache.lookup(3, 2).unwrap(), md);
        fs::write(cache.path(3, 2), "garbage").unwrap();
        assert!(cache.lookup(3, 2).is_none());
        assert_eq!(cache.load_or_generate(3, 2).unwrap(), md);
    }
}
