//! Content-addressed store for computed Ext tables.

use std::fs;
use std::path::{Path, PathBuf};

use hmskit_core::matfac::ExtTable;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const DEFAULT_DIR: &str = "./.hmskit-cache";
pub const ENV_VAR: &str = "HMSKIT_CACHE_DIR";

/// What was asked for. Its canonical JSON is hashed into the key, so field
/// order is fixed by declaration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRequest {
    pub command: String,
    pub polynomial: String,
    pub group: Option<String>,
    pub window: [i64; 2],
    pub tool_version: String,
}

impl CacheRequest {
    pub fn key(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("request serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub tool_version: String,
    pub request: CacheRequest,
    pub table: ExtTable,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// Flag, then environment, then the default.
    pub fn resolve(flag: Option<&Path>) -> Self {
        match flag {
            Some(p) => Cache::new(p),
            None => Cache::new(std::env::var_os(ENV_VAR).map_or_else(|| PathBuf::from(DEFAULT_DIR), PathBuf::from)),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored table for `req`. Unreadable or mismatching entries count as
    /// misses.
    pub fn get(&self, req: &CacheRequest) -> Option<ExtTable> {
        let key = req.key();
        let text = fs::read_to_string(self.path(&key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key && &entry.request == req).then_some(entry.table)
    }

    pub fn put(&self, req: &CacheRequest, table: &ExtTable) -> Result<()> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io(&self.dir))?;
        let key = req.key();
        let entry = CacheEntry {
            key: key.clone(),
            tool_version: req.tool_version.clone(),
            request: req.clone(),
            table: table.clone(),
        };
        let target = self.path(&key);
        let tmp = self.dir.join(format!("{key}.json.tmp{}", std::process::id()));
        let body = serde_json::to_string(&entry).expect("entry serializes");
        fs::write(&tmp, body).map_err(io(&tmp))?;
        fs::rename(&tmp, &target).map_err(io(&target))
    }
}
