//! Resumable scan state on disk.
//!
//! The file is a single JSON object. Fields are only ever added within a major
//! version; `version` is bumped for incompatible changes.

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundConstant;
use crate::error::{Error, Result};
use crate::verify::{ScanKind, ScanReport};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub kind: ScanKind,
    pub range: (u64, u64),
    pub chunk_size: u64,
    pub constant: BoundConstant,
    /// Last even number whose chunk has been merged, if any.
    pub completed_through: Option<u64>,
    pub aggregates: Option<ScanReport>,
}

impl Checkpoint {
    pub fn new(kind: ScanKind, lo: u64, hi: u64, chunk_size: u64, constant: BoundConstant) -> Self {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            kind,
            range: (lo, hi),
            chunk_size,
            constant,
            completed_through: None,
            aggregates: None,
        }
    }

    /// `Ok(None)` when the file does not exist yet.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| Error::Checkpoint {
            path: path.to_path_buf(),
            reason: format!("unreadable: {e}"),
        })?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint {
                path: path.to_path_buf(),
                reason: format!("version {} is not supported", cp.version),
            });
        }
        Ok(Some(cp))
    }

    /// Writes to a sibling temp file and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub(crate) fn ensure_matches(
        &self,
        path: &Path,
        kind: ScanKind,
        lo: u64,
        hi: u64,
        chunk_size: u64,
        constant: BoundConstant,
    ) -> Result<()> {
        let mismatch = |what: String| Error::Checkpoint {
            path: path.to_path_buf(),
            reason: format!("belongs to a different scan ({what})"),
        };
        if self.kind != kind {
            return Err(mismatch(format!("kind {:?} vs {kind:?}", self.kind)));
        }
        if self.range != (lo, hi) {
            return Err(mismatch(format!(
                "range [{}, {}] vs [{lo}, {hi}]",
                self.range.0, self.range.1
            )));
        }
        if self.chunk_size != chunk_size {
            return Err(mismatch(format!("chunk size {} vs {chunk_size}", self.chunk_size)));
        }
        if self.constant != constant {
            return Err(mismatch(format!(
                "constant {} vs {}",
                self.constant.value(),
                constant.value()
            )));
        }
        Ok(())
    }
}
