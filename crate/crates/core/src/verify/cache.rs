//! On-disk cache of characteristic polynomials `P_n`.

use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntPolynomial;
use crate::permutation::factorial;

/// Bumped whenever the row/column order of `M_n` changes.
pub const INDEX_ORDER_VERSION: u32 = 1;
/// Bumped whenever the characteristic polynomial routine changes semantics.
pub const ALGORITHM_VERSION: u32 = 1;

/// `{"n": .., "degree": .., "coeffs": ["<decimal>", ..]}`, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPolyRecord {
    pub n: usize,
    pub degree: usize,
    pub coeffs: IntPolynomial,
}

impl CharPolyRecord {
    pub fn new(n: usize, poly: IntPolynomial) -> Self {
        CharPolyRecord {
            n,
            degree: poly.degree().unwrap_or(0),
            coeffs: poly,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: CharPolyRecord =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if rec.coeffs.degree() != Some(rec.degree) {
            return Err(Error::Parse(format!(
                "declared degree {} disagrees with {} coefficients",
                rec.degree,
                rec.coeffs.coeffs().len()
            )));
        }
        Ok(rec)
    }
}

#[derive(Clone, Debug)]
pub struct PolyCache {
    dir: PathBuf,
}

impl PolyCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        PolyCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n: usize) -> PathBuf {
        self.dir.join(format!(
            "charpoly-n{n}-order{INDEX_ORDER_VERSION}-algo{ALGORITHM_VERSION}.json"
        ))
    }

    /// A stored `P_n`, or `None` when absent or unusable.
    pub fn load(&self, n: usize) -> Option<IntPolynomial> {
        let path = self.path_for(n);
        let text = fs::read_to_string(&path).ok()?;
        match CharPolyRecord::from_json(&text) {
            Ok(rec) if rec.n == n && rec.degree == factorial(n) && rec.coeffs.is_monic() => {
                Some(rec.coeffs)
            }
            Ok(_) => {
                warn!("ignoring inconsistent cache entry {}", path.display());
                None
            }
            Err(e) => {
                warn!("ignoring unreadable cache entry {}: {e}", path.display());
                None
            }
        }
    }

    pub fn store(&self, n: usize, poly: &IntPolynomial) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(n);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, CharPolyRecord::new(n, poly.clone()).to_json())?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}
