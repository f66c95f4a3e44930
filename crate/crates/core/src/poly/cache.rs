//! On-disk cache of reduced Groebner bases.
//!
//! Entries are keyed by the SHA-256 of the variable names, the generators in
//! canonical text, the term order and the caps, so a changed input can never
//! hit a stale entry. Each entry is a polynomial list in the canonical text
//! syntax. Writes go to a temporary file that is renamed into place.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::text::{format_polynomial_list, parse_polynomial_list};
use super::{buchberger, GbCaps, Polynomial, TermOrder, VarTable};
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "TVB_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".tvb-cache";

#[derive(Debug, Clone)]
pub struct GbCache {
    dir: PathBuf,
}

impl GbCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$TVB_CACHE_DIR`, or `.tvb-cache` in the working directory.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map_or_else(|| DEFAULT_CACHE_DIR.into(), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(vars: &VarTable, gens: &[Polynomial], order: &TermOrder, caps: GbCaps) -> String {
        let canonical = TermOrder::grevlex(vars.len());
        let mut h = Sha256::new();
        for name in vars.names() {
            h.update(name.as_bytes());
            h.update(b",");
        }
        h.update(b"\n");
        h.update(format_polynomial_list(gens, vars, &canonical).as_bytes());
        h.update(serde_json::to_string(order).expect("order serializes").as_bytes());
        h.update(serde_json::to_string(&caps).expect("caps serialize").as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.gb"))
    }

    pub fn get(
        &self,
        vars: &VarTable,
        gens: &[Polynomial],
        order: &TermOrder,
        caps: GbCaps,
    ) -> Result<Option<Vec<Polynomial>>> {
        let path = self.path(&Self::key(vars, gens, order, caps));
        match fs::read_to_string(&path) {
            Ok(text) => Ok(Some(parse_polynomial_list(&text, vars)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn put(
        &self,
        vars: &VarTable,
        gens: &[Polynomial],
        order: &TermOrder,
        caps: GbCaps,
        basis: &[Polynomial],
    ) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let key = Self::key(vars, gens, order, caps);
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        fs::write(&tmp, format_polynomial_list(basis, vars, order))?;
        fs::rename(&tmp, self.path(&key)).map_err(|e| {
            let _ = fs::remove_file(&tmp);
            Error::from(e)
        })
    }

    /// Looks the basis up, computing and storing it on a miss.
    pub fn buchberger(
        &self,
        vars: &VarTable,
        gens: &[Polynomial],
        order: &TermOrder,
        caps: GbCaps,
    ) -> Result<Vec<Polynomial>> {
        if let Some(b) = self.get(vars, gens, order, caps)? {
            return Ok(b);
        }
        let b = buchberger(gens, order, caps)?;
        self.put(vars, gens, order, caps, &b)?;
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse_polynomial;

    #[test]
    fn miss_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GbCache::new(dir.path());
        let vars = VarTable::new(["x", "y"]).unwrap();
        let gens = vec![
            parse_polynomial("x*y - 1", &vars).unwrap(),
            parse_polynomial("x^2", &vars).unwrap(),
        ];
        let o = TermOrder::lex(2);
        let caps = GbCaps::default();
        assert!(cache.get(&vars, &gens, &o, caps).unwrap().is_none());
        let b = cache.buchberger(&vars, &gens, &o, caps).unwrap();
        assert_eq!(cache.get(&vars, &gens, &o, caps).unwrap(), Some(b.clone()));
        // a different order is a different key
        assert!(cache.get(&vars, &gens, &TermOrder::grevlex(2), caps).unwrap().is_none());
        let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(files.len(), 1);
    }
}
