//! Binary coefficient cache.
//!
//! Layout: `b"QSER"`, one version byte, modulus as little-endian u64,
//! truncation as little-endian u64, then `T + 1` little-endian u32 residues.

use super::{ResidueRing, TruncSeries};
use crate::error::{Error, Result};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const MAGIC: &[u8; 4] = b"QSER";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 8 + 8;

pub fn encode(series: &TruncSeries) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * series.coeffs().len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(series.ring().modulus() as u64).to_le_bytes());
    out.extend_from_slice(&(series.trunc() as u64).to_le_bytes());
    for &c in series.coeffs() {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<TruncSeries> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Cache("truncated header".into()));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Cache(format!("unsupported version {}", bytes[4])));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let ring = ResidueRing::new(word(5))?;
    let trunc = usize::try_from(word(13)).map_err(|_| Error::Cache("truncation overflow".into()))?;
    let body = &bytes[HEADER_LEN..];
    let expected = trunc
        .checked_add(1)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::Cache("truncation overflow".into()))?;
    if body.len() != expected {
        return Err(Error::Cache(format!(
            "expected {expected} payload bytes, found {}",
            body.len()
        )));
    }
    let coeffs = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    TruncSeries::from_residues(ring, coeffs).map_err(|e| Error::Cache(e.to_string()))
}

pub fn write_file(path: &Path, series: &TruncSeries) -> Result<()> {
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    // write then rename so a concurrent reader never sees a partial file
    let tmp = path.with_extension("qser.tmp");
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(&encode(series)).map_err(io)?;
    f.sync_all().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

pub fn read_file(path: &Path) -> Result<TruncSeries> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    decode(&bytes)
}

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "OVERPART_CACHE_DIR";

/// A directory of `.qser` files keyed by generator name, modulus and truncation.
///
/// File names read `<key>-m<modulus>-t<trunc>.qser`. A request is served by any
/// cached file for the same key and modulus with at least the requested
/// truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCache {
    dir: PathBuf,
}

impl SeriesCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn sanitize(key: &str) -> String {
        key.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect()
    }

    pub fn path(&self, key: &str, ring: ResidueRing, trunc: usize) -> PathBuf {
        self.dir.join(format!(
            "{}-m{}-t{trunc}.qser",
            Self::sanitize(key),
            ring.modulus()
        ))
    }

    /// The cached file with the smallest truncation `>= trunc`, if any.
    fn best(&self, key: &str, ring: ResidueRing, trunc: usize) -> Option<PathBuf> {
        let prefix = format!("{}-m{}-t", Self::sanitize(key), ring.modulus());
        let entries = std::fs::read_dir(&self.dir).ok()?;
        entries
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                let t: usize = name.strip_prefix(&prefix)?.strip_suffix(".qser")?.parse().ok()?;
                (t >= trunc).then(|| (t, e.path()))
            })
            .min()
            .map(|(_, p)| p)
    }

    pub fn load(&self, key: &str, ring: ResidueRing, trunc: usize) -> Result<Option<TruncSeries>> {
        match self.best(key, ring, trunc) {
            Some(path) => {
                let s = read_file(&path)?;
                if s.ring() != ring {
                    return Err(Error::Cache(format!("{}: ring mismatch", path.display())));
                }
                Ok(Some(s.truncate(trunc)?))
            }
            None => Ok(None),
        }
    }

    pub fn store(&self, key: &str, series: &TruncSeries) -> Result<()> {
        write_file(&self.path(key, series.ring(), series.trunc()), series)
    }

    /// Cached series if present, otherwise `compute()` stored for next time.
    pub fn get_or_compute(
        &self,
        key: &str,
        ring: ResidueRing,
        trunc: usize,
        compute: impl FnOnce() -> Result<TruncSeries>,
    ) -> Result<TruncSeries> {
        if let Some(s) = self.load(key, ring, trunc)? {
            return Ok(s);
        }
        let s = compute()?;
        self.store(key, &s)?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_bit_exact() {
        let ring = ResidueRing::new(13).unwrap();
        let s = TruncSeries::from_integers(ring, &[1, 2, 12]).unwrap();
        let bytes = encode(&s);
        assert_eq!(
            bytes,
            [
                b'Q', b'S', b'E', b'R', 1, //
                13, 0, 0, 0, 0, 0, 0, 0, //
                2, 0, 0, 0, 0, 0, 0, 0, //
                1, 0, 0, 0, 2, 0, 0, 0, 12, 0, 0, 0,
            ]
        );
        assert_eq!(decode(&bytes).unwrap(), s);
    }

    #[test]
    fn rejects_corrupt_input() {
        let ring = ResidueRing::new(13).unwrap();
        let s = TruncSeries::from_integers(ring, &[1, 2, 3]).unwrap();
        let good = encode(&s);

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(decode(&bad_magic).is_err());

        let mut bad_version = good.clone();
        bad_version[4] = 2;
        assert!(decode(&bad_version).is_err());

        assert!(decode(&good[..good.len() - 1]).is_err());

        let mut unreduced = good.clone();
        let n = unreduced.len();
        unreduced[n - 4] = 13;
        assert!(decode(&unreduced).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("qser-test-{}", std::process::id()));
        let path = dir.join("phi.qser");
        let ring = ResidueRing::new(11).unwrap();
        let s = TruncSeries::from_integers(ring, &[1, 2, 0, 0, 2]).unwrap();
        write_file(&path, &s).unwrap();
        assert_eq!(read_file(&path).unwrap(), s);
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn cache_serves_shorter_requests_from_longer_files() {
        let dir = std::env::temp_dir().join(format!("overpart-cache-{}", std::process::id()));
        let cache = SeriesCache::new(&dir);
        let ring = ResidueRing::new(7).unwrap();
        let s = TruncSeries::from_integers(ring, &[1, 2, 3, 4, 5]).unwrap();
        let mut calls = 0;
        let got = cache
            .get_or_compute("eta:1:2", ring, 4, || {
                calls += 1;
                Ok(s.clone())
            })
            .unwrap();
        assert_eq!(got, s);
        assert!(cache.path("eta:1:2", ring, 4).ends_with("eta_1_2-m7-t4.qser"));
        let short = cache
            .get_or_compute("eta:1:2", ring, 2, || panic!("should hit the cache"))
            .unwrap();
        assert_eq!(short.coeffs(), &[1, 2, 3]);
        assert_eq!(calls, 1);
        assert!(cache.load("eta:1:2", ResidueRing::new(5).unwrap(), 2).unwrap().is_none());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
