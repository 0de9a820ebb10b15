//! Binary cache of the von Mangoldt table.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size      | field                                   |
//! |--------|-----------|-----------------------------------------|
//! | 0      | 8         | magic `WLSHPRM1`                        |
//! | 8      | 4         | version, `u32` = 1                      |
//! | 12     | 4         | `n`, `u32`                              |
//! | 16     | 8         | count, `u64` = `2^n`                    |
//! | 24     | 8·count   | payload, IEEE-754 binary64              |
//! | end    | 8         | FNV-1a 64 over the payload bytes, `u64` |

use std::fs::{self, File, OpenOptions};
use std::hash::Hasher;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use fnv::FnvHasher;
use walsh_prime::{sieve_von_mangoldt, CubeVector, SieveConfig, VonMangoldtTable};

use crate::CliError;

pub const MAGIC: &[u8; 8] = b"WLSHPRM1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 24;

pub fn cache_path(dir: &Path, n: u32) -> PathBuf {
    dir.join(format!("lambda_n{n:02}.bin"))
}

fn checksum(payload: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(payload);
    h.finish()
}

pub fn encode(n: u32, values: &[f64]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * values.len() + 8);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let sum = checksum(&buf[HEADER_LEN..]);
    buf.extend_from_slice(&sum.to_le_bytes());
    buf
}

/// Why a cache file was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    Truncated,
    BadMagic,
    BadVersion(u32),
    CountMismatch { n: u32, count: u64 },
    LengthMismatch { expected: usize, actual: usize },
    Checksum { stored: u64, computed: u64 },
    Invalid(String),
}

impl std::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeError::Truncated => f.write_str("truncated header"),
            DecodeError::BadMagic => f.write_str("bad magic"),
            DecodeError::BadVersion(v) => write!(f, "unsupported version {v}"),
            DecodeError::CountMismatch { n, count } => write!(f, "count {count} is not 2^{n}"),
            DecodeError::LengthMismatch { expected, actual } => {
                write!(f, "expected {expected} bytes, found {actual}")
            }
            DecodeError::Checksum { stored, computed } => {
                write!(f, "checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")
            }
            DecodeError::Invalid(why) => f.write_str(why),
        }
    }
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap())
}

fn u64_at(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

pub fn decode(bytes: &[u8]) -> Result<VonMangoldtTable, DecodeError> {
    if bytes.len() < HEADER_LEN {
        return Err(DecodeError::Truncated);
    }
    if &bytes[..8] != MAGIC {
        return Err(DecodeError::BadMagic);
    }
    let version = u32_at(bytes, 8);
    if version != VERSION {
        return Err(DecodeError::BadVersion(version));
    }
    let n = u32_at(bytes, 12);
    let count = u64_at(bytes, 16);
    if n == 0 || n > walsh_prime::cube::HARD_MAX_N || count != 1u64 << n {
        return Err(DecodeError::CountMismatch { n, count });
    }
    let expected = HEADER_LEN + 8 * count as usize + 8;
    if bytes.len() != expected {
        return Err(DecodeError::LengthMismatch { expected, actual: bytes.len() });
    }
    let payload = &bytes[HEADER_LEN..expected - 8];
    let stored = u64_at(bytes, expected - 8);
    let computed = checksum(payload);
    if stored != computed {
        return Err(DecodeError::Checksum { stored, computed });
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    CubeVector::new(n, values)
        .map(VonMangoldtTable::from_cube)
        .map_err(|e| DecodeError::Invalid(e.to_string()))
}

/// Reads a cache file. `Ok(Err(_))` means the file exists but is unusable.
pub fn load(path: &Path) -> io::Result<Result<VonMangoldtTable, DecodeError>> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    Ok(decode(&bytes))
}

/// Writes atomically: temp file in the same directory, then rename.
pub fn store(path: &Path, table: &VonMangoldtTable) -> io::Result<()> {
    let tmp = path.with_extension("bin.tmp");
    {
        let mut out = BufWriter::new(File::create(&tmp)?);
        out.write_all(&encode(table.n(), table.values()))?;
        out.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Single-writer lock held for the lifetime of the guard.
struct LockGuard(PathBuf);

impl LockGuard {
    fn acquire(dir: &Path, n: u32) -> Result<Self, CliError> {
        let path = dir.join(format!("lambda_n{n:02}.lock"));
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(LockGuard(path)),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                Err(CliError::Locked { n, path })
            }
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    /// A checksum-valid file was already present.
    Hit,
    Written,
    /// An unusable file was replaced.
    Rebuilt(String),
}

/// Loads the cached table for `n`, sieving and writing it if absent or
/// corrupt. Returns the table, the file path, and what happened.
pub fn ensure(
    dir: &Path,
    n: u32,
    config: &SieveConfig,
) -> Result<(VonMangoldtTable, PathBuf, CacheStatus), CliError> {
    config.limits.check(n)?;
    let path = cache_path(dir, n);
    let previous = match load(&path) {
        Ok(Ok(table)) if table.n() == n => return Ok((table, path, CacheStatus::Hit)),
        Ok(Ok(table)) => Some(format!("file holds n={}", table.n())),
        Ok(Err(why)) => Some(why.to_string()),
        Err(e) if e.kind() == io::ErrorKind::NotFound => None,
        Err(e) => return Err(e.into()),
    };
    fs::create_dir_all(dir)?;
    let _lock = LockGuard::acquire(dir, n)?;
    let table = sieve_von_mangoldt(n, config)?;
    store(&path, &table)?;
    let status = match previous {
        Some(why) => CacheStatus::Rebuilt(why),
        None => CacheStatus::Written,
    };
    Ok((table, path, status))
}

/// Loads an existing, valid cache without sieving.
pub fn load_existing(dir: &Path, n: u32) -> Result<VonMangoldtTable, CliError> {
    let path = cache_path(dir, n);
    match load(&path) {
        Ok(Ok(table)) if table.n() == n => Ok(table),
        Ok(Ok(table)) => Err(CliError::Cache { path, reason: format!("holds n={}", table.n()) }),
        Ok(Err(why)) => Err(CliError::Cache { path, reason: why.to_string() }),
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            Err(CliError::MissingCache { n, dir: dir.to_path_buf() })
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: u32) -> VonMangoldtTable {
        sieve_von_mangoldt(n, &SieveConfig::default()).unwrap()
    }

    #[test]
    fn layout_n3() {
        let t = table(3);
        let bytes = encode(3, t.values());
        assert_eq!(bytes.len(), 24 + 64 + 8);
        assert_eq!(&bytes[..8], b"WLSHPRM1");
        assert_eq!(&bytes[8..12], &[1, 0, 0, 0]);
        assert_eq!(&bytes[12..16], &[3, 0, 0, 0]);
        assert_eq!(&bytes[16..24], &[8, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&bytes[24 + 16..32 + 16], &2f64.ln().to_le_bytes());
        assert_eq!(decode(&bytes).unwrap(), t);
    }

    #[test]
    fn fnv1a_reference_vectors() {
        assert_eq!(checksum(b""), 0xcbf29ce484222325);
        assert_eq!(checksum(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(checksum(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn rejects_damage() {
        let good = encode(4, table(4).values());
        let mut flipped = good.clone();
        flipped[30] ^= 0x01;
        assert!(matches!(decode(&flipped), Err(DecodeError::Checksum { .. })));
        let mut magic = good.clone();
        magic[0] = b'X';
        assert_eq!(decode(&magic), Err(DecodeError::BadMagic));
        let mut version = good.clone();
        version[8] = 2;
        assert_eq!(decode(&version), Err(DecodeError::BadVersion(2)));
        let mut count = good.clone();
        count[16] = 15;
        assert!(matches!(decode(&count), Err(DecodeError::CountMismatch { .. })));
        assert!(matches!(
            decode(&good[..good.len() - 1]),
            Err(DecodeError::LengthMismatch { .. })
        ));
        assert_eq!(decode(&good[..10]), Err(DecodeError::Truncated));
    }
}
