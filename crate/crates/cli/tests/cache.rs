use std::fs;

use walsh_prime::{sieve_von_mangoldt, SieveConfig};
use walsh_prime_cli::cache::{self, cache_path, CacheStatus};
use walsh_prime_cli::commands::cmd_sieve;
use walsh_prime_cli::CliError;

#[test]
fn n3_payload() {
    let dir = tempfile::tempdir().unwrap();
    let (path, status) = cmd_sieve(3, dir.path(), &SieveConfig::default(), Vec::new()).unwrap();
    assert_eq!(status, CacheStatus::Written);
    let bytes = fs::read(&path).unwrap();
    let payload: Vec<f64> = bytes[24..24 + 64]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let ln = f64::ln;
    let expected = [0.0, 0.0, ln(2.0), ln(3.0), ln(2.0), ln(5.0), 0.0, ln(7.0)];
    for (got, want) in payload.iter().zip(expected) {
        assert_eq!(*got == 0.0, want == 0.0);
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }
}

#[test]
fn round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let table = sieve_von_mangoldt(14, &SieveConfig::default()).unwrap();
    let path = cache_path(dir.path(), 14);
    cache::store(&path, &table).unwrap();
    let loaded = cache::load(&path).unwrap().unwrap();
    assert!(table
        .values()
        .iter()
        .zip(loaded.values())
        .all(|(a, b)| a.to_bits() == b.to_bits()));
    assert_eq!(loaded.n(), 14);
}

#[test]
fn rerun_is_a_hit_without_rewrite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SieveConfig::default();
    let (path, first) = cmd_sieve(10, dir.path(), &cfg, Vec::new()).unwrap();
    assert_eq!(first, CacheStatus::Written);
    let before = fs::metadata(&path).unwrap().modified().unwrap();
    let mut log = Vec::new();
    let (_, second) = cmd_sieve(10, dir.path(), &cfg, &mut log).unwrap();
    assert_eq!(second, CacheStatus::Hit);
    assert!(String::from_utf8(log).unwrap().starts_with("cache hit"));
    assert_eq!(fs::metadata(&path).unwrap().modified().unwrap(), before);
}

#[test]
fn flipped_payload_byte_is_resieved() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SieveConfig::default();
    let (path, _) = cmd_sieve(10, dir.path(), &cfg, Vec::new()).unwrap();
    let good = fs::read(&path).unwrap();
    let mut bad = good.clone();
    bad[24 + 8 * 7] ^= 0x40;
    fs::write(&path, &bad).unwrap();

    assert!(matches!(
        cache::load_existing(dir.path(), 10),
        Err(CliError::Cache { .. })
    ));
    let mut log = Vec::new();
    let (_, status) = cmd_sieve(10, dir.path(), &cfg, &mut log).unwrap();
    assert!(matches!(status, CacheStatus::Rebuilt(ref why) if why.contains("checksum")));
    assert!(String::from_utf8(log).unwrap().starts_with("warning:"));
    assert_eq!(fs::read(&path).unwrap(), good);
}

#[test]
fn stale_lock_blocks_writer() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("lambda_n08.lock"), b"").unwrap();
    let err = cmd_sieve(8, dir.path(), &SieveConfig::default(), Vec::new()).unwrap_err();
    assert!(matches!(err, CliError::Locked { n: 8, .. }));
    assert!(!cache_path(dir.path(), 8).exists());
}

#[test]
fn lock_released_after_write() {
    let dir = tempfile::tempdir().unwrap();
    cmd_sieve(6, dir.path(), &SieveConfig::default(), Vec::new()).unwrap();
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(names, vec!["lambda_n06.bin".to_string()]);
}
