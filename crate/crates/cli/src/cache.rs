//! Prime-cache persistence: fixed-width little-endian header plus the raw
//! bitmap, byte-exact across platforms.
//!
//! Layout: magic "GBLB1" (5) | version u16 | lo u64 | hi u64 |
//! bitmap_len u64 | checksum u64 (FNV-1a over the bitmap) | bitmap bytes.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use goldbach_core::primes::PrimeTable;

pub const MAGIC: [u8; 5] = *b"GBLB1";
pub const VERSION: u16 = 1;

#[derive(Debug)]
pub enum CacheError {
    Io(std::io::Error),
    Corrupt(String),
}

impl fmt::Display for CacheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheError::Io(e) => write!(f, "cache io: {e}"),
            CacheError::Corrupt(what) => write!(f, "corrupt-cache: {what}"),
        }
    }
}

impl std::error::Error for CacheError {}

impl From<std::io::Error> for CacheError {
    fn from(e: std::io::Error) -> Self {
        CacheError::Io(e)
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn write_cache(path: &Path, table: &PrimeTable) -> Result<(), CacheError> {
    let bitmap = table.bitmap_bytes();
    let mut out = Vec::with_capacity(39 + bitmap.len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&table.lo.to_le_bytes());
    out.extend_from_slice(&table.hi.to_le_bytes());
    out.extend_from_slice(&(bitmap.len() as u64).to_le_bytes());
    out.extend_from_slice(&fnv1a64(&bitmap).to_le_bytes());
    out.extend_from_slice(&bitmap);
    let mut file = std::fs::File::create(path)?;
    file.write_all(&out)?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<PrimeTable, CacheError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 39 {
        return Err(CacheError::Corrupt("file shorter than the header".into()));
    }
    if bytes[..5] != MAGIC {
        return Err(CacheError::Corrupt("bad magic".into()));
    }
    let u16_at = |i: usize| u16::from_le_bytes(bytes[i..i + 2].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    if u16_at(5) != VERSION {
        return Err(CacheError::Corrupt(format!(
            "version {} unsupported",
            u16_at(5)
        )));
    }
    let lo = u64_at(7);
    let hi = u64_at(15);
    let bitmap_len = u64_at(23);
    let checksum = u64_at(31);
    let expected_len = (hi.saturating_sub(lo)).div_ceil(2).div_ceil(8);
    if bitmap_len != expected_len {
        return Err(CacheError::Corrupt(format!(
            "bitmap length {bitmap_len} inconsistent with range [{lo}, {hi})"
        )));
    }
    let bitmap = &bytes[39..];
    if bitmap.len() as u64 != bitmap_len {
        return Err(CacheError::Corrupt("truncated bitmap".into()));
    }
    if fnv1a64(bitmap) != checksum {
        return Err(CacheError::Corrupt("checksum mismatch".into()));
    }
    PrimeTable::from_bitmap_bytes(lo, hi, bitmap).map_err(|e| CacheError::Corrupt(e.to_string()))
}
