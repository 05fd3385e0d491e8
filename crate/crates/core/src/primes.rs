//! Prime generation and factorization substrate.
//!
//! A [`PrimeTable`] is a bit-packed primality map over the odd integers of a
//! range, produced by a segmented sieve of Eratosthenes. A [`Factorizer`]
//! carries a list of sieved primes for trial division and batch window
//! factorization. Both are built once and then shared immutably.

use crate::error::{Error, Result};

/// In-memory budget for a single sieve call, in bitmap bytes.
///
/// One bit per odd integer: 2^31 bytes would cover a range of ~3.4e10.
const SIEVE_BYTE_BUDGET: u64 = 1 << 31;

/// Simple sieve of Eratosthenes, all primes <= `limit`.
pub fn simple_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Bit-packed primality over the odd integers of `[lo, hi)`.
///
/// The even prime 2 is handled specially by [`PrimeTable::is_prime`]; the
/// bitmap itself only has slots for odd candidates. Slot `i` corresponds to
/// the integer `(lo | 1) + 2 i`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    pub lo: u64,
    pub hi: u64,
    bits: Vec<u64>,
}

impl PrimeTable {
    fn first_odd(&self) -> u64 {
        self.lo | 1
    }

    fn slots(&self) -> u64 {
        (self.hi - self.lo).div_ceil(2)
    }

    /// Number of bitmap bytes, `ceil(ceil((hi-lo)/2) / 8)`.
    pub fn bitmap_len(&self) -> u64 {
        self.slots().div_ceil(8)
    }

    /// Raw bitmap, little-endian within each byte, exactly `bitmap_len` bytes.
    pub fn bitmap_bytes(&self) -> Vec<u8> {
        let len = self.bitmap_len() as usize;
        let mut out = vec![0u8; len];
        for (i, word) in self.bits.iter().enumerate() {
            for b in 0..8 {
                let idx = i * 8 + b;
                if idx < len {
                    out[idx] = (word >> (8 * b)) as u8;
                }
            }
        }
        out
    }

    /// Rebuild a table from a serialized bitmap.
    pub fn from_bitmap_bytes(lo: u64, hi: u64, bytes: &[u8]) -> Result<Self> {
        let mut table = PrimeTable {
            lo,
            hi,
            bits: Vec::new(),
        };
        if bytes.len() as u64 != table.bitmap_len() {
            return Err(Error::OutOfRange(format!(
                "bitmap length {} does not match range [{lo}, {hi})",
                bytes.len()
            )));
        }
        let words = bytes.len().div_ceil(8);
        let mut bits = vec![0u64; words];
        for (i, &b) in bytes.iter().enumerate() {
            bits[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        table.bits = bits;
        Ok(table)
    }

    #[inline]
    fn slot_of(&self, n: u64) -> Option<usize> {
        if n < self.lo || n >= self.hi || n.is_multiple_of(2) {
            return None;
        }
        Some(((n - self.first_odd()) / 2) as usize)
    }

    #[inline]
    fn get(&self, slot: usize) -> bool {
        self.bits[slot / 64] >> (slot % 64) & 1 == 1
    }

    /// Primality of `n`; panics if `n` is outside the table range.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(
            n >= self.lo && n < self.hi,
            "query {n} outside prime table range [{}, {})",
            self.lo,
            self.hi
        );
        if n == 2 {
            return true;
        }
        match self.slot_of(n) {
            Some(s) => self.get(s),
            None => false,
        }
    }

    /// All primes of the table in ascending order.
    pub fn primes(&self) -> Vec<u64> {
        self.primes_in(self.lo, self.hi)
    }

    /// Primes in `[from, to)` intersected with the table range, ascending.
    pub fn primes_in(&self, from: u64, to: u64) -> Vec<u64> {
        let from = from.max(self.lo);
        let to = to.min(self.hi);
        let mut out = Vec::new();
        if from >= to {
            return out;
        }
        if from <= 2 && 2 < to {
            out.push(2);
        }
        let mut n = from.max(3) | 1;
        while n < to {
            if let Some(s) = self.slot_of(n) {
                if self.get(s) {
                    out.push(n);
                }
            }
            n += 2;
        }
        out
    }

    /// Number of primes in the table range.
    pub fn count(&self) -> u64 {
        let odd: u64 = self.bits.iter().map(|w| w.count_ones() as u64).sum();
        odd + u64::from(self.lo <= 2 && 2 < self.hi)
    }
}

/// Segmented sieve of Eratosthenes over `[lo, hi)`.
///
/// Exact for any `2 <= lo < hi`; errors with `segment-required` if the bitmap
/// for the whole range would not fit the in-memory budget, in which case the
/// caller iterates over sub-ranges itself.
pub fn sieve_primes(lo: u64, hi: u64) -> Result<PrimeTable> {
    if lo < 2 || lo >= hi {
        return Err(Error::OutOfRange(format!("bad sieve range [{lo}, {hi})")));
    }
    let slots = (hi - lo).div_ceil(2);
    let bytes = slots.div_ceil(8);
    if bytes > SIEVE_BYTE_BUDGET {
        return Err(Error::SegmentRequired(bytes));
    }

    let first_odd = lo | 1;
    let mut bits = vec![u64::MAX; (slots as usize).div_ceil(64)];
    let clear = |bits: &mut [u64], slot: usize| {
        bits[slot / 64] &= !(1u64 << (slot % 64));
    };

    // 1 is not prime.
    if first_odd == 1 {
        clear(&mut bits, 0);
    }

    let root = hi.isqrt();
    let base = simple_primes(root);
    for &p in base.iter().skip(1) {
        // odd base primes only; evens have no slots
        let start = (lo.div_ceil(p).max(p)) * p;
        let mut m = if start % 2 == 0 { start + p } else { start };
        while m < hi {
            clear(&mut bits, ((m - first_odd) / 2) as usize);
            m += 2 * p;
        }
    }
    // An odd prime p in [lo, hi) with p <= root never got crossed off only if
    // p*p >= hi; crossing starts at max(p, ceil(lo/p))*p >= p*p, so small odd
    // primes inside the range survive correctly.

    // zero the tail beyond the last slot
    let mut table = PrimeTable { lo, hi, bits };
    let total = table.slots() as usize;
    let last_word = tail_mask(total);
    if let Some(w) = table.bits.last_mut() {
        *w &= last_word;
    }
    Ok(table)
}

fn tail_mask(total_slots: usize) -> u64 {
    let rem = total_slots % 64;
    if rem == 0 {
        u64::MAX
    } else {
        (1u64 << rem) - 1
    }
}

/// Deterministic Miller-Rabin for u64, used for spot checks.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factorization as (prime, exponent) pairs in ascending prime order.
pub type Factorization = Vec<(u64, u32)>;

/// Trial-division factorizer backed by a sieved prime list.
///
/// Fully factors any `n` whose second-largest prime factor is at most
/// `bound`; larger inputs return `needs-factorization` so the caller can
/// supply factors from elsewhere.
#[derive(Debug, Clone)]
pub struct Factorizer {
    primes: Vec<u64>,
    bound: u64,
}

impl Factorizer {
    pub fn new(bound: u64) -> Self {
        Factorizer {
            primes: simple_primes(bound.max(2)),
            bound: bound.max(2),
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Factor `n >= 1`.
    pub fn factor(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::OutOfRange("factor(0)".into()));
        }
        let mut rem = n;
        let mut out = Vec::new();
        for &p in &self.primes {
            if p * p > rem {
                break;
            }
            if rem.is_multiple_of(p) {
                let mut e = 0;
                while rem.is_multiple_of(p) {
                    rem /= p;
                    e += 1;
                }
                out.push((p, e));
            }
        }
        if rem > 1 {
            // rem has no factor <= min(bound, sqrt(rem)); it is prime unless
            // it is still above the certified square.
            if rem > self.bound * self.bound && !is_prime_u64(rem) {
                return Err(Error::NeedsFactorization(n));
            }
            out.push((rem, 1));
        }
        Ok(out)
    }

    /// Factor every integer of `[lo, hi)` with one shared sieving pass.
    ///
    /// Exact for any window with `hi <= bound^2`; much faster than per-element
    /// trial division when the window is dense.
    pub fn factor_window(&self, lo: u64, hi: u64) -> Result<Vec<Factorization>> {
        if lo < 1 || lo >= hi {
            return Err(Error::OutOfRange(format!("bad window [{lo}, {hi})")));
        }
        let root = hi.isqrt();
        if root > self.bound {
            return Err(Error::NeedsFactorization(hi));
        }
        let len = (hi - lo) as usize;
        let mut rem: Vec<u64> = (lo..hi).collect();
        let mut out: Vec<Factorization> = vec![Vec::new(); len];
        for &p in &self.primes {
            if p > root {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m < hi {
                let i = (m - lo) as usize;
                let mut e = 0;
                while rem[i].is_multiple_of(p) {
                    rem[i] /= p;
                    e += 1;
                }
                out[i].push((p, e));
                m += p;
            }
        }
        for i in 0..len {
            if rem[i] > 1 {
                out[i].push((rem[i], 1));
            }
        }
        Ok(out)
    }
}
