//! The three special prime families and their supporting geometry: the
//! digit-restricted sets, Piatetski-Shapiro membership, shifted two-squares
//! primes, the summand interval, and the anchored short window.

use num_bigint::BigUint;

use crate::arithmetic::{divisor_chi_sum_from_factors, gcd_u64};
use crate::error::{Error, Result};
use crate::primes::{Factorizer, PrimeTable};

/// Digit-density threshold: the floor exponent must satisfy
/// gamma > 8/9 + (2/3) log(10/9)/log 10 ≈ 0.9193.
pub fn gamma_floor() -> f64 {
    8.0 / 9.0 + 2.0 / 3.0 * (10.0f64 / 9.0).ln() / 10.0f64.ln()
}

/// Global parameters shared by every family-dependent computation.
///
/// The floor exponent c is kept as an exact rational c_num/c_den so that
/// membership in the floor-power sequence can be decided without rounding.
#[derive(Debug, Clone)]
pub struct FamilyConfig {
    /// Digit excluded from decimal expansions (0..=9).
    pub forbidden_digit: u8,
    /// Floor exponent numerator; c = c_num / c_den >= 1.
    pub c_num: u64,
    /// Floor exponent denominator.
    pub c_den: u64,
    /// Number of decimal digits; the ambient modulus is 10^k.
    pub k: u32,
    /// Odd target with 2·10^k <= n0 < 20·10^k.
    pub n0: u64,
    /// Log-power sharpness of the divisor split D = X^(1/2) (log X)^(-sharpness).
    pub split_sharpness: f64,
    /// Minor-set exponent delta: 9(1-gamma) + 12 delta < 1.
    pub minor_delta: f64,
    /// Short-window prefix length H (digits reserved for the anchor).
    pub window_prefix: u32,
}

impl FamilyConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        forbidden_digit: u8,
        c_num: u64,
        c_den: u64,
        k: u32,
        n0: u64,
        split_sharpness: f64,
        minor_delta: f64,
        window_prefix: u32,
    ) -> Result<Self> {
        let g = gcd_u64(c_num, c_den);
        let cfg = FamilyConfig {
            forbidden_digit,
            c_num: c_num / g,
            c_den: c_den / g,
            k,
            n0,
            split_sharpness,
            minor_delta,
            window_prefix,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.forbidden_digit > 9 {
            return fail(format!(
                "forbidden digit {} not in 0..=9",
                self.forbidden_digit
            ));
        }
        if self.c_den == 0 || self.c_num < self.c_den {
            return fail(format!(
                "floor exponent {}/{} below 1",
                self.c_num, self.c_den
            ));
        }
        if self.gamma() <= gamma_floor() {
            return fail(format!(
                "gamma = {} must exceed the digit-density threshold {}",
                self.gamma(),
                gamma_floor()
            ));
        }
        if self.k == 0 || self.k > 17 {
            return fail(format!("k = {} out of range", self.k));
        }
        let x = self.x();
        if self.n0.is_multiple_of(2) || self.n0 < 2 * x || self.n0 >= 20 * x {
            return fail(format!(
                "target {} must be odd in [2·10^k, 20·10^k)",
                self.n0
            ));
        }
        if self.minor_delta <= 0.0 || 9.0 * (1.0 - self.gamma()) + 12.0 * self.minor_delta >= 1.0 {
            return fail(format!(
                "delta = {} violates 9(1-gamma) + 12 delta < 1",
                self.minor_delta
            ));
        }
        if self.split_sharpness <= 0.0 {
            return fail("split sharpness must be positive".into());
        }
        if self.window_prefix < 1 || self.window_prefix > self.k {
            return fail(format!("window prefix {} not in 1..=k", self.window_prefix));
        }
        Ok(())
    }

    /// The ambient modulus X = 10^k.
    pub fn x(&self) -> u64 {
        10u64.pow(self.k)
    }

    /// Floor exponent c as a float.
    pub fn c(&self) -> f64 {
        self.c_num as f64 / self.c_den as f64
    }

    /// gamma = 1/c.
    pub fn gamma(&self) -> f64 {
        self.c_den as f64 / self.c_num as f64
    }

    /// Digit-set density constant: 5/6 when the forbidden digit is coprime to
    /// 10, otherwise 10/9.
    pub fn kappa(&self) -> f64 {
        if gcd_u64(10, self.forbidden_digit as u64) == 1 {
            5.0 / 6.0
        } else {
            10.0 / 9.0
        }
    }

    /// |A| = 9^k.
    pub fn digit_set_size(&self) -> u64 {
        9u64.pow(self.k)
    }

    /// Divisor split point D = X^(1/2) (log X)^(-sharpness).
    pub fn divisor_split(&self) -> f64 {
        let x = self.x() as f64;
        x.sqrt() * x.ln().powf(-self.split_sharpness)
    }

    /// The summand interval for this target.
    pub fn interval(&self) -> IntInterval {
        interval_int(self.n0, self.x())
    }
}

/// The unique power of ten X = 10^k with 2X <= n0 < 20X.
pub fn choose_x(n0: u64) -> Result<(u32, u64)> {
    if n0 < 20 {
        return Err(Error::TooSmall(n0));
    }
    let mut k = 1u32;
    let mut x = 10u64;
    while 20 * x <= n0 {
        x *= 10;
        k += 1;
    }
    debug_assert!(2 * x <= n0 && n0 < 20 * x);
    Ok((k, x))
}

/// An interval with endpoints that are exact multiples of 1/8.
///
/// Stored as eighths; `open_lo` distinguishes the half-open-below summand
/// interval from the closed variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntInterval {
    pub lo_eighths: i128,
    pub hi_eighths: i128,
    pub open_lo: bool,
}

impl IntInterval {
    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        let v = 8 * n as i128;
        let above = if self.open_lo {
            v > self.lo_eighths
        } else {
            v >= self.lo_eighths
        };
        above && v <= self.hi_eighths
    }

    /// Smallest integer inside.
    pub fn first(&self) -> u64 {
        let f = if self.open_lo {
            self.lo_eighths.div_euclid(8) + 1
        } else {
            self.lo_eighths.div_euclid(8) + i128::from(self.lo_eighths.rem_euclid(8) != 0)
        };
        f.max(0) as u64
    }

    /// Largest integer inside.
    pub fn last(&self) -> u64 {
        self.hi_eighths.div_euclid(8).max(0) as u64
    }

    /// Exact length numerator over 8.
    pub fn len_eighths(&self) -> i128 {
        self.hi_eighths - self.lo_eighths
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo_eighths as f64 / 8.0
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi_eighths as f64 / 8.0
    }
}

/// The summand interval (n0/2 - X/4, n0/2 - X/8], length X/8.
pub fn interval_int(n0: u64, x: u64) -> IntInterval {
    let n0 = n0 as i128;
    let x = x as i128;
    IntInterval {
        lo_eighths: 4 * n0 - 2 * x,
        hi_eighths: 4 * n0 - x,
        open_lo: true,
    }
}

/// Closed variant [n0/8 - X/8, n0/4 - X/4] kept for experiments; the
/// half-open interval above is the one used throughout.
pub fn interval_int_alt(n0: u64, x: u64) -> IntInterval {
    let n0 = n0 as i128;
    let x = x as i128;
    IntInterval {
        lo_eighths: n0 - x,
        hi_eighths: 2 * n0 - 2 * x,
        open_lo: false,
    }
}

/// True iff no digit of `n`, written with exactly `k` digits (leading zeros
/// included), equals the forbidden digit.
pub fn digit_member_k(n: u64, k: u32, forbidden: u8) -> Result<bool> {
    if n >= 10u64.pow(k) {
        return Err(Error::OutOfRange(format!("{n} has more than {k} digits")));
    }
    let mut m = n;
    for _ in 0..k {
        if (m % 10) as u8 == forbidden {
            return Ok(false);
        }
        m /= 10;
    }
    Ok(true)
}

/// Digit membership against a config's k and forbidden digit.
pub fn digit_member(n: u64, cfg: &FamilyConfig) -> Result<bool> {
    digit_member_k(n, cfg.k, cfg.forbidden_digit)
}

/// All members of the k-digit restricted set, ascending. 9^k entries.
pub fn digit_set_members(k: u32, forbidden: u8) -> Vec<u64> {
    let mut out = Vec::with_capacity(9usize.pow(k));
    let mut digits = vec![0u8; k as usize];
    for d in digits.iter_mut() {
        *d = u8::from(forbidden == 0);
    }
    loop {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * 10 + d as u64;
        }
        out.push(v);
        // increment in base 10 skipping the forbidden digit
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            let mut d = digits[i] + 1;
            if d == forbidden {
                d += 1;
            }
            if d > 9 {
                digits[i] = u8::from(forbidden == 0);
                i += 1;
            } else {
                digits[i] = d;
                break;
            }
        }
    }
}

/// floor(n^(u/v)) in exact integer arithmetic.
///
/// A float estimate decides the common case; when the estimate lands within a
/// guard band of an integer boundary the value is confirmed by big-integer
/// power comparison, so floor boundaries are never mis-rounded.
pub fn floor_pow_rational(n: u64, u: u64, v: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    if u == v {
        return n;
    }
    let t = (n as f64).ln() * u as f64 / v as f64;
    let est = t.exp();
    // relative float error: ln/exp each ~1ulp, amplified by t
    let margin = est * (t.abs() + 4.0) * 1e-15 + 1e-9;
    let frac = est.fract();
    if frac > margin && frac < 1.0 - margin && est < 9.0e15 {
        return est.floor() as u64;
    }
    // exact resolve: floor((n^u)^(1/v))
    let pow = BigUint::from(n).pow(u as u32);
    let root = pow.nth_root(v as u32);
    root.try_into().expect("floor power exceeds u64")
}

/// True iff p = floor(m^c) for some integer m, with c = c_num/c_den.
///
/// Decided by locating the smallest m with m^c >= p and testing m^c < p+1,
/// all comparisons done on integer powers.
pub fn ps_member(p: u64, c_num: u64, c_den: u64) -> bool {
    assert!(p >= 1 && c_num >= c_den && c_den >= 1);
    if c_num == c_den {
        return true;
    }
    // candidate from floats, then correct by exact evaluation
    let est = (p as f64).powf(c_den as f64 / c_num as f64);
    let mut m = est.floor().max(1.0) as u64;
    while m > 1 && floor_pow_rational(m, c_num, c_den) >= p {
        m -= 1;
    }
    while floor_pow_rational(m, c_num, c_den) < p {
        m += 1;
    }
    floor_pow_rational(m, c_num, c_den) == p
}

/// All floor-power primes in the interval, ascending, paired with nothing:
/// membership is generated forward (p = floor(m^c) for consecutive m), which
/// covers every candidate exactly once.
pub fn ps_primes_in(interval: &IntInterval, cfg: &FamilyConfig, table: &PrimeTable) -> Vec<u64> {
    let lo = interval.first();
    let hi = interval.last();
    if hi < lo {
        return Vec::new();
    }
    assert!(
        table.lo <= lo.max(2) && hi < table.hi,
        "prime table [{}, {}) does not cover [{lo}, {hi}]",
        table.lo,
        table.hi
    );
    if cfg.c_num == cfg.c_den {
        return table.primes_in(lo, hi + 1);
    }
    let mut out = Vec::new();
    // first m with floor(m^c) >= lo
    let mut m = ((lo.max(1) as f64).powf(cfg.gamma()).floor() as u64).max(1);
    while m > 1 && floor_pow_rational(m, cfg.c_num, cfg.c_den) >= lo {
        m -= 1;
    }
    loop {
        let p = floor_pow_rational(m, cfg.c_num, cfg.c_den);
        if p > hi {
            break;
        }
        if p >= lo.max(2) && interval.contains(p) && table.is_prime(p) && out.last() != Some(&p) {
            out.push(p);
        }
        m += 1;
    }
    out
}

/// Primes p in the interval whose shift p-1 is a sum of two squares, each
/// paired with the signed-pair count r(p-1) > 0.
pub fn quadratic_primes_in(
    interval: &IntInterval,
    table: &PrimeTable,
    factorizer: &Factorizer,
) -> Result<Vec<(u64, u64)>> {
    let lo = interval.first();
    let hi = interval.last();
    if hi < lo {
        return Ok(Vec::new());
    }
    let w_lo = lo.saturating_sub(1).max(1);
    let factors = factorizer.factor_window(w_lo, hi)?;
    let mut out = Vec::new();
    for p in table.primes_in(lo.max(2), hi + 1) {
        if !interval.contains(p) {
            continue;
        }
        let chi_sum = divisor_chi_sum_from_factors(&factors[(p - 1 - w_lo) as usize]);
        if chi_sum > 0 {
            out.push((p, 4 * chi_sum as u64));
        }
    }
    Ok(out)
}

/// The anchored short window: a half-open block of 10^(k-H) consecutive
/// integers whose H-digit prefix avoids the forbidden digit and sits within
/// (3/2)·10^(k-2) of 5·10^(k-1).
#[derive(Debug, Clone)]
pub struct ShortIntervalWindow {
    pub n_star: u64,
    pub width: u64,
    pub k: u32,
    pub prefix_len: u32,
    pub forbidden_digit: u8,
}

impl ShortIntervalWindow {
    /// Window end (exclusive).
    pub fn end(&self) -> u64 {
        self.n_star + self.width
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.n_star && n < self.end()
    }

    /// Members of the digit set inside the window, ascending.
    ///
    /// n is a member iff its low k-H digits avoid the forbidden digit; the
    /// prefix avoids it by construction.
    pub fn digit_members(&self) -> Vec<u64> {
        digit_set_members(self.k - self.prefix_len, self.forbidden_digit)
            .into_iter()
            .map(|n2| self.n_star + n2)
            .collect()
    }

    /// |A ∩ window| = 9^(k-H).
    pub fn member_count(&self) -> u64 {
        9u64.pow(self.k - self.prefix_len)
    }
}

/// Build the window anchor from the config.
///
/// The prefix takes leading digits "49" (or "509" when 4 is forbidden, "50"
/// when 9 is), padded to H digits with the smallest digit that is not
/// forbidden. Both window invariants are verified before returning.
pub fn construct_window(cfg: &FamilyConfig) -> Result<ShortIntervalWindow> {
    let h = cfg.window_prefix;
    if h < 3 {
        return Err(Error::WindowTooShort(h));
    }
    if h > cfg.k {
        return Err(Error::OutOfRange(format!(
            "prefix {h} exceeds k = {}",
            cfg.k
        )));
    }
    let a0 = cfg.forbidden_digit;
    let lead: &[u8] = match a0 {
        4 => &[5, 0, 9],
        9 => &[5, 0],
        _ => &[4, 9],
    };
    let pad = if a0 == 0 { 1u8 } else { 0u8 };
    let mut prefix = 0u64;
    for i in 0..h {
        let d = *lead.get(i as usize).unwrap_or(&pad);
        debug_assert_ne!(d, a0);
        prefix = prefix * 10 + d as u64;
    }
    let width = 10u64.pow(cfg.k - h);
    let n_star = prefix * width;

    // anchor proximity to the middle of the ambient range
    let center = 5 * 10u64.pow(cfg.k - 1) as i128;
    let slack = 15 * 10u64.pow(cfg.k - 2) as i128 / 10;
    if (n_star as i128 - center).abs() > slack {
        return Err(Error::InvalidConfig(format!(
            "window anchor {n_star} strays from the range center"
        )));
    }
    // prefix digits of n_star avoid the forbidden digit, so membership of
    // n_star + n2 reduces to membership of the low digits of n2
    for i in 0..h {
        let d = (n_star / 10u64.pow(cfg.k - 1 - i)) % 10;
        if d as u8 == a0 {
            return Err(Error::InvalidConfig(format!(
                "anchor digit {d} collides at position {i}"
            )));
        }
    }
    Ok(ShortIntervalWindow {
        n_star,
        width,
        k: cfg.k,
        prefix_len: h,
        forbidden_digit: a0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_primes;

    fn cfg_k(k: u32) -> FamilyConfig {
        let x = 10u64.pow(k);
        FamilyConfig::new(7, 21, 20, k, 4 * x + 1, 1.0, 0.04, 3).unwrap()
    }

    #[test]
    fn choose_x_examples() {
        assert_eq!(choose_x(4_000_000).unwrap(), (6, 1_000_000));
        assert_eq!(choose_x(21).unwrap(), (1, 10));
        assert_eq!(choose_x(19_000).unwrap(), (3, 1_000));
        assert!(matches!(choose_x(19), Err(Error::TooSmall(19))));
    }

    #[test]
    fn interval_examples() {
        let i = interval_int(4_000_000, 1_000_000);
        assert_eq!(i.first(), 1_750_001);
        assert_eq!(i.last(), 1_875_000);
        assert_eq!(i.len_eighths(), 1_000_000);
        assert!(!i.contains(1_750_000));
        assert!(i.contains(1_875_000));

        let j = interval_int(21, 10);
        assert_eq!((j.first(), j.last()), (9, 9));
    }

    #[test]
    fn interval_alt_variant() {
        let i = interval_int_alt(4_000_000, 1_000_000);
        assert!(i.contains(i.first()));
        assert_eq!(i.lo_f64(), 4_000_000.0 / 8.0 - 125_000.0);
    }

    #[test]
    fn config_validation() {
        assert!(FamilyConfig::new(7, 21, 20, 4, 40_001, 1.0, 0.04, 3).is_ok());
        // even target
        assert!(FamilyConfig::new(7, 21, 20, 4, 40_000, 1.0, 0.04, 3).is_err());
        // gamma at the threshold
        assert!(FamilyConfig::new(7, 10, 9, 4, 40_001, 1.0, 0.01, 3).is_err());
        // delta too large for gamma
        assert!(FamilyConfig::new(7, 21, 20, 4, 40_001, 1.0, 0.08, 3).is_err());
    }

    #[test]
    fn kappa_values() {
        assert_eq!(cfg_k(4).kappa(), 5.0 / 6.0);
        let even = FamilyConfig::new(4, 21, 20, 4, 40_001, 1.0, 0.04, 3).unwrap();
        assert_eq!(even.kappa(), 10.0 / 9.0);
    }

    #[test]
    fn digit_membership_examples() {
        assert!(digit_member_k(1234, 4, 9).unwrap());
        assert!(!digit_member_k(105, 3, 0).unwrap());
        assert!(matches!(
            digit_member_k(1000, 3, 0),
            Err(Error::OutOfRange(_))
        ));
        let count = (0u64..100)
            .filter(|&n| digit_member_k(n, 2, 7).unwrap())
            .count();
        assert_eq!(count, 81);
    }

    #[test]
    fn digit_set_enumeration_size() {
        for k in 1..=4 {
            for a0 in [0u8, 5, 7, 9] {
                let members = digit_set_members(k, a0);
                assert_eq!(members.len(), 9usize.pow(k), "k = {k}, a0 = {a0}");
                for &m in &members {
                    assert!(digit_member_k(m, k, a0).unwrap());
                }
                // ascending and unique
                assert!(members.windows(2).all(|w| w[0] < w[1]));
            }
        }
        // full enumeration stays 9^k through k = 6
        for k in 5..=6 {
            assert_eq!(digit_set_members(k, 7).len(), 9usize.pow(k), "k = {k}");
        }
    }

    #[test]
    fn digit_membership_matches_string_scan() {
        for seed in 0u64..100_000 {
            let n = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) % 1_000_000;
            for a0 in [0u8, 3, 9] {
                let s = format!("{n:06}");
                let by_string = !s.contains(char::from(b'0' + a0));
                assert_eq!(
                    digit_member_k(n, 6, a0).unwrap(),
                    by_string,
                    "n = {n}, a0 = {a0}"
                );
            }
        }
    }

    #[test]
    fn coprime_density_matches_kappa() {
        // members coprime to 10 over |A| equals phi(10)·kappa/10 exactly
        let k = 4;
        for (a0, expect_num, expect_den) in [(7u8, 1u64, 3u64), (4, 4, 9)] {
            let members = digit_set_members(k, a0);
            let coprime = members.iter().filter(|&&m| gcd_u64(m, 10) == 1).count() as u64;
            assert_eq!(coprime * expect_den, members.len() as u64 * expect_num);
        }
    }

    #[test]
    fn floor_pow_exact_cases() {
        assert_eq!(floor_pow_rational(4, 3, 2), 8);
        assert_eq!(floor_pow_rational(3, 3, 2), 5);
        assert_eq!(floor_pow_rational(10, 21, 20), 11);
        // 10^6.3 = 1995262.31...
        assert_eq!(floor_pow_rational(1_000_000, 21, 20), 1_995_262);
    }

    #[test]
    fn ps_member_examples() {
        assert!(ps_member(2, 21, 20));
        assert!(ps_member(11, 21, 20));
        for p in [2u64, 3, 17, 1009] {
            assert!(ps_member(p, 1, 1));
        }
        // c = 3/2 skips 7: floor(3^1.5) = 5, floor(4^1.5) = 8
        assert!(ps_member(8, 3, 2));
        assert!(!ps_member(7, 3, 2));
    }

    #[test]
    fn ps_member_matches_forward_map() {
        let (c_num, c_den) = (21u64, 20u64);
        let limit = 100_000u64;
        let mut image = std::collections::HashSet::new();
        let mut m = 1u64;
        loop {
            let p = floor_pow_rational(m, c_num, c_den);
            if p >= limit {
                break;
            }
            image.insert(p);
            m += 1;
        }
        for p in 2..limit {
            assert_eq!(ps_member(p, c_num, c_den), image.contains(&p), "p = {p}");
        }
    }

    #[test]
    fn ps_primes_enumeration() {
        let cfg = cfg_k(4);
        let table = sieve_primes(2, 40_000).unwrap();
        let interval = cfg.interval();
        let ps = ps_primes_in(&interval, &cfg, &table);
        // against direct membership filtering
        let direct: Vec<u64> = table
            .primes_in(interval.first(), interval.last() + 1)
            .into_iter()
            .filter(|&p| ps_member(p, cfg.c_num, cfg.c_den))
            .collect();
        assert_eq!(ps, direct);
        assert!(!ps.is_empty());

        // unit exponent keeps every prime
        let unit = FamilyConfig::new(7, 1, 1, 4, 40_001, 1.0, 0.04, 3).unwrap();
        let all = ps_primes_in(&interval, &unit, &table);
        assert_eq!(all, table.primes_in(interval.first(), interval.last() + 1));
    }

    #[test]
    fn ps_density_ratio_sane() {
        // thinned count over prime count tracks the aggregate density
        let cfg = cfg_k(5);
        let table = sieve_primes(2, 200_000).unwrap();
        let interval = cfg.interval();
        let ps = ps_primes_in(&interval, &cfg, &table).len() as f64;
        let all = table.primes_in(interval.first(), interval.last() + 1).len() as f64;
        let expected: f64 = table
            .primes_in(interval.first(), interval.last() + 1)
            .iter()
            .map(|&p| cfg.gamma() * (p as f64).powf(cfg.gamma() - 1.0))
            .sum();
        let ratio = ps / expected;
        assert!(
            (0.7..=1.005).contains(&ratio),
            "ratio {ratio}, ps {ps}, primes {all}"
        );
    }

    #[test]
    fn quadratic_prime_examples() {
        let table = sieve_primes(2, 100).unwrap();
        let f = Factorizer::new(100);
        let all = IntInterval {
            lo_eighths: 8,
            hi_eighths: 80,
            open_lo: false,
        };
        let q = quadratic_primes_in(&all, &table, &f).unwrap();
        let by_p: std::collections::HashMap<u64, u64> = q.into_iter().collect();
        assert_eq!(by_p.get(&5), Some(&4));
        assert_eq!(by_p.get(&3), Some(&4));
        assert!(!by_p.contains_key(&7));
    }

    #[test]
    fn quadratic_multiplicity_matches_lattice() {
        let table = sieve_primes(2, 10_000).unwrap();
        let f = Factorizer::new(200);
        let iv = IntInterval {
            lo_eighths: 3 * 8,
            hi_eighths: 9_999 * 8,
            open_lo: false,
        };
        for (p, r) in quadratic_primes_in(&iv, &table, &f).unwrap() {
            assert_eq!(r, crate::arithmetic::r_two_squares_brute(p - 1), "p = {p}");
        }
    }

    #[test]
    fn window_examples() {
        let cfg = FamilyConfig::new(7, 21, 20, 6, 4_000_001, 1.0, 0.04, 3).unwrap();
        let w = construct_window(&cfg).unwrap();
        assert_eq!(w.n_star, 490_000);
        assert_eq!((w.n_star as i64 - 500_000).unsigned_abs(), 10_000);

        let cfg4 = FamilyConfig::new(4, 21, 20, 6, 4_000_001, 1.0, 0.04, 3).unwrap();
        let w4 = construct_window(&cfg4).unwrap();
        assert_eq!(w4.n_star, 509_000);
        assert_eq!((w4.n_star as i64 - 500_000).unsigned_abs(), 9_000);
    }

    #[test]
    fn window_too_short() {
        let mut cfg = cfg_k(4);
        cfg.window_prefix = 2;
        assert!(matches!(
            construct_window(&cfg),
            Err(Error::WindowTooShort(2))
        ));
    }

    #[test]
    fn window_invariants_all_digits() {
        for a0 in 0u8..=9 {
            for k in 3u32..=9 {
                for h in 3..=k.min(6) {
                    let x = 10u64.pow(k);
                    let cfg = FamilyConfig::new(a0, 21, 20, k, 4 * x + 1, 1.0, 0.04, h).unwrap();
                    let w = construct_window(&cfg)
                        .unwrap_or_else(|e| panic!("a0={a0} k={k} h={h}: {e}"));
                    let center = 5 * 10u64.pow(k - 1) as i128;
                    let slack = 3 * 10u64.pow(k - 2) as i128 / 2;
                    assert!(
                        (w.n_star as i128 - center).abs() <= slack,
                        "a0={a0} k={k} h={h}"
                    );

                    // membership of window members reduces to low-digit membership
                    let low = k - h;
                    let step = (10u64.pow(low) / 37).max(1);
                    let mut n2 = 0u64;
                    while n2 < 10u64.pow(low) {
                        if digit_member_k(n2, low, a0).unwrap() {
                            assert!(digit_member_k(w.n_star + n2, k, a0).unwrap());
                        }
                        n2 += step;
                    }
                }
            }
        }
    }

    #[test]
    fn window_member_count() {
        let cfg = cfg_k(5);
        let w = construct_window(&cfg).unwrap();
        let members = w.digit_members();
        assert_eq!(members.len() as u64, w.member_count());
        for &m in &members {
            assert!(w.contains(m));
            assert!(digit_member_k(m, cfg.k, cfg.forbidden_digit).unwrap());
        }
    }
}
