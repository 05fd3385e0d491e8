//! Elementary multiplicative functions: the non-principal character mod 4,
//! the two-squares representation count, twisted Ramanujan-type sums, and the
//! singular series together with its character-twisted refinement.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::primes::{simple_primes, Factorization, Factorizer};

/// Value of the non-principal Dirichlet character mod 4: one of -1, 0, +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Character4Value(pub i8);

impl Character4Value {
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }
}

/// χ(n) for the non-principal character mod 4.
#[inline]
pub fn chi4(n: u64) -> Character4Value {
    Character4Value(match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    })
}

/// Σ_{d|n} χ(d), from a factorization. Multiplicative, always >= 0.
///
/// Per prime power p^e the local factor is e+1 for p ≡ 1 (mod 4), the parity
/// indicator of e for p ≡ 3 (mod 4), and 1 for p = 2.
pub fn divisor_chi_sum_from_factors(factors: &Factorization) -> i64 {
    let mut acc: i64 = 1;
    for &(p, e) in factors {
        match p % 4 {
            1 => acc *= e as i64 + 1,
            3 if e % 2 == 1 => {
                return 0;
            }
            _ => {}
        }
    }
    acc
}

/// Σ_{d|n} χ(d) for n >= 1.
pub fn divisor_chi_sum(n: u64, factorizer: &Factorizer) -> Result<i64> {
    Ok(divisor_chi_sum_from_factors(&factorizer.factor(n)?))
}

/// Number of representations n = x^2 + y^2 over signed ordered pairs,
/// equal to 4 Σ_{d|n} χ(d).
pub fn r_two_squares(n: u64, factorizer: &Factorizer) -> Result<u64> {
    Ok(4 * divisor_chi_sum(n, factorizer)? as u64)
}

/// Same count, straight from a factorization.
pub fn r_two_squares_from_factors(factors: &Factorization) -> u64 {
    4 * divisor_chi_sum_from_factors(factors) as u64
}

/// Brute-force lattice count of n = x^2 + y^2, the oracle for the
/// divisor-sum route.
pub fn r_two_squares_brute(n: u64) -> u64 {
    let mut count = 0u64;
    let mut x = 0u64;
    while x * x <= n {
        let rest = n - x * x;
        let y = rest.isqrt();
        if y * y == rest {
            let signs_x = if x == 0 { 1 } else { 2 };
            let signs_y = if y == 0 { 1 } else { 2 };
            count += signs_x * signs_y;
        }
        x += 1;
    }
    count
}

/// All divisors of n from its factorization, unsorted.
pub fn divisors_from_factors(factors: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in factors {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out
}

/// Möbius function of n (trial division; intended for small moduli).
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut rem = n;
    let mut count = 0;
    let mut p = 2u64;
    while p * p <= rem {
        if rem.is_multiple_of(p) {
            rem /= p;
            if rem.is_multiple_of(p) {
                return 0;
            }
            count += 1;
        }
        p += 1;
    }
    if rem > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient of n (trial division; intended for small moduli).
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut rem = n;
    let mut phi = n;
    let mut p = 2u64;
    while p * p <= rem {
        if rem.is_multiple_of(p) {
            while rem.is_multiple_of(p) {
                rem /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rem > 1 {
        phi -= phi / rem;
    }
    phi
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

fn e_of(x: f64) -> Complex64 {
    let t = std::f64::consts::TAU * x;
    Complex64::new(t.cos(), t.sin())
}

/// Twisted Ramanujan-type sum: Σ e(cs/q) over 1 <= s <= q with (s,q) = 1 and
/// s ≡ l (mod gcd(q,d)).
///
/// With d = 1 the congruence is vacuous and this is the classical Ramanujan
/// sum c_q(c).
pub fn ramanujan_like_sum(c: i64, q: u64, d: u64, l: i64) -> Complex64 {
    assert!(q >= 1 && d >= 1);
    let g = gcd_u64(q, d);
    let l_red = l.rem_euclid(g as i64) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 1..=q {
        if gcd_u64(s, q) != 1 || s % g != l_red {
            continue;
        }
        let phase = (c.rem_euclid(q as i64) as u64 * s) % q;
        acc += e_of(phase as f64 / q as f64);
    }
    acc
}

/// A truncated Euler product value with a certified tail bound.
#[derive(Debug, Clone, Copy)]
pub struct SingularSeriesValue {
    pub value: f64,
    /// Largest prime included in the truncated product.
    pub cutoff: u64,
    /// The omitted tail factor lies within `[1 - bound, 1 + bound]`.
    pub truncation_bound: f64,
}

/// Local factors of the classical ternary singular series at odd `n0`:
/// `(1 - 1/(p-1)^2)` at primes dividing n0, `(1 + 1/(p-1)^3)` elsewhere,
/// over all primes p <= cutoff. Accumulated in log space.
pub fn singular_series(n0: u64, cutoff: u64) -> Result<SingularSeriesValue> {
    if n0 < 3 || cutoff < 3 {
        return Err(Error::TooSmall(n0.min(cutoff)));
    }
    let primes = simple_primes(cutoff);
    Ok(SingularSeriesValue {
        value: singular_series_over(n0, &primes)?,
        cutoff,
        truncation_bound: singular_tail_bound(n0, cutoff),
    })
}

/// Same product over a caller-supplied ascending prime list, for callers that
/// evaluate many targets against one list.
pub fn singular_series_over(n0: u64, primes: &[u64]) -> Result<f64> {
    if n0.is_multiple_of(2) {
        return Err(Error::EvenInput);
    }
    let mut log_acc = 0.0f64;
    for &p in primes {
        let pm = (p - 1) as f64;
        let factor = if n0.is_multiple_of(p) {
            1.0 - 1.0 / (pm * pm)
        } else {
            1.0 + 1.0 / (pm * pm * pm)
        };
        log_acc += factor.ln();
    }
    Ok(log_acc.exp())
}

/// Tail factor bound for the product over p > cutoff.
///
/// Generic primes contribute at most Σ_{m >= cutoff} m^{-3} < 1/(2 (cutoff-1)^2)
/// in log; each prime divisor of n0 above the cutoff flips its factor and
/// costs at most 2/(cutoff-1)^2 more, and there are at most
/// log n0 / log cutoff of them.
fn singular_tail_bound(n0: u64, cutoff: u64) -> f64 {
    let c = (cutoff - 1) as f64;
    let generic = 1.0 / (2.0 * c * c);
    let extra = 2.0 * ((n0 as f64).ln() / (cutoff as f64).ln()) / (c * c);
    let log_bound = generic + extra;
    log_bound.exp_m1()
}

/// χ-twisted refinement π·𝔖(n0)·Π(three twisted local products), truncated at
/// `cutoff`. The twisted factor at p depends on whether p divides n0, n0 - 1,
/// or neither.
pub fn singular_series_star(n0: u64, cutoff: u64) -> Result<SingularSeriesValue> {
    let base = singular_series(n0, cutoff)?;
    let primes = simple_primes(cutoff);
    let mut log_acc = 0.0f64;
    for &p in &primes {
        log_acc += star_local_factor(n0, p).ln();
    }
    Ok(SingularSeriesValue {
        value: std::f64::consts::PI * base.value * log_acc.exp(),
        cutoff,
        // each twisted factor sits inside (1 - 3/p^2, 1 + 3/p^2)
        truncation_bound: base.truncation_bound + 3.0 / ((cutoff as f64) * (cutoff as f64)),
    })
}

/// One local factor of the twisted product; exactly 1 at p = 2 since χ
/// vanishes on even arguments.
pub fn star_local_factor(n0: u64, p: u64) -> f64 {
    let chi = chi4(p).as_i64() as f64;
    if chi == 0.0 {
        return 1.0;
    }
    let pf = p as f64;
    if n0.is_multiple_of(p) {
        1.0 + chi / (pf * (pf - 1.0))
    } else if (n0 - 1).is_multiple_of(p) {
        1.0 + chi * (2.0 * pf - 3.0) / (pf * (pf * pf - 3.0 * pf + 3.0))
    } else {
        1.0 + chi * (pf - 3.0) / (pf * (pf * pf - 3.0 * pf + 3.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorizer() -> Factorizer {
        Factorizer::new(100_000)
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi4(1).0, 1);
        assert_eq!(chi4(2).0, 0);
        assert_eq!(chi4(7).0, -1);
        assert_eq!(chi4(5).0, 1);
    }

    #[test]
    fn chi_completely_multiplicative() {
        for m in 1u64..60 {
            for n in 1u64..60 {
                assert_eq!(chi4(m * n).0, chi4(m).0 * chi4(n).0);
            }
        }
    }

    #[test]
    fn divisor_chi_sum_examples() {
        let f = factorizer();
        assert_eq!(divisor_chi_sum(5, &f).unwrap(), 2);
        assert_eq!(divisor_chi_sum(9, &f).unwrap(), 1);
        assert_eq!(divisor_chi_sum(2, &f).unwrap(), 1);
    }

    #[test]
    fn divisor_chi_sum_matches_direct_enumeration() {
        let f = factorizer();
        for n in 1u64..=2000 {
            let direct: i64 = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| chi4(d).as_i64())
                .sum();
            assert_eq!(divisor_chi_sum(n, &f).unwrap(), direct, "n = {n}");
        }
    }

    #[test]
    fn divisor_chi_sum_multiplicative() {
        let f = factorizer();
        for m in 1u64..200 {
            for n in 1u64..200 {
                if gcd_u64(m, n) == 1 {
                    let lhs = divisor_chi_sum(m * n, &f).unwrap();
                    let rhs = divisor_chi_sum(m, &f).unwrap() * divisor_chi_sum(n, &f).unwrap();
                    assert_eq!(lhs, rhs, "m = {m}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn two_squares_examples() {
        let f = factorizer();
        assert_eq!(r_two_squares(1, &f).unwrap(), 4);
        assert_eq!(r_two_squares(3, &f).unwrap(), 0);
        assert_eq!(r_two_squares(25, &f).unwrap(), 12);
    }

    #[test]
    fn two_squares_matches_lattice_enumeration() {
        let f = factorizer();
        for n in 1u64..=5000 {
            assert_eq!(
                r_two_squares(n, &f).unwrap(),
                r_two_squares_brute(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn divisor_enumeration() {
        let f = factorizer();
        let mut d = divisors_from_factors(&f.factor(60).unwrap());
        d.sort_unstable();
        assert_eq!(d, vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]);
    }

    #[test]
    fn ramanujan_examples() {
        let one = ramanujan_like_sum(1, 1, 1, 0);
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let minus_one = ramanujan_like_sum(1, 2, 1, 0);
        assert!((minus_one - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let zero = ramanujan_like_sum(1, 4, 2, 1);
        assert!(zero.norm() < 1e-12);
    }

    #[test]
    fn ramanujan_reduces_to_mobius_on_squarefree_moduli() {
        for q in 1u64..=200 {
            if mobius(q) == 0 {
                continue;
            }
            for c in [1i64, 3, 7] {
                if gcd_u64(c.unsigned_abs(), q) != 1 {
                    continue;
                }
                let s = ramanujan_like_sum(c, q, 1, 0);
                assert!(
                    (s - Complex64::new(mobius(q) as f64, 0.0)).norm() < 1e-9,
                    "q = {q}, c = {c}, got {s}"
                );
            }
        }
    }

    #[test]
    fn singular_series_even_is_error() {
        assert!(matches!(singular_series(10, 100), Err(Error::EvenInput)));
    }

    #[test]
    fn singular_series_depends_only_on_prime_divisors() {
        let a = singular_series(3, 100_000).unwrap();
        let b = singular_series(9, 100_000).unwrap();
        assert!((a.value - b.value).abs() < 1e-14);
    }

    #[test]
    fn singular_series_frozen_value() {
        // truncated Euler product at cutoff 1e6: the p = 2 factor is 2, the
        // p = 3 factor 3/4, the rest a slowly converging product; value
        // frozen from this oracle
        let s = singular_series(3, 1_000_000).unwrap();
        assert!((s.value - 1.533_974_363_1).abs() < 1e-9, "got {}", s.value);
        assert!(s.truncation_bound < 1e-9);
    }

    #[test]
    fn singular_series_cutoff_stability() {
        // doubling the cutoff moves the value by far less than 1e-7,
        // including for targets with a prime factor between the two cutoffs,
        // and always by less than the certified tail bound
        for n0 in [3u64, 15, 255, 30021, 999_999, 3 * 10_007, 11 * 10_009] {
            let a = singular_series(n0, 10_000).unwrap();
            let b = singular_series(n0, 20_000).unwrap();
            let moved = (b.value / a.value - 1.0).abs();
            assert!(moved < 1e-7, "n0 = {n0}");
            assert!(moved <= a.truncation_bound, "n0 = {n0}: {moved} vs {}", a.truncation_bound);
        }
    }

    #[test]
    fn star_orderings_agree() {
        // forward and reverse accumulation of the twisted factors
        let primes = simple_primes(1_000_000);
        let n0 = 5u64;
        let forward: f64 = primes.iter().map(|&p| star_local_factor(n0, p).ln()).sum();
        let reverse: f64 = primes
            .iter()
            .rev()
            .map(|&p| star_local_factor(n0, p).ln())
            .sum();
        assert!((forward - reverse).abs() < 1e-10);
        let star = singular_series_star(n0, 1_000_000).unwrap();
        let base = singular_series(n0, 1_000_000).unwrap();
        let rebuilt = std::f64::consts::PI * base.value * forward.exp();
        assert!((star.value / rebuilt - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_factor_at_two_is_one() {
        for n0 in [3u64, 5, 9, 15, 21] {
            assert_eq!(star_local_factor(n0, 2), 1.0);
        }
    }

    #[test]
    fn star_within_interval_product_bounds() {
        // every twisted factor lies in (1 - 3/p^2, 1 + 3/p^2)
        let primes = simple_primes(10_000);
        for n0 in [3u64, 5, 99, 1001, 65_535] {
            let mut lo = 0.0f64;
            let mut hi = 0.0f64;
            for &p in &primes {
                let f = star_local_factor(n0, p);
                let b = 3.0 / ((p * p) as f64);
                assert!(f > 1.0 - b && f < 1.0 + b, "n0 = {n0}, p = {p}");
                lo += (1.0 - b).ln();
                hi += (1.0 + b).ln();
            }
            let star = singular_series_star(n0, 10_000).unwrap();
            let base = singular_series(n0, 10_000).unwrap();
            let ratio = star.value / (std::f64::consts::PI * base.value);
            assert!(ratio > lo.exp() && ratio < hi.exp());
            assert!(ratio > 0.5 && ratio < 2.0, "n0 = {n0}: ratio {ratio}");
        }
    }
}
