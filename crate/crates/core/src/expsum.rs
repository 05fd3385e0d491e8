//! Exponential sums as weighted supports, evaluated pointwise by compensated
//! summation or on the full rational grid a/X by FFT.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arithmetic::divisor_chi_sum_from_factors;
use crate::error::{Error, Result};
use crate::families::{
    digit_member_k, digit_set_members, ps_primes_in, FamilyConfig, ShortIntervalWindow,
};
use crate::primes::{simple_primes, Factorizer, PrimeTable};

/// Which sum a support carries; informational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumLabel {
    DigitSet,
    DigitSetPrimes,
    FloorPowerPrimes,
    ShiftedTwoSquares,
    ShiftedTwoSquaresSmall,
    ShiftedTwoSquaresMid,
    ShiftedTwoSquaresLarge,
    SiftedWeights,
    Custom,
}

/// A finite exponential sum Σ w(n) e(nθ): sorted unique support with real
/// weights.
#[derive(Debug, Clone)]
pub struct WeightedSupport {
    entries: Vec<(u64, f64)>,
    pub label: SumLabel,
}

impl WeightedSupport {
    /// Build from arbitrary (n, weight) pairs; duplicate n are merged by
    /// addition and zero weights dropped.
    pub fn from_entries(mut entries: Vec<(u64, f64)>, label: SumLabel) -> Self {
        entries.sort_unstable_by_key(|&(n, _)| n);
        let mut merged: Vec<(u64, f64)> = Vec::with_capacity(entries.len());
        for (n, w) in entries {
            assert!(w.is_finite(), "non-finite weight at n = {n}");
            match merged.last_mut() {
                Some(last) if last.0 == n => last.1 += w,
                _ => merged.push((n, w)),
            }
        }
        merged.retain(|&(_, w)| w != 0.0);
        WeightedSupport {
            entries: merged,
            label,
        }
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Σ w(n), the value at θ = 0.
    pub fn total_weight(&self) -> f64 {
        kahan_sum(self.entries.iter().map(|&(_, w)| w))
    }

    /// Σ |w(n)|, a crude sup bound for the sum.
    pub fn abs_weight(&self) -> f64 {
        kahan_sum(self.entries.iter().map(|&(_, w)| w.abs()))
    }

    /// Scale every weight.
    pub fn scaled(&self, factor: f64) -> WeightedSupport {
        WeightedSupport {
            entries: self.entries.iter().map(|&(n, w)| (n, w * factor)).collect(),
            label: self.label,
        }
    }

    /// Merge two supports (weights add).
    pub fn merged(&self, other: &WeightedSupport, label: SumLabel) -> WeightedSupport {
        let mut v = self.entries.clone();
        v.extend_from_slice(&other.entries);
        WeightedSupport::from_entries(v, label)
    }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc
}

/// n·θ mod 1 with the product error recovered by FMA, so phases stay accurate
/// for supports up to ~1e15.
#[inline]
pub fn unit_phase(n: u64, theta: f64) -> f64 {
    let nf = n as f64;
    let p = nf * theta;
    let err = nf.mul_add(theta, -p);
    (p.fract() + err).rem_euclid(1.0)
}

/// e(x) = exp(2πi x).
#[inline]
pub fn e_unit(x: f64) -> Complex64 {
    let t = std::f64::consts::TAU * x;
    Complex64::new(t.cos(), t.sin())
}

/// Σ w(n) e(nθ) by compensated summation.
pub fn eval_point(w: &WeightedSupport, theta: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for &(n, weight) in &w.entries {
        let v = e_unit(unit_phase(n, theta)) * weight;
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc
}

/// Σ w(n) e(n a / X) with the phase reduced exactly in integers.
pub fn eval_rational(w: &WeightedSupport, a: u64, x: u64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for &(n, weight) in &w.entries {
        let r = ((n as u128 * a as u128) % x as u128) as u64;
        let v = e_unit(r as f64 / x as f64) * weight;
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc
}

/// Values of an exponential sum at every rational a/X, index a in 0..X.
#[derive(Debug, Clone)]
pub struct ExpSumGrid {
    pub x: u64,
    pub values: Vec<Complex64>,
}

impl ExpSumGrid {
    /// Value at θ = a/X (a taken mod X).
    pub fn at(&self, a: u64) -> Complex64 {
        self.values[(a % self.x) as usize]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Evaluate a support on the full grid by FFT.
///
/// Only n mod X matters for e(n a / X), so weights are folded into X bins
/// first; supports are allowed to live anywhere below 20X.
pub fn grid_eval(w: &WeightedSupport, x: u64) -> Result<ExpSumGrid> {
    if x == 0 || x > (1 << 26) {
        return Err(Error::OutOfRange(format!("grid size {x}")));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); x as usize];
    for &(n, weight) in &w.entries {
        buf[(n % x) as usize].re += weight;
    }
    // e(+n a / X) convention: inverse-direction transform, no scaling
    FftPlanner::new()
        .plan_fft_inverse(x as usize)
        .process(&mut buf);
    Ok(ExpSumGrid { x, values: buf })
}

/// Unit weights on the digit-restricted set, either all of [0, X) or the
/// anchored short window.
pub fn build_digit_sum(
    cfg: &FamilyConfig,
    window: Option<&ShortIntervalWindow>,
) -> WeightedSupport {
    let members = match window {
        Some(w) => w.digit_members(),
        None => digit_set_members(cfg.k, cfg.forbidden_digit),
    };
    WeightedSupport::from_entries(
        members.into_iter().map(|n| (n, 1.0)).collect(),
        SumLabel::DigitSet,
    )
}

/// Unit weights on the primes of the digit-restricted set (windowed or not).
pub fn build_digit_prime_sum(
    cfg: &FamilyConfig,
    window: Option<&ShortIntervalWindow>,
    table: &PrimeTable,
) -> WeightedSupport {
    let members = match window {
        Some(w) => w.digit_members(),
        None => digit_set_members(cfg.k, cfg.forbidden_digit),
    };
    let entries = members
        .into_iter()
        .filter(|&n| n >= 2 && table.is_prime(n))
        .map(|n| (n, 1.0))
        .collect();
    WeightedSupport::from_entries(entries, SumLabel::DigitSetPrimes)
}

/// Floor-power prime sum over the summand interval: weight
/// (1/γ) (log p) p^{1-γ} at each floor-power prime p.
pub fn build_floor_power_sum(cfg: &FamilyConfig, table: &PrimeTable) -> WeightedSupport {
    let interval = cfg.interval();
    let gamma = cfg.gamma();
    let entries = ps_primes_in(&interval, cfg, table)
        .into_iter()
        .map(|p| {
            let pf = p as f64;
            (p, pf.ln() * pf.powf(1.0 - gamma) / gamma)
        })
        .collect();
    WeightedSupport::from_entries(entries, SumLabel::FloorPowerPrimes)
}

/// The three divisor-split shifted-two-squares sums over the summand
/// interval, plus the unsplit total.
///
/// For each prime p there, every divisor d of p-1 contributes χ(d) log p to
/// the range its size falls in: d <= D, D < d <= X/D, or d > X/D. The three
/// integer divisor buckets partition the full divisor set, so the weights add
/// up to (Σ_{d|p-1} χ(d)) log p exactly.
pub struct DivisorSplitSums {
    pub small: WeightedSupport,
    pub mid: WeightedSupport,
    pub large: WeightedSupport,
}

impl DivisorSplitSums {
    /// Recombined sum at the internal divisor-sum normalization.
    pub fn total(&self) -> WeightedSupport {
        self.small
            .merged(&self.mid, SumLabel::ShiftedTwoSquares)
            .merged(&self.large, SumLabel::ShiftedTwoSquares)
    }

    /// Recombined sum at the signed-pair-count normalization r(p-1) log p,
    /// i.e. four times the internal divisor-sum weights; the form quoted in
    /// reports.
    pub fn total_pair_count(&self) -> WeightedSupport {
        self.total().scaled(4.0)
    }
}

/// Integer χ-divisor buckets of one shifted prime, split at (D, X/D).
pub fn split_buckets_for_shift(
    factors: &crate::primes::Factorization,
    d_cut: f64,
    upper_cut: f64,
) -> (i64, i64, i64) {
    let mut small = 0i64;
    let mut mid = 0i64;
    let mut large = 0i64;
    for d in crate::arithmetic::divisors_from_factors(factors) {
        let chi = crate::arithmetic::chi4(d).as_i64();
        if chi == 0 {
            continue;
        }
        let df = d as f64;
        if df <= d_cut {
            small += chi;
        } else if df <= upper_cut {
            mid += chi;
        } else {
            large += chi;
        }
    }
    debug_assert_eq!(small + mid + large, divisor_chi_sum_from_factors(factors));
    (small, mid, large)
}

pub fn build_divisor_split_sums(
    cfg: &FamilyConfig,
    table: &PrimeTable,
    factorizer: &Factorizer,
) -> Result<DivisorSplitSums> {
    let interval = cfg.interval();
    let lo = interval.first();
    let hi = interval.last();
    let d_cut = cfg.divisor_split();
    let upper_cut = cfg.x() as f64 / d_cut;
    let w_lo = lo.saturating_sub(1).max(1);
    let factors = factorizer.factor_window(w_lo, hi)?;
    let mut small = Vec::new();
    let mut mid = Vec::new();
    let mut large = Vec::new();
    for p in table.primes_in(lo.max(2), hi + 1) {
        if !interval.contains(p) {
            continue;
        }
        let (s, m, l) =
            split_buckets_for_shift(&factors[(p - 1 - w_lo) as usize], d_cut, upper_cut);
        let log_p = (p as f64).ln();
        if s != 0 {
            small.push((p, s as f64 * log_p));
        }
        if m != 0 {
            mid.push((p, m as f64 * log_p));
        }
        if l != 0 {
            large.push((p, l as f64 * log_p));
        }
    }
    Ok(DivisorSplitSums {
        small: WeightedSupport::from_entries(small, SumLabel::ShiftedTwoSquaresSmall),
        mid: WeightedSupport::from_entries(mid, SumLabel::ShiftedTwoSquaresMid),
        large: WeightedSupport::from_entries(large, SumLabel::ShiftedTwoSquaresLarge),
    })
}

/// The two halves of a sifted weighted sum: indicator part over the digit set
/// and counting part over the ambient block, to be combined as
/// a_part - κ (|A|/|B|) b_part.
pub struct SiftedParts {
    pub a_part: WeightedSupport,
    pub b_part: WeightedSupport,
    pub density: f64,
}

impl SiftedParts {
    /// The combined w-weighted sum, phases at the quotients n.
    pub fn combined(&self) -> WeightedSupport {
        self.a_part
            .merged(&self.b_part.scaled(-self.density), SumLabel::SiftedWeights)
    }

    /// The combined sum with phases at the members nd themselves, the form
    /// that enters additive convolutions.
    pub fn combined_members(&self, d: u64) -> WeightedSupport {
        let relocate = |w: &WeightedSupport, scale: f64| -> Vec<(u64, f64)> {
            w.entries()
                .iter()
                .map(|&(n, wt)| (n * d, wt * scale))
                .collect()
        };
        let mut entries = relocate(&self.a_part, 1.0);
        entries.extend(relocate(&self.b_part, -self.density));
        WeightedSupport::from_entries(entries, SumLabel::SiftedWeights)
    }
}

/// Sifted support at modulus d over the full ambient block: quotients
/// n with nd < X and no prime factor <= z, with the digit indicator evaluated
/// at nd.
pub fn build_sifted(cfg: &FamilyConfig, d: u64, z: f64) -> SiftedParts {
    let x = cfg.x();
    let block = 1..x.div_ceil(d); // n with n d < X
    build_sifted_over(cfg, d, z, block, None)
}

/// Windowed variant: quotients with nd inside the short window.
pub fn build_sifted_window(
    cfg: &FamilyConfig,
    window: &ShortIntervalWindow,
    d: u64,
    z: f64,
) -> SiftedParts {
    let lo = window.n_star.div_ceil(d);
    let hi = window.end().div_ceil(d);
    build_sifted_over(cfg, d, z, lo..hi, Some(window))
}

fn build_sifted_over(
    cfg: &FamilyConfig,
    d: u64,
    z: f64,
    block: std::ops::Range<u64>,
    window: Option<&ShortIntervalWindow>,
) -> SiftedParts {
    let rough = rough_flags(block.clone(), z);
    let mut a_entries = Vec::new();
    let mut b_entries = Vec::new();
    for (i, n) in block.clone().enumerate() {
        if !rough[i] {
            continue;
        }
        let nd = n * d;
        if let Some(w) = window {
            if !w.contains(nd) {
                continue;
            }
        }
        b_entries.push((n, 1.0));
        if digit_member_k(nd, cfg.k, cfg.forbidden_digit).unwrap_or(false) {
            a_entries.push((n, 1.0));
        }
    }
    SiftedParts {
        a_part: WeightedSupport::from_entries(a_entries, SumLabel::SiftedWeights),
        b_part: WeightedSupport::from_entries(b_entries, SumLabel::SiftedWeights),
        density: cfg.kappa() * cfg.digit_set_size() as f64 / cfg.x() as f64,
    }
}

/// Rough-number flags over a block: true where no prime factor is <= z.
fn rough_flags(block: std::ops::Range<u64>, z: f64) -> Vec<bool> {
    let lo = block.start;
    let len = (block.end - block.start) as usize;
    let mut rough = vec![true; len];
    if z < 2.0 {
        return rough;
    }
    for p in simple_primes(z.floor() as u64) {
        let mut m = lo.div_ceil(p) * p;
        while m < block.end {
            rough[(m - lo) as usize] = false;
            m += p;
        }
    }
    // 1 has no prime factors at all
    if lo <= 1 && 1 < block.end {
        rough[(1 - lo) as usize] = true;
    }
    rough
}

/// Depth-one type-II family: for each prime p in the bilinear range
/// [X^t1, X^t2] (t1 = 9/25 + 2ε, t2 = 17/40 - 2ε) with p >= X^(t2-t1) and
/// p^2 <= X, the w-weighted sum over np in the ambient block (or the short
/// window) with the cofactor n free of prime factors <= p.
///
/// Phases sit at the members np: the family feeds additive convolutions,
/// which detect m + p2 + p3 and would see nothing from quotient-level
/// phases (the quotients max out near X^(1-t1), below every reachable
/// residue of the target).
pub fn build_type2_depth_one(
    cfg: &FamilyConfig,
    window: Option<&ShortIntervalWindow>,
    epsilon: f64,
    table: &PrimeTable,
) -> WeightedSupport {
    let xf = cfg.x() as f64;
    let t1 = 9.0 / 25.0 + 2.0 * epsilon;
    let t2 = 17.0 / 40.0 - 2.0 * epsilon;
    let lo = xf.powf(t2 - t1).max(xf.powf(t1)).ceil() as u64;
    let hi = xf.powf(t2).min(xf.sqrt()).floor() as u64;
    let mut acc = WeightedSupport::from_entries(vec![], SumLabel::SiftedWeights);
    for p in table.primes_in(lo, hi + 1) {
        let parts = match window {
            Some(w) => build_sifted_window(cfg, w, p, p as f64),
            None => build_sifted(cfg, p, p as f64),
        };
        acc = acc.merged(&parts.combined_members(p), SumLabel::SiftedWeights);
    }
    acc
}

/// Normalized digit-set sum at scale Y = 10^m: the absolute value of
/// Π_{j<m} Σ_{digit ≠ a0} e(digit·10^j·θ), scaled by 9^{-m}.
pub fn f_y(theta: f64, m: u32, forbidden: u8) -> f64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut power = 1u64;
    for _ in 0..m {
        let mut digit_sum = Complex64::new(0.0, 0.0);
        for digit in 0..=9u8 {
            if digit == forbidden {
                continue;
            }
            digit_sum += e_unit(unit_phase(digit as u64 * power, theta));
        }
        acc *= digit_sum;
        power *= 10;
    }
    acc.norm() * 9.0f64.powi(-(m as i32))
}
