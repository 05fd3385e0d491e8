//! The discrete circle method on the rational grid a/X: arc geometry and
//! Dirichlet approximation, grid classification, the three-factor
//! convolutions with their orthogonality identity, major-arc approximants,
//! and the dimensionless health ratios for every bound the construction is
//! expected to satisfy.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arithmetic::{chi4, euler_phi, lcm_u64, mobius, ramanujan_like_sum};
use crate::error::{Error, Result};
use crate::expsum::{
    build_digit_sum, build_divisor_split_sums, build_floor_power_sum, e_unit, eval_point,
    grid_eval, unit_phase, DivisorSplitSums, ExpSumGrid, WeightedSupport,
};
use crate::families::{FamilyConfig, IntInterval};
use crate::primes::{simple_primes, Factorizer, PrimeTable};

/// floor(x^(1/5)).
pub fn fifth_root_floor(x: u64) -> u64 {
    let mut r = (x as f64).powf(0.2).floor() as u64;
    while r.checked_pow(5).is_none_or(|v| v > x) {
        r -= 1;
    }
    while (r + 1).checked_pow(5).is_some_and(|v| v <= x) {
        r += 1;
    }
    r
}

/// Largest admissible denominator, floor(x^(4/5)) + 1.
pub fn max_denominator(x: u64) -> u64 {
    // floor(x^(4/5)) = floor((x^4)^(1/5)) via exact integer comparisons
    let x4 = (x as u128).pow(4);
    let mut r = (x as f64).powf(0.8).floor() as u64;
    while (r as u128).pow(5) > x4 {
        r -= 1;
    }
    while ((r + 1) as u128).pow(5) <= x4 {
        r += 1;
    }
    r + 1
}

/// Largest admissible half-width parameter, floor(x^(1/5)) + 1.
pub fn max_half_width(x: u64) -> u64 {
    fifth_root_floor(x) + 1
}

/// A major-arc interval [c/q - L/(qX), c/q + L/(qX)] with exact rational
/// endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub c: u64,
    pub q: u64,
    pub l: u64,
}

impl Arc {
    /// Membership of the grid point a/X: |aq - cX| <= L, all in integers.
    #[inline]
    pub fn contains_grid_point(&self, a: u64, x: u64) -> bool {
        let lhs = a as i128 * self.q as i128 - self.c as i128 * x as i128;
        lhs.abs() <= self.l as i128
    }

    /// Lower endpoint as (numerator, denominator) over qX.
    pub fn lo(&self, x: u64) -> (i128, u128) {
        (
            self.c as i128 * x as i128 - self.l as i128,
            self.q as u128 * x as u128,
        )
    }

    pub fn hi(&self, x: u64) -> (i128, u128) {
        (
            self.c as i128 * x as i128 + self.l as i128,
            self.q as u128 * x as u128,
        )
    }
}

/// All arcs with denominator up to q0 and half-width parameter l0:
/// centers c/q, 0 <= c <= q, gcd(c, q) = 1.
pub fn build_arcs(x: u64, q0: u64, l0: u64) -> Result<Vec<Arc>> {
    if q0 == 0 || q0 > max_denominator(x) {
        return Err(Error::Range(format!(
            "q0 = {q0} above {}",
            max_denominator(x)
        )));
    }
    if l0 > max_half_width(x) {
        return Err(Error::Range(format!(
            "l0 = {l0} above {}",
            max_half_width(x)
        )));
    }
    let mut arcs = Vec::new();
    for q in 1..=q0 {
        for c in 0..=q {
            if crate::arithmetic::gcd_u64(c, q) == 1 {
                arcs.push(Arc { c, q, l: l0 });
            }
        }
    }
    Ok(arcs)
}

/// Best rational approximation by continued-fraction convergents:
/// coprime (c, q) with 1 <= q <= n and |theta - c/q| <= 1/(q n).
pub fn dirichlet_approx(theta: f64, n: u64) -> (u64, u64) {
    assert!((0.0..1.0).contains(&theta) && n >= 1);
    // theta scaled to an exact rational with a 2^62 denominator; the scaling
    // error 2^-62 is far below the 1/(qn) slack at any reachable q, n
    let num = (theta * (1u64 << 62) as f64).round() as u128;
    dirichlet_approx_rational(num, 1u128 << 62, n)
}

/// Same, for an exactly known rational theta = num/den.
pub fn dirichlet_approx_rational(num: u128, den: u128, n: u64) -> (u64, u64) {
    let (mut a, mut b) = (num, den);
    // convergent recurrences, seeded with the (-2) and (-1) terms
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    while b != 0 {
        let digit = a / b;
        let p2 = digit * p1 + p0;
        let q2 = digit * q1 + q0;
        if q2 > n as u128 {
            return (p1 as u64, q1 as u64);
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        (a, b) = (b, a % b);
    }
    (p1 as u64, q1 as u64)
}

/// Per-grid-point classification: covering arc when one of the built arcs
/// contains the point, and the small-sum flag for the minor set.
#[derive(Debug, Clone)]
pub struct ArcClassification {
    pub x: u64,
    /// Covering arc for a = 1..=X (index a-1), none = outside every arc.
    pub cover: Vec<Option<Arc>>,
    /// Small-floor-power-sum flag for a = 1..=X.
    pub minor_set: Vec<bool>,
    pub threshold: f64,
}

impl ArcClassification {
    pub fn all_covered(&self) -> bool {
        self.cover.iter().all(|c| c.is_some())
    }

    /// Fraction of grid points inside the small-sum set.
    pub fn minor_fraction(&self) -> f64 {
        self.minor_set.iter().filter(|&&b| b).count() as f64 / self.x as f64
    }
}

/// Classify every a/X: locate a covering arc through the convergents of a/X
/// and flag membership of the small-sum set |S(a/X)| <= X^(1-delta).
pub fn classify_grid(grid: &ExpSumGrid, q0: u64, l0: u64, delta: f64) -> ArcClassification {
    let x = grid.x;
    let threshold = (x as f64).powf(1.0 - delta);
    let mut cover = Vec::with_capacity(x as usize);
    let mut minor_set = Vec::with_capacity(x as usize);
    for a in 1..=x {
        let (c, q) = dirichlet_approx_rational(a as u128, x as u128, q0);
        let arc = Arc { c, q, l: l0 };
        cover.push(arc.contains_grid_point(a, x).then_some(arc));
        minor_set.push(grid.at(a).norm() <= threshold);
    }
    ArcClassification {
        x,
        cover,
        minor_set,
        threshold,
    }
}

/// Grid-point mask assembled from a set of arcs.
pub fn mask_from_arcs(x: u64, arcs: &[Arc]) -> Vec<bool> {
    let mut mask = vec![false; x as usize];
    for arc in arcs {
        // a q in [cX - L, cX + L]
        let center = arc.c as i128 * x as i128;
        let lo = (center - arc.l as i128).div_euclid(arc.q as i128);
        let hi = (center + arc.l as i128).div_euclid(arc.q as i128) + 1;
        for a in lo.max(1)..=hi.min(x as i128) {
            if arc.contains_grid_point(a as u64, x) {
                mask[(a as u64 % x) as usize] = true;
            }
        }
    }
    mask
}

/// (1/X) Σ_a E(a/X) S(a/X) T(a/X) e(-n0 a/X), optionally restricted to the
/// masked grid points.
///
/// Deterministic across thread counts: fixed-size chunks are summed
/// individually and reduced in index order.
pub fn convolve(
    e: &ExpSumGrid,
    s: &ExpSumGrid,
    t: &ExpSumGrid,
    n0: u64,
    mask: Option<&[bool]>,
) -> Result<Complex64> {
    if e.x != s.x || e.x != t.x {
        return Err(Error::GridMismatch(e.x, s.x.max(t.x)));
    }
    let x = e.x;
    if let Some(m) = mask {
        if m.len() != x as usize {
            return Err(Error::GridMismatch(x, m.len() as u64));
        }
    }
    const CHUNK: usize = 8192;
    let n = x as usize;
    let chunk_sums: Vec<Complex64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|ci| {
            let start = ci * CHUNK;
            let end = ((ci + 1) * CHUNK).min(n);
            let mut acc = Complex64::new(0.0, 0.0);
            for a in start..end {
                if let Some(m) = mask {
                    if !m[a] {
                        continue;
                    }
                }
                let r = (n0 as u128 * a as u128 % x as u128) as u64;
                let phase = e_unit(-(r as f64) / x as f64);
                acc += e.values[a] * s.values[a] * t.values[a] * phase;
            }
            acc
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for v in chunk_sums {
        total += v;
    }
    Ok(total / x as f64)
}

/// Direct triple sum Σ v_e(m) v_s(p2) v_t(p3) over m + p2 + p3 = n0, each
/// weight coming from its support. Exact (non-modular) equation.
pub fn mean_value(e: &WeightedSupport, s: &WeightedSupport, t: &WeightedSupport, n0: u64) -> f64 {
    let lookup: std::collections::HashMap<u64, f64> = e.entries().iter().copied().collect();
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for &(p2, w2) in s.entries() {
        for &(p3, w3) in t.entries() {
            let Some(m) = n0.checked_sub(p2 + p3) else {
                continue;
            };
            if let Some(&wm) = lookup.get(&m) {
                let v = wm * w2 * w3;
                let y = v - comp;
                let tt = acc + y;
                comp = (tt - acc) - y;
                acc = tt;
            }
        }
    }
    acc
}

/// Outcome of the orthogonality identity check.
#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    pub j1: Complex64,
    pub j2: Complex64,
    pub j3: Complex64,
    /// Direct mean value at the target itself.
    pub mean: f64,
    /// Wrap-around offsets s (j solves m + p2 + p3 = n0 + sX) that the
    /// support ranges make feasible, and their direct values.
    pub alias_offsets: Vec<(i64, f64)>,
    pub residual: f64,
}

impl OrthogonalityReport {
    pub fn j_total(&self) -> Complex64 {
        self.j1 + self.j2 + self.j3
    }
}

fn support_range(w: &WeightedSupport) -> (u64, u64) {
    match (w.entries().first(), w.entries().last()) {
        (Some(&(lo, _)), Some(&(hi, _))) => (lo, hi),
        _ => (0, 0),
    }
}

/// Verify J1 + J2 + J3 = M(E) to grid precision.
///
/// The grid convolution detects the congruence m + p2 + p3 ≡ n0 (mod X); the
/// support ranges determine which wrap-around offsets are feasible, and each
/// one is accounted by a direct count before comparing. More than 24 feasible
/// offsets means the supports are far outside their intended ranges.
pub fn orthogonality_check(
    e: &WeightedSupport,
    s: &WeightedSupport,
    split: &DivisorSplitSums,
    n0: u64,
    x: u64,
) -> Result<OrthogonalityReport> {
    let e_grid = grid_eval(e, x)?;
    let s_grid = grid_eval(s, x)?;
    let q1_grid = grid_eval(&split.small, x)?;
    let q2_grid = grid_eval(&split.mid, x)?;
    let q3_grid = grid_eval(&split.large, x)?;
    let j1 = convolve(&e_grid, &s_grid, &q1_grid, n0, None)?;
    let j2 = convolve(&e_grid, &s_grid, &q2_grid, n0, None)?;
    let j3 = convolve(&e_grid, &s_grid, &q3_grid, n0, None)?;

    let q_total = split.total();
    let (e_lo, e_hi) = support_range(e);
    let (s_lo, s_hi) = support_range(s);
    let (q_lo, q_hi) = support_range(&q_total);
    let sum_lo = e_lo + s_lo + q_lo;
    let sum_hi = e_hi + s_hi + q_hi;
    let s_min = (sum_lo as i128 - n0 as i128).div_euclid(x as i128);
    let s_max = (sum_hi as i128 - n0 as i128).div_euclid(x as i128);
    if s_max - s_min > 24 {
        return Err(Error::Aliasing);
    }

    let mean = mean_value(e, s, &q_total, n0);
    let mut alias_offsets = Vec::new();
    let mut alias_total = 0.0;
    for off in s_min..=s_max {
        let target = n0 as i128 + off * x as i128;
        if target < 0 {
            continue;
        }
        let v = if off == 0 {
            mean
        } else {
            mean_value(e, s, &q_total, target as u64)
        };
        if off != 0 {
            alias_offsets.push((off as i64, v));
        }
        alias_total += v;
    }

    let j_total = j1 + j2 + j3;
    let residual = (j_total - Complex64::new(alias_total, 0.0)).norm() / (1.0 + mean.abs());
    Ok(OrthogonalityReport {
        j1,
        j2,
        j3,
        mean,
        alias_offsets,
        residual,
    })
}

/// Major-arc approximant versus the true sum at c/q + xi.
#[derive(Debug, Clone, Copy)]
pub struct ApproxReport {
    pub approx: Complex64,
    pub actual: Complex64,
    pub abs_error: f64,
    /// Error over X.
    pub normalized_error: f64,
}

/// Σ_{n in interval} e(n xi), the unweighted interval sum.
pub fn interval_exp_sum(interval: &IntInterval, xi: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in interval.first()..=interval.last() {
        acc += e_unit(unit_phase(n, xi));
    }
    acc
}

/// Floor-power sum against its main-term approximant mu(q)/phi(q) M(xi).
pub fn major_arc_floor_power(
    sum: &WeightedSupport,
    interval: &IntInterval,
    x: u64,
    c: u64,
    q: u64,
    xi: f64,
) -> ApproxReport {
    assert!(crate::arithmetic::gcd_u64(c, q) == 1);
    let approx = interval_exp_sum(interval, xi) * (mobius(q) as f64 / euler_phi(q) as f64);
    let actual = eval_point(sum, c as f64 / q as f64 + xi);
    let abs_error = (actual - approx).norm();
    ApproxReport {
        approx,
        actual,
        abs_error,
        normalized_error: abs_error / x as f64,
    }
}

/// Small-divisor shifted-two-squares sum against its twisted approximant:
/// M(xi) Σ_{d <= D} χ(d) c_d(c,q,1) / phi(lcm(q,d)).
pub fn major_arc_small_divisor(
    sum: &WeightedSupport,
    interval: &IntInterval,
    cfg: &FamilyConfig,
    c: u64,
    q: u64,
    xi: f64,
) -> ApproxReport {
    assert!(crate::arithmetic::gcd_u64(c, q) == 1);
    let d_cut = cfg.divisor_split();
    let mut twisted = Complex64::new(0.0, 0.0);
    let mut d = 1u64;
    while (d as f64) <= d_cut {
        let chi = chi4(d).as_i64();
        if chi != 0 {
            let cd = ramanujan_like_sum(c as i64, q, d, 1);
            twisted += cd * (chi as f64 / euler_phi(lcm_u64(q, d)) as f64);
        }
        d += 1;
    }
    let approx = interval_exp_sum(interval, xi) * twisted;
    let actual = eval_point(sum, c as f64 / q as f64 + xi);
    let abs_error = (actual - approx).norm();
    ApproxReport {
        approx,
        actual,
        abs_error,
        normalized_error: abs_error / cfg.x() as f64,
    }
}

/// Free log-power thresholds of the diagnostics; experiment knobs, not fixed
/// constants.
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticsConfig {
    pub q0: u64,
    pub l0: u64,
    pub c1: f64,
    pub epsilon: f64,
    pub a_power: f64,
    pub b_power: f64,
}

impl DiagnosticsConfig {
    /// Defaults q0 = (log X)^2, l0 = (log X)^3.
    pub fn for_x(x: u64) -> Self {
        let lx = (x as f64).ln();
        DiagnosticsConfig {
            q0: (lx * lx).round() as u64,
            l0: (lx * lx * lx).round() as u64,
            c1: 2.0,
            epsilon: 0.01,
            a_power: 2.0,
            b_power: 2.0,
        }
    }
}

/// Everything the grid-level diagnostics need at one scale, built once.
pub struct CircleStack {
    pub cfg: FamilyConfig,
    pub digit_sum: WeightedSupport,
    pub floor_power: WeightedSupport,
    pub split: DivisorSplitSums,
    pub digit_grid: ExpSumGrid,
    pub floor_power_grid: ExpSumGrid,
    pub small_grid: ExpSumGrid,
    pub mid_grid: ExpSumGrid,
    pub large_grid: ExpSumGrid,
}

pub fn build_circle_stack(
    cfg: &FamilyConfig,
    table: &PrimeTable,
    factorizer: &Factorizer,
) -> Result<CircleStack> {
    let x = cfg.x();
    let digit_sum = build_digit_sum(cfg, None);
    let floor_power = build_floor_power_sum(cfg, table);
    let split = build_divisor_split_sums(cfg, table, factorizer)?;
    Ok(CircleStack {
        digit_grid: grid_eval(&digit_sum, x)?,
        floor_power_grid: grid_eval(&floor_power, x)?,
        small_grid: grid_eval(&split.small, x)?,
        mid_grid: grid_eval(&split.mid, x)?,
        large_grid: grid_eval(&split.large, x)?,
        cfg: cfg.clone(),
        digit_sum,
        floor_power,
        split,
    })
}

/// One dimensionless health ratio: a numerically measured left-hand side over
/// the claimed scale.
#[derive(Debug, Clone)]
pub struct DiagnosticRow {
    pub id: &'static str,
    pub x: u64,
    pub lhs: f64,
    pub scale: f64,
    pub ratio: f64,
}

fn row(id: &'static str, x: u64, lhs: f64, scale: f64) -> DiagnosticRow {
    DiagnosticRow {
        id,
        x,
        lhs,
        scale,
        ratio: lhs / scale,
    }
}

/// Evaluate every bound diagnostic at one scale.
pub fn bound_diagnostics(
    stack: &CircleStack,
    diag: &DiagnosticsConfig,
) -> Result<Vec<DiagnosticRow>> {
    let cfg = &stack.cfg;
    let x = cfg.x();
    let xf = x as f64;
    let lx = xf.ln();
    let a_size = cfg.digit_set_size() as f64;
    let n0 = cfg.n0;
    let mut rows = Vec::new();

    // large-divisor tail: sup |S^(3)| over the small-denominator arcs
    // against X (log X)^(-B)
    let l_cap = max_half_width(x);
    let tail_arcs = build_arcs(
        x,
        (lx.powf(diag.c1).floor() as u64)
            .max(1)
            .min(max_denominator(x)),
        l_cap,
    )?;
    let tail_mask = mask_from_arcs(x, &tail_arcs);
    let tail_sup = stack
        .large_grid
        .values
        .iter()
        .zip(&tail_mask)
        .filter(|&(_, &m)| m)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max);
    rows.push(row(
        "large-divisor-tail",
        x,
        tail_sup,
        xf * lx.powf(-diag.b_power),
    ));

    // arc-tail: small denominators, annulus between the trimmed and maximal
    // arcs; the configured trim is capped at half the admissible width so
    // the annulus stays nonempty at small scales
    let l_max = max_half_width(x);
    let l_trim = diag.l0.min((l_max / 2).max(1));
    let q_top = (lx.powf(diag.c1).floor() as u64).max(1);
    let mut tail = Complex64::new(0.0, 0.0);
    for q in 1..=q_top {
        for c in 0..=q {
            if !(crate::arithmetic::gcd_u64(c, q) == 1) {
                continue;
            }
            let wide = Arc { c, q, l: l_max };
            let trim = Arc { c, q, l: l_trim };
            let center = c as i128 * x as i128;
            let lo = (center - l_max as i128).div_euclid(q as i128).max(1);
            let hi = (center + l_max as i128)
                .div_euclid(q as i128)
                .min(x as i128 - 1);
            for a in lo..=hi {
                let a = a as u64;
                if wide.contains_grid_point(a, x) && !trim.contains_grid_point(a, x) {
                    let idx = (a % x) as usize;
                    let r = (n0 as u128 * a as u128 % x as u128) as u64;
                    tail += stack.digit_grid.values[idx]
                        * stack.floor_power_grid.values[idx]
                        * (stack.small_grid.values[idx] + stack.large_grid.values[idx])
                        * e_unit(-(r as f64) / xf);
                }
            }
        }
    }
    rows.push(row(
        "arc-tail",
        x,
        tail.norm(),
        a_size * xf * xf * lx / l_trim as f64,
    ));

    // small-sum set: digit-set grid restricted to the flagged points
    let classification = classify_grid(
        &stack.floor_power_grid,
        diag.q0.max(1),
        diag.l0,
        cfg.minor_delta,
    );
    let mut small_set = Complex64::new(0.0, 0.0);
    for a in 1..=x {
        if classification.minor_set[(a - 1) as usize] {
            let idx = (a % x) as usize;
            let r = (n0 as u128 * a as u128 % x as u128) as u64;
            small_set += stack.digit_grid.values[idx]
                * stack.floor_power_grid.values[idx]
                * (stack.small_grid.values[idx] + stack.large_grid.values[idx])
                * e_unit(-(r as f64) / xf);
        }
    }
    rows.push(row(
        "small-sum-set",
        x,
        small_set.norm(),
        a_size.sqrt() * xf.powf(2.5 - cfg.minor_delta),
    ));

    // dyadic denominator block (Q, 2Q]
    let q_block = (xf.powf(cfg.minor_delta).floor() as u64).max(2);
    let l_block = diag.l0.min(l_max);
    let mut dyadic = Complex64::new(0.0, 0.0);
    for q in (q_block + 1)..=(2 * q_block) {
        for c in 1..=q {
            if crate::arithmetic::gcd_u64(c, q) != 1 {
                continue;
            }
            let arc = Arc { c, q, l: l_block };
            let center = c as i128 * x as i128;
            let lo = (center - l_block as i128).div_euclid(q as i128).max(1);
            let hi = (center + l_block as i128)
                .div_euclid(q as i128)
                .min(x as i128 - 1);
            for a in lo..=hi {
                let a = a as u64;
                if arc.contains_grid_point(a, x) {
                    let idx = (a % x) as usize;
                    let r = (n0 as u128 * a as u128 % x as u128) as u64;
                    dyadic += stack.digit_grid.values[idx]
                        * stack.floor_power_grid.values[idx]
                        * (stack.small_grid.values[idx] + stack.large_grid.values[idx])
                        * e_unit(-(r as f64) / xf);
                }
            }
        }
    }
    rows.push(row(
        "dyadic-denominators",
        x,
        dyadic.norm(),
        a_size * xf * xf / (q_block as f64).sqrt(),
    ));

    // prime-power sum near a mid-size rational
    let q_mid = {
        let mut q = (xf.powf(0.4).round() as u64).max(2);
        while !crate::primes::is_prime_u64(q) {
            q += 1;
        }
        q
    };
    let xi = 0.5 / (q_mid as f64 * q_mid as f64);
    let theta = 1.0 / q_mid as f64 + xi;
    let mangoldt = von_mangoldt_sum(x, theta);
    rows.push(row(
        "prime-power-sum",
        x,
        mangoldt.norm(),
        lx.powf(3.5) * (xf / (q_mid as f64).sqrt() + xf.powf(0.8) + (xf * q_mid as f64).sqrt()),
    ));

    Ok(rows)
}

/// Σ_{n <= x} Λ(n) e(n theta).
pub fn von_mangoldt_sum(x: u64, theta: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in simple_primes(x) {
        let log_p = (p as f64).ln();
        let mut pk = p;
        loop {
            acc += e_unit(unit_phase(pk, theta)) * log_p;
            match pk.checked_mul(p) {
                Some(next) if next <= x => pk = next,
                _ => break,
            }
        }
    }
    acc
}

/// |J| log X / (size · X), the decay statistic of a convolution family.
pub fn negligibility_ratio(j_abs: f64, family_size: u64, x: u64) -> f64 {
    j_abs * (x as f64).ln() / (family_size as f64 * x as f64)
}
