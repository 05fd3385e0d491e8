//! End-to-end representation counts: the classical three-prime count with its
//! singular-series main term, the mixed three-family count, the pair-overlap
//! volume, and Monte Carlo estimates of the polytope constants.

use std::collections::HashMap;

use num_complex::Complex64;
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::arithmetic::singular_series_over;
use crate::buchstab::BuchstabTable;
use crate::error::{Error, Result};
use crate::families::{
    construct_window, interval_int, ps_primes_in, quadratic_primes_in, FamilyConfig,
    ShortIntervalWindow,
};
use crate::primes::{simple_primes, Factorizer, PrimeTable};

/// Outcome of a representation count for one target.
#[derive(Debug, Clone)]
pub struct RepresentationReport {
    pub n0: u64,
    /// Ordered triples.
    pub raw_count: u64,
    pub weighted_count: f64,
    pub main_term: f64,
    /// weighted_count / main_term when the main term is positive, else 0.
    pub ratio: f64,
}

/// Log-weighted and unit-weighted pair convolutions of the prime indicator up
/// to a limit, shared across targets.
pub struct PairConvolution {
    pub limit: u64,
    log_pairs: Vec<f64>,
    count_pairs: Vec<u64>,
    prime_logs: Vec<(u64, f64)>,
    singular_primes: Vec<u64>,
}

impl PairConvolution {
    /// One forward/inverse FFT pass at size >= 2·limit for each weighting.
    pub fn build(limit: u64, table: &PrimeTable) -> Result<Self> {
        if !(7..=100_000_000).contains(&limit) {
            return Err(Error::OutOfRange(format!("pair convolution limit {limit}")));
        }
        assert!(
            table.lo <= 2 && table.hi > limit,
            "prime table must cover [2, {limit}]"
        );
        let primes = table.primes_in(2, limit + 1);
        let m = (2 * limit as usize + 2).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let ifft = planner.plan_fft_inverse(m);

        let convolve_self = |weights: &dyn Fn(u64) -> f64| -> Vec<f64> {
            let mut buf = vec![Complex64::new(0.0, 0.0); m];
            for &p in &primes {
                buf[p as usize].re = weights(p);
            }
            fft.process(&mut buf);
            for v in buf.iter_mut() {
                *v = *v * *v;
            }
            ifft.process(&mut buf);
            buf.iter().map(|v| v.re / m as f64).collect()
        };

        let log_pairs = convolve_self(&|p| (p as f64).ln());
        let raw = convolve_self(&|_| 1.0);
        let mut count_pairs = Vec::with_capacity(raw.len());
        for (i, v) in raw.iter().enumerate() {
            let rounded = v.round();
            assert!(
                (v - rounded).abs() < 0.25,
                "pair count at {i} drifted from an integer: {v}"
            );
            count_pairs.push(rounded.max(0.0) as u64);
        }
        let prime_logs = primes.iter().map(|&p| (p, (p as f64).ln())).collect();
        Ok(PairConvolution {
            limit,
            log_pairs,
            count_pairs,
            prime_logs,
            singular_primes: simple_primes(100_000),
        })
    }

    /// Σ log p1 log p2 log p3 over ordered prime triples summing to the odd
    /// target, with the main term (1/2) S(n0) n0^2.
    pub fn classical_report(&self, n0: u64) -> Result<RepresentationReport> {
        if n0.is_multiple_of(2) {
            return Err(Error::EvenInput);
        }
        if n0 < 7 || n0 > self.limit {
            return Err(Error::OutOfRange(format!(
                "target {n0} outside [7, {}]",
                self.limit
            )));
        }
        let mut weighted = 0.0f64;
        let mut raw = 0u64;
        for &(p3, log_p3) in &self.prime_logs {
            if p3 + 4 > n0 {
                break;
            }
            let rest = (n0 - p3) as usize;
            weighted += log_p3 * self.log_pairs[rest];
            raw += self.count_pairs[rest];
        }
        let series = singular_series_over(n0, &self.singular_primes)?;
        let main_term = 0.5 * series * (n0 as f64) * (n0 as f64);
        Ok(RepresentationReport {
            n0,
            raw_count: raw,
            weighted_count: weighted,
            main_term,
            ratio: weighted / main_term,
        })
    }
}

/// Brute-force classical count, the oracle for the convolution path.
pub fn classical_brute(n0: u64, table: &PrimeTable) -> (u64, f64) {
    let primes = table.primes_in(2, n0.saturating_sub(3));
    let set: std::collections::HashSet<u64> = primes.iter().copied().collect();
    let mut raw = 0u64;
    let mut weighted = 0.0f64;
    for &p1 in &primes {
        if p1 + 4 > n0 {
            break;
        }
        for &p2 in &primes {
            let Some(p3) = n0.checked_sub(p1 + p2) else {
                break;
            };
            if p3 < 2 {
                break;
            }
            if set.contains(&p3) {
                raw += 1;
                weighted += (p1 as f64).ln() * (p2 as f64).ln() * (p3 as f64).ln();
            }
        }
    }
    (raw, weighted)
}

/// Shared tables for mixed-representation scans over a band of odd targets
/// with a common modulus X.
pub struct MixedScanner {
    pub cfg: FamilyConfig,
    pub window: ShortIntervalWindow,
    /// Digit-set primes of the short window.
    pub anchor_primes: Vec<u64>,
    /// Floor-power primes over the union of all band intervals, ascending,
    /// with weight p^(1-gamma) log p.
    ps_primes: Vec<(u64, f64)>,
    /// Shifted-two-squares primes over the same union: p -> (r(p-1), log p).
    quad: HashMap<u64, (u64, f64)>,
}

impl MixedScanner {
    /// Precompute family tables covering every odd target in [band_lo, band_hi].
    pub fn new(
        cfg: &FamilyConfig,
        band_lo: u64,
        band_hi: u64,
        table: &PrimeTable,
        factorizer: &Factorizer,
    ) -> Result<Self> {
        let x = cfg.x();
        for bound in [band_lo, band_hi] {
            if bound % 2 == 0 || bound < 2 * x || bound >= 20 * x {
                return Err(Error::InvalidConfig(format!(
                    "band endpoint {bound} incompatible with modulus {x}"
                )));
            }
        }
        let window = construct_window(cfg)?;
        let anchor_primes: Vec<u64> = window
            .digit_members()
            .into_iter()
            .filter(|&n| n >= 2 && table.is_prime(n))
            .collect();

        // union of the per-target intervals across the band
        let lo_iv = interval_int(band_lo, x);
        let hi_iv = interval_int(band_hi, x);
        let union = crate::families::IntInterval {
            lo_eighths: lo_iv.lo_eighths,
            hi_eighths: hi_iv.hi_eighths,
            open_lo: true,
        };
        let mut union_cfg = cfg.clone();
        union_cfg.n0 = band_lo;
        let ps_primes = ps_primes_in(&union, &union_cfg, table)
            .into_iter()
            .map(|p| {
                let pf = p as f64;
                (p, pf.powf(1.0 - cfg.gamma()) * pf.ln())
            })
            .collect();
        let quad = quadratic_primes_in(&union, table, factorizer)?
            .into_iter()
            .map(|(p, r)| (p, (r, (p as f64).ln())))
            .collect();
        Ok(MixedScanner {
            cfg: cfg.clone(),
            window,
            anchor_primes,
            ps_primes,
            quad,
        })
    }

    /// Count triples p1 + p2 + p3 = n0 with p1 an anchor prime, p2 a
    /// floor-power prime and p3 a shifted-two-squares prime, both in the
    /// target's summand interval.
    ///
    /// weighted = Σ p2^(1-gamma) r(p3-1) log p2 log p3; the main term is the
    /// unit-density pair volume aggregated over the anchors, so the ratio
    /// column measures the arithmetic constant instead of assuming one.
    pub fn report(&self, n0: u64) -> Result<RepresentationReport> {
        if n0.is_multiple_of(2) {
            return Err(Error::EvenInput);
        }
        let x = self.cfg.x();
        let interval = interval_int(n0, x);
        let first = interval.first();
        let last = interval.last();
        let mut raw = 0u64;
        let mut weighted = 0.0f64;
        let mut main = 0.0f64;
        for &p1 in &self.anchor_primes {
            let rest = n0 - p1;
            // p2 must leave p3 = rest - p2 inside the interval as well
            let lo2 = first.max(rest.saturating_sub(last));
            let hi2 = last.min(rest.saturating_sub(first));
            let start = self.ps_primes.partition_point(|&(p, _)| p < lo2);
            for &(p2, w2) in &self.ps_primes[start..] {
                if p2 > hi2 {
                    break;
                }
                let p3 = rest - p2;
                if let Some(&(r, log_p3)) = self.quad.get(&p3) {
                    raw += 1;
                    weighted += w2 * r as f64 * log_p3;
                }
            }
            main += volume_overlap(n0, x, p1 as f64);
        }
        let ratio = if main > 0.0 { weighted / main } else { 0.0 };
        Ok(RepresentationReport {
            n0,
            raw_count: raw,
            weighted_count: weighted,
            main_term: main,
            ratio,
        })
    }

    /// Supports matching this scanner's weights, for cross-checks against the
    /// direct triple-sum machinery.
    pub fn supports(
        &self,
        n0: u64,
    ) -> (
        crate::expsum::WeightedSupport,
        crate::expsum::WeightedSupport,
        crate::expsum::WeightedSupport,
    ) {
        use crate::expsum::{SumLabel, WeightedSupport};
        let interval = interval_int(n0, self.cfg.x());
        let anchors = WeightedSupport::from_entries(
            self.anchor_primes.iter().map(|&p| (p, 1.0)).collect(),
            SumLabel::DigitSetPrimes,
        );
        let ps = WeightedSupport::from_entries(
            self.ps_primes
                .iter()
                .filter(|&&(p, _)| interval.contains(p))
                .map(|&(p, w)| (p, w))
                .collect(),
            SumLabel::FloorPowerPrimes,
        );
        let quad = WeightedSupport::from_entries(
            self.quad
                .iter()
                .filter(|&(&p, _)| interval.contains(p))
                .map(|(&p, &(r, log_p))| (p, r as f64 * log_p))
                .collect(),
            SumLabel::ShiftedTwoSquares,
        );
        (anchors, ps, quad)
    }
}

/// Single-target mixed count: a one-element band around the config's own
/// target.
pub fn mixed_representation(
    cfg: &FamilyConfig,
    table: &PrimeTable,
    factorizer: &Factorizer,
) -> Result<RepresentationReport> {
    MixedScanner::new(cfg, cfg.n0, cfg.n0, table, factorizer)?.report(cfg.n0)
}

/// Length of {w in the summand interval : n0 - w - y also inside}: a tent in
/// y supported on an interval of width X/4 with peak X/8.
pub fn volume_overlap(n0: u64, x: u64, y: f64) -> f64 {
    let interval = interval_int(n0, x);
    let a = interval.lo_f64();
    let b = interval.hi_f64();
    let lo = a.max(n0 as f64 - y - b);
    let hi = b.min(n0 as f64 - y - a);
    (hi - lo).max(0.0)
}

/// One affine constraint offset + coeffs·u >= 0.
#[derive(Debug, Clone)]
pub struct AffineConstraint {
    pub coeffs: Vec<f64>,
    pub offset: f64,
}

impl AffineConstraint {
    pub fn eval(&self, u: &[f64]) -> f64 {
        self.offset + self.coeffs.iter().zip(u).map(|(c, v)| c * v).sum::<f64>()
    }
}

/// A polytope inside the unit cube cut out by finitely many affine
/// constraints.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub dim: usize,
    pub constraints: Vec<AffineConstraint>,
}

impl Polytope {
    pub fn contains(&self, u: &[f64]) -> bool {
        debug_assert_eq!(u.len(), self.dim);
        u.iter().all(|&v| (0.0..=1.0).contains(&v))
            && self.constraints.iter().all(|c| c.eval(u) >= -1e-12)
    }

    /// Axis-aligned box [lo_i, hi_i] as constraint pairs.
    pub fn hyperbox(lo: &[f64], hi: &[f64]) -> Polytope {
        assert_eq!(lo.len(), hi.len());
        let dim = lo.len();
        let mut constraints = Vec::new();
        for i in 0..dim {
            let mut up = vec![0.0; dim];
            up[i] = 1.0;
            constraints.push(AffineConstraint {
                coeffs: up.clone(),
                offset: -lo[i],
            });
            let mut down = vec![0.0; dim];
            down[i] = -1.0;
            constraints.push(AffineConstraint {
                coeffs: down,
                offset: hi[i],
            });
        }
        Polytope { dim, constraints }
    }
}

#[inline]
fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn mc_mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// Monte Carlo value of ∫ Vol(n0, y) dy over the polytope image, with u
/// uniform on the unit cube, y = X^(u1+...+ul) and dy = y (log X)^l du.
/// Returns (estimate, standard error).
pub fn gamma_estimate(
    n0: u64,
    x: u64,
    region: &Polytope,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    assert!(samples >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lx = (x as f64).ln();
    let mut values = Vec::with_capacity(samples as usize);
    let mut hits = 0u64;
    let mut point = vec![0.0f64; region.dim];
    for _ in 0..samples {
        for v in point.iter_mut() {
            *v = uniform01(&mut rng);
        }
        if region.contains(&point) {
            hits += 1;
            let exponent: f64 = point.iter().sum();
            let y = (x as f64).powf(exponent);
            values.push(volume_overlap(n0, x, y) * y * lx.powi(region.dim as i32));
        } else {
            values.push(0.0);
        }
    }
    if hits == 0 {
        return Err(Error::EmptyPolytope);
    }
    Ok(mc_mean_stderr(&values))
}

/// True when the region admits points with some coordinate essentially at 0,
/// where 1/(u1···ul) blows up. Probed by sampling each low-coordinate slab.
fn touches_coordinate_zero(region: &Polytope, rng: &mut ChaCha8Rng) -> bool {
    let mut point = vec![0.0f64; region.dim];
    for axis in 0..region.dim {
        for _ in 0..512 {
            for (i, v) in point.iter_mut().enumerate() {
                *v = if i == axis {
                    uniform01(rng) * 1e-6
                } else {
                    uniform01(rng)
                };
            }
            if region.contains(&point) {
                return true;
            }
        }
    }
    false
}

/// Monte Carlo value of Γ ∫_R ω(1 - u1 - ... - ul) / (u1···ul z(u)) du.
///
/// ω below 1 follows the reciprocal branch; a region reaching a coordinate
/// hyperplane (or a nonpositive z on it) makes the integrand unbounded and is
/// an error.
pub fn prop_volume_integral(
    region: &Polytope,
    z: impl Fn(&[f64]) -> f64,
    gamma: f64,
    omega: &BuchstabTable,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    assert!(samples >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if touches_coordinate_zero(region, &mut rng) {
        return Err(Error::SingularRegion);
    }
    let mut values = Vec::with_capacity(samples as usize);
    let mut hits = 0u64;
    let mut point = vec![0.0f64; region.dim];
    for _ in 0..samples {
        for v in point.iter_mut() {
            *v = uniform01(&mut rng);
        }
        if !region.contains(&point) {
            values.push(0.0);
            continue;
        }
        hits += 1;
        let product: f64 = point.iter().product();
        if product < 1e-9 {
            return Err(Error::SingularRegion);
        }
        let zv = z(&point);
        if zv <= 0.0 {
            return Err(Error::SingularRegion);
        }
        let tail = 1.0 - point.iter().sum::<f64>();
        if tail > omega.u_max {
            return Err(Error::OutOfRange(format!(
                "omega argument {tail} above the table"
            )));
        }
        values.push(omega.eval_extended(tail) / (product * zv));
    }
    if hits == 0 {
        return Err(Error::EmptyPolytope);
    }
    let (mean, err) = mc_mean_stderr(&values);
    Ok((gamma * mean, gamma.abs() * err))
}
