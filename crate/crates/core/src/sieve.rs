//! Sifted sets, the Buchstab recursion on exponential sums, and combinatorial
//! (beta-sieve) upper/lower weights with their fundamental-lemma diagnostics.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expsum::{e_unit, unit_phase};
use crate::primes::simple_primes;

/// {c ∈ C : p | c ⇒ p > z}. The member 1 always survives.
pub fn sifted_set(c: &[u64], z: f64) -> Vec<u64> {
    let primes = simple_primes(z.floor().max(0.0) as u64);
    c.iter()
        .copied()
        .filter(|&n| n >= 1 && primes.iter().all(|&p| n % p != 0))
        .collect()
}

/// {c ∈ C : p | c ⇒ p >= min_p}: sifting by the primes strictly below min_p.
pub fn sifted_set_min_prime(c: &[u64], min_p: u64) -> Vec<u64> {
    let primes = simple_primes(min_p.saturating_sub(1));
    c.iter()
        .copied()
        .filter(|&n| n >= 1 && primes.iter().all(|&p| n % p != 0))
        .collect()
}

/// Σ e(nθ) over a set.
pub fn set_exp_sum(set: &[u64], theta: f64) -> Complex64 {
    set.iter().map(|&n| e_unit(unit_phase(n, theta))).sum()
}

/// One step of the Buchstab recursion on exponential sums.
#[derive(Debug, Clone, Copy)]
pub struct BuchstabStep {
    /// S(C, u2, θ)
    pub deeper: Complex64,
    /// S(C, u1, θ)
    pub shallower: Complex64,
    /// Σ_{u1 < p <= u2} S(C_p, p, θ), the removed layer
    pub removed: Complex64,
}

impl BuchstabStep {
    /// |deeper - (shallower - removed)|, zero up to float round-off.
    pub fn residual(&self) -> f64 {
        (self.deeper - (self.shallower - self.removed)).norm()
    }
}

/// Evaluate both sides of S(C, u2, θ) = S(C, u1, θ) - Σ_{u1<p<=u2} S(C_p, p, θ).
///
/// The removed layer for a prime p is the members of C whose least prime
/// factor is exactly p (the multiples of p with no factor below p), with
/// phases at the members themselves. That is the one reading under which the
/// recursion is a support-level partition, exact at every θ; phases at the
/// quotients c/p would already break it on C = {15}, (u1, u2) = (2, 3).
pub fn buchstab_step(c: &[u64], u1: f64, u2: f64, theta: f64) -> BuchstabStep {
    assert!(1.0 <= u1 && u1 <= u2);
    let deeper = set_exp_sum(&sifted_set(c, u2), theta);
    let shallower = set_exp_sum(&sifted_set(c, u1), theta);
    let mut removed = Complex64::new(0.0, 0.0);
    for p in simple_primes(u2.floor() as u64) {
        if (p as f64) <= u1 {
            continue;
        }
        let multiples: Vec<u64> = c.iter().filter(|&&n| n % p == 0).copied().collect();
        removed += set_exp_sum(&sifted_set_min_prime(&multiples, p), theta);
    }
    BuchstabStep {
        deeper,
        shallower,
        removed,
    }
}

/// Side of the sieve sandwich a weight set realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveVariant {
    Upper,
    Lower,
}

/// Truncated inclusion-exclusion weights λ supported on squarefree products
/// of admissible primes below z, all below the cutoff y.
#[derive(Debug, Clone)]
pub struct SieveWeights {
    pub y: f64,
    pub z: f64,
    pub variant: SieveVariant,
    /// Primes excluded from the sifting range entirely (2 and 5 by default).
    pub excluded: Vec<u64>,
    values: BTreeMap<u64, f64>,
}

impl SieveWeights {
    pub fn get(&self, d: u64) -> f64 {
        self.values.get(&d).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&u64, &f64)> {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Σ_{d | n} λ(d) over the stored support.
    pub fn divisor_sum(&self, n: u64) -> f64 {
        self.values
            .iter()
            .filter(|&(&d, _)| n.is_multiple_of(d))
            .map(|(_, &v)| v)
            .sum()
    }

    /// Test hook: zero out λ(1), deliberately breaking the construction.
    pub fn corrupt_unit(&mut self) {
        self.values.insert(1, 0.0);
    }
}

/// Walk the beta-sieve support (dimension 1, beta = 2): descending prime
/// chains p1 > p2 > ... from the sifting range with the truncation
/// p1···p_{m-1}·p_m^3 < y imposed at every odd position m (upper sieve) or
/// every even position (lower sieve). Calls `visit(d, μ(d))` for every
/// retained squarefree product, including d = 1.
fn walk_beta_chains(
    primes_desc: &[u64],
    y: f64,
    variant: SieveVariant,
    visit: &mut impl FnMut(u64, i64),
) {
    fn recurse(
        primes_desc: &[u64],
        start: usize,
        product: u64,
        depth: u32,
        y: f64,
        variant: SieveVariant,
        visit: &mut impl FnMut(u64, i64),
    ) {
        let mu = if depth.is_multiple_of(2) { 1i64 } else { -1 };
        visit(product, mu);
        for i in start..primes_desc.len() {
            let p = primes_desc[i];
            let pf = p as f64;
            let position_odd = depth.is_multiple_of(2); // next position is depth+1
            let constrained = match variant {
                SieveVariant::Upper => position_odd,
                SieveVariant::Lower => !position_odd,
            };
            if constrained && (product as f64) * pf * pf * pf >= y {
                continue;
            }
            if (product as f64) * pf >= y {
                continue;
            }
            recurse(
                primes_desc,
                i + 1,
                product * p,
                depth + 1,
                y,
                variant,
                visit,
            );
        }
    }
    recurse(primes_desc, 0, 1, 0, y, variant, visit);
}

fn sieve_primes_desc(z: f64, excluded: &[u64]) -> Vec<u64> {
    let mut primes: Vec<u64> = simple_primes((z - 1.0).max(0.0).floor() as u64)
        .into_iter()
        .filter(|p| !excluded.contains(p))
        .collect();
    primes.reverse();
    primes
}

/// Build beta-sieve weights supported on products of primes < z coprime to
/// 10, with cutoff y.
pub fn build_lambda(y: f64, z: f64, variant: SieveVariant) -> Result<SieveWeights> {
    build_lambda_with_exclusions(y, z, variant, &[2, 5])
}

/// Same construction with a caller-chosen excluded prime set (empty set gives
/// the plain sieve, used by unit tests).
pub fn build_lambda_with_exclusions(
    y: f64,
    z: f64,
    variant: SieveVariant,
    excluded: &[u64],
) -> Result<SieveWeights> {
    if y <= z {
        return Err(Error::EmptyRange { y, z });
    }
    let primes_desc = sieve_primes_desc(z, excluded);
    let mut values = BTreeMap::new();
    walk_beta_chains(&primes_desc, y, variant, &mut |d, mu| {
        values.insert(d, mu as f64);
    });
    Ok(SieveWeights {
        y,
        z,
        variant,
        excluded: excluded.to_vec(),
        values,
    })
}

/// Full Möbius weights on the divisors of P(z) (no truncation); the classical
/// inclusion-exclusion reference the λ± bracket.
pub fn mobius_weights(z: f64, excluded: &[u64]) -> SieveWeights {
    let primes_desc = sieve_primes_desc(z, excluded);
    assert!(primes_desc.len() <= 20, "full Möbius support would explode");
    let mut values = BTreeMap::new();
    fn recurse(
        primes: &[u64],
        start: usize,
        product: u64,
        mu: f64,
        values: &mut BTreeMap<u64, f64>,
    ) {
        values.insert(product, mu);
        for i in start..primes.len() {
            recurse(primes, i + 1, product * primes[i], -mu, values);
        }
    }
    recurse(&primes_desc, 0, 1, 1.0, &mut values);
    SieveWeights {
        y: f64::INFINITY,
        z,
        variant: SieveVariant::Upper,
        excluded: excluded.to_vec(),
        values,
    }
}

/// λ-twisted exponential sum Σ_{n∈C} e(nθ) Σ_{t|n} λ(t), computed
/// divisor-first: Σ_t λ(t) Σ_{n∈C, t|n} e(nθ).
pub fn lambda_weighted_sum(c: &[u64], theta: f64, w: &SieveWeights) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&t, &lam) in w.support() {
        if lam == 0.0 {
            continue;
        }
        let mut inner = Complex64::new(0.0, 0.0);
        for &n in c {
            if n % t == 0 {
                inner += e_unit(unit_phase(n, theta));
            }
        }
        acc += inner * lam;
    }
    acc
}

/// Definition-order evaluation of the same sum, used as the exactness oracle.
pub fn lambda_weighted_sum_direct(c: &[u64], theta: f64, w: &SieveWeights) -> Complex64 {
    c.iter()
        .map(|&n| e_unit(unit_phase(n, theta)) * w.divisor_sum(n))
        .sum()
}

/// Both sides of the fundamental-lemma approximation for a multiplicative
/// density g: Σ_d λ±(d) g(d) against Π_{p<z} (1 - g(p)), with the e^{-s}
/// reference scale, s = log y / log z.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalLemmaReport {
    pub s: f64,
    pub upper_sum: f64,
    pub lower_sum: f64,
    pub product: f64,
    pub upper_ratio: f64,
    pub lower_ratio: f64,
    pub reference_scale: f64,
}

impl FundamentalLemmaReport {
    /// Larger of the two ratio deviations |ratio - 1|.
    pub fn max_deviation(&self) -> f64 {
        (self.upper_ratio - 1.0)
            .abs()
            .max((self.lower_ratio - 1.0).abs())
    }
}

/// Evaluate the λ±-weighted g-sums by walking the support tree (no
/// materialized map, so large cutoffs stay cheap) and compare with the
/// product over the sifting range.
pub fn fundamental_lemma_check(
    g: impl Fn(u64) -> f64,
    y: f64,
    z: f64,
    excluded: &[u64],
) -> Result<FundamentalLemmaReport> {
    if y <= z {
        return Err(Error::EmptyRange { y, z });
    }
    let primes_desc = sieve_primes_desc(z, excluded);
    for &p in &primes_desc {
        let gp = g(p);
        assert!((0.0..1.0).contains(&gp), "g({p}) = {gp} outside [0, 1)");
    }
    let mut product = 1.0f64;
    for &p in &primes_desc {
        product *= 1.0 - g(p);
    }

    // g is multiplicative on squarefree support: accumulate the product of
    // g(p) along each chain
    #[allow(clippy::too_many_arguments)]
    fn weighted_walk(
        primes_desc: &[u64],
        g: &impl Fn(u64) -> f64,
        start: usize,
        product: u64,
        g_acc: f64,
        depth: u32,
        y: f64,
        variant: SieveVariant,
        acc: &mut f64,
    ) {
        let mu = if depth.is_multiple_of(2) { 1.0 } else { -1.0 };
        *acc += mu * g_acc;
        for i in start..primes_desc.len() {
            let p = primes_desc[i];
            let pf = p as f64;
            let gp = g(p);
            if gp == 0.0 {
                continue;
            }
            let position_odd = depth.is_multiple_of(2);
            let constrained = match variant {
                SieveVariant::Upper => position_odd,
                SieveVariant::Lower => !position_odd,
            };
            if constrained && (product as f64) * pf * pf * pf >= y {
                continue;
            }
            if (product as f64) * pf >= y {
                continue;
            }
            weighted_walk(
                primes_desc,
                g,
                i + 1,
                product * p,
                g_acc * gp,
                depth + 1,
                y,
                variant,
                acc,
            );
        }
    }

    let mut upper_sum = 0.0;
    weighted_walk(
        &primes_desc,
        &g,
        0,
        1,
        1.0,
        0,
        y,
        SieveVariant::Upper,
        &mut upper_sum,
    );
    let mut lower_sum = 0.0;
    weighted_walk(
        &primes_desc,
        &g,
        0,
        1,
        1.0,
        0,
        y,
        SieveVariant::Lower,
        &mut lower_sum,
    );

    let s = y.ln() / z.ln();
    Ok(FundamentalLemmaReport {
        s,
        upper_sum,
        lower_sum,
        product,
        upper_ratio: if product != 0.0 {
            upper_sum / product
        } else {
            f64::NAN
        },
        lower_ratio: if product != 0.0 {
            lower_sum / product
        } else {
            f64::NAN
        },
        reference_scale: (-s).exp(),
    })
}

/// True when n has no prime factor below z outside the excluded set; the
/// event the sandwich brackets.
pub fn is_rough(n: u64, z: f64, excluded: &[u64]) -> bool {
    if n == 0 {
        return false;
    }
    for p in simple_primes((z - 1.0).max(0.0).floor() as u64) {
        if excluded.contains(&p) {
            continue;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    true
}

/// Count of sandwich violations over 1..=limit: places where
/// Σλ⁻(d|n) <= [n rough] <= Σλ⁺(d|n) fails.
///
/// The divisor sums for the whole block are accumulated support-first, one
/// pass per support element.
pub fn sandwich_violations(limit: u64, lower: &SieveWeights, upper: &SieveWeights) -> u64 {
    let n = limit as usize;
    let mut lo_sum = vec![0.0f64; n + 1];
    let mut hi_sum = vec![0.0f64; n + 1];
    for (&d, &lam) in lower.support() {
        let mut m = d as usize;
        while m <= n {
            lo_sum[m] += lam;
            m += d as usize;
        }
    }
    for (&d, &lam) in upper.support() {
        let mut m = d as usize;
        while m <= n {
            hi_sum[m] += lam;
            m += d as usize;
        }
    }
    let mut violations = 0u64;
    for m in 1..=n {
        let rough = f64::from(is_rough(m as u64, lower.z, &lower.excluded));
        if lo_sum[m] > rough + 1e-9 || rough > hi_sum[m] + 1e-9 {
            violations += 1;
        }
    }
    violations
}
