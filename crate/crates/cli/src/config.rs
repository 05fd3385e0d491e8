//! Flat key = value configuration with [section] headers. Runs carry enough
//! parameters that a file beats positional flags; the few global flags
//! override file values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use goldbach_core::arithmetic::gcd_u64;
use goldbach_core::families::FamilyConfig;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Everything a run can configure, with defaults suitable for quick desk
/// experiments.
#[derive(Debug, Clone)]
pub struct RunConfig {
    // [family]
    pub forbidden_digit: u8,
    pub c_num: u64,
    pub c_den: u64,
    pub k: u32,
    pub n0: u64, // 0 = derive 4·10^k + 1
    pub split_sharpness: f64,
    pub minor_delta: f64,
    pub window_prefix: u32,
    // [diagnostics]
    pub q0: u64, // 0 = (log X)^2
    pub l0: u64, // 0 = (log X)^3
    pub c1: f64,
    pub epsilon: f64,
    pub a_power: f64,
    pub b_power: f64,
    // [run]
    pub seed: u64,
    pub threads: usize,
    pub factor_bound: u64,
    pub out_dir: PathBuf,
    // [primes]
    pub primes_lo: u64,
    pub primes_hi: u64,
    pub cache_path: PathBuf,
    // [verify]
    pub band_start: u64,
    pub band_count: u64,
    pub external_integral_sum: f64,
    // [scaling]
    pub k_values: Vec<u32>,
    // [singular]
    pub singular_targets: Vec<u64>,
    pub singular_cutoff: u64,
    // [buchstab]
    pub u_max: f64,
    pub step: f64,
    // [arcs]
    pub arcs_q0: u64, // 0 = diagnostics default
    pub arcs_l0: u64,
    // [expsum]
    pub expsum_grid: String,
    // [identities]
    pub corrupt_lambda: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            forbidden_digit: 7,
            c_num: 21,
            c_den: 20,
            k: 4,
            n0: 0,
            split_sharpness: 1.0,
            minor_delta: 0.04,
            window_prefix: 3,
            q0: 0,
            l0: 0,
            c1: 2.0,
            epsilon: 0.01,
            a_power: 2.0,
            b_power: 2.0,
            seed: 0,
            threads: 0,
            factor_bound: 10_000_000,
            out_dir: PathBuf::from("."),
            primes_lo: 2,
            primes_hi: 1_000_000,
            cache_path: PathBuf::from("primes.cache"),
            band_start: 200_001,
            band_count: 1_001,
            external_integral_sum: 0.996,
            k_values: vec![4, 5],
            singular_targets: vec![3, 5, 9],
            singular_cutoff: 1_000_000,
            u_max: 20.0,
            step: 1e-4,
            arcs_q0: 0,
            arcs_l0: 0,
            expsum_grid: "digit".into(),
            corrupt_lambda: false,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return err(format!("line {}: malformed section header", lineno + 1));
                };
                section = name.trim().to_string();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("line {}: expected key = value", lineno + 1));
            };
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            let full = format!("{section}.{key}");
            if seen.insert(full.clone(), lineno).is_some() {
                return err(format!("line {}: duplicate key {full}", lineno + 1));
            }
            cfg.apply(&section, key, value)
                .map_err(|e| ConfigError(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        match (section, key) {
            ("family", "forbidden_digit") => self.forbidden_digit = parse_num(value)?,
            ("family", "c") => (self.c_num, self.c_den) = parse_rational(value)?,
            ("family", "k") => self.k = parse_num(value)?,
            ("family", "n0") => self.n0 = parse_num(value)?,
            ("family", "split_sharpness") => self.split_sharpness = parse_float(value)?,
            ("family", "minor_delta") => self.minor_delta = parse_float(value)?,
            ("family", "window_prefix") => self.window_prefix = parse_num(value)?,
            ("diagnostics", "q0") => self.q0 = parse_num(value)?,
            ("diagnostics", "l0") => self.l0 = parse_num(value)?,
            ("diagnostics", "c1") => self.c1 = parse_float(value)?,
            ("diagnostics", "epsilon") => self.epsilon = parse_float(value)?,
            ("diagnostics", "a_power") => self.a_power = parse_float(value)?,
            ("diagnostics", "b_power") => self.b_power = parse_float(value)?,
            ("run", "seed") => self.seed = parse_num(value)?,
            ("run", "threads") => self.threads = parse_num::<u64>(value)? as usize,
            ("run", "factor_bound") => self.factor_bound = parse_num(value)?,
            ("run", "out_dir") => self.out_dir = PathBuf::from(value),
            ("primes", "lo") => self.primes_lo = parse_num(value)?,
            ("primes", "hi") => self.primes_hi = parse_num(value)?,
            ("primes", "cache") => self.cache_path = PathBuf::from(value),
            ("verify", "band_start") => self.band_start = parse_num(value)?,
            ("verify", "band_count") => self.band_count = parse_num(value)?,
            ("verify", "external_integral_sum") => self.external_integral_sum = parse_float(value)?,
            ("scaling", "k_values") => {
                self.k_values = parse_list(value)?;
                if self.k_values.is_empty() {
                    return err("k_values must not be empty");
                }
            }
            ("singular", "targets") => self.singular_targets = parse_list(value)?,
            ("singular", "cutoff") => self.singular_cutoff = parse_num(value)?,
            ("buchstab", "u_max") => self.u_max = parse_float(value)?,
            ("buchstab", "step") => self.step = parse_float(value)?,
            ("arcs", "q0") => self.arcs_q0 = parse_num(value)?,
            ("arcs", "l0") => self.arcs_l0 = parse_num(value)?,
            ("expsum", "grid") => self.expsum_grid = value.to_string(),
            ("identities", "corrupt_lambda") => self.corrupt_lambda = parse_bool(value)?,
            _ => return err(format!("unknown key [{section}] {key}")),
        }
        Ok(())
    }

    /// Effective target: explicit n0 or the canonical 4·10^k + 1.
    pub fn target(&self) -> u64 {
        if self.n0 != 0 {
            self.n0
        } else {
            4 * 10u64.pow(self.k) + 1
        }
    }

    pub fn family(&self) -> Result<FamilyConfig, ConfigError> {
        FamilyConfig::new(
            self.forbidden_digit,
            self.c_num,
            self.c_den,
            self.k,
            self.target(),
            self.split_sharpness,
            self.minor_delta,
            self.window_prefix,
        )
        .map_err(|e| ConfigError(e.to_string()))
    }

    pub fn family_at(&self, k: u32) -> Result<FamilyConfig, ConfigError> {
        FamilyConfig::new(
            self.forbidden_digit,
            self.c_num,
            self.c_den,
            k,
            4 * 10u64.pow(k) + 1,
            self.split_sharpness,
            self.minor_delta,
            self.window_prefix,
        )
        .map_err(|e| ConfigError(e.to_string()))
    }
}

fn parse_num<T: std::str::FromStr>(value: &str) -> Result<T, ConfigError> {
    value
        .replace('_', "")
        .parse()
        .map_err(|_| ConfigError(format!("bad integer {value:?}")))
}

fn parse_float(value: &str) -> Result<f64, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("bad number {value:?}")))
}

fn parse_bool(value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => err(format!("bad boolean {value:?}")),
    }
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| ConfigError(format!("bad list item {s:?}")))
        })
        .collect()
}

/// Exponent given either as a decimal ("1.05") or a fraction ("21/20"); both
/// are exact rationals.
fn parse_rational(value: &str) -> Result<(u64, u64), ConfigError> {
    let (num, den) = if let Some((a, b)) = value.split_once('/') {
        (
            a.trim()
                .parse()
                .map_err(|_| ConfigError(format!("bad fraction {value:?}")))?,
            b.trim()
                .parse()
                .map_err(|_| ConfigError(format!("bad fraction {value:?}")))?,
        )
    } else if let Some((int_part, frac_part)) = value.split_once('.') {
        let digits = frac_part.len() as u32;
        if digits > 12 || frac_part.chars().any(|c| !c.is_ascii_digit()) {
            return err(format!("bad decimal {value:?}"));
        }
        let int_val: u64 = int_part
            .parse()
            .map_err(|_| ConfigError(format!("bad decimal {value:?}")))?;
        let frac_val: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().unwrap()
        };
        let den = 10u64.pow(digits);
        (int_val * den + frac_val, den)
    } else {
        (
            value
                .parse()
                .map_err(|_| ConfigError(format!("bad exponent {value:?}")))?,
            1,
        )
    };
    if den == 0 || num == 0 {
        return err(format!("degenerate exponent {value:?}"));
    }
    let g = gcd_u64(num, den);
    Ok((num / g, den / g))
}
