//! Shared error type for the workbench.

/// Errors surfaced by fallible operations across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Even target: the p = 2 local factor kills the singular series.
    #[error("even-input: singular series vanishes for even targets")]
    EvenInput,

    /// Buchstab grid spacing above the supported resolution.
    #[error("step-too-coarse: step {0} exceeds 1e-3")]
    StepTooCoarse(f64),

    /// Trial division ran out of sieved primes before finishing.
    #[error("needs-factorization: {0} exceeds the trial-division capability")]
    NeedsFactorization(u64),

    /// Input below the smallest admissible value.
    #[error("too-small: {0}")]
    TooSmall(u64),

    /// Argument outside the documented domain.
    #[error("out-of-range: {0}")]
    OutOfRange(String),

    /// Window prefix too short to anchor the short interval.
    #[error("window-too-short: prefix length {0} < 3")]
    WindowTooShort(u32),

    /// Empty sieve-weight range (support cutoff at or below the sifting limit).
    #[error("empty-range: support cutoff y={y} must exceed sifting limit z={z}")]
    EmptyRange { y: f64, z: f64 },

    /// Grids built over different denominators cannot be convolved.
    #[error("grid-mismatch: {0} vs {1}")]
    GridMismatch(u64, u64),

    /// Supports wide enough that modular wrap-arounds cannot be disentangled.
    #[error("aliasing: support widths exceed the safe bound")]
    Aliasing,

    /// Requested sieve range exceeds the in-memory budget.
    #[error("segment-required: range needs {0} bytes, above the budget")]
    SegmentRequired(u64),

    /// Arc parameters outside the admissible thresholds.
    #[error("range: {0}")]
    Range(String),

    /// Monte Carlo region contained no admissible points.
    #[error("empty-polytope")]
    EmptyPolytope,

    /// Integrand unbounded inside the integration region.
    #[error("singular-region: a coordinate approaches 0 inside the polytope")]
    SingularRegion,

    /// Invalid global configuration.
    #[error("invalid-config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
