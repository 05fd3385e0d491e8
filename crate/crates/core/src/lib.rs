//! Desk-scale numerical workbench for ternary Goldbach representations whose
//! summands come from three special prime families: decimal expansions
//! avoiding a fixed digit, floor-power (Piatetski-Shapiro) primes, and primes
//! of the form x^2 + y^2 + 1.
//!
//! The crate builds the discrete circle-method machinery around these
//! families: exponential sums on the rational grid a/X, major-arc
//! approximants, combinatorial sieve weights, and representation counts. It
//! exposes every identity the construction satisfies exactly as a measurable
//! check, plus dimensionless health ratios for the bounds that only hold
//! asymptotically.

pub mod arithmetic;
pub mod buchstab;
pub mod circle;
pub mod error;
pub mod expsum;
pub mod families;
pub mod goldbach;
pub mod primes;
pub mod sieve;

pub use buchstab::{buchstab_omega, BuchstabTable};
pub use error::{Error, Result};
pub use expsum::{ExpSumGrid, WeightedSupport};
pub use families::{FamilyConfig, IntInterval, ShortIntervalWindow};
pub use goldbach::RepresentationReport;
pub use primes::{Factorizer, PrimeTable};
