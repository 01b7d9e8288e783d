//! Exact and modular arithmetic for Wolstenholme-type congruences over the
//! Gaussian integers.
//!
//! The crate is layered bottom-up:
//!
//! - [`gint`]: exact Gaussian integers and Gaussian rationals, generic over the
//!   underlying integer type, plus valuations with respect to a rational base.
//! - [`modring`]: the residue rings `Z[i]/b^M` with three interchangeable
//!   backends (machine word, 128-bit Montgomery, arbitrary precision).
//! - [`sums`]: the reciprocal power sums `S_b^(k)`, their classification, and
//!   the classical harmonic-type checks (Wolstenholme, Glaisher, Leudesdorf).
//! - [`sympoly`]: sparse polynomials in `m, n, p` over `Z[i]` and the 8-tuple
//!   expansion used to certify closed forms.
//! - [`gpoly`]: the root polynomial `g_p(x)`, its low coefficients, and the
//!   Gaussian binomial coefficient checks.

pub mod arith;
pub mod error;
pub mod gint;
pub mod gpoly;
pub mod modring;
pub mod sums;
pub mod sympoly;

pub use error::{Error, Result};
pub use gint::{Gaussian, GaussianFraction, IntScalar, Valuation};
pub use modring::{
    BigRing, GaussianModRing, ModGaussian, Modulus, MontRing, ResidueRing, ResidueValuation,
    WordRing,
};
pub use sums::{Classification, CongruenceRecord, SumSpec};

use num_bigint::BigInt;

/// Arbitrary-precision Gaussian integer.
pub type GaussianInt = Gaussian<BigInt>;
/// Gaussian integer with machine-word components, for small exhaustive checks.
pub type GaussianI64 = Gaussian<i64>;
/// Canonical element of `Q(i)` with arbitrary-precision parts.
pub type GaussianRational = GaussianFraction<BigInt>;
/// Canonical element of `Q`.
pub type Rational = num_rational::BigRational;
/// Residue of `Z[i]/b^M` lifted to canonical non-negative big integers.
pub type BigModGaussian = ModGaussian<num_bigint::BigUint>;
