//! Reciprocal power sums `S_b^(k)` over the grid `1 <= n, m <= b-1` and their
//! classification against the expected exponent `m(k)`.

mod classical;
mod composite;

pub use classical::*;
pub use composite::*;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{GaussianModRing, ModGaussian, Modulus, ResidueRing, ResidueValuation};
use crate::{with_gaussian_ring, GaussianInt, GaussianRational};

/// Default exact-oracle base limit; `GW_ORACLE_LIMIT` overrides it.
pub const DEFAULT_ORACLE_LIMIT: u64 = 50;
pub const ORACLE_LIMIT_ENV: &str = "GW_ORACLE_LIMIT";

/// Default working precision `M` for prime bases.
pub const PRIME_PRECISION: u32 = 8;
/// Default working precision `M` for composite bases.
pub const COMPOSITE_PRECISION: u32 = 4;

/// One sum `S_base^(k)` evaluated modulo `base^precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumSpec {
    pub base: u64,
    pub k: u32,
    pub precision: u32,
}

impl SumSpec {
    pub fn new(base: u64, k: u32, precision: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if k < 1 {
            return Err(Error::InvalidArgument("power k must be at least 1".into()));
        }
        if precision < 1 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        Ok(SumSpec { base, k, precision })
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.base, self.precision).expect("validated spec")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Classification {
    Expected,
    Weaker,
    Stronger,
    #[serde(rename = "None")]
    NoDivisibility,
}

impl Classification {
    /// Classifies an observed exponent read at precision `M`.
    ///
    /// A saturated reading is only a lower bound `>= M`; it is classified
    /// `Stronger` when `M > expected` and `Expected` when `M == expected`.
    pub fn from_observed(observed: u32, saturated: bool, expected: u32) -> Classification {
        use std::cmp::Ordering::*;
        if observed == 0 && !saturated {
            return Classification::NoDivisibility;
        }
        match observed.cmp(&expected) {
            Less => Classification::Weaker,
            Equal => Classification::Expected,
            Greater => Classification::Stronger,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Expected => "Expected",
            Classification::Weaker => "Weaker",
            Classification::Stronger => "Stronger",
            Classification::NoDivisibility => "None",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of checking `S_base^(k) ≡ 0 (mod base^expected)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceRecord {
    pub base: u64,
    pub k: u32,
    pub expected: u32,
    pub observed: u32,
    pub saturated: bool,
    #[serde(rename = "type")]
    pub classification: Classification,
}

impl CongruenceRecord {
    pub fn from_valuation(base: u64, k: u32, v: ResidueValuation) -> Self {
        let expected = expected_exponent(k);
        CongruenceRecord {
            base,
            k,
            expected,
            observed: v.value,
            saturated: v.saturated,
            classification: Classification::from_observed(v.value, v.saturated, expected),
        }
    }

    /// Whether the expected congruence holds (possibly more strongly).
    pub fn holds(&self) -> bool {
        self.observed >= self.expected
    }

    /// `observed` as printed: `>=M` when saturated.
    pub fn observed_display(&self) -> String {
        if self.saturated {
            format!(">={}", self.observed)
        } else {
            self.observed.to_string()
        }
    }
}

/// `m(k) = 4 - ((k - 1) mod 4)`, cycling 4, 3, 2, 1.
pub fn expected_exponent(k: u32) -> u32 {
    assert!(k >= 1, "k must be at least 1");
    4 - (k - 1) % 4
}

/// Whether `(n, m)` contributes to `S_base`, i.e. `gcd(base, n² + m²) = 1`.
pub fn is_included(base: u64, n: u64, m: u64) -> bool {
    (n * n + m * m).gcd(&base) == 1
}

/// Number of `(n, m)` in `[1, base-1]²` with `gcd(base, n² + m²) = 1`.
pub fn included_pair_count(base: u64) -> u64 {
    let mut count = 0;
    for n in 1..base {
        for m in 1..base {
            if is_included(base, n, m) {
                count += 1;
            }
        }
    }
    count
}

/// All of `S_base^(1..=k_max)` in a given residue ring.
///
/// One Gaussian inverse per grid point; the powers `1..=k_max` follow by
/// repeated multiplication, so every `k` shares the same inversion cost.
pub fn power_sums_in<R: ResidueRing>(
    ring: &GaussianModRing<R>,
    base: u64,
    k_max: u32,
) -> Vec<ModGaussian<R::Elem>> {
    let r = ring.ring();
    let mut sums = vec![ring.zero(); k_max as usize];
    for n in 1..base {
        for m in 1..base {
            let norm = n * n + m * m;
            if norm.gcd(&base) != 1 {
                continue;
            }
            let norm_inv = r.inv(&r.from_u64(norm)).expect("norm coprime to base");
            // 1/(n+mi) = (n - mi)/N
            let inv = ModGaussian {
                re: r.mul(&r.from_u64(n), &norm_inv),
                im: r.neg(&r.mul(&r.from_u64(m), &norm_inv)),
            };
            let mut power = inv.clone();
            for (j, acc) in sums.iter_mut().enumerate() {
                if j > 0 {
                    power = ring.mul(&power, &inv);
                }
                ring.add_assign(acc, &power);
            }
        }
    }
    sums
}

/// `S_base^(k) mod base^precision`, lifted to canonical representatives.
pub fn sum_modular(spec: SumSpec) -> ModGaussian<BigUint> {
    let mut all = sum_modular_all(spec.base, spec.k, spec.precision).expect("validated spec");
    all.pop().expect("k >= 1")
}

/// `S_base^(1..=k_max) mod base^precision`, lifted.
pub fn sum_modular_all(base: u64, k_max: u32, precision: u32) -> Result<Vec<ModGaussian<BigUint>>> {
    let spec = SumSpec::new(base, k_max, precision)?;
    Ok(with_gaussian_ring!(spec.modulus(), ring => {
        power_sums_in(&ring, base, k_max).iter().map(|s| ring.lift(s)).collect()
    }))
}

/// Residue valuations of `S_base^(1..=k_max)` at precision `M`.
pub fn sum_valuations(base: u64, k_max: u32, precision: u32) -> Result<Vec<ResidueValuation>> {
    let spec = SumSpec::new(base, k_max, precision)?;
    Ok(with_gaussian_ring!(spec.modulus(), ring => {
        power_sums_in(&ring, base, k_max).iter().map(|s| ring.residue_valuation(s)).collect()
    }))
}

/// Records for every `k` in `1..=k_max`. Requires `precision >= 4` so that a
/// saturated reading is never below an expected exponent.
pub fn classify_all(base: u64, k_max: u32, precision: u32) -> Result<Vec<CongruenceRecord>> {
    if precision < 4 {
        return Err(Error::InvalidArgument(format!(
            "precision {precision} cannot certify the expected exponent 4"
        )));
    }
    let vals = sum_valuations(base, k_max, precision)?;
    Ok(vals
        .into_iter()
        .enumerate()
        .map(|(j, v)| CongruenceRecord::from_valuation(base, j as u32 + 1, v))
        .collect())
}

/// Classifies a single `S_base^(k)`; `precision` must exceed `m(k)`.
pub fn classify(base: u64, k: u32, precision: u32) -> Result<CongruenceRecord> {
    let spec = SumSpec::new(base, k, precision)?;
    if precision <= expected_exponent(k) {
        return Err(Error::InvalidArgument(format!(
            "precision {precision} must exceed the expected exponent {}",
            expected_exponent(k)
        )));
    }
    let v = with_gaussian_ring!(spec.modulus(), ring => {
        let sums = power_sums_in(&ring, base, k);
        ring.residue_valuation(&sums[k as usize - 1])
    });
    Ok(CongruenceRecord::from_valuation(base, k, v))
}

/// Exact-oracle base limit, honouring `GW_ORACLE_LIMIT`.
pub fn oracle_limit() -> u64 {
    std::env::var(ORACLE_LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_LIMIT)
}

/// `S_base^(k)` as an exact Gaussian rational (the oracle path).
pub fn sum_exact(base: u64, k: u32) -> Result<GaussianRational> {
    sum_exact_with_limit(base, k, oracle_limit())
}

pub fn sum_exact_with_limit(base: u64, k: u32, limit: u64) -> Result<GaussianRational> {
    if base < 2 {
        return Err(Error::InvalidBase(base));
    }
    if base > limit {
        return Err(Error::OracleLimitExceeded { base, limit });
    }
    // 1/(n+mi)^k = (n-mi)^k / N^k; pairs sharing a norm share a denominator.
    let mut by_norm: std::collections::BTreeMap<u64, GaussianInt> = Default::default();
    for n in 1..base {
        for m in 1..base {
            let norm = n * n + m * m;
            if norm.gcd(&base) != 1 {
                continue;
            }
            let term = GaussianInt::from_i64(n as i64, -(m as i64)).pow(k);
            let slot = by_norm.entry(norm).or_insert_with(GaussianInt::zero);
            *slot = &*slot + &term;
        }
    }
    let mut total = GaussianRational::zero();
    for (norm, num) in by_norm {
        let den = BigInt::from(norm).pow(k);
        total = &total + &GaussianRational::new(num, den)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gint::Valuation;
    use crate::modring::BigRing;

    #[test]
    fn expected_exponent_cycle() {
        assert_eq!(expected_exponent(1), 4);
        assert_eq!(expected_exponent(4), 1);
        assert_eq!(expected_exponent(9), 4);
        let cycle: Vec<u32> = (1..=8).map(expected_exponent).collect();
        assert_eq!(cycle, vec![4, 3, 2, 1, 4, 3, 2, 1]);
    }

    #[test]
    fn included_counts() {
        // inert primes keep the full grid, split primes lose 2(p-1) pairs
        for p in [3u64, 7, 11, 19] {
            assert_eq!(included_pair_count(p), (p - 1) * (p - 1));
        }
        for p in [5u64, 13, 17, 29] {
            assert_eq!(included_pair_count(p), (p - 1) * (p - 1) - 2 * (p - 1));
        }
    }

    #[test]
    fn sum_modular_examples() {
        let ring = GaussianModRing::new(BigRing::new(Modulus::new(7, 8).unwrap()));
        let s = sum_modular(SumSpec::new(7, 1, 8).unwrap());
        assert!(ring.residue_valuation(&s).at_least(4));

        let ring5 = GaussianModRing::new(BigRing::new(Modulus::new(5, 8).unwrap()));
        let s5 = sum_modular(SumSpec::new(5, 1, 8).unwrap());
        assert_eq!(ring5.residue_valuation(&s5), ResidueValuation { value: 3, saturated: false });

        let exact = sum_exact(7, 1).unwrap();
        let num = ring.reduce(exact.numer());
        let den_inv = ring.inverse(&ring.reduce(&GaussianInt::from_int(exact.denom().clone()))).unwrap();
        assert_eq!(ring.lift(&ring.mul(&num, &den_inv)), s);
    }

    #[test]
    fn sum_exact_examples() {
        assert_eq!(sum_exact(3, 1).unwrap().valuation(3).unwrap(), Valuation::Finite(3));
        // the only grid point 1+i has norm 2, so the base-2 sum is empty
        assert!(sum_exact(2, 1).unwrap().is_zero());
        assert_eq!(included_pair_count(2), 0);
        assert_eq!(sum_exact(13, 4).unwrap().valuation(13).unwrap(), Valuation::Finite(1));
        assert_eq!(
            sum_exact_with_limit(60, 1, 50),
            Err(Error::OracleLimitExceeded { base: 60, limit: 50 })
        );
    }

    #[test]
    fn exact_denominator_coprime_to_base() {
        for p in [3u64, 5, 7, 11] {
            let s = sum_exact(p, 3).unwrap();
            assert_ne!(s.denom() % BigInt::from(p), BigInt::from(0));
        }
    }

    #[test]
    fn classify_examples() {
        let r = classify(31, 1, 8).unwrap();
        assert_eq!((r.classification, r.observed), (Classification::Stronger, 5));
        let r = classify(13, 9, 8).unwrap();
        assert_eq!((r.classification, r.observed), (Classification::Weaker, 3));
        let r = classify(3, 12, 8).unwrap();
        assert_eq!((r.classification, r.observed), (Classification::NoDivisibility, 0));
        assert!(classify(7, 1, 4).is_err());
    }

    #[test]
    fn classification_rules() {
        use Classification::*;
        assert_eq!(Classification::from_observed(0, false, 3), NoDivisibility);
        assert_eq!(Classification::from_observed(2, false, 3), Weaker);
        assert_eq!(Classification::from_observed(3, false, 3), Expected);
        assert_eq!(Classification::from_observed(4, false, 3), Stronger);
        assert_eq!(Classification::from_observed(8, true, 4), Stronger);
        assert_eq!(Classification::from_observed(4, true, 4), Expected);
    }

    #[test]
    fn backends_agree_on_sums() {
        // 293^8 selects the Montgomery backend; compare against BigRing
        let m = Modulus::new(293, 8).unwrap();
        let big = GaussianModRing::new(BigRing::new(m.clone()));
        let mont = GaussianModRing::new(crate::modring::MontRing::new(m).unwrap());
        let a: Vec<_> = power_sums_in(&big, 293, 3).iter().map(|s| big.lift(s)).collect();
        let b: Vec<_> = power_sums_in(&mont, 293, 3).iter().map(|s| mont.lift(s)).collect();
        assert_eq!(a, b);
    }
}
