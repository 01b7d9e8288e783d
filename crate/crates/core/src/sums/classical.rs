//! Rational-integer companions of the Gaussian sums: the mod-`p` lemma sum,
//! power-sum vanishing, harmonic numbers, Bernoulli numbers, and the
//! Wolstenholme, Glaisher and Leudesdorf congruences.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{is_prime, mod_inverse_u128};
use crate::error::{Error, Result};
use crate::gint::{valuation_ratio, Valuation};
use crate::{GaussianInt, Rational};

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn require_prime(p: u64, min: u64) -> Result<()> {
    if !is_prime(p) || p < min {
        return Err(Error::InvalidArgument(format!("expected a prime >= {min}, got {p}")));
    }
    Ok(())
}

/// `Σ (m⁴ - 6m²n² + n⁴) / (m² + n²)⁴ mod p` over the included grid.
pub fn lemma_residue(p: u64) -> Result<u64> {
    require_prime(p, 3)?;
    let mut acc = 0u64;
    for n in 1..p {
        for m in 1..p {
            let norm = (n * n + m * m) % p;
            if norm == 0 {
                continue;
            }
            let (n2, m2) = (n * n % p, m * m % p);
            let num = (m2 * m2 + n2 * n2 + 6 * (p - m2 * n2 % p)) % p;
            let den = pow_mod(norm, 4, p);
            let inv = mod_inverse_u128(den as u128, p as u128).expect("unit mod p") as u64;
            acc = (acc + num * inv) % p;
        }
    }
    Ok(acc)
}

/// `Σ_{n=1}^{p-1} n^q mod p`.
pub fn power_sum_residue(p: u64, q: u64) -> Result<u64> {
    require_prime(p, 2)?;
    Ok((1..p).fold(0, |acc, n| (acc + pow_mod(n, q, p)) % p))
}

/// `H_{n-1} = 1 + 1/2 + ... + 1/(n-1)`.
pub fn harmonic(n: u64) -> Rational {
    let mut h = Rational::zero();
    for j in 1..n {
        h += Rational::new(BigInt::one(), BigInt::from(j));
    }
    h
}

/// Exact `H_{p-1}` for a prime `p >= 3`.
pub fn classical_harmonic(p: u64) -> Result<Rational> {
    require_prime(p, 3)?;
    Ok(harmonic(p))
}

/// `v_p(H_{p-1})`; Wolstenholme's theorem says this is at least 2 for `p >= 5`.
pub fn wolstenholme_check(p: u64) -> Result<Valuation> {
    valuation_ratio(&classical_harmonic(p)?, p)
}

/// Memoized Bernoulli numbers from `Σ_{t=0}^{j} C(j+1, t) B_t = 0`, `B_0 = 1`
/// (so `B_1 = -1/2`).
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        BernoulliTable { values: vec![Rational::one()] }
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, j: usize) -> Rational {
        while self.values.len() <= j {
            let next = self.values.len();
            // Odd indices above 1 vanish.
            if next > 1 && next % 2 == 1 {
                self.values.push(Rational::zero());
                continue;
            }
            // B_j = -1/(j+1) Σ_{t<j} C(j+1, t) B_t
            let mut binom = BigInt::one();
            let mut acc = Rational::zero();
            for (t, b) in self.values.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * Rational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(next + 1 - t) / BigInt::from(t + 1);
            }
            self.values.push(-acc / Rational::from_integer(BigInt::from(next + 1)));
        }
        self.values[j].clone()
    }

    pub fn computed(&self) -> &[Rational] {
        &self.values
    }
}

static BERNOULLI: Mutex<Option<BernoulliTable>> = Mutex::new(None);

/// `B_j`, from a process-wide memo table.
pub fn bernoulli(j: usize) -> Rational {
    let mut guard = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    guard.get_or_insert_with(BernoulliTable::new).get(j)
}

/// `v_p(H_{p-1} + p² B_{p-3} / 3)`; Glaisher's congruence says this is at least 3.
pub fn glaisher_check(p: u64) -> Result<Valuation> {
    require_prime(p, 7)?;
    let b = bernoulli(p as usize - 3);
    if (b.denom() % BigInt::from(p)).is_zero() {
        return Err(Error::NotPIntegral { p });
    }
    let p2 = Rational::from_integer(BigInt::from(p * p));
    let combo = harmonic(p) + p2 * b / Rational::from_integer(BigInt::from(3));
    valuation_ratio(&combo, p)
}

/// `W^(k)(A+Bi) = Σ_{1<=a<=A, 1<=b<=B} (a+bi)^k`.
pub fn gauss_power_sum(k: u32, a_max: u64, b_max: u64) -> GaussianInt {
    let mut acc = GaussianInt::zero();
    for a in 1..=a_max {
        for b in 1..=b_max {
            acc = acc + GaussianInt::from_i64(a as i64, b as i64).pow(k);
        }
    }
    acc
}

/// `Σ_{1<=j<n, gcd(j,n)=1} 1/j`.
pub fn unit_harmonic(n: u64) -> Rational {
    let mut h = Rational::zero();
    for j in (1..n).filter(|j| j.gcd(&n) == 1) {
        h += Rational::new(BigInt::one(), BigInt::from(j));
    }
    h
}

/// `v_n` of the unit harmonic sum, with the composite-base convention; at
/// least 2 by Leudesdorf's theorem.
pub fn leudesdorf_check(n: u64) -> Result<Valuation> {
    if n < 5 || !matches!(n % 6, 1 | 5) {
        return Err(Error::BadResidueClass { n });
    }
    valuation_ratio(&unit_harmonic(n), n)
}
