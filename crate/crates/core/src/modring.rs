//! Residue rings `Z[i]/b^M` for a rational integer base `b >= 2`.
//!
//! Integer arithmetic modulo `b^M` is abstracted by [`ResidueRing`], with three
//! backends picked by the size of the modulus:
//!
//! | backend      | modulus range            | element |
//! |--------------|--------------------------|---------|
//! | [`WordRing`] | `< 2^63`                 | `u64`   |
//! | [`MontRing`] | odd, `< 2^126`           | `u128` in Montgomery form |
//! | [`BigRing`]  | anything                 | `BigUint` |
//!
//! [`GaussianModRing`] layers Gaussian arithmetic over any backend. Use
//! [`with_gaussian_ring!`](crate::with_gaussian_ring) to dispatch on a runtime
//! modulus.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{mod_inverse_big, mod_inverse_u128};
use crate::error::{Error, Result};
use crate::GaussianInt;

/// The modulus `base^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    base: u64,
    exponent: u32,
    value: BigUint,
}

impl Modulus {
    pub fn new(base: u64, exponent: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if exponent < 1 {
            return Err(Error::InvalidArgument("modulus exponent must be at least 1".into()));
        }
        Ok(Modulus { base, exponent, value: BigUint::from(base).pow(exponent) })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.base, self.exponent)
    }
}

/// Integer arithmetic modulo `base^exponent`.
pub trait ResidueRing: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn modulus(&self) -> &Modulus;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, x: u64) -> Self::Elem;
    fn from_bigint(&self, x: &BigInt) -> Self::Elem;
    /// Canonical representative in `[0, modulus)`.
    fn lift(&self, x: &Self::Elem) -> BigUint;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `gcd(a, base) != 1`.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn from_i64(&self, x: i64) -> Self::Elem {
        let r = self.from_u64(x.unsigned_abs());
        if x < 0 {
            self.neg(&r)
        } else {
            r
        }
    }
}

fn bigint_mod_u128(x: &BigInt, m: u128) -> u128 {
    let r = x.mod_floor(&BigInt::from(m));
    r.to_u128().expect("reduced value fits")
}

/// Moduli below `2^63`, products through `u128`.
#[derive(Clone, Debug)]
pub struct WordRing {
    modulus: Modulus,
    m: u64,
}

impl WordRing {
    pub const LIMIT: u64 = 1 << 63;

    pub fn new(modulus: Modulus) -> Option<Self> {
        let m = modulus.value.to_u64().filter(|&m| m < Self::LIMIT)?;
        Some(WordRing { modulus, m })
    }

    pub fn value(&self) -> u64 {
        self.m
    }
}

impl ResidueRing for WordRing {
    type Elem = u64;

    fn modulus(&self) -> &Modulus {
        &self.modulus
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.m
    }
    fn from_u64(&self, x: u64) -> u64 {
        x % self.m
    }
    fn from_bigint(&self, x: &BigInt) -> u64 {
        bigint_mod_u128(x, self.m as u128) as u64
    }
    fn lift(&self, x: &u64) -> BigUint {
        BigUint::from(*x)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        mod_inverse_u128(*a as u128, self.m as u128).map(|x| x as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a0, a1) = (a & MASK, a >> 64);
    let (b0, b1) = (b & MASK, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Odd moduli below `2^126` in Montgomery form with `R = 2^128`.
#[derive(Clone, Debug)]
pub struct MontRing {
    modulus: Modulus,
    m: u128,
    m_neg_inv: u128,
    r_mod: u128,
    r2_mod: u128,
}

impl MontRing {
    pub const LIMIT: u128 = 1 << 126;

    pub fn new(modulus: Modulus) -> Option<Self> {
        let m = modulus.value.to_u128().filter(|&m| m < Self::LIMIT && m % 2 == 1 && m > 1)?;
        // Newton iteration doubles the number of correct low bits each round.
        let mut inv: u128 = m;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
        }
        debug_assert_eq!(m.wrapping_mul(inv), 1);
        let r_mod = (u128::MAX % m + 1) % m;
        let mut r2_mod = r_mod;
        for _ in 0..128 {
            r2_mod <<= 1;
            if r2_mod >= m {
                r2_mod -= m;
            }
        }
        Some(MontRing { modulus, m, m_neg_inv: inv.wrapping_neg(), r_mod, r2_mod })
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let u = lo.wrapping_mul(self.m_neg_inv);
        let (uh, ul) = mul_wide(u, self.m);
        let (_, carry) = lo.overflowing_add(ul);
        let t = hi + uh + carry as u128;
        if t >= self.m {
            t - self.m
        } else {
            t
        }
    }

    #[inline]
    fn to_mont(&self, x: u128) -> u128 {
        let (hi, lo) = mul_wide(x % self.m, self.r2_mod);
        self.redc(hi, lo)
    }

    #[inline]
    fn from_mont(&self, x: u128) -> u128 {
        self.redc(0, x)
    }
}

impl ResidueRing for MontRing {
    type Elem = u128;

    fn modulus(&self) -> &Modulus {
        &self.modulus
    }
    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        self.r_mod
    }
    fn from_u64(&self, x: u64) -> u128 {
        self.to_mont(x as u128)
    }
    fn from_bigint(&self, x: &BigInt) -> u128 {
        self.to_mont(bigint_mod_u128(x, self.m))
    }
    fn lift(&self, x: &u128) -> BigUint {
        BigUint::from(self.from_mont(*x))
    }
    #[inline]
    fn add(&self, a: &u128, b: &u128) -> u128 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    #[inline]
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        let (hi, lo) = mul_wide(*a, *b);
        self.redc(hi, lo)
    }
    fn inv(&self, a: &u128) -> Option<u128> {
        mod_inverse_u128(self.from_mont(*a), self.m).map(|x| self.to_mont(x))
    }
    fn is_zero(&self, a: &u128) -> bool {
        *a == 0
    }
}

/// Arbitrary moduli.
#[derive(Clone, Debug)]
pub struct BigRing {
    modulus: Modulus,
}

impl BigRing {
    pub fn new(modulus: Modulus) -> Self {
        BigRing { modulus }
    }

    fn m(&self) -> &BigUint {
        &self.modulus.value
    }
}

impl ResidueRing for BigRing {
    type Elem = BigUint;

    fn modulus(&self) -> &Modulus {
        &self.modulus
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % self.m()
    }
    fn from_u64(&self, x: u64) -> BigUint {
        BigUint::from(x) % self.m()
    }
    fn from_bigint(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from_biguint(Sign::Plus, self.m().clone());
        x.mod_floor(&m).to_biguint().expect("non-negative")
    }
    fn lift(&self, x: &BigUint) -> BigUint {
        x.clone()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if &s >= self.m() {
            s - self.m()
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + self.m() - b
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % self.m()
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        mod_inverse_big(a, self.m())
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
}

/// Which backend [`with_gaussian_ring!`](crate::with_gaussian_ring) picks for a modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    Word,
    Montgomery,
    Big,
}

impl RingKind {
    pub fn for_modulus(modulus: &Modulus) -> RingKind {
        let v = modulus.value();
        if v < &BigUint::from(WordRing::LIMIT) {
            RingKind::Word
        } else if v < &BigUint::from(MontRing::LIMIT) && v.is_odd() {
            RingKind::Montgomery
        } else {
            RingKind::Big
        }
    }
}

/// Binds `$ring` to a [`GaussianModRing`] over the fastest backend that can
/// hold `$modulus`, then evaluates `$body`. Every arm must produce the same type,
/// so bodies usually lift their results before returning.
#[macro_export]
macro_rules! with_gaussian_ring {
    ($modulus:expr, $ring:ident => $body:expr) => {{
        let __modulus: $crate::modring::Modulus = $modulus;
        match $crate::modring::RingKind::for_modulus(&__modulus) {
            $crate::modring::RingKind::Word => {
                let $ring = $crate::modring::GaussianModRing::new(
                    $crate::modring::WordRing::new(__modulus).expect("word-sized modulus"),
                );
                $body
            }
            $crate::modring::RingKind::Montgomery => {
                let $ring = $crate::modring::GaussianModRing::new(
                    $crate::modring::MontRing::new(__modulus).expect("odd 126-bit modulus"),
                );
                $body
            }
            $crate::modring::RingKind::Big => {
                let $ring =
                    $crate::modring::GaussianModRing::new($crate::modring::BigRing::new(__modulus));
                $body
            }
        }
    }};
}

/// An element `re + im·i` of `Z[i]/b^M`. The modulus lives in the ring that
/// produced it, see [`GaussianModRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModGaussian<E> {
    pub re: E,
    pub im: E,
}

impl fmt::Display for ModGaussian<BigUint> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = GaussianInt::new(
            BigInt::from_biguint(Sign::Plus, self.re.clone()),
            BigInt::from_biguint(Sign::Plus, self.im.clone()),
        );
        write!(f, "{z}")
    }
}

impl Serialize for ModGaussian<BigUint> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Result of reading off a valuation from a residue mod `b^M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueValuation {
    /// Largest `t <= M` with `b^t` dividing both components.
    pub value: u32,
    /// `value == M`: the true valuation is only known to be at least `M`.
    pub saturated: bool,
}

impl ResidueValuation {
    pub fn at_least(self, t: u32) -> bool {
        self.value >= t
    }
}

impl fmt::Display for ResidueValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.saturated {
            write!(f, ">={}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Gaussian arithmetic over a [`ResidueRing`].
#[derive(Clone, Debug)]
pub struct GaussianModRing<R> {
    ring: R,
}

impl<R: ResidueRing> GaussianModRing<R> {
    pub fn new(ring: R) -> Self {
        GaussianModRing { ring }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn modulus(&self) -> &Modulus {
        self.ring.modulus()
    }

    pub fn zero(&self) -> ModGaussian<R::Elem> {
        ModGaussian { re: self.ring.zero(), im: self.ring.zero() }
    }

    pub fn one(&self) -> ModGaussian<R::Elem> {
        ModGaussian { re: self.ring.one(), im: self.ring.zero() }
    }

    pub fn from_i64(&self, re: i64, im: i64) -> ModGaussian<R::Elem> {
        ModGaussian { re: self.ring.from_i64(re), im: self.ring.from_i64(im) }
    }

    pub fn reduce(&self, z: &GaussianInt) -> ModGaussian<R::Elem> {
        ModGaussian { re: self.ring.from_bigint(&z.re), im: self.ring.from_bigint(&z.im) }
    }

    /// Canonical non-negative lift of both components.
    pub fn lift(&self, x: &ModGaussian<R::Elem>) -> ModGaussian<BigUint> {
        ModGaussian { re: self.ring.lift(&x.re), im: self.ring.lift(&x.im) }
    }

    pub fn lift_gaussian(&self, x: &ModGaussian<R::Elem>) -> GaussianInt {
        let l = self.lift(x);
        GaussianInt::new(BigInt::from_biguint(Sign::Plus, l.re), BigInt::from_biguint(Sign::Plus, l.im))
    }

    pub fn is_zero(&self, x: &ModGaussian<R::Elem>) -> bool {
        self.ring.is_zero(&x.re) && self.ring.is_zero(&x.im)
    }

    #[inline]
    pub fn add(&self, a: &ModGaussian<R::Elem>, b: &ModGaussian<R::Elem>) -> ModGaussian<R::Elem> {
        ModGaussian { re: self.ring.add(&a.re, &b.re), im: self.ring.add(&a.im, &b.im) }
    }

    #[inline]
    pub fn add_assign(&self, a: &mut ModGaussian<R::Elem>, b: &ModGaussian<R::Elem>) {
        a.re = self.ring.add(&a.re, &b.re);
        a.im = self.ring.add(&a.im, &b.im);
    }

    pub fn sub(&self, a: &ModGaussian<R::Elem>, b: &ModGaussian<R::Elem>) -> ModGaussian<R::Elem> {
        ModGaussian { re: self.ring.sub(&a.re, &b.re), im: self.ring.sub(&a.im, &b.im) }
    }

    pub fn neg(&self, a: &ModGaussian<R::Elem>) -> ModGaussian<R::Elem> {
        ModGaussian { re: self.ring.neg(&a.re), im: self.ring.neg(&a.im) }
    }

    pub fn conj(&self, a: &ModGaussian<R::Elem>) -> ModGaussian<R::Elem> {
        ModGaussian { re: a.re.clone(), im: self.ring.neg(&a.im) }
    }

    #[inline]
    pub fn mul(&self, a: &ModGaussian<R::Elem>, b: &ModGaussian<R::Elem>) -> ModGaussian<R::Elem> {
        let r = &self.ring;
        let ac = r.mul(&a.re, &b.re);
        let bd = r.mul(&a.im, &b.im);
        let ad = r.mul(&a.re, &b.im);
        let bc = r.mul(&a.im, &b.re);
        ModGaussian { re: r.sub(&ac, &bd), im: r.add(&ad, &bc) }
    }

    pub fn scale(&self, a: &ModGaussian<R::Elem>, c: &R::Elem) -> ModGaussian<R::Elem> {
        ModGaussian { re: self.ring.mul(&a.re, c), im: self.ring.mul(&a.im, c) }
    }

    pub fn norm(&self, a: &ModGaussian<R::Elem>) -> R::Elem {
        self.ring.add(&self.ring.mul(&a.re, &a.re), &self.ring.mul(&a.im, &a.im))
    }

    /// `conj(x) · norm(x)^-1`; fails when the base divides the norm.
    pub fn inverse(&self, x: &ModGaussian<R::Elem>) -> Result<ModGaussian<R::Elem>> {
        let n_inv = self
            .ring
            .inv(&self.norm(x))
            .ok_or(Error::NotInvertible { base: self.modulus().base() })?;
        Ok(self.scale(&self.conj(x), &n_inv))
    }

    pub fn pow(&self, x: &ModGaussian<R::Elem>, mut e: u64) -> ModGaussian<R::Elem> {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn residue_valuation(&self, x: &ModGaussian<R::Elem>) -> ResidueValuation {
        let exponent = self.modulus().exponent();
        let b = BigUint::from(self.modulus().base());
        let l = self.lift(x);
        let (mut re, mut im) = (l.re, l.im);
        let mut t = 0;
        while t < exponent {
            let (qr, rr) = re.div_rem(&b);
            let (qi, ri) = im.div_rem(&b);
            if !rr.is_zero() || !ri.is_zero() {
                break;
            }
            re = qr;
            im = qi;
            t += 1;
        }
        ResidueValuation { value: t, saturated: t == exponent }
    }
}
