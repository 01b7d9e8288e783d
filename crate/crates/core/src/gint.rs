//! Exact Gaussian integers, Gaussian rationals and base-`b` valuations.
//!
//! Everything here is generic over the rational-integer scalar. The crate root
//! exports the arbitrary-precision aliases ([`crate::GaussianInt`],
//! [`crate::GaussianRational`]) used by the rest of the library; the `i64`
//! instantiation is handy for exhaustive small-range checks.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Rational-integer scalar usable as the component type of [`Gaussian`].
pub trait IntScalar:
    Clone
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> IntScalar for T where
    T: Clone
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: IntScalar> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Gaussian { re, im }
    }

    pub fn from_int(re: T) -> Self {
        Gaussian { re, im: T::zero() }
    }

    /// Builds from machine integers; panics only if `T` cannot hold them.
    pub fn from_i64(re: i64, im: i64) -> Self {
        Gaussian {
            re: T::from_i64(re).expect("component out of range"),
            im: T::from_i64(im).expect("component out of range"),
        }
    }

    pub fn zero() -> Self {
        Gaussian { re: T::zero(), im: T::zero() }
    }

    pub fn one() -> Self {
        Gaussian { re: T::one(), im: T::zero() }
    }

    pub fn i() -> Self {
        Gaussian { re: T::zero(), im: T::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn scale(&self, c: &T) -> Self {
        Gaussian { re: self.re.clone() * c.clone(), im: self.im.clone() * c.clone() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse in `Q(i)`: `conj(z) / norm(z)`.
    pub fn reciprocal(&self) -> Result<GaussianFraction<T>> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        GaussianFraction::new(self.conj(), self.norm())
    }

    /// Largest `t` with `base^t` dividing both components.
    pub fn valuation(&self, base: u64) -> Result<Valuation> {
        valuation_int(self, base)
    }
}

impl<T: IntScalar> Add for Gaussian<T> {
    type Output = Gaussian<T>;
    fn add(self, rhs: Self) -> Self {
        Gaussian { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a, T: IntScalar> Add<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn add(self, rhs: &'a Gaussian<T>) -> Gaussian<T> {
        Gaussian { re: self.re.clone() + rhs.re.clone(), im: self.im.clone() + rhs.im.clone() }
    }
}

impl<T: IntScalar> Sub for Gaussian<T> {
    type Output = Gaussian<T>;
    fn sub(self, rhs: Self) -> Self {
        Gaussian { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a, T: IntScalar> Sub<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn sub(self, rhs: &'a Gaussian<T>) -> Gaussian<T> {
        Gaussian { re: self.re.clone() - rhs.re.clone(), im: self.im.clone() - rhs.im.clone() }
    }
}

impl<'a, T: IntScalar> Mul<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn mul(self, rhs: &'a Gaussian<T>) -> Gaussian<T> {
        let (a, b) = (&self.re, &self.im);
        let (c, d) = (&rhs.re, &rhs.im);
        Gaussian {
            re: a.clone() * c.clone() - b.clone() * d.clone(),
            im: a.clone() * d.clone() + b.clone() * c.clone(),
        }
    }
}

impl<T: IntScalar> Mul for Gaussian<T> {
    type Output = Gaussian<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: IntScalar> Neg for Gaussian<T> {
    type Output = Gaussian<T>;
    fn neg(self) -> Self {
        Gaussian { re: -self.re, im: -self.im }
    }
}

impl<T: IntScalar> fmt::Display for Gaussian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |f: &mut fmt::Formatter<'_>, leading: bool| -> fmt::Result {
            let im = &self.im;
            let abs = im.abs();
            let sign = if im.is_negative() { "-" } else if leading { "" } else { "+" };
            if abs.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{abs}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => im_part(f, true),
            (false, false) => {
                write!(f, "{}", self.re)?;
                im_part(f, false)
            }
        }
    }
}

impl<T: IntScalar> Serialize for Gaussian<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An element of `Q(i)` stored as `num / den` with `den > 0` and
/// `gcd(num.re, num.im, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianFraction<T> {
    num: Gaussian<T>,
    den: T,
}

impl<T: IntScalar> GaussianFraction<T> {
    pub fn new(num: Gaussian<T>, den: T) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut q = GaussianFraction { num, den };
        q.canonicalize();
        Ok(q)
    }

    /// `num / den` for a Gaussian denominator, rationalized by `conj(den)`.
    pub fn quotient(num: &Gaussian<T>, den: &Gaussian<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(num * &den.conj(), den.norm())
    }

    pub fn from_gaussian(z: Gaussian<T>) -> Self {
        GaussianFraction { num: z, den: T::one() }
    }

    pub fn zero() -> Self {
        Self::from_gaussian(Gaussian::zero())
    }

    pub fn one() -> Self {
        Self::from_gaussian(Gaussian::one())
    }

    fn canonicalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            self.num = -self.num.clone();
        }
        let g = self.num.re.gcd(&self.num.im).gcd(&self.den);
        if !g.is_one() {
            self.num.re = self.num.re.clone() / g.clone();
            self.num.im = self.num.im.clone() / g.clone();
            self.den = self.den.clone() / g;
        }
    }

    pub fn numer(&self) -> &Gaussian<T> {
        &self.num
    }

    pub fn denom(&self) -> &T {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.num.conj().scale(&self.den), self.num.norm())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut den = T::one();
        for _ in 0..e {
            den = den * self.den.clone();
        }
        // Powers of a canonical fraction stay canonical only up to a unit
        // factor, so re-reduce.
        Self::new(self.num.pow(e), den).expect("non-zero denominator")
    }

    /// `v_b(num) - v_b(den)`; [`Valuation::Infinite`] for zero.
    pub fn valuation(&self, base: u64) -> Result<Valuation> {
        valuation_rat(self, base)
    }
}

impl<'a, T: IntScalar> Add<&'a GaussianFraction<T>> for &'a GaussianFraction<T> {
    type Output = GaussianFraction<T>;
    fn add(self, rhs: &'a GaussianFraction<T>) -> GaussianFraction<T> {
        if self.den == rhs.den {
            return GaussianFraction::new(&self.num + &rhs.num, self.den.clone())
                .expect("non-zero denominator");
        }
        let l = self.den.lcm(&rhs.den);
        let a = self.num.scale(&(l.clone() / self.den.clone()));
        let b = rhs.num.scale(&(l.clone() / rhs.den.clone()));
        GaussianFraction::new(a + b, l).expect("non-zero denominator")
    }
}

impl<T: IntScalar> Add for GaussianFraction<T> {
    type Output = GaussianFraction<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: IntScalar> Neg for GaussianFraction<T> {
    type Output = GaussianFraction<T>;
    fn neg(self) -> Self {
        GaussianFraction { num: -self.num, den: self.den }
    }
}

impl<'a, T: IntScalar> Sub<&'a GaussianFraction<T>> for &'a GaussianFraction<T> {
    type Output = GaussianFraction<T>;
    fn sub(self, rhs: &'a GaussianFraction<T>) -> GaussianFraction<T> {
        let neg = -rhs.clone();
        self + &neg
    }
}

impl<T: IntScalar> Sub for GaussianFraction<T> {
    type Output = GaussianFraction<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a, T: IntScalar> Mul<&'a GaussianFraction<T>> for &'a GaussianFraction<T> {
    type Output = GaussianFraction<T>;
    fn mul(self, rhs: &'a GaussianFraction<T>) -> GaussianFraction<T> {
        GaussianFraction::new(&self.num * &rhs.num, self.den.clone() * rhs.den.clone())
            .expect("non-zero denominator")
    }
}

impl<T: IntScalar> Mul for GaussianFraction<T> {
    type Output = GaussianFraction<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: IntScalar> From<Gaussian<T>> for GaussianFraction<T> {
    fn from(z: Gaussian<T>) -> Self {
        Self::from_gaussian(z)
    }
}

impl<T: IntScalar> fmt::Display for GaussianFraction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.re.is_zero() || self.num.im.is_zero() {
            write!(f, "{}/{}", self.num, self.den)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl<T: IntScalar> Serialize for GaussianFraction<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A base-`b` valuation: a finite exponent or `Infinite` for zero.
///
/// `Finite(_) < Infinite`, so `v >= Valuation::Finite(t)` reads as
/// "divisible by `b^t`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, t: i64) -> bool {
        self >= Valuation::Finite(t)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

fn check_base(base: u64) -> Result<()> {
    if base < 2 {
        Err(Error::InvalidBase(base))
    } else {
        Ok(())
    }
}

/// Largest `t` with `base^t | x` for a nonzero rational integer.
fn scalar_valuation<T: IntScalar>(x: &T, base: &T) -> i64 {
    let mut x = x.abs();
    let mut t = 0;
    loop {
        let (q, r) = x.div_rem(base);
        if !r.is_zero() {
            return t;
        }
        x = q;
        t += 1;
    }
}

fn base_as<T: IntScalar>(base: u64) -> T {
    T::from_u64(base).expect("base fits the scalar type")
}

/// Largest `t` with `base^t` dividing both components of `z`.
pub fn valuation_int<T: IntScalar>(z: &Gaussian<T>, base: u64) -> Result<Valuation> {
    check_base(base)?;
    let b = base_as::<T>(base);
    Ok(match (z.re.is_zero(), z.im.is_zero()) {
        (true, true) => Valuation::Infinite,
        (true, false) => Valuation::Finite(scalar_valuation(&z.im, &b)),
        (false, true) => Valuation::Finite(scalar_valuation(&z.re, &b)),
        (false, false) => Valuation::Finite(
            scalar_valuation(&z.re, &b).min(scalar_valuation(&z.im, &b)),
        ),
    })
}

/// Numerator valuation minus denominator valuation of a canonical fraction.
pub fn valuation_rat<T: IntScalar>(q: &GaussianFraction<T>, base: u64) -> Result<Valuation> {
    match valuation_int(&q.num, base)? {
        Valuation::Infinite => Ok(Valuation::Infinite),
        Valuation::Finite(v) => {
            Ok(Valuation::Finite(v - scalar_valuation(&q.den, &base_as::<T>(base))))
        }
    }
}

/// Valuation of a rational number, with the same conventions.
pub fn valuation_ratio<T: IntScalar>(q: &Ratio<T>, base: u64) -> Result<Valuation> {
    check_base(base)?;
    if q.numer().is_zero() {
        return Ok(Valuation::Infinite);
    }
    let b = base_as::<T>(base);
    Ok(Valuation::Finite(scalar_valuation(q.numer(), &b) - scalar_valuation(q.denom(), &b)))
}

/// Exact reciprocal `1/z` in canonical form.
pub fn reciprocal<T: IntScalar>(z: &Gaussian<T>) -> Result<GaussianFraction<T>> {
    z.reciprocal()
}
