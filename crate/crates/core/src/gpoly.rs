//! The root polynomial `g_p(x) = Π (x - (n+mi))` over the included grid, its
//! low coefficients, and Gaussian binomial coefficients.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::gint::{valuation_rat, Valuation};
use crate::modring::{GaussianModRing, ModGaussian, Modulus, ResidueRing, ResidueValuation, WordRing};
use crate::sums::is_included;
use crate::{with_gaussian_ring, GaussianInt, GaussianRational};

/// Default cap on `p` for the full product.
pub const DEFAULT_GPOLY_LIMIT: u64 = 100;

/// Dense polynomial in `x` over `Z[i]/b^M`; `coeffs[j]` multiplies `x^j`.
#[derive(Clone, Debug)]
pub struct UPolyMod<R: ResidueRing> {
    ring: GaussianModRing<R>,
    coeffs: Vec<ModGaussian<R::Elem>>,
}

impl<R: ResidueRing> UPolyMod<R> {
    pub fn one(ring: GaussianModRing<R>) -> Self {
        let coeffs = vec![ring.one()];
        UPolyMod { ring, coeffs }
    }

    pub fn from_coeffs(ring: GaussianModRing<R>, coeffs: Vec<ModGaussian<R::Elem>>) -> Self {
        let mut poly = UPolyMod { ring, coeffs };
        poly.trim();
        poly
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.ring.is_zero(self.coeffs.last().expect("non-empty")) {
            self.coeffs.pop();
        }
    }

    pub fn ring(&self) -> &GaussianModRing<R> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[ModGaussian<R::Elem>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> ModGaussian<R::Elem> {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.len() == 1 && self.ring.is_zero(&self.coeffs[0]) {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// In-place multiplication by `(x - root)`.
    pub fn mul_linear(&mut self, root: &ModGaussian<R::Elem>) {
        let ring = &self.ring;
        self.coeffs.push(ring.zero());
        for j in (1..self.coeffs.len()).rev() {
            let shifted = self.coeffs[j - 1].clone();
            self.coeffs[j] = ring.sub(&shifted, &ring.mul(root, &self.coeffs[j]));
        }
        self.coeffs[0] = ring.neg(&ring.mul(root, &self.coeffs[0]));
    }

    pub fn eval(&self, x: &ModGaussian<R::Elem>) -> ModGaussian<R::Elem> {
        let ring = &self.ring;
        self.coeffs.iter().rev().fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
    }

    /// Support `(exponent, coefficient)` with coefficients lifted to the
    /// symmetric range, components in `(-b^M/2, b^M/2]`.
    pub fn signed_terms(&self) -> Vec<(usize, GaussianInt)> {
        let m = BigInt::from(self.ring.modulus().value().clone());
        let half = &m / 2u32;
        let signed = |x: BigUint| {
            let x = BigInt::from(x);
            if x > half {
                x - &m
            } else {
                x
            }
        };
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(j, c)| {
                let l = self.ring.lift(c);
                (j, GaussianInt::new(signed(l.re), signed(l.im)))
            })
            .collect()
    }
}

/// Descending powers of `x`, signed residues, e.g. `x^12+3x^6-1`.
impl<R: ResidueRing> fmt::Display for UPolyMod<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.signed_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (j, c)) in terms.iter().rev().enumerate() {
            let real = c.im.is_zero();
            let text = if real { c.re.to_string() } else { format!("({c})") };
            let (sign, body) = match text.strip_prefix('-') {
                Some(rest) if real => ("-", rest.to_string()),
                _ => ("+", text),
            };
            if idx > 0 || sign == "-" {
                f.write_str(sign)?;
            }
            let monomial = match j {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{j}"),
            };
            if body == "1" && !monomial.is_empty() {
                f.write_str(&monomial)?;
            } else {
                write!(f, "{body}{monomial}")?;
            }
        }
        Ok(())
    }
}

fn require_prime(p: u64, min: u64) -> Result<()> {
    if p < min || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("expected a prime >= {min}, got {p}")));
    }
    Ok(())
}

fn included_roots(p: u64) -> impl Iterator<Item = (u64, u64)> {
    (1..p).flat_map(move |n| (1..p).map(move |m| (n, m))).filter(move |&(n, m)| is_included(p, n, m))
}

/// `g_p(x) mod p`, built by `O(d)` multiplications by each linear factor.
pub fn gpoly_mod_p(p: u64) -> Result<UPolyMod<WordRing>> {
    gpoly_mod_p_with_limit(p, DEFAULT_GPOLY_LIMIT)
}

pub fn gpoly_mod_p_with_limit(p: u64, limit: u64) -> Result<UPolyMod<WordRing>> {
    require_prime(p, 3)?;
    if p > limit {
        return Err(Error::LimitExceeded { what: "prime p", value: p, limit });
    }
    let ring = GaussianModRing::new(WordRing::new(Modulus::new(p, 1)?).expect("small modulus"));
    let mut poly = UPolyMod::one(ring.clone());
    for (n, m) in included_roots(p) {
        poly.mul_linear(&ring.from_i64(n as i64, m as i64));
    }
    Ok(poly)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GPolyPatternReport {
    pub p: u64,
    pub p_mod_4: u64,
    pub degree: usize,
    pub included_pairs: u64,
    /// `(p-1)²`, the degree one would get without excluded pairs.
    pub nominal_degree: u64,
    /// Every nonzero coefficient sits at a multiple of `p-1`.
    pub support_ok: bool,
    /// `p ≡ 3 mod 4` only: equality with `Σ_j x^{2(p-1)j}`.
    pub closed_form_matches: Option<bool>,
    /// Coefficients of `x^{j(p-1)}` for `j = 0, 1, ...`, signed.
    pub coefficients: Vec<GaussianInt>,
    pub holds: bool,
}

/// Checks the shape of `g_p mod p`: `1 + x^{2(p-1)} + ... + x^{(p-1)²}` for
/// `p ≡ 3 mod 4`; support on multiples of `p-1` up to `x^{(p-1)(p-3)}` with
/// constant term 1 for `p ≡ 1 mod 4`.
pub fn gpoly_pattern_check(p: u64) -> Result<GPolyPatternReport> {
    require_prime(p, 3)?;
    let poly = gpoly_mod_p(p)?;
    let step = (p - 1) as usize;
    let terms = poly.signed_terms();
    let support_ok = terms.iter().all(|(j, _)| j % step == 0);
    let degree = poly.degree().unwrap_or(0);
    let mut coefficients = Vec::new();
    let mut j = 0;
    while j <= degree {
        let c = terms.iter().find(|(e, _)| *e == j).map(|(_, c)| c.clone()).unwrap_or_else(GaussianInt::zero);
        coefficients.push(c);
        j += step;
    }
    let constant_one = poly.coeff(0) == poly.ring().one();
    let (closed, holds) = if p % 4 == 3 {
        let expected: Vec<(usize, GaussianInt)> =
            (0..=step / 2).map(|j| (2 * step * j, GaussianInt::from_i64(1, 0))).collect();
        let matches = terms == expected;
        (Some(matches), matches)
    } else {
        (None, support_ok && constant_one && degree == step * (step - 2))
    };
    Ok(GPolyPatternReport {
        p,
        p_mod_4: p % 4,
        degree,
        included_pairs: included_roots(p).count() as u64,
        nominal_degree: (p - 1) * (p - 1),
        support_ok,
        closed_form_matches: closed,
        coefficients,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowCoeffReport {
    pub p: u64,
    pub precision: u32,
    /// Coefficients of `x^0 .. x^{count-1}`, i.e. `a_r, a_{r-1}, ...`.
    pub coefficients: Vec<ModGaussian<BigUint>>,
    /// Valuations of `a_{r-1} .. a_{r-4}`.
    pub valuations: Vec<ResidueValuation>,
    /// `a_{r-j} ≡ 0 mod p^{5-j}` for `j = 1..=4`.
    pub holds: bool,
}

/// Low coefficients of `g_p(x) mod p^M` via a truncated product.
pub fn gpoly_low_coeffs(p: u64, count: usize, precision: u32) -> Result<LowCoeffReport> {
    require_prime(p, 3)?;
    if count < 5 || precision < 5 {
        return Err(Error::InvalidArgument("need count >= 5 and precision >= 5".into()));
    }
    let modulus = Modulus::new(p, precision)?;
    let (coefficients, valuations) = with_gaussian_ring!(modulus, ring => {
        let mut c = vec![ring.zero(); count];
        c[0] = ring.one();
        for (n, m) in included_roots(p) {
            let z = ring.from_i64(n as i64, m as i64);
            for j in (1..count).rev() {
                c[j] = ring.sub(&c[j - 1], &ring.mul(&z, &c[j]));
            }
            c[0] = ring.neg(&ring.mul(&z, &c[0]));
        }
        let vals: Vec<ResidueValuation> = (1..=4).map(|j| ring.residue_valuation(&c[j])).collect();
        (c.iter().map(|x| ring.lift(x)).collect::<Vec<_>>(), vals)
    });
    let holds = valuations.iter().zip(1..=4u32).all(|(v, j)| v.at_least(5 - j));
    Ok(LowCoeffReport { p, precision, coefficients, valuations, holds })
}

/// `[A+Bi; C+Di]` with `A >= C >= 1`, `B >= D >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GaussBinomSpec {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl GaussBinomSpec {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Result<Self> {
        if c < 1 || d < 1 {
            return Err(Error::MalformedSpec(format!("C = {c} and D = {d} must be at least 1")));
        }
        if a < c || b < d {
            return Err(Error::MalformedSpec(format!("need A >= C and B >= D, got ({a},{b},{c},{d})")));
        }
        Ok(GaussBinomSpec { a, b, c, d })
    }
}

/// `Π_{0<=n<C, 0<=m<D} (A+Bi-(n+mi)) / Π_{1<=n<=C, 1<=m<=D} (n+mi)`.
pub fn gauss_binom(spec: GaussBinomSpec) -> GaussianRational {
    let g = |re: u64, im: u64| GaussianInt::new(BigInt::from(re), BigInt::from(im));
    let mut num = GaussianInt::one();
    for n in 0..spec.c {
        for m in 0..spec.d {
            num = &num * &g(spec.a - n, spec.b - m);
        }
    }
    let mut den = GaussianInt::one();
    for n in 1..=spec.c {
        for m in 1..=spec.d {
            den = &den * &g(n, m);
        }
    }
    GaussianRational::quotient(&num, &den).expect("denominator factors are nonzero")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem5Report {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    /// Valuation of the difference of the two products mod `p^5`.
    pub difference_valuation: ResidueValuation,
    pub holds: bool,
}

/// `Π (pA + pBi - (n+mi)) ≡ Π (n+mi) (mod p^5)` over the included grid.
pub fn theorem5_report(p: u64, a: u64, b: u64) -> Result<Theorem5Report> {
    require_prime(p, 3)?;
    let modulus = Modulus::new(p, 5)?;
    let v = with_gaussian_ring!(modulus, ring => {
        let mut shifted = ring.one();
        let mut plain = ring.one();
        let (pa, pb) = ((p * a) as i64, (p * b) as i64);
        for (n, m) in included_roots(p) {
            let (n, m) = (n as i64, m as i64);
            shifted = ring.mul(&shifted, &ring.from_i64(pa - n, pb - m));
            plain = ring.mul(&plain, &ring.from_i64(n, m));
        }
        ring.residue_valuation(&ring.sub(&shifted, &plain))
    });
    Ok(Theorem5Report { p, a, b, difference_valuation: v, holds: v.saturated })
}

pub fn theorem5_check(p: u64, a: u64, b: u64) -> Result<bool> {
    Ok(theorem5_report(p, a, b)?.holds)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem6Report {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub binomial: GaussianRational,
    /// `v_p(binomial - 1)`.
    pub valuation: Valuation,
    pub holds: bool,
}

/// `[pA-1+(pB-1)i; (p-1)+(p-1)i] ≡ 1 (mod p^5)` for `p ≡ 3 mod 4`.
pub fn theorem6_report(p: u64, a: u64, b: u64) -> Result<Theorem6Report> {
    require_prime(p, 7)?;
    if p % 4 != 3 {
        return Err(Error::InvalidArgument(format!("{p} is not congruent to 3 mod 4")));
    }
    let binomial = gauss_binom(GaussBinomSpec::new(p * a - 1, p * b - 1, p - 1, p - 1)?);
    if (binomial.denom() % BigInt::from(p)).is_zero() {
        return Err(Error::NotPIntegral { p });
    }
    let valuation = valuation_rat(&(&binomial - &GaussianRational::one()), p)?;
    Ok(Theorem6Report { p, a, b, holds: valuation.at_least(5), valuation, binomial })
}

pub fn theorem6_check(p: u64, a: u64, b: u64) -> Result<bool> {
    Ok(theorem6_report(p, a, b)?.holds)
}

/// Lucas-type comparison `[pA+pBi; pC+pDi]` against `[A+Bi; C+Di]` mod `p^3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LucasReport {
    pub p: u64,
    pub spec: GaussBinomSpec,
    pub lhs: GaussianRational,
    pub rhs: GaussianRational,
    /// Reduced denominator of the left side is coprime to `p`.
    pub lhs_integral: bool,
    pub rhs_integral: bool,
    /// `v_p(lhs - rhs)`, only when both sides are `p`-integral.
    pub difference_valuation: Option<Valuation>,
    pub holds: Option<bool>,
}

pub fn lucas_check(p: u64, spec: GaussBinomSpec) -> Result<LucasReport> {
    require_prime(p, 2)?;
    let scaled = GaussBinomSpec::new(p * spec.a, p * spec.b, p * spec.c, p * spec.d)?;
    let lhs = gauss_binom(scaled);
    let rhs = gauss_binom(spec);
    let coprime = |q: &GaussianRational| !(q.denom() % BigInt::from(p)).is_zero();
    let (lhs_integral, rhs_integral) = (coprime(&lhs), coprime(&rhs));
    let difference_valuation = if lhs_integral && rhs_integral {
        Some(valuation_rat(&(&lhs - &rhs), p)?)
    } else {
        None
    };
    Ok(LucasReport {
        p,
        spec,
        holds: difference_valuation.map(|v| v.at_least(3)),
        difference_valuation,
        lhs,
        rhs,
        lhs_integral,
        rhs_integral,
    })
}

/// Degree of `g_p` implied by the exclusion rule, for cross-checks.
pub fn expected_gpoly_degree(p: u64) -> u64 {
    if p % 4 == 1 {
        (p - 1) * (p - 3)
    } else {
        (p - 1) * (p - 1)
    }
}

/// `a_j` as a signed integer when it is real; used by report printing.
pub fn real_part_i64(c: &GaussianInt) -> Option<i64> {
    c.im.is_zero().then(|| c.re.to_i64()).flatten()
}
