//! Sparse polynomials in `m, n, p` over `Z[i]`, and the expansion of the
//! 8-tuple of reflected reciprocals
//!
//! ```text
//! T(m,n,k) = Σ 1/form^k,  forms = n+im, (p-n)+im, n+i(p-m), (p-n)+i(p-m),
//!                                 m+in, (p-m)+in, m+i(p-n), (p-m)+i(p-n)
//! ```
//!
//! as a single fraction. Closed forms for the lowest `p`-degree slices are
//! verified by multiplying out the claimed factors and comparing; nothing here
//! factors polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::GaussianInt;

/// Exponents of `(m, n, p)`.
pub type Exponent = [u32; 3];

const VAR_NAMES: [char; 3] = ['m', 'n', 'p'];

/// Default cap on the tuple power `k`.
pub const DEFAULT_TUPLE_LIMIT: u32 = 12;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Exponent, GaussianInt>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianInt::one())
    }

    pub fn constant(c: GaussianInt) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: GaussianInt, exp: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MPoly { terms }
    }

    pub fn m() -> Self {
        Self::monomial(GaussianInt::one(), [1, 0, 0])
    }

    pub fn n() -> Self {
        Self::monomial(GaussianInt::one(), [0, 1, 0])
    }

    pub fn p() -> Self {
        Self::monomial(GaussianInt::one(), [0, 0, 1])
    }

    pub fn i() -> Self {
        Self::constant(GaussianInt::i())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, GaussianInt)>>(iter: I) -> Self {
        let mut acc: HashMap<Exponent, GaussianInt> = HashMap::new();
        for (e, c) in iter {
            let slot = acc.entry(e).or_insert_with(GaussianInt::zero);
            *slot = &*slot + &c;
        }
        MPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GaussianInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: Exponent) -> GaussianInt {
        self.terms.get(&exp).cloned().unwrap_or_else(GaussianInt::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &GaussianInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (*e, x * c)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = MPoly::one();
        let mut base = self.clone();
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

    /// Exchange the roles of `m` and `n`.
    pub fn swap_mn(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(e, c)| ([e[1], e[0], e[2]], c.clone())).collect() }
    }

    pub fn eval(&self, m: &BigInt, n: &BigInt, p: &BigInt) -> GaussianInt {
        let mut acc = GaussianInt::zero();
        for (e, c) in &self.terms {
            let v = m.pow(e[0]) * n.pow(e[1]) * p.pow(e[2]);
            acc = acc + c.scale(&v);
        }
        acc
    }

    pub fn min_pdeg(&self) -> Result<u32> {
        min_pdeg(self)
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'a MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            match terms.get_mut(e) {
                Some(slot) => {
                    *slot = &*slot + c;
                    if slot.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(*e, c.clone());
                }
            }
        }
        MPoly { terms }
    }
}

impl<'a> Neg for &'a MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        let mut acc: HashMap<Exponent, GaussianInt> =
            HashMap::with_capacity(self.len().max(rhs.len()) * 2);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(slot) => *slot = &*slot + &prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        MPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &GaussianInt, has_monomial: bool) -> fmt::Result {
    let unit = c.im.is_zero() && c.re.abs().is_one();
    match (unit, has_monomial) {
        (true, true) if c.re.is_negative() => f.write_str("-"),
        (true, true) => Ok(()),
        (true, false) => write!(f, "{}", c.re),
        (false, _) => write!(f, "({c})"),
    }
}

/// Terms in descending lexicographic order of `(deg_m, deg_n, deg_p)`,
/// coefficients in parentheses unless `±1`, e.g. `m^2+(2)mn+n^2`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative_unit = c.im.is_zero() && c.re == -BigInt::one();
            if idx > 0 && !negative_unit {
                f.write_str("+")?;
            }
            let has_monomial = e.iter().any(|&d| d > 0);
            write_coeff(f, c, has_monomial)?;
            for (name, &d) in VAR_NAMES.iter().zip(e) {
                match d {
                    0 => {}
                    1 => write!(f, "{name}")?,
                    _ => write!(f, "{name}^{d}")?,
                }
            }
        }
        Ok(())
    }
}

/// Which `p`-degrees [`truncate_pdeg`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PDegree {
    Equal(u32),
    AtMost(u32),
}

impl PDegree {
    fn keeps(self, d: u32) -> bool {
        match self {
            PDegree::Equal(t) => d == t,
            PDegree::AtMost(t) => d <= t,
        }
    }
}

pub fn truncate_pdeg(poly: &MPoly, filter: PDegree) -> MPoly {
    MPoly {
        terms: poly
            .terms
            .iter()
            .filter(|(e, _)| filter.keeps(e[2]))
            .map(|(e, c)| (*e, c.clone()))
            .collect(),
    }
}

pub fn min_pdeg(poly: &MPoly) -> Result<u32> {
    poly.terms.keys().map(|e| e[2]).min().ok_or(Error::EmptyPolynomial)
}

/// The 8 reflected linear forms of the tuple, in the fixed order above.
pub fn tuple_forms() -> [MPoly; 8] {
    let (m, n, p, i) = (MPoly::m(), MPoly::n(), MPoly::p(), MPoly::i());
    let pm = &p - &m;
    let pn = &p - &n;
    let form = |re: &MPoly, im: &MPoly| re + &(&i * im);
    [
        form(&n, &m),
        form(&pn, &m),
        form(&n, &pm),
        form(&pn, &pm),
        form(&m, &n),
        form(&pm, &n),
        form(&m, &pn),
        form(&pm, &pn),
    ]
}

/// `T(m,n,k) = numerator / denominator` with
/// `denominator = Π_j form_j^k` and `numerator = Σ_j Π_{l≠j} form_l^k`.
#[derive(Clone, Debug)]
pub struct TupleExpansion {
    pub k: u32,
    pub linear_forms: [MPoly; 8],
    pub numerator: MPoly,
    pub denominator: MPoly,
}

pub fn expand_tuple(k: u32) -> Result<TupleExpansion> {
    expand_tuple_with_limit(k, DEFAULT_TUPLE_LIMIT)
}

pub fn expand_tuple_with_limit(k: u32, limit: u32) -> Result<TupleExpansion> {
    if k < 1 {
        return Err(Error::InvalidArgument("tuple power k must be at least 1".into()));
    }
    if k > limit {
        return Err(Error::LimitExceeded { what: "tuple power k", value: k as u64, limit: limit as u64 });
    }
    let linear_forms = tuple_forms();
    let powered: Vec<MPoly> = linear_forms.iter().map(|f| f.pow(k)).collect();

    // prefix[j] = Π_{l<j}, suffix[j] = Π_{l>=j}
    let mut prefix = vec![MPoly::one()];
    for f in &powered {
        let next = prefix.last().expect("non-empty") * f;
        prefix.push(next);
    }
    let mut suffix = vec![MPoly::one(); 9];
    for j in (0..8).rev() {
        suffix[j] = &suffix[j + 1] * &powered[j];
    }
    let mut numerator = MPoly::zero();
    for j in 0..8 {
        numerator = &numerator + &(&prefix[j] * &suffix[j + 1]);
    }
    let denominator = prefix.pop().expect("nine prefixes");
    Ok(TupleExpansion { k, linear_forms, numerator, denominator })
}

impl TupleExpansion {
    /// Numerator terms of lowest `p`-degree.
    pub fn lowest_numerator_slice(&self) -> Result<MPoly> {
        let d = min_pdeg(&self.numerator)?;
        Ok(truncate_pdeg(&self.numerator, PDegree::Equal(d)))
    }

    /// The denominator modulo `p`.
    pub fn denominator_mod_p(&self) -> MPoly {
        truncate_pdeg(&self.denominator, PDegree::Equal(0))
    }
}

/// Claimed lowest numerator slice and `p`-free denominator slice for `k = 1..=5`.
pub fn claimed_slices(k: u32) -> Option<(MPoly, MPoly)> {
    let (m, n, p) = (MPoly::m(), MPoly::n(), MPoly::p());
    let c = |re: i64, im: i64| MPoly::constant(GaussianInt::from_i64(re, im));
    let int = |x: i64| c(x, 0);
    let mm = &m * &m;
    let nn = &n * &n;
    let mn = &m * &n;
    let q = &mm + &nn;
    // (m²-2mn-n²)(m²+2mn-n²)
    let pair = &(&(&mm - &(&int(2) * &mn)) - &nn) * &(&(&mm + &(&int(2) * &mn)) - &nn);
    let quartic = &(&(&mm * &mm) - &(&int(6) * &(&mm * &nn))) + &(&nn * &nn);
    let p2 = &p * &p;
    let p3 = &p2 * &p;
    Some(match k {
        1 => (&(&c(2, -2) * &p3) * &quartic, q.pow(4)),
        2 => (&(&(&c(0, 12) * &p2) * &q.pow(4)) * &pair, q.pow(8)),
        3 => (&(&(&c(-12, -12) * &p) * &q.pow(8)) * &pair, q.pow(12)),
        4 => (&(&int(8) * &q.pow(12)) * &pair, q.pow(16)),
        5 => {
            let m3n = &(&mm * &m) * &n;
            let mn3 = &(&nn * &n) * &m;
            let m4 = &mm * &mm;
            let n4 = &nn * &nn;
            let m2n2 = &mm * &nn;
            let base = &(&m4 - &(&int(6) * &m2n2)) + &n4;
            let f1 = &(&(&base - &(&int(4) * &m3n)) + &(&int(4) * &mn3));
            let f2 = &(&(&base + &(&int(4) * &m3n)) - &(&int(4) * &mn3));
            // -70(i-1) = 70 - 70i
            let lead = &c(70, -70) * &p3;
            (&(&(&lead * f1) * f2) * &q.pow(12), q.pow(20))
        }
        _ => return None,
    })
}

/// Slice-by-slice comparison of an expansion against [`claimed_slices`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub k: u32,
    pub numerator_pdeg: u32,
    pub numerator_matches: bool,
    pub denominator_matches: bool,
}

impl ClaimCheck {
    pub fn holds(&self) -> bool {
        self.numerator_matches && self.denominator_matches
    }
}

pub fn check_claimed_form(k: u32) -> Result<ClaimCheck> {
    let (num_claim, den_claim) = claimed_slices(k)
        .ok_or_else(|| Error::InvalidArgument(format!("no closed form recorded for k = {k}")))?;
    let expansion = expand_tuple(k)?;
    let num_slice = expansion.lowest_numerator_slice()?;
    Ok(ClaimCheck {
        k,
        numerator_pdeg: min_pdeg(&num_slice)?,
        numerator_matches: num_slice == num_claim,
        denominator_matches: expansion.denominator_mod_p() == den_claim,
    })
}

pub fn verify_claimed_form(k: u32) -> Result<bool> {
    Ok(check_claimed_form(k)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational;
    use proptest::prelude::*;

    fn t(re: i64, im: i64, e: Exponent) -> (Exponent, GaussianInt) {
        (e, GaussianInt::from_i64(re, im))
    }

    #[test]
    fn mul_examples() {
        let (m, n, i) = (MPoly::m(), MPoly::n(), MPoly::i());
        let diff = &(&m + &n) * &(&m - &n);
        assert_eq!(diff, MPoly::from_terms([t(1, 0, [2, 0, 0]), t(-1, 0, [0, 2, 0])]));
        assert_eq!(&m * &MPoly::one(), m);
        let norm = &(&m + &(&i * &n)) * &(&m - &(&i * &n));
        assert_eq!(norm, MPoly::from_terms([t(1, 0, [2, 0, 0]), t(1, 0, [0, 2, 0])]));
        assert!((&m - &m).is_zero());
    }

    #[test]
    fn display_is_canonical() {
        let (m, n, p) = (MPoly::m(), MPoly::n(), MPoly::p());
        let sq = (&m + &n).pow(2);
        assert_eq!(sq.to_string(), "m^2+(2)mn+n^2");
        let x = &(&MPoly::constant(GaussianInt::from_i64(2, -2)) * &p) - &MPoly::one();
        assert_eq!(x.to_string(), "(2-2i)p-1");
        assert_eq!(MPoly::zero().to_string(), "0");
        assert_eq!((&(-&m) + &MPoly::constant(GaussianInt::from_i64(0, 3))).to_string(), "-m+(3i)");
    }

    #[test]
    fn truncate_examples() {
        let (m, p) = (MPoly::m(), MPoly::p());
        let poly = &(&(&m * &m) + &(&MPoly::constant(GaussianInt::from_i64(3, 0)) * &(&m * &p))) + &(&p * &p);
        assert_eq!(truncate_pdeg(&poly, PDegree::Equal(0)), &m * &m);
        assert_eq!(truncate_pdeg(&poly, PDegree::AtMost(u32::MAX)), poly);
        assert_eq!(truncate_pdeg(&poly, PDegree::AtMost(1)).len(), 2);
        assert_eq!(min_pdeg(&MPoly::zero()), Err(Error::EmptyPolynomial));
    }

    #[test]
    fn factorizations_agree() {
        let (m, n) = (MPoly::m(), MPoly::n());
        let two = MPoly::constant(GaussianInt::from_i64(2, 0));
        let six = MPoly::constant(GaussianInt::from_i64(6, 0));
        let (mm, nn, mn) = (&m * &m, &n * &n, &m * &n);
        let lhs = &(&(&mm - &(&two * &mn)) - &nn) * &(&(&mm + &(&two * &mn)) - &nn);
        let rhs = &(&(&mm * &mm) - &(&six * &(&mm * &nn))) + &(&nn * &nn);
        assert_eq!(lhs, rhs);
    }

    /// Published term-by-term expansions of the k = 1 tuple.
    fn printed_denominator() -> MPoly {
        MPoly::from_terms([
            t(1, 0, [8, 0, 0]), t(4, 0, [6, 2, 0]), t(6, 0, [4, 4, 0]), t(4, 0, [2, 6, 0]),
            t(1, 0, [0, 8, 0]),
            t(-4, 0, [7, 0, 1]), t(-4, 0, [6, 1, 1]), t(-12, 0, [5, 2, 1]), t(-12, 0, [4, 3, 1]),
            t(-12, 0, [3, 4, 1]), t(-12, 0, [2, 5, 1]), t(-4, 0, [1, 6, 1]), t(-4, 0, [0, 7, 1]),
            t(8, 0, [6, 0, 2]), t(12, 0, [5, 1, 2]), t(24, 0, [4, 2, 2]), t(24, 0, [3, 3, 2]),
            t(24, 0, [2, 4, 2]), t(12, 0, [1, 5, 2]), t(8, 0, [0, 6, 2]),
            t(-10, 0, [5, 0, 3]), t(-18, 0, [4, 1, 3]), t(-28, 0, [3, 2, 3]), t(-28, 0, [2, 3, 3]),
            t(-18, 0, [1, 4, 3]), t(-10, 0, [0, 5, 3]),
            t(9, 0, [4, 0, 4]), t(16, 0, [3, 1, 4]), t(18, 0, [2, 2, 4]), t(16, 0, [1, 3, 4]),
            t(9, 0, [0, 4, 4]),
            t(-6, 0, [3, 0, 5]), t(-6, 0, [2, 1, 5]), t(-6, 0, [1, 2, 5]), t(-6, 0, [0, 3, 5]),
            t(2, 0, [2, 0, 6]), t(2, 0, [0, 2, 6]),
        ])
    }

    fn printed_numerator() -> MPoly {
        MPoly::from_terms([
            t(2, -2, [4, 0, 3]), t(-12, 12, [2, 2, 3]), t(2, -2, [0, 4, 3]),
            t(-4, 4, [3, 0, 4]), t(12, -12, [2, 1, 4]), t(12, -12, [1, 2, 4]), t(-4, 4, [0, 3, 4]),
            t(-12, 12, [1, 1, 5]), t(2, -2, [1, 0, 6]), t(2, -2, [0, 1, 6]),
        ])
    }

    #[test]
    fn k1_expansion_matches_printed_terms() {
        let e = expand_tuple(1).unwrap();
        assert_eq!(e.denominator, printed_denominator());
        assert_eq!(e.numerator, printed_numerator());
        assert_eq!(
            e.denominator_mod_p(),
            MPoly::from_terms([
                t(1, 0, [8, 0, 0]), t(4, 0, [6, 2, 0]), t(6, 0, [4, 4, 0]), t(4, 0, [2, 6, 0]),
                t(1, 0, [0, 8, 0]),
            ])
        );
        let slice = truncate_pdeg(&e.numerator, PDegree::Equal(3));
        assert_eq!(slice.coeff([4, 0, 3]), GaussianInt::from_i64(2, -2));
        assert_eq!(slice.coeff([2, 2, 3]), GaussianInt::from_i64(-12, 12));
        assert_eq!(slice.to_string(), "(2-2i)m^4p^3+(-12+12i)m^2n^2p^3+(2-2i)n^4p^3");
    }

    #[test]
    fn minimal_p_degrees() {
        assert_eq!(expand_tuple(1).unwrap().numerator.min_pdeg().unwrap(), 3);
        assert_eq!(expand_tuple(2).unwrap().numerator.min_pdeg().unwrap(), 2);
        assert_eq!(expand_tuple(3).unwrap().numerator.min_pdeg().unwrap(), 1);
        assert_eq!(expand_tuple(4).unwrap().numerator.min_pdeg().unwrap(), 0);
        assert_eq!(expand_tuple(5).unwrap().numerator.min_pdeg().unwrap(), 3);
    }

    #[test]
    fn claimed_forms_hold() {
        for k in 1..=5 {
            let c = check_claimed_form(k).unwrap();
            assert!(c.holds(), "{c:?}");
        }
        assert!(check_claimed_form(6).is_err());
    }

    #[test]
    fn tuple_limit_enforced() {
        assert_eq!(
            expand_tuple(13).unwrap_err(),
            Error::LimitExceeded { what: "tuple power k", value: 13, limit: 12 }
        );
        assert!(expand_tuple(0).is_err());
    }

    #[test]
    fn k1_value_at_sample_point() {
        // (m, n, p) = (2, 1, 7)
        let e = expand_tuple(1).unwrap();
        let (m, n, p) = (BigInt::from(2), BigInt::from(1), BigInt::from(7));
        let lhs = GaussianRational::quotient(&e.numerator.eval(&m, &n, &p), &e.denominator.eval(&m, &n, &p)).unwrap();
        let mut rhs = GaussianRational::zero();
        for (re, im) in [(1, 2), (6, 2), (1, 5), (6, 5), (2, 1), (5, 1), (2, 6), (5, 6)] {
            rhs = &rhs + &GaussianInt::from_i64(re, im).reciprocal().unwrap();
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn expansion_is_symmetric_in_m_and_n() {
        for k in 1..=4 {
            let e = expand_tuple(k).unwrap();
            assert_eq!(e.numerator.swap_mn(), e.numerator);
            assert_eq!(e.denominator.swap_mn(), e.denominator);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn rational_function_identity(m0 in -30i64..30, n0 in -30i64..30, p0 in -30i64..30) {
            let (m, n, p) = (BigInt::from(m0), BigInt::from(n0), BigInt::from(p0));
            let forms = tuple_forms();
            let values: Vec<GaussianInt> = forms.iter().map(|f| f.eval(&m, &n, &p)).collect();
            prop_assume!(values.iter().all(|v| !v.is_zero()));
            for k in 1..=6 {
                let e = expand_tuple(k).unwrap();
                let lhs = GaussianRational::quotient(&e.numerator.eval(&m, &n, &p), &e.denominator.eval(&m, &n, &p)).unwrap();
                let mut rhs = GaussianRational::zero();
                for v in &values {
                    rhs = &rhs + &v.pow(k).reciprocal().unwrap();
                }
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
