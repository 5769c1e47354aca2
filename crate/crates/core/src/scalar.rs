//! Exact coefficient rings.
//!
//! [`Scalar`] is an arbitrary-precision rational. [`DualScalar`] is an element
//! `a + b·t` of the dual numbers `Scalar[t]/(t²)`, the ring in which a
//! first-order deformation is an exact object. Everything downstream is
//! generic over [`Coeff`], so the same checker runs over either ring.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numerator / denominator`, or `None` when the denominator is zero.
    pub fn new(numerator: i64, denominator: i64) -> Option<Self> {
        if denominator == 0 {
            return None;
        }
        Some(Scalar(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        )))
    }

    pub fn from_big(numerator: BigInt, denominator: BigInt) -> Option<Self> {
        if denominator.is_zero() {
            return None;
        }
        Some(Scalar(BigRational::new(numerator, denominator)))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar(self.0.recip()))
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }

    /// `1 / j!`
    pub fn inv_factorial(j: u32) -> Self {
        let mut f = BigInt::one();
        for k in 2..=j {
            f *= k;
        }
        Scalar(BigRational::new(BigInt::one(), f))
    }

    /// Generalized binomial coefficient `C(top, k) = top (top-1) ... (top-k+1) / k!`,
    /// defined for every integer `top`.
    pub fn binomial(top: i64, k: u32) -> Self {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for i in 0..k {
            num *= BigInt::from(top - i as i64);
            den *= BigInt::from(i as i64 + 1);
        }
        Scalar(BigRational::new(num, den))
    }

    /// `(-1)^e`
    pub fn sign(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p` or `p/q` with optional leading sign on `p`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::BadScalar(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let digits_ok = |t: &str, signed: bool| {
            let t = if signed {
                t.strip_prefix(['-', '+']).unwrap_or(t)
            } else {
                t
            };
            !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
        };
        if !digits_ok(num, true) || !digits_ok(den, false) {
            return Err(bad());
        }
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        Scalar::from_big(num, den).ok_or_else(bad)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar($tr::$method(self.0, rhs.0))
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar($tr::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// `value + slope·t` with `t² = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DualScalar {
    pub value: Scalar,
    pub slope: Scalar,
}

impl DualScalar {
    pub fn new(value: Scalar, slope: Scalar) -> Self {
        DualScalar { value, slope }
    }

    /// The infinitesimal `t`.
    pub fn t() -> Self {
        DualScalar::new(Scalar::zero(), Scalar::one())
    }
}

impl fmt::Debug for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}t)", self.value, self.slope)
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add<&DualScalar> for &DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: &DualScalar) -> DualScalar {
        DualScalar::new(&self.value + &rhs.value, &self.slope + &rhs.slope)
    }
}

impl Sub<&DualScalar> for &DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: &DualScalar) -> DualScalar {
        DualScalar::new(&self.value - &rhs.value, &self.slope - &rhs.slope)
    }
}

impl Mul<&DualScalar> for &DualScalar {
    type Output = DualScalar;
    fn mul(self, rhs: &DualScalar) -> DualScalar {
        DualScalar::new(
            &self.value * &rhs.value,
            &self.value * &rhs.slope + &self.slope * &rhs.value,
        )
    }
}

impl Neg for &DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar::new(-&self.value, -&self.slope)
    }
}

/// The coefficient rings mode families are defined over.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    fn from_scalar(s: Scalar) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl Coeff for DualScalar {
    fn zero() -> Self {
        DualScalar::default()
    }
    fn one() -> Self {
        DualScalar::new(Scalar::one(), Scalar::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.slope.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Scalar) -> Self {
        DualScalar::new(&self.value * s, &self.slope * s)
    }
    fn from_scalar(s: Scalar) -> Self {
        DualScalar::new(s, Scalar::zero())
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

/// A finitely supported vector indexed by basis position. Zero coefficients
/// are never stored, so structural equality is vector equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<R> {
    entries: BTreeMap<usize, R>,
}

impl<R> Default for SparseVec<R> {
    fn default() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }
}

impl<R: Coeff> SparseVec<R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(index: usize) -> Self {
        let mut v = Self::new();
        v.entries.insert(index, R::one());
        v
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (usize, R)>) -> Self {
        let mut v = Self::new();
        for (i, c) in entries {
            v.add_term(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> R {
        self.entries.get(&index).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeff(&self, index: usize) -> Option<&R> {
        self.entries.get(&index)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, usize, R> {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn leading_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    /// `self[index] += c`
    pub fn add_term(&mut self, index: usize, c: &R) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(index) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &Self, c: &R) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.entries {
            self.add_term(*i, &x.mul(c));
        }
    }

    /// `self += s * other` for a rational `s`.
    pub fn add_scaled_scalar(&mut self, other: &Self, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (i, x) in &other.entries {
            self.add_term(*i, &x.scale(s));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (i, x) in &other.entries {
            self.add_term(*i, x);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (i, x) in &other.entries {
            self.add_term(*i, &x.neg());
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn scaled(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, x)| (*i, x.mul(c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn scaled_by(&self, s: &Scalar) -> Self {
        self.scaled(&R::from_scalar(s.clone()))
    }

    pub fn negated(&self) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x.neg())).collect(),
        }
    }

    /// Applies a coefficient ring map; zero images are dropped.
    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> SparseVec<S> {
        SparseVec::from_entries(self.entries.iter().map(|(i, x)| (*i, f(x))))
    }

    /// Re-indexes the support; colliding indices are summed.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> Self {
        SparseVec::from_entries(self.entries.iter().map(|(i, x)| (f(*i), x.clone())))
    }

    /// Keeps only indices satisfying the predicate.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Self {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| keep(**i))
                .map(|(i, x)| (*i, x.clone()))
                .collect(),
        }
    }
}

impl<R: Coeff> FromIterator<(usize, R)> for SparseVec<R> {
    fn from_iter<I: IntoIterator<Item = (usize, R)>>(iter: I) -> Self {
        SparseVec::from_entries(iter)
    }
}

impl<'a, R> IntoIterator for &'a SparseVec<R> {
    type Item = (&'a usize, &'a R);
    type IntoIter = btree_map::Iter<'a, usize, R>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

impl<R: fmt::Debug> fmt::Debug for SparseVec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d).unwrap()
    }

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let x = q(6, -4);
        assert_eq!(x.numerator(), &BigInt::from(-3));
        assert_eq!(x.denominator(), &BigInt::from(2));
        assert_eq!(x.to_string(), "-3/2");
        assert!(Scalar::new(1, 0).is_none());
    }

    #[test]
    fn parse_rationals() {
        assert_eq!("3/6".parse::<Scalar>().unwrap(), q(1, 2));
        assert_eq!("-7".parse::<Scalar>().unwrap(), Scalar::from_int(-7));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1/-2".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(Scalar::binomial(-1, 3), Scalar::from_int(-1));
        assert_eq!(Scalar::binomial(-2, 2), Scalar::from_int(3));
        assert_eq!(Scalar::binomial(3, 5), Scalar::zero());
        assert_eq!(Scalar::binomial(5, 2), Scalar::from_int(10));
        assert_eq!(Scalar::binomial(7, 0), Scalar::one());
        assert_eq!(Scalar::inv_factorial(4), q(1, 24));
    }

    #[test]
    fn t_squares_to_zero() {
        let t = DualScalar::t();
        assert!(Coeff::is_zero(&(&t * &t)));
    }

    #[test]
    fn sparse_vec_drops_cancellations() {
        let mut v = SparseVec::<Scalar>::unit(3);
        v.add_term(3, &Scalar::from_int(-1));
        assert!(v.is_zero());
        assert_eq!(v, SparseVec::new());
    }

    fn small() -> impl Strategy<Value = Scalar> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
    }

    fn dual() -> impl Strategy<Value = DualScalar> {
        (small(), small()).prop_map(|(a, b)| DualScalar::new(a, b))
    }

    proptest! {
        #[test]
        fn dual_ring_laws(a in dual(), b in dual(), c in dual()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            let prod = &a * &b;
            prop_assert_eq!(prod.value, &a.value * &b.value);
            prop_assert_eq!(prod.slope, &a.value * &b.slope + &a.slope * &b.value);
        }

        #[test]
        fn scalar_field_inverse(a in small()) {
            if let Some(r) = a.recip() {
                prop_assert!((&a * &r).is_one());
            } else {
                prop_assert!(a.is_zero());
            }
        }
    }
}
