//! Coefficient fields.
//!
//! Every algorithm in the crate is generic over [`Field`], an explicit field
//! object in the style of "ring objects": elements are plain values and all
//! arithmetic goes through the field. Two implementations ship: the rationals
//! and the prime fields `F_p` with `p < 2^31`.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// `a + b*c`, the inner step of every elimination loop.
    fn mul_add(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.add(a, &self.mul(b, c))
    }

    fn sign(&self, odd: bool) -> Self::Elem {
        if odd {
            self.neg(&self.one())
        } else {
            self.one()
        }
    }

    /// 0 for the rationals.
    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }
}

/// Serializable name of a field: `q` or `f<p>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec, Error> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p as u64,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "f{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix('f')
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| Error::InvalidField(s.to_string()))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidField(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic primality test by trial division; `n < 2^31` keeps this
/// to at most ~23k divisions.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Runs `$body` with `$f` bound to the concrete field named by a [`FieldSpec`].
#[macro_export]
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            $crate::field::FieldSpec::Rationals => {
                let $f = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldSpec::Prime(p) => {
                let $f = $crate::field::PrimeField::new(p as u64)
                    .expect("FieldSpec::Prime holds a validated prime");
                $body
            }
        }
    };
}

// ---------------------------------------------------------------------------
// Rationals

/// An exact rational number in lowest terms with positive denominator.
///
/// Values that fit in `i64` use the `Small` form; anything else is `Big`.
/// The representation is canonical so derived equality and hashing are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    pub fn from_integer(n: i64) -> Rational {
        Rational::Small(n, 1)
    }

    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(r) => r.denom().clone(),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> Rational {
        Rational::Small(0, 1)
    }

    fn one(&self) -> Rational {
        Rational::Small(1, 1)
    }

    fn from_i64(&self, n: i64) -> Rational {
        Rational::Small(n, 1)
    }

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &Rational) -> bool {
        matches!(a, Rational::Small(1, 1))
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        match (a, b) {
            (Rational::Small(0, _), _) => b.clone(),
            (_, Rational::Small(0, _)) => a.clone(),
            (Rational::Small(an, 1), Rational::Small(bn, 1)) => match an.checked_add(*bn) {
                Some(s) => Rational::Small(s, 1),
                None => Rational::from_i128(*an as i128 + *bn as i128, 1),
            },
            (Rational::Small(an, ad), Rational::Small(bn, bd)) => {
                let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
                Rational::from_i128(an * bd + bn * ad, ad * bd)
            }
            _ => Rational::from_big(a.to_big() + b.to_big()),
        }
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &Rational) -> Rational {
        match a {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, *d),
                None => Rational::from_i128(-(*n as i128), *d as i128),
            },
            Rational::Big(r) => Rational::from_big(-r.clone()),
        }
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        match (a, b) {
            (Rational::Small(0, _), _) | (_, Rational::Small(0, _)) => self.zero(),
            (Rational::Small(1, 1), _) => b.clone(),
            (_, Rational::Small(1, 1)) => a.clone(),
            (Rational::Small(an, 1), Rational::Small(bn, 1)) => match an.checked_mul(*bn) {
                Some(p) => Rational::Small(p, 1),
                None => Rational::from_i128(*an as i128 * *bn as i128, 1),
            },
            (Rational::Small(an, ad), Rational::Small(bn, bd)) => Rational::from_i128(
                *an as i128 * *bn as i128,
                *ad as i128 * *bd as i128,
            ),
            _ => Rational::from_big(a.to_big() * b.to_big()),
        }
    }

    fn inv(&self, a: &Rational) -> Rational {
        match a {
            Rational::Small(0, _) => panic!("inverse of zero"),
            Rational::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Rational::Big(r) => Rational::from_big(r.recip()),
        }
    }

    fn fmt_elem(&self, a: &Rational) -> String {
        a.to_string()
    }
}

impl Rationals {
    pub fn from_big(&self, r: BigRational) -> Rational {
        Rational::from_big(r)
    }

    pub fn abs(&self, a: &Rational) -> Rational {
        Rational::from_big(a.to_big().abs())
    }
}

// ---------------------------------------------------------------------------
// Prime fields

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField, Error> {
        FieldSpec::prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Symmetric lift of a residue to an integer in `(-p/2, p/2]`.
    pub fn lift(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p as u32)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn mul_add(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        (a + b * c) % self.p
    }

    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(self.p as i64) as u64
    }

    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("f2".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(2));
        assert_eq!(FieldSpec::Prime(101).to_string(), "f101");
        assert!("f4".parse::<FieldSpec>().is_err());
        assert!("f1".parse::<FieldSpec>().is_err());
        assert!("x".parse::<FieldSpec>().is_err());
        assert!(FieldSpec::prime(1 << 31).is_err());
        assert!(FieldSpec::prime(2147483647).is_ok());
    }

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let q = Rationals;
        let big = q.from_i64(i64::MAX);
        let s = q.add(&big, &big);
        assert!(matches!(s, Rational::Big(_)));
        let back = q.sub(&s, &big);
        assert_eq!(back, big);
        let tiny = q.inv(&s);
        assert!(matches!(tiny, Rational::Big(_)));
        assert_eq!(q.mul(&tiny, &s), q.one());
        assert_eq!(q.neg(&q.from_i64(i64::MIN)).to_big(), -q.from_i64(i64::MIN).to_big());
    }

    #[test]
    fn rational_lowest_terms() {
        let q = Rationals;
        let a = Rational::new(6, -4);
        assert_eq!(a, Rational::Small(-3, 2));
        assert_eq!(q.add(&Rational::new(1, 2), &Rational::new(1, 2)), q.one());
        assert_eq!(q.inv(&Rational::new(-3, 2)), Rational::Small(-2, 3));
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.lift(6), -1);
        let big = PrimeField::new(2147483647).unwrap();
        let x = 2147483646;
        assert_eq!(big.mul(&x, &big.inv(&x)), 1);
    }
}
