//! Coefficient rings: rationals, prime fields, and (in `param.rs`) parameter
//! polynomials.
//!
//! Prime-field elements carry their modulus, so the ring of a value is always
//! recoverable from the value itself. Operations between different moduli are
//! a programming error and panic; the checked entry points live on
//! [`Polynomial`](super::Polynomial).

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Ring operations shared by every coefficient type.
pub trait Coeff:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Runtime description of the ring (the modulus for prime fields).
    type Ring: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn ring(&self) -> Self::Ring;
    fn zero(ring: &Self::Ring) -> Self;
    fn one(ring: &Self::Ring) -> Self;
    fn from_i64(ring: &Self::Ring, v: i64) -> Self;
    /// Image of a rational number, if its denominator is invertible.
    fn from_rational(ring: &Self::Ring, q: &Rational) -> Option<Self>;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Inverse of `self` when it is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ring())
    }

    /// Short tag used in reports and error messages.
    fn ring_name(ring: &Self::Ring) -> String;
}

/// Marker for coefficient rings in which every nonzero element is a unit.
pub trait Field: Coeff {
    fn inv(&self) -> Option<Self> {
        self.unit_inverse()
    }

    /// Reduction of an element modulo `p`, when it makes sense.
    fn reduce_mod(&self, p: &PrimeField) -> Option<Fp>;
}

/// Arbitrary-precision rational in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Rational(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Exact rational cube root, if one exists.
    pub fn cube_root(&self) -> Option<Rational> {
        let n = integer_cube_root(self.numer())?;
        let d = integer_cube_root(self.denom())?;
        Some(Rational::from_big(n, d))
    }
}

fn integer_cube_root(n: &BigInt) -> Option<BigInt> {
    let neg = n.is_negative();
    let a = n.abs();
    let r = a.cbrt();
    for cand in [r.clone() - 1, r.clone(), r + 1] {
        if cand.is_negative() {
            continue;
        }
        if &cand * &cand * &cand == a {
            return Some(if neg { -cand } else { cand });
        }
    }
    None
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rational::from_big(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(n)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Coeff for Rational {
    type Ring = ();

    fn ring(&self) {}

    fn zero(_: &()) -> Self {
        Rational(BigRational::zero())
    }

    fn one(_: &()) -> Self {
        Rational(BigRational::one())
    }

    fn from_i64(_: &(), v: i64) -> Self {
        Rational::from_int(v)
    }

    fn from_rational(_: &(), q: &Rational) -> Option<Self> {
        Some(q.clone())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }

    fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }

    fn neg(&self) -> Self {
        Rational(-&self.0)
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn is_one(&self) -> bool {
        self.0.is_one()
    }

    fn ring_name(_: &()) -> String {
        "rational".to_string()
    }
}

impl Field for Rational {
    fn reduce_mod(&self, p: &PrimeField) -> Option<Fp> {
        let m = BigInt::from(p.modulus());
        let num = self.numer().mod_floor(&m).to_u64()?;
        let den = self.denom().mod_floor(&m).to_u64()?;
        let den = Fp::new(den, *p);
        den.unit_inverse().map(|inv| Fp::new(num, *p).mul(&inv))
    }
}

/// An odd prime modulus, at least 5.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PrimeField(u64);

impl PrimeField {
    /// Largest accepted modulus; keeps products inside `u128` trivially and
    /// point enumeration at desk scale.
    pub const MAX: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if p < 5 {
            return Err(Error::InvalidPrime(p, "primes below 5 are rejected".into()));
        }
        if p > Self::MAX {
            return Err(Error::InvalidPrime(p, "modulus too large".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p, "not prime".into()));
        }
        Ok(PrimeField(p))
    }

    pub fn modulus(&self) -> u64 {
        self.0
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp::new(v.rem_euclid(self.0 as i64) as u64, *self)
    }

    /// Iterates over all elements `0..p`.
    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.0).map(move |v| Fp::new(v, *self))
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fp:{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of a prime field, stored as a representative in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    field: PrimeField,
}

impl Fp {
    pub fn new(value: u64, field: PrimeField) -> Self {
        Fp {
            value: value % field.0,
            field,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    fn check(&self, other: &Fp) {
        assert_eq!(
            self.field, other.field,
            "arithmetic between different prime fields"
        );
    }

    pub fn pow(&self, mut e: u64) -> Fp {
        let p = self.field.0 as u128;
        let mut base = self.value as u128;
        let mut acc = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp::new(acc as u64, self.field)
    }

    /// Some cube root, found by enumeration.
    pub fn cube_root(&self) -> Option<Fp> {
        self.field.elements().find(|x| x.mul(x).mul(x) == *self)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.0)
    }
}

impl Coeff for Fp {
    type Ring = PrimeField;

    fn ring(&self) -> PrimeField {
        self.field
    }

    fn zero(ring: &PrimeField) -> Self {
        Fp::new(0, *ring)
    }

    fn one(ring: &PrimeField) -> Self {
        Fp::new(1, *ring)
    }

    fn from_i64(ring: &PrimeField, v: i64) -> Self {
        ring.elem(v)
    }

    fn from_rational(ring: &PrimeField, q: &Rational) -> Option<Self> {
        q.reduce_mod(ring)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn add(&self, other: &Self) -> Self {
        self.check(other);
        Fp::new(self.value + other.value, self.field)
    }

    fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Fp::new(self.value + self.field.0 - other.value, self.field)
    }

    fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let v = (self.value as u128 * other.value as u128) % self.field.0 as u128;
        Fp::new(v as u64, self.field)
    }

    fn neg(&self) -> Self {
        Fp::new(self.field.0 - self.value, self.field)
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.field.0 - 2))
        }
    }

    fn ring_name(ring: &PrimeField) -> String {
        ring.to_string()
    }
}

impl Field for Fp {
    fn reduce_mod(&self, p: &PrimeField) -> Option<Fp> {
        (self.field == *p).then_some(*self)
    }
}
