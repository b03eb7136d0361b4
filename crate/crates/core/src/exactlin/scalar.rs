use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Validated prime field. Moduli are limited to 32 bits so products fit in `u64`.
    pub fn prime(p: u64) -> Result<Field> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^32")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(Rational::from_int(v)),
            Field::Prime(p) => Scalar::P {
                value: v.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    /// `num / den` in this field; fails when `den` vanishes.
    pub fn fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inverse().ok_or(Error::DivisionByZero)?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// Parses `"p/q"`, `"n"`, or `"r mod p"` (the last only when it names this field).
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        if let Some((r, p)) = text.split_once("mod") {
            let p: u64 = p.trim().parse().map_err(|_| Error::Parse(text.into()))?;
            if *self != Field::Prime(p) {
                return Err(Error::FieldMismatch);
            }
            let r: i64 = r.trim().parse().map_err(|_| Error::Parse(text.into()))?;
            return Ok(self.from_i64(r));
        }
        match text.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| Error::Parse(text.into()))?;
                let d: i64 = d.trim().parse().map_err(|_| Error::Parse(text.into()))?;
                self.fraction(n, d)
            }
            None => {
                let n: i64 = text.parse().map_err(|_| Error::Parse(text.into()))?;
                Ok(self.from_i64(n))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arbitrary-precision rational with an `i64` fast path. Always normalized
/// (positive denominator, lowest terms); `Big` is only used when `Small` overflows.
#[derive(Clone, Debug)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn from_int(v: i64) -> Rational {
        Rational::Small(v, 1)
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n == 0,
            Rational::Big(b) => b.is_zero(),
        }
    }

    /// Normalized `num / den`; `den` must be nonzero.
    pub(crate) fn from_bigints(num: BigInt, den: BigInt) -> Rational {
        Rational::from_big(BigRational::new(num, den))
    }

    /// Residue mod `p`, or `None` when `p` divides the denominator.
    pub(crate) fn residue(&self, p: u64) -> Option<u64> {
        let (n, d) = match self {
            Rational::Small(n, d) => {
                let m = p as i128;
                ((*n as i128).rem_euclid(m) as u64, (*d as i128).rem_euclid(m) as u64)
            }
            Rational::Big(b) => {
                let bp = BigInt::from(p);
                let r = |x: &BigInt| {
                    let r = x % &bp;
                    (if r.is_negative() { r + &bp } else { r }).to_u64().expect("residue fits")
                };
                (r(b.numer()), r(b.denom()))
            }
        };
        if d == 0 {
            return None;
        }
        Some((n as u128 * pow_mod(d, p - 2, p) as u128 % p as u128) as u64)
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        match self {
            Rational::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (b.numer().clone(), b.denom().clone()),
        }
    }

    fn add(&self, o: &Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Rational::Small(s, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(x), Some(y)) = (a.checked_mul(d), c.checked_mul(b)) {
                if let (Some(n), Some(den)) = (x.checked_add(y), b.checked_mul(d)) {
                    return Rational::from_i128(n, den);
                }
            }
        }
        Rational::from_big(self.to_big() + o.to_big())
    }

    fn mul(&self, o: &Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                if let Some(p) = a.checked_mul(*c) {
                    return Rational::Small(p, 1);
                }
            }
            let n = (*a as i128) * (*c as i128);
            let den = (*b as i128) * (*d as i128);
            return Rational::from_i128(n, den);
        }
        Rational::from_big(self.to_big() * o.to_big())
    }

    fn neg(&self) -> Rational {
        match self {
            Rational::Small(n, d) if *n != i64::MIN => Rational::Small(-n, *d),
            _ => Rational::from_big(-self.to_big()),
        }
    }

    fn inverse(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Rational::Big(b) => Rational::from_big(b.recip()),
        })
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rational {}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.numer_denom();
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

/// An element of a [`Field`]. Prime-field elements carry their modulus, so
/// every value knows which field it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Q(Rational),
    P { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::P { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::P { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => *r == Rational::Small(1, 1),
            Scalar::P { value, .. } => *value == 1,
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => r.inverse().map(Scalar::Q),
            Scalar::P { value, modulus } => {
                if *value == 0 {
                    return None;
                }
                Some(Scalar::P {
                    value: pow_mod(*value, modulus - 2, *modulus),
                    modulus: *modulus,
                })
            }
        }
    }

    /// Fails with [`Error::FieldMismatch`] unless both operands share a field.
    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self * other)
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Integer representative: the numerator/denominator pair over Q, the residue mod p.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::P { .. } => None,
        }
    }

    pub(crate) fn mul_add_assign(&mut self, a: &Scalar, b: &Scalar) {
        match (&mut *self, a, b) {
            (Scalar::P { value, modulus }, Scalar::P { value: x, .. }, Scalar::P { value: y, .. }) => {
                *value = (*value + x * y % *modulus) % *modulus;
            }
            _ => *self = &*self + &(a * b),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

macro_rules! mismatch {
    () => {
        panic!("field mismatch between scalar operands")
    };
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.add(b)),
            (Scalar::P { value: a, modulus: p }, Scalar::P { value: b, modulus: q }) if p == q => {
                Scalar::P { value: (a + b) % p, modulus: *p }
            }
            _ => mismatch!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.mul(b)),
            (Scalar::P { value: a, modulus: p }, Scalar::P { value: b, modulus: q }) if p == q => {
                Scalar::P { value: a * b % p, modulus: *p }
            }
            _ => mismatch!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.neg()),
            Scalar::P { value, modulus } => Scalar::P {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    /// `p/q` over the rationals, `r mod p` over a prime field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::P { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

impl Scalar {
    /// Signed integer value when the scalar is an integer (rationals) or a residue.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(Rational::Small(n, 1)) => Some(*n),
            Scalar::Q(Rational::Big(b)) if b.is_integer() => b.numer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::P { value, .. } => Some(*value as i64),
        }
    }

    /// Image in `F_p`; `None` when a rational's denominator is divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::P { modulus, .. } if *modulus == p => Some(self.clone()),
            Scalar::P { .. } => None,
            Scalar::Q(r) => r.residue(p).map(|value| Scalar::P { value, modulus: p }),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(Rational::Small(n, _)) => *n < 0,
            Scalar::Q(Rational::Big(b)) => b.is_negative(),
            Scalar::P { .. } => false,
        }
    }
}
