//! Complex scalars for the two matrix backends.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact complex rational.
pub type Cq = Complex<BigRational>;
/// Double-precision complex.
pub type C64 = Complex<f64>;

/// Element type of a dense matrix backend.
pub trait Entry: Clone + PartialEq + Num + Neg<Output = Self> + Send + Sync + Debug {
    const EXACT: bool;

    fn to_c64(&self) -> C64;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Entry for Cq {
    const EXACT: bool = true;

    fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl Entry for C64 {
    const EXACT: bool = false;

    fn to_c64(&self) -> C64 {
        *self
    }
}

pub(crate) fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `p/d` as an exact rational. Panics on a zero denominator.
pub fn rat(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

/// Real exact complex scalar `p/d`.
pub fn cq(p: i64, d: i64) -> Cq {
    Complex::new(rat(p, d), BigRational::zero())
}

pub fn cq_int(n: i64) -> Cq {
    cq(n, 1)
}

/// Exact rational with the same value as a finite double.
pub fn rat_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::arg(format!("{x} is not finite")))
}

pub fn cq_from_c64(z: C64) -> Result<Cq> {
    Ok(Complex::new(rat_from_f64(z.re)?, rat_from_f64(z.im)?))
}

/// Parses `7`, `-3/4` or a plain decimal such as `0.125` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::arg(format!("cannot parse `{s}` as a rational"));
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let q = BigRational::new(num, den);
        return Ok(if negative { -q } else { q });
    }
    BigRational::from_str(s).map_err(|_| bad())
}

pub(crate) fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A complex scalar tagged with its backend. Mixed arithmetic promotes to float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scalar {
    Exact(#[serde(with = "crate::matrix::cq_serde")] Cq),
    Float(#[serde(with = "c64_serde")] C64),
}

mod c64_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::C64;

    pub fn serialize<S: Serializer>(z: &C64, ser: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(de)?;
        Ok(C64::new(re, im))
    }
}

impl Scalar {
    pub fn zero_exact() -> Self {
        Scalar::Exact(Cq::zero())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(cq_int(n))
    }

    pub fn ratio(p: i64, d: i64) -> Self {
        Scalar::Exact(cq(p, d))
    }

    pub fn real(x: f64) -> Self {
        Scalar::Float(C64::new(x, 0.0))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_zero(),
            Scalar::Float(z) => z.is_zero(),
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Exact(z) => z.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Exact(z) => Scalar::Exact(z.conj()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    /// Exact version of a float scalar (dyadic rationals), identity on exact scalars.
    pub fn to_exact(&self) -> Result<Cq> {
        match self {
            Scalar::Exact(z) => Ok(z.clone()),
            Scalar::Float(z) => cq_from_c64(*z),
        }
    }

    fn binary(
        self,
        rhs: Scalar,
        exact: impl FnOnce(Cq, Cq) -> Cq,
        float: impl FnOnce(C64, C64) -> C64,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            (a, b) => Scalar::Float(float(a.to_c64(), b.to_c64())),
        }
    }
}

impl From<Cq> for Scalar {
    fn from(z: Cq) -> Self {
        Scalar::Exact(z)
    }
}

impl From<C64> for Scalar {
    fn from(z: C64) -> Self {
        Scalar::Float(z)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Exact(Complex::new(q, BigRational::zero()))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, |a, b| a * b)
    }
}

/// Panics on an exact zero divisor.
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!(rhs.is_exact() && rhs.is_zero()), "exact division by zero");
        self.binary(rhs, |a, b| a / b, |a, b| a / b)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(-z),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero_exact(), |acc, x| acc + x)
    }
}
