//! Elements of the Gaussian rationals ℚ(i).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { re: Rational::ZERO, im: Rational::ZERO };
    pub const ONE: Scalar = Scalar { re: Rational::ONE, im: Rational::ZERO };

    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Scalar { re, im: Rational::ZERO }
    }

    pub fn int(n: i64) -> Self {
        Scalar::real(Rational::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::real(Rational::new(n, d))
    }

    pub fn i() -> Self {
        Scalar { re: Rational::ZERO, im: Rational::ONE }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    /// |z|² as a rational.
    pub fn norm_sq(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        if self.im.is_zero() {
            return Scalar::real(self.re.recip());
        }
        let n = self.norm_sq().recip();
        Scalar { re: &self.re * &n, im: -(&self.im * &n) }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// (−1)^k as a scalar.
    pub fn sign(odd: bool) -> Self {
        if odd {
            Scalar::int(-1)
        } else {
            Scalar::ONE
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re * &rhs.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        Scalar { re, im }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        if rhs.im.is_zero() {
            let r = rhs.re.recip();
            return Scalar { re: &self.re * &r, im: &self.im * &r };
        }
        self * &rhs.recip()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::real(r)
    }
}

/// Lexicographic on (re, im); used only to make orderings reproducible.
impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

/// Prints `a/b` for reals and `a/b+c/d*i` otherwise.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.signum() < 0 { '-' } else { '+' };
        write!(f, "{}{}{}*i", self.re, sign, self.im.abs())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar from {0:?}")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return t.parse::<Rational>().map(Scalar::real).map_err(|_| err());
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // split at the last sign that is not leading
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .next_back();
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other.strip_prefix('+').unwrap_or(other),
        };
        let re: Rational = re.parse().map_err(|_| err())?;
        let im: Rational = im.parse().map_err(|_| err())?;
        Ok(Scalar { re, im })
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Scalar::int(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let z = Scalar::new(Rational::new(1, 2), Rational::from_int(3));
        let w = &z * &z.recip();
        assert!(w.is_one());
        assert_eq!((&Scalar::i() * &Scalar::i()), Scalar::int(-1));
    }

    #[test]
    fn string_format() {
        assert_eq!(Scalar::frac(3, 4).to_string(), "3/4");
        let z = Scalar::new(Rational::new(1, 2), Rational::new(-3, 5));
        assert_eq!(z.to_string(), "1/2-3/5*i");
        assert_eq!(z.to_string().parse::<Scalar>().unwrap(), z);
        assert_eq!("i".parse::<Scalar>().unwrap(), Scalar::i());
        assert_eq!("-2*i".parse::<Scalar>().unwrap(), Scalar::new(Rational::ZERO, Rational::from_int(-2)));
        assert_eq!("-1/3".parse::<Scalar>().unwrap(), Scalar::frac(-1, 3));
    }
}
