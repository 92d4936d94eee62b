//! Exact arithmetic in the field Q(i) of Gaussian rationals.
//!
//! Every scalar in the library is a [`GaussianRational`]: a pair of reduced
//! rational numbers `re + im*i` with arbitrary-precision integer parts.
//! The only nontrivial operation beyond field arithmetic is an exact square
//! root *test*: [`GaussianRational::sqrt_in_field`] either produces a square
//! root inside Q(i) or reports that a field extension would be needed.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of Q(i), stored as two reduced fractions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// Builds a scalar from four raw integers `re_num/re_den + (im_num/im_den)i`,
    /// reducing and sign-normalizing both fractions.
    pub fn from_raw(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Result<Self> {
        if re_den == 0 || im_den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(GaussianRational {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        })
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        Self::from_raw(num, den, 0, 1)
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`, the norm down to Q.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let n = self.norm();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    /// Exact square root in Q(i), if one exists.
    ///
    /// On success the representative with `re > 0`, or `re = 0` and `im >= 0`,
    /// is returned. Failure means the square root lives in a proper extension.
    pub fn sqrt_in_field(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(GaussianRational::from_int(0));
        }
        let zero = BigRational::zero();
        if self.im.is_zero() {
            // Pure rational: re >= 0 gives c, re < 0 gives d*i.
            return if self.re >= zero {
                let c = rational_sqrt(&self.re).ok_or(Error::NotASquare)?;
                Ok(GaussianRational { re: c, im: zero })
            } else {
                let d = rational_sqrt(&(-&self.re)).ok_or(Error::NotASquare)?;
                Ok(GaussianRational { re: zero, im: d })
            };
        }
        // (c + di)^2 = a + bi with b != 0 forces c != 0:
        // c^2 - d^2 = a, 2cd = b, and c^2 = (a + sqrt(a^2+b^2)) / 2.
        let r = rational_sqrt(&self.norm()).ok_or(Error::NotASquare)?;
        let two = BigRational::from_integer(BigInt::from(2));
        let c_sq = (&self.re + &r) / &two;
        let c = rational_sqrt(&c_sq).ok_or(Error::NotASquare)?;
        if c.is_zero() {
            return Err(Error::NotASquare);
        }
        let d = &self.im / (&two * &c);
        // c > 0 by construction of rational_sqrt.
        Ok(GaussianRational { re: c, im: d })
    }
}

/// Square root of a nonnegative rational, when it is rational.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = integer_sqrt(r.numer())?;
    let den = integer_sqrt(r.denom())?;
    Some(BigRational::new(num, den))
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::from_int(0)
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::from_int(1)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a> Add for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a> Sub for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: Self) -> Self {
        &self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} + {}/{}i",
            self.re.numer(),
            self.re.denom(),
            self.im.numer(),
            self.im.denom()
        )
    }
}

/// Renders one rational component as "p/q".
pub fn fraction_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "p/q" (or a bare integer "p") into a reduced rational.
pub fn fraction_from_str(s: &str) -> Result<BigRational> {
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num_s.trim())
        .map_err(|_| Error::Parse(format!("invalid integer {num_s:?}")))?;
    let den = BigInt::from_str(den_s.trim())
        .map_err(|_| Error::Parse(format!("invalid integer {den_s:?}")))?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}
