//! Gaussian rationals, the coefficient field for everything else.
//!
//! A [`Scalar`] is a pair of big rationals `re + im*i`. All arithmetic is
//! exact; structural equality on the canonical `num_rational` form is
//! semantic equality. Text format is `p/q`, `p/q+r/s*i`, `-r/s*i`, with
//! integer shorthand for either part.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exact element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        Scalar {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(rat(n, 1))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Scalar::from_rational(rat(num, den))
    }

    /// `num/den * i`
    pub fn imag_frac(num: i64, den: i64) -> Self {
        Scalar {
            re: Rational::zero(),
            im: rat(num, den),
        }
    }

    pub fn zero() -> Self {
        Scalar::from_int(0)
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::imag_frac(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True when the value lies in Q (no imaginary part).
    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// re^2 + im^2.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Scalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        let mut b = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Square root inside Q(i), when one exists there.
    ///
    /// The returned root is canonical: positive real part, or zero real
    /// part with nonnegative imaginary part.
    pub fn sqrt_in_field(&self) -> Option<Scalar> {
        if self.im.is_zero() {
            return if self.re.is_negative() {
                rational_sqrt(&-self.re.clone()).map(|r| Scalar {
                    re: Rational::zero(),
                    im: r,
                })
            } else {
                rational_sqrt(&self.re).map(Scalar::from_rational)
            };
        }
        // For x + yi with y != 0: need |z| = m in Q and (x+m)/2 a square.
        let m = rational_sqrt(&self.norm())?;
        let half = rat(1, 2);
        let u = rational_sqrt(&(&half * (&self.re + &m)))?;
        if u.is_zero() {
            return None;
        }
        let v = &self.im / (&u * rat(2, 1));
        Some(Scalar { re: u, im: v })
    }

    /// Decimal rendering for human-facing output only.
    pub fn to_approx_string(&self) -> String {
        let f = |r: &Rational| -> f64 {
            let num = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
            let den = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            num / den
        };
        if self.im.is_zero() {
            format!("{:.6}", f(&self.re))
        } else {
            format!("{:.6}{:+.6}i", f(&self.re), f(&self.im))
        }
    }

    pub fn parse(text: &str) -> Result<Scalar> {
        parse_scalar(text)
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", fmt_rational(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{}{}{}*i",
            fmt_rational(&self.re),
            sign,
            fmt_rational(&self.im.abs())
        )
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseScalar(text.to_string());
    let (num_s, den_s) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad())?;
    let den: BigInt = den_s.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::new(num, den))
}

/// Parse the scalar grammar `±p/q(±r/s*i)?` with integer shorthand.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::ParseScalar(text.to_string()));
    }
    // Any sign past the first character separates real and imaginary parts:
    // rationals themselves contain only digits and '/'.
    let split = t
        .char_indices()
        .skip(1)
        .find(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i);
    if let Some(i) = split {
        let (re_s, im_s) = (&t[..i], &t[i..]);
        let im_core = im_s
            .strip_suffix("*i")
            .ok_or_else(|| Error::ParseScalar(text.to_string()))?;
        return Ok(Scalar::new(parse_rational(re_s)?, parse_rational(im_core)?));
    }
    if let Some(core) = t.strip_suffix("*i") {
        return Ok(Scalar::new(Rational::zero(), parse_rational(core)?));
    }
    Ok(Scalar::from_rational(parse_rational(&t)?))
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: Self) -> Scalar {
        Scalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Self) -> Scalar {
        Scalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Self) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

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

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Division panics on a zero divisor; use [`Scalar::checked_div`] where the
/// divisor is data-dependent.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: Self) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Mul<&Rational> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Rational) -> Scalar {
        Scalar {
            re: &self.re * rhs,
            im: &self.im * rhs,
        }
    }
}
