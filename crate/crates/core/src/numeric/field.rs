//! Exact scalar fields: rationals and Gaussian rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator. Displays as `p/q`, or `p` when `q = 1`.
pub type Scalar = BigRational;

/// Minimal field interface used by the dense linear algebra.
///
/// Operations take references so that big-integer backed values are not
/// cloned on every multiply.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

/// Shorthand for `num / den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a rational literal in `p/q` or `p` form.
pub fn parse_scalar(s: &str) -> Result<Scalar, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse(0, "empty rational literal"));
    }
    BigRational::from_str(s).map_err(|_| Error::parse(0, format!("invalid rational literal `{s}`")))
}

/// Lossy conversion across the float barrier.
pub fn scalar_to_f64(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

pub fn scalar_abs(s: &Scalar) -> Scalar {
    s.abs()
}

/// Element `re + i·im` of the Gaussian rationals `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl GaussianScalar {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        Self { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        Self { re, im: Zero::zero() }
    }

    pub fn i() -> Self {
        Self::new(Zero::zero(), One::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `|z|²`, a rational.
    pub fn norm_sqr(&self) -> Scalar {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiply by `i^power`.
    pub fn mul_i_pow(&self, power: usize) -> Self {
        match power % 4 {
            0 => self.clone(),
            1 => Self::new(-&self.im, self.re.clone()),
            2 => Self::new(-&self.re, -&self.im),
            _ => Self::new(self.im.clone(), -&self.re),
        }
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(scalar_to_f64(&self.re), scalar_to_f64(&self.im))
    }
}

impl fmt::Display for GaussianScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            write!(f, "{}", self.re)
        } else if Zero::is_zero(&self.re) {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Field for GaussianScalar {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::real(One::one())
    }
    fn from_i64(v: i64) -> Self {
        Self::real(rat(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, rhs: &Self) -> Self {
        Self::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
    fn neg(&self) -> Self {
        Self::new(-&self.re, -&self.im)
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if Zero::is_zero(&n) {
            return None;
        }
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }
}
