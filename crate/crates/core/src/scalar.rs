//! Exact Gaussian rationals `a + bi` with `a, b` in ℚ.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseScalarError;

/// An exact complex number with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive
/// denominator, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_real(BigRational::from_integer(n.into()))
    }

    /// `num/den + 0i`. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_real(BigRational::new(num.into(), den.into()))
    }

    pub fn complex(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn i() -> Self {
        Self::complex(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|² = a² + b²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm_sqr();
        Self { re: &self.re / &n, im: -&self.im / &n }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign of a real value: `Some(1)`, `Some(-1)`, `Some(0)`; `None` if not real.
    pub fn real_sign(&self) -> Option<i32> {
        if !self.is_real() {
            return None;
        }
        Some(if self.re.is_positive() {
            1
        } else if self.re.is_negative() {
            -1
        } else {
            0
        })
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.re.denom(), self.im.denom())
    }

    /// Splits into Gaussian-integer parts, assuming both denominators are one.
    pub(crate) fn to_gaussian_int(&self) -> Option<(BigInt, BigInt)> {
        if self.re.is_integer() && self.im.is_integer() {
            Some((self.re.to_integer(), self.im.to_integer()))
        } else {
            None
        }
    }

    /// Parses `"p/q"` or `"p"`; rejects zero denominators.
    pub fn parse_rational(s: &str) -> Result<BigRational, ParseScalarError> {
        let s = s.trim();
        let bad = || ParseScalarError::Malformed(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(s.to_string()));
        }
        Ok(BigRational::new(num, den))
    }
}

pub(crate) fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = rational_to_string(&self.re);
        if self.im.is_zero() {
            return f.write_str(&re);
        }
        let im_abs = rational_to_string(&self.im.abs());
        let im_part = if im_abs == "1" { "i".to_string() } else { format!("{im_abs}i") };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_part}")
            } else {
                f.write_str(&im_part)
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "({re}{sign}{im_part})")
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussianRational {
    type Err = ParseScalarError;

    /// Accepts a bare real rational such as `"-3/4"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::from_real(Self::parse_rational(s)?))
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::from_real(r)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

fn add_ref(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    GaussianRational { re: &a.re + &b.re, im: &a.im + &b.im }
}

fn sub_ref(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    GaussianRational { re: &a.re - &b.re, im: &a.im - &b.im }
}

fn mul_ref(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational::from_real(&a.re * &b.re);
    }
    GaussianRational {
        re: &a.re * &b.re - &a.im * &b.im,
        im: &a.re * &b.im + &a.im * &b.re,
    }
}

fn div_ref(a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
    assert!(!b.is_zero(), "division by zero");
    if b.im.is_zero() {
        return GaussianRational { re: &a.re / &b.re, im: &a.im / &b.re };
    }
    mul_ref(a, &b.inv())
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait<&GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                $f(self, rhs)
            }
        }
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                $f(&self, &rhs)
            }
        }
        impl $trait<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                $f(&self, rhs)
            }
        }
        impl $trait<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: GaussianRational) {
        *self += &rhs;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = mul_ref(self, rhs);
    }
}

impl Sum for GaussianRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a GaussianRational> for GaussianRational {
    fn sum<I: Iterator<Item = &'a GaussianRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Product for GaussianRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    re: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<String>,
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ScalarRepr {
            re: rational_to_string(&self.re),
            im: Some(rational_to_string(&self.im)),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(deserializer)?;
        let re = Self::parse_rational(&repr.re).map_err(D::Error::custom)?;
        let im = match repr.im {
            Some(s) => Self::parse_rational(&s).map_err(D::Error::custom)?,
            None => BigRational::zero(),
        };
        Ok(Self::new(re, im))
    }
}

/// Finds `g` in ℚ(i) with `|g|² = value`, preferring a positive real `g`.
///
/// Writes `value = P/Q` and searches `P·Q = a² + b²` with `a ≥ b ≥ 0`,
/// largest `a` first, giving `g = (a + bi)/Q`. Returns `None` when `value` is
/// not a norm from ℚ(i) or the search bound is exceeded.
pub fn norm_root(value: &BigRational) -> Option<GaussianRational> {
    if value.is_negative() {
        return None;
    }
    if value.is_zero() {
        return Some(GaussianRational::zero());
    }
    let target = value.numer() * value.denom();
    let den = value.denom().clone();
    let a_max = target.sqrt();
    // a ranges over [ceil(sqrt(target/2)), sqrt(target)]
    let limit = BigInt::from(5_000_000u64);
    let mut a = a_max.clone();
    let mut steps = BigInt::zero();
    while &a * &a * 2 >= target {
        let rest = &target - &a * &a;
        let b = rest.sqrt();
        if &b * &b == rest {
            return Some(GaussianRational::new(
                BigRational::new(a, den.clone()),
                BigRational::new(b, den),
            ));
        }
        a -= 1;
        steps += 1;
        if steps > limit {
            return None;
        }
    }
    None
}
