//! Reduced rational functions `num/den` over ℚ(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::GaussianRational;

/// A rational function with `gcd(num, den) = 1` and monic `den`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RatFunRepr", into = "RatFunRepr")]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

#[derive(Serialize, Deserialize)]
struct RatFunRepr {
    num: Poly,
    den: Poly,
}

impl TryFrom<RatFunRepr> for RatFun {
    type Error = Error;
    fn try_from(r: RatFunRepr) -> Result<Self> {
        RatFun::new(r.num, r.den)
    }
}

impl From<RatFun> for RatFunRepr {
    fn from(f: RatFun) -> Self {
        RatFunRepr { num: f.num, den: f.den }
    }
}

/// Behaviour of a rational function at a finite point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointLimit {
    /// Finite limit; `zero_order > 0` means the value is zero with that order.
    Finite { value: GaussianRational, zero_order: usize },
    Pole { order: usize },
}

/// Behaviour of a rational function as `z → ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfinityLimit {
    Finite(GaussianRational),
    Divergent,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        let lead = den.lead().expect("nonzero").inv();
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(Self { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// `c / (z - α)^e`.
    pub fn pole_term(c: GaussianRational, alpha: &GaussianRational, e: u32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: Poly::constant(c), den: Poly::linear(alpha).pow(e) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn conj_coeffs(&self) -> Self {
        Self { num: self.num.conj_coeffs(), den: self.den.conj_coeffs() }
    }

    pub fn div(&self, other: &RatFun) -> Result<Self> {
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Exact limit at `α` after cancellation, or the pole order.
    pub fn limit_at(&self, alpha: &GaussianRational) -> PointLimit {
        if self.num.is_zero() {
            return PointLimit::Finite { value: GaussianRational::zero(), zero_order: 0 };
        }
        let pole = self.den.root_multiplicity(alpha).expect("den nonzero");
        if pole > 0 {
            return PointLimit::Pole { order: pole };
        }
        let zero_order = self.num.root_multiplicity(alpha).expect("num nonzero");
        PointLimit::Finite { value: &self.num.eval(alpha) / &self.den.eval(alpha), zero_order }
    }

    pub fn limit_at_infinity(&self) -> InfinityLimit {
        let (Some(dn), Some(dd)) = (self.num.degree(), self.den.degree()) else {
            return InfinityLimit::Finite(GaussianRational::zero());
        };
        match dn.cmp(&dd) {
            std::cmp::Ordering::Less => InfinityLimit::Finite(GaussianRational::zero()),
            std::cmp::Ordering::Equal => {
                InfinityLimit::Finite(self.num.lead().unwrap() / self.den.lead().unwrap())
            }
            std::cmp::Ordering::Greater => InfinityLimit::Divergent,
        }
    }

    /// Pole order at `α` (zero when holomorphic there).
    pub fn pole_order(&self, alpha: &GaussianRational) -> usize {
        match self.limit_at(alpha) {
            PointLimit::Pole { order } => order,
            PointLimit::Finite { .. } => 0,
        }
    }

    /// Principal part at `α`: `out[m]` is the coefficient of `(z - α)^-(m+1)`.
    pub fn principal_part(&self, alpha: &GaussianRational) -> Vec<GaussianRational> {
        let e = self.pole_order(alpha);
        if e == 0 {
            return Vec::new();
        }
        let lin = Poly::linear(alpha);
        let g = self.den.div_exact(&lin.pow(e as u32)).expect("pole order divides");
        let series = series_quotient(&self.num.taylor_shift(alpha), &g.taylor_shift(alpha), e);
        // f = Σ_j c_j (z-α)^(j-e); coefficient of (z-α)^-(m+1) is c_(e-1-m)
        (0..e).map(|m| series[e - 1 - m].clone()).collect()
    }
}

/// First `terms` coefficients of the power series `a / b` with `b[0] ≠ 0`.
pub(crate) fn series_quotient(
    a: &[GaussianRational],
    b: &[GaussianRational],
    terms: usize,
) -> Vec<GaussianRational> {
    let b0_inv = b[0].inv();
    let mut out: Vec<GaussianRational> = Vec::with_capacity(terms);
    for j in 0..terms {
        let mut acc = a.get(j).cloned().unwrap_or_else(GaussianRational::zero);
        for i in 1..=j.min(b.len().saturating_sub(1)) {
            acc -= &(&b[i] * &out[j - i]);
        }
        out.push(&acc * &b0_inv);
    }
    out
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFun {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

fn add_ref(a: &RatFun, b: &RatFun) -> RatFun {
    if a.den == b.den {
        return RatFun::new(&a.num + &b.num, a.den.clone()).expect("den nonzero");
    }
    RatFun::new(&a.num * &b.den + &b.num * &a.den, &a.den * &b.den).expect("den nonzero")
}

fn sub_ref(a: &RatFun, b: &RatFun) -> RatFun {
    add_ref(a, &-b)
}

fn mul_ref(a: &RatFun, b: &RatFun) -> RatFun {
    RatFun::new(&a.num * &b.num, &a.den * &b.den).expect("den nonzero")
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait<&RatFun> for &RatFun {
            type Output = RatFun;
            fn $method(self, rhs: &RatFun) -> RatFun {
                $f(self, rhs)
            }
        }
        impl $trait<RatFun> for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: RatFun) -> RatFun {
                $f(&self, &rhs)
            }
        }
        impl $trait<&RatFun> for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: &RatFun) -> RatFun {
                $f(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -self.num, den: self.den }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn reduces_on_construction() {
        // -z^2 (z-1)^2 / z^2
        let num = -(p(&[0, 0, 1]) * p(&[-1, 1]).pow(2));
        let f = RatFun::new(num, p(&[0, 0, 1])).unwrap();
        assert_eq!(f.den(), &Poly::one());
        assert_eq!(f.limit_at(&q(0)), PointLimit::Finite { value: q(-1), zero_order: 0 });
        let g = RatFun::new(-(p(&[0, 0, 1]) * p(&[-1, 1]).pow(2)), p(&[-1, 1]).pow(2)).unwrap();
        assert_eq!(g.limit_at(&q(1)), PointLimit::Finite { value: q(-1), zero_order: 0 });
        assert_eq!(RatFun::new(p(&[1]), Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn limits_at_infinity() {
        let f = RatFun::new(p(&[-1]), p(&[0, -1, 1])).unwrap();
        assert_eq!(f.limit_at_infinity(), InfinityLimit::Finite(q(0)));
        assert_eq!(RatFun::from_poly(Poly::z()).limit_at_infinity(), InfinityLimit::Divergent);
        let g = RatFun::new(p(&[1, 2]), p(&[-3, 1])).unwrap();
        assert_eq!(g.limit_at_infinity(), InfinityLimit::Finite(q(2)));
    }

    #[test]
    fn polynomial_limit_is_evaluation() {
        let f = RatFun::from_poly(p(&[3, 0, 1]));
        assert_eq!(f.limit_at(&q(2)), PointLimit::Finite { value: q(7), zero_order: 0 });
        assert_eq!(
            RatFun::from_poly(p(&[0, 0, 1])).limit_at(&q(0)),
            PointLimit::Finite { value: q(0), zero_order: 2 }
        );
        assert_eq!(RatFun::new(p(&[1]), p(&[0, 0, 1])).unwrap().limit_at(&q(0)), PointLimit::Pole { order: 2 });
    }

    #[test]
    fn principal_part_of_double_pole() {
        // 1/(z^2 (z-1)^2) = 1/z^2 + 2/z + ... near 0 and 1/(z-1)^2 - 2/(z-1) + ... near 1
        let f = RatFun::new(p(&[1]), p(&[0, -1, 1]).pow(2)).unwrap();
        assert_eq!(f.principal_part(&q(0)), vec![q(2), q(1)]);
        assert_eq!(f.principal_part(&q(1)), vec![q(-2), q(1)]);
        assert!(f.principal_part(&q(5)).is_empty());
    }

    #[test]
    fn arithmetic_stays_reduced() {
        let a = RatFun::new(p(&[1]), p(&[0, 1])).unwrap();
        let b = RatFun::new(p(&[-1]), p(&[-1, 1])).unwrap();
        let s = &a + &b; // 1/z - 1/(z-1) = -1/(z(z-1))
        assert_eq!(s, RatFun::new(p(&[-1]), p(&[0, -1, 1])).unwrap());
        assert!((&s - &s).is_zero());
        assert_eq!(s.num().gcd(s.den()), Poly::one());
    }
}
