//! Dense univariate polynomials over ℚ(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

/// Polynomial with coefficients in ascending order: `coeffs[j]` multiplies `z^j`.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient is
/// nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `z - α`.
    pub fn linear(alpha: &GaussianRational) -> Self {
        Self::new(vec![-alpha, GaussianRational::one()])
    }

    pub fn monomial(c: GaussianRational, degree: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GaussianRational> {
        self.coeffs
    }

    /// Coefficient of `z^j`, zero past the degree.
    pub fn coeff(&self, j: usize) -> GaussianRational {
        self.coeffs.get(j).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * z + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex64())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussianRational::to_complex64).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * GaussianRational::from_int(j as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    /// Conjugates every coefficient: `p̄(z)` with `p̄(z̄) = conj(p(z))`.
    pub fn conj_coeffs(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(GaussianRational::conj).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inv()),
            None => Self::zero(),
        }
    }

    /// Quotient and remainder with `deg rem < deg q`.
    pub fn divmod(&self, q: &Poly) -> Result<(Poly, Poly)> {
        let dq = q.degree().ok_or(Error::DivisionByZero)?;
        let Some(dp) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if dp < dq {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = q.coeffs[dq].inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); dp - dq + 1];
        for k in (0..=dp - dq).rev() {
            let c = &rem[k + dq] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, qc) in q.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * qc);
            }
            quot[k] = c;
        }
        rem.truncate(dq);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Division that must leave no remainder; `None` otherwise.
    pub fn div_exact(&self, q: &Poly) -> Option<Poly> {
        match self.divmod(q) {
            Ok((quot, rem)) if rem.is_zero() => Some(quot),
            _ => None,
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("b is nonzero");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Coefficients of `p` in powers of `(z - α)`, by repeated synthetic division.
    pub fn taylor_shift(&self, alpha: &GaussianRational) -> Vec<GaussianRational> {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                let t = alpha * &a[j + 1];
                a[j] += &t;
            }
        }
        a
    }

    /// Largest `k` with `(z - α)^k | p`.
    pub fn root_multiplicity(&self, alpha: &GaussianRational) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut k = 0;
        let mut cur = self.coeffs.clone();
        loop {
            // synthetic division by (z - α)
            let n = cur.len();
            if n <= 1 {
                return Ok(k);
            }
            let mut quot = vec![GaussianRational::zero(); n - 1];
            let mut carry = GaussianRational::zero();
            for j in (0..n).rev() {
                let v = &cur[j] + &(alpha * &carry);
                if j == 0 {
                    if !v.is_zero() {
                        return Ok(k);
                    }
                } else {
                    quot[j - 1] = v.clone();
                }
                carry = v;
            }
            cur = quot;
            k += 1;
        }
    }

    /// Yun's square-free decomposition: `p = c · Π_i f_i^i` with monic,
    /// pairwise coprime, square-free `f_i`. Returns `(c, [(f_i, i)])`, skipping
    /// trivial factors.
    pub fn square_free(&self) -> Result<(GaussianRational, Vec<(Poly, usize)>)> {
        let lead = self.lead().ok_or(Error::ZeroPolynomial)?.clone();
        let p = self.monic();
        let mut out = Vec::new();
        if p.is_constant() {
            return Ok((lead, out));
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.div_exact(&a0).expect("gcd divides");
        let mut c = dp.div_exact(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            if b.is_constant() {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
            i += 1;
        }
        Ok((lead, out))
    }

    /// Renders in the given variable, e.g. `"-z^2+z"`.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mono = match j {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{j}"),
            };
            if j == 0 {
                out.push_str(&body);
            } else if body != "1" {
                out.push_str(&body);
                out.push('*');
                out.push_str(&mono);
            } else {
                out.push_str(&mono);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("z"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Self { coeffs: vec![GaussianRational::one()] }
    }
}

impl From<GaussianRational> for Poly {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

fn add_ref(a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|j| a.coeff(j) + b.coeff(j)).collect())
}

fn sub_ref(a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|j| a.coeff(j) - b.coeff(j)).collect())
}

fn mul_ref(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![GaussianRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    Poly::new(out)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                $f(self, rhs)
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                $f(&self, &rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                $f(&self, rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.into_iter().map(Neg::neg).collect() }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(Neg::neg).collect() }
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::new(Vec::deserialize(deserializer)?))
    }
}
