//! Square matrix polynomials `L(z) = A_l z^l + … + A_1 z + A_0` and the
//! inverse `Ĺ(z) = -L(z)⁻¹` as a matrix of reduced rational functions.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::ratfun::{InfinityLimit, RatFun};
use crate::scalar::GaussianRational;

/// An `n × n` grid of polynomials, stored row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Poly>>", into = "Vec<Vec<Poly>>")]
pub struct MatPoly {
    n: usize,
    entries: Vec<Poly>,
}

impl TryFrom<Vec<Vec<Poly>>> for MatPoly {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Poly>>) -> Result<Self> {
        MatPoly::new(rows)
    }
}

impl From<MatPoly> for Vec<Vec<Poly>> {
    fn from(m: MatPoly) -> Self {
        m.to_rows()
    }
}

impl MatPoly {
    pub fn new(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    /// Entry `(i, j)` given by integer coefficients in ascending powers.
    pub fn from_int_coeffs(rows: &[&[&[i64]]]) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|c| Poly::from_ints(c)).collect())
                .collect(),
        )
        .expect("square input")
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Poly::one() } else { Poly::zero() })
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| Poly::zero())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    /// `Σ_j A_j z^j` from coefficient matrices `A_0, …, A_l`.
    pub fn from_coefficients(coeffs: &[Matrix]) -> Result<Self> {
        let n = coeffs.first().map_or(0, Matrix::rows);
        if coeffs.iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::Dimension("coefficient matrices must share one square shape".into()));
        }
        Ok(Self::from_fn(n, |i, j| Poly::new(coeffs.iter().map(|a| a[(i, j)].clone()).collect())))
    }

    /// `A_0, …, A_l`; empty for the zero matrix.
    pub fn coefficient_matrices(&self) -> Vec<Matrix> {
        let Some(l) = self.degree() else {
            return Vec::new();
        };
        (0..=l)
            .map(|d| {
                let mut a = Matrix::zeros(self.n, self.n);
                for i in 0..self.n {
                    for j in 0..self.n {
                        a[(i, j)] = self.get(i, j).coeff(d);
                    }
                }
                a
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    /// `l`, the largest entry degree; `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Poly> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// Leading coefficient matrix is the identity.
    pub fn is_monic(&self) -> bool {
        self.coefficient_matrices().last().is_some_and(|a| *a == Matrix::identity(self.n))
    }

    pub fn eval(&self, z: &GaussianRational) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.get(i, j).eval(z);
            }
        }
        m
    }

    pub fn eval_complex(&self, z: Complex64) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).eval_complex(z)).collect())
            .collect()
    }

    /// Entrywise `p`-th derivative.
    pub fn derivative(&self, order: usize) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|p| p.nth_derivative(order)).collect() }
    }

    /// `L_p = L^(p)(α)/p!`, the coefficients of `L` in powers of `(z - α)`,
    /// for `p = 0..=l`.
    pub fn taylor_coefficients(&self, alpha: &GaussianRational) -> Vec<Matrix> {
        let l = self.degree().unwrap_or(0);
        let shifted: Vec<Vec<GaussianRational>> = self.entries.iter().map(|p| p.taylor_shift(alpha)).collect();
        (0..=l)
            .map(|d| {
                let mut a = Matrix::zeros(self.n, self.n);
                for i in 0..self.n {
                    for j in 0..self.n {
                        if let Some(c) = shifted[i * self.n + j].get(d) {
                            a[(i, j)] = c.clone();
                        }
                    }
                }
                a
            })
            .collect()
    }

    /// Numeric Taylor coefficients at an approximate point.
    pub fn taylor_coefficients_complex(&self, alpha: Complex64) -> Vec<Vec<Vec<Complex64>>> {
        let l = self.degree().unwrap_or(0);
        let shifted: Vec<Vec<Complex64>> = self
            .entries
            .iter()
            .map(|p| taylor_shift_complex(&p.to_complex(), alpha))
            .collect();
        (0..=l)
            .map(|d| {
                (0..self.n)
                    .map(|i| {
                        (0..self.n)
                            .map(|j| shifted[i * self.n + j].get(d).copied().unwrap_or_default())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).fold(Poly::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Conjugate-coefficient transpose, `L(z̄)*` as a polynomial in `z`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj_coeffs())
    }

    /// Every coefficient matrix is Hermitian.
    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    /// Degree of the first non-Hermitian coefficient matrix, if any.
    pub fn hermitian_defect(&self) -> Option<usize> {
        self.coefficient_matrices().iter().position(|a| !a.is_hermitian())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination over `ℚ(i)[z]`.
    pub fn det(&self) -> Poly {
        bareiss_det(self.entries.clone(), self.n)
    }

    /// Determinant of the submatrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Poly {
        let m = self.n - 1;
        let mut sub = Vec::with_capacity(m * m);
        for r in (0..self.n).filter(|&r| r != i) {
            for c in (0..self.n).filter(|&c| c != j) {
                sub.push(self.get(r, c).clone());
            }
        }
        bareiss_det(sub, m)
    }

    pub fn degree_report(&self) -> Result<DegreeReport> {
        let det = self.det();
        let det_degree = det.degree().ok_or(Error::NotInvertible)?;
        let minor_degrees: Vec<Vec<Option<usize>>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.minor(i, j).degree()).collect())
            .collect();
        let max_minor_degree = minor_degrees.iter().flatten().flatten().copied().max();
        let l = self.degree().unwrap_or(0);
        Ok(DegreeReport {
            det_degree,
            nl: self.n * l,
            monic: self.is_monic(),
            max_minor_degree,
            minors_within_det_degree: max_minor_degree.is_none_or(|d| d <= det_degree),
            minor_degrees,
        })
    }

    /// `Ĺ(z) = -L(z)⁻¹` by adjugate over determinant.
    pub fn inverse_hat(&self) -> Result<MatRatFun> {
        let chi = self.det();
        if chi.is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut entries = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let cof = if self.n == 1 { Poly::one() } else { self.minor(j, i) };
                // -(-1)^(i+j) m_ji / χ
                let num = if (i + j) % 2 == 0 { -cof } else { cof };
                entries.push(RatFun::new(num, chi.clone())?);
            }
        }
        Ok(MatRatFun { n: self.n, entries })
    }
}

/// Coefficients of `p` in powers of `(z - α)` in floating point.
pub(crate) fn taylor_shift_complex(p: &[Complex64], alpha: Complex64) -> Vec<Complex64> {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let t = alpha * a[j + 1];
            a[j] += t;
        }
    }
    a
}

fn bareiss_det(mut m: Vec<Poly>, n: usize) -> Poly {
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                return Poly::zero();
            };
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            sign = !sign;
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &pivot * &m[i * n + j] - &m[i * n + k] * &m[k * n + j];
                m[i * n + j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = pivot;
    }
    let d = m[n * n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Degree data for `χ = det L` and the `(n-1)`-minors `m_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub det_degree: usize,
    /// `n · l`, the bound on `deg χ`.
    pub nl: usize,
    pub monic: bool,
    /// `None` entries are identically zero minors.
    pub minor_degrees: Vec<Vec<Option<usize>>>,
    pub max_minor_degree: Option<usize>,
    /// `deg m_ij ≤ deg χ` for all `i, j`: `Ĺ` converges at infinity.
    pub minors_within_det_degree: bool,
}

impl fmt::Debug for MatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &MatPoly {
    type Output = MatPoly;
    fn mul(self, rhs: &MatPoly) -> MatPoly {
        assert_eq!(self.n, rhs.n);
        MatPoly::from_fn(self.n, |i, j| {
            (0..self.n).fold(Poly::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j))
        })
    }
}

impl Add for &MatPoly {
    type Output = MatPoly;
    fn add(self, rhs: &MatPoly) -> MatPoly {
        MatPoly::from_fn(self.n, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &MatPoly {
    type Output = MatPoly;
    fn sub(self, rhs: &MatPoly) -> MatPoly {
        MatPoly::from_fn(self.n, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

/// An `n × n` grid of reduced rational functions.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<RatFun>>", into = "Vec<Vec<RatFun>>")]
pub struct MatRatFun {
    n: usize,
    entries: Vec<RatFun>,
}

impl TryFrom<Vec<Vec<RatFun>>> for MatRatFun {
    type Error = Error;
    fn try_from(rows: Vec<Vec<RatFun>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rational matrix must be square".into()));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }
}

impl From<MatRatFun> for Vec<Vec<RatFun>> {
    fn from(m: MatRatFun) -> Self {
        (0..m.n).map(|i| m.entries[i * m.n..(i + 1) * m.n].to_vec()).collect()
    }
}

impl MatRatFun {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> RatFun) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn from_matpoly(l: &MatPoly) -> Self {
        Self::from_fn(l.n(), |i, j| RatFun::from_poly(l.get(i, j).clone()))
    }

    pub fn constant(m: &Matrix) -> Self {
        Self::from_fn(m.rows(), |i, j| RatFun::constant(m[(i, j)].clone()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFun {
        &self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|e| -e).collect() }
    }

    /// `Q(z̄)*`, entrywise conjugate coefficients and transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj_coeffs())
    }

    /// Entrywise limit as `z → ∞`.
    pub fn limit_at_infinity(&self) -> Result<Matrix> {
        let mut out = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                match self.get(i, j).limit_at_infinity() {
                    InfinityLimit::Finite(v) => out[(i, j)] = v,
                    InfinityLimit::Divergent => return Err(Error::DivergentEntry { row: i, col: j }),
                }
            }
        }
        Ok(out)
    }

    /// Largest pole order at `α` over all entries.
    pub fn pole_order(&self, alpha: &GaussianRational) -> usize {
        self.entries.iter().map(|e| e.pole_order(alpha)).max().unwrap_or(0)
    }

    /// Principal-part coefficient matrices at `α`: `out[m]` multiplies
    /// `(z - α)^-(m+1)`, for `m < order`.
    pub fn principal_part(&self, alpha: &GaussianRational, order: usize) -> Vec<Matrix> {
        let mut out = vec![Matrix::zeros(self.n, self.n); order];
        for i in 0..self.n {
            for j in 0..self.n {
                for (m, c) in self.get(i, j).principal_part(alpha).into_iter().enumerate() {
                    assert!(m < order, "pole order exceeds requested principal part");
                    out[m][(i, j)] = c;
                }
            }
        }
        out
    }

    /// First entry where `self` and `other` differ, with the difference.
    pub fn first_difference(&self, other: &MatRatFun) -> Option<(usize, usize, RatFun)> {
        for i in 0..self.n {
            for j in 0..self.n {
                let d = self.get(i, j) - other.get(i, j);
                if !d.is_zero() {
                    return Some((i, j, d));
                }
            }
        }
        None
    }
}

impl Mul for &MatRatFun {
    type Output = MatRatFun;
    fn mul(self, rhs: &MatRatFun) -> MatRatFun {
        MatRatFun::from_fn(self.n, |i, j| {
            (0..self.n).fold(RatFun::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j))
        })
    }
}

impl Add for &MatRatFun {
    type Output = MatRatFun;
    fn add(self, rhs: &MatRatFun) -> MatRatFun {
        MatRatFun::from_fn(self.n, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &MatRatFun {
    type Output = MatRatFun;
    fn sub(self, rhs: &MatRatFun) -> MatRatFun {
        MatRatFun::from_fn(self.n, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl fmt::Debug for MatRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
