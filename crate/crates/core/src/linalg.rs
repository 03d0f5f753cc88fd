//! Dense constant matrices over ℚ(i) and the exact linear algebra the
//! pipelines need: rank, solving, nullspaces and Hermitian inertia.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::GaussianRational;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<GaussianRational>>", into = "Vec<Vec<GaussianRational>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl TryFrom<Vec<Vec<GaussianRational>>> for Matrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<GaussianRational>>) -> Result<Self, String> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err("ragged matrix rows".into());
        }
        Ok(Matrix::from_rows(rows))
    }
}

impl From<Matrix> for Vec<Vec<GaussianRational>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<_> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Self { rows: r, cols: c, data }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::from_int(x)).collect())
                .collect(),
        )
    }

    /// Column vector.
    pub fn column(v: &[GaussianRational]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Row vector.
    pub fn row_vector(v: &[GaussianRational]) -> Self {
        Self { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<GaussianRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_rows(
            (0..self.rows)
                .map(|i| self.row(i).iter().chain(other.row(i)).cloned().collect())
                .collect(),
        )
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] -= &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Some solution of `M x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::column(b));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<GaussianRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GaussianRational::zero(); self.cols];
                v[f] = GaussianRational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(i, f)];
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_rows((0..n).map(|i| r.row(i)[n..].to_vec()).collect()))
    }

    pub fn det(&self) -> GaussianRational {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = GaussianRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return GaussianRational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] -= &t;
                }
            }
        }
        det
    }

    /// `(positive, negative, zero)` eigenvalue counts of a Hermitian matrix,
    /// by Sylvester's law of inertia.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let terms = hermitian_rank_one_split(self);
        let pos = terms.iter().filter(|t| t.weight.re() > &Zero::zero()).count();
        let neg = terms.len() - pos;
        (pos, neg, self.rows - terms.len())
    }

    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(GaussianRational::to_complex64).collect())
            .collect()
    }
}

/// One term `weight · v* v` (with `v` a row vector) of a Hermitian split.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneTerm {
    pub weight: GaussianRational,
    pub row: Vec<GaussianRational>,
}

/// Writes a Hermitian `M` as `Σ weight_j · v_j* v_j` with real nonzero weights
/// and linearly independent rows `v_j`.
///
/// Each step picks `u` with `μ = u* M u ≠ 0` (a unit vector on a nonzero
/// diagonal entry, else `e_p + conj(m_pq) e_q`), peels off `(Mu)(Mu)*/μ`, and
/// repeats on the remainder. Rows are normalized so that `v·u = 1`.
pub fn hermitian_rank_one_split(m: &Matrix) -> Vec<RankOneTerm> {
    assert!(m.is_hermitian(), "inertia of a non-Hermitian matrix");
    let n = m.rows();
    let mut rest = m.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let u: Vec<GaussianRational> = match (0..n).find(|&p| !rest[(p, p)].is_zero()) {
            Some(p) => unit(n, p),
            None => {
                let (p, q) = (0..n)
                    .flat_map(|p| (0..n).map(move |q| (p, q)))
                    .find(|&(p, q)| !rest[(p, q)].is_zero())
                    .expect("nonzero matrix");
                let mut u = unit(n, p);
                u[q] = rest[(p, q)].conj();
                u
            }
        };
        let w = rest.mul_vec(&u);
        let mu: GaussianRational = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        debug_assert!(mu.is_real() && !mu.is_zero());
        let mu_inv = mu.inv();
        let row: Vec<GaussianRational> = w.iter().map(|x| (x * &mu_inv).conj()).collect();
        for i in 0..n {
            for j in 0..n {
                let t = &(&w[i] * &w[j].conj()) * &mu_inv;
                rest[(i, j)] -= &t;
            }
        }
        out.push(RankOneTerm { weight: mu, row });
    }
    out
}

fn unit(n: usize, p: usize) -> Vec<GaussianRational> {
    let mut u = vec![GaussianRational::zero(); n];
    u[p] = GaussianRational::one();
    u
}

/// Outer product `a* b` of row vectors: entry `(p, q)` is `conj(a_p) b_q`.
pub fn outer_adj(a: &[GaussianRational], b: &[GaussianRational]) -> Matrix {
    Matrix::from_rows(a.iter().map(|x| b.iter().map(|y| x.conj() * y).collect()).collect())
}

/// Numeric rank by Gaussian elimination with partial pivoting; entries below
/// `tol` times the largest magnitude count as zero.
pub fn numeric_rank(rows: &[Vec<Complex64>], tol: f64) -> usize {
    let scale = rows.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    numeric_rank_scaled(rows, tol, scale)
}

/// As [`numeric_rank`], but entries below `tol · scale` count as zero for a
/// caller-supplied `scale`.
pub fn numeric_rank_scaled(rows: &[Vec<Complex64>], tol: f64, scale: f64) -> usize {
    let mut m: Vec<Vec<Complex64>> = rows.to_vec();
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for c in 0..nc {
        if rank == nr {
            break;
        }
        let (p, best) = (rank..nr)
            .map(|i| (i, m[i][c].norm()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol * scale {
            continue;
        }
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            let f = row[c] / pivot[c];
            for (x, p) in row[c..nc].iter_mut().zip(&pivot[c..nc]) {
                *x -= f * p;
            }
        }
        rank += 1;
    }
    rank
}

impl Index<(usize, usize)> for Matrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    out[(i, j)] += &t;
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
