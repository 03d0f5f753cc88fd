//! Independent oracles and generators shared by the integration tests.
//! Nothing here calls the library's elimination or root-finding code.

#![allow(dead_code)]

use mpk_core::{GaussianRational, MatPoly, Matrix, Poly};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

pub fn qv(xs: &[i64]) -> Vec<GaussianRational> {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn mixed_chain_3x3() -> MatPoly {
    MatPoly::from_int_coeffs(&[
        &[&[], &[0, 1], &[]],
        &[&[1], &[], &[0, 1]],
        &[&[], &[], &[0, 0, -1, 1]],
    ])
}

pub fn hermitian_double_pole() -> MatPoly {
    MatPoly::from_int_coeffs(&[&[&[1], &[0, -1, 1]], &[&[0, -1, 1], &[]]])
}

pub fn divergent_at_infinity() -> MatPoly {
    MatPoly::from_int_coeffs(&[&[&[0, 0, 0, 1], &[0, 1]], &[&[0, 1], &[]]])
}

/// `G - zI` with `G` the `k × k` anti-diagonal matrix of ones.
pub fn sip_minus_z(k: usize) -> MatPoly {
    MatPoly::from_fn(k, |i, j| {
        let g = if i + j == k - 1 { 1 } else { 0 };
        let z = if i == j { -1 } else { 0 };
        Poly::from_ints(&[g, z])
    })
}

/// Random `n × n` matrix polynomial of degree at most `l` with integer
/// coefficients in `[-c, c]`; `monic` forces `A_l = I`.
pub fn random_matpoly(r: &mut ChaCha8Rng, n: usize, l: usize, c: i64, monic: bool) -> MatPoly {
    MatPoly::from_fn(n, |i, j| {
        let mut coeffs: Vec<i64> = (0..=l).map(|_| r.gen_range(-c..=c)).collect();
        if monic {
            coeffs[l] = i64::from(i == j);
        }
        Poly::from_ints(&coeffs)
    })
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &MatPoly) -> Poly {
    let n = m.n();
    let rows: Vec<Vec<Poly>> = m.to_rows();
    cofactor(&rows, n)
}

fn cofactor(rows: &[Vec<Poly>], n: usize) -> Poly {
    if n == 0 {
        return Poly::one();
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Poly>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &rows[0][j] * &cofactor(&sub, n - 1);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// `Σ_j A_j z^j` by Horner over the coefficient matrices.
pub fn horner_eval(m: &MatPoly, z: &GaussianRational) -> Vec<Vec<GaussianRational>> {
    let n = m.n();
    let mut acc = vec![vec![GaussianRational::zero(); n]; n];
    for a in m.coefficient_matrices().iter().rev() {
        for i in 0..n {
            for j in 0..n {
                acc[i][j] = &(&acc[i][j] * z) + &a[(i, j)];
            }
        }
    }
    acc
}

/// Rank by plain Gaussian elimination over ℚ(i).
pub fn rank(mut m: Vec<Vec<GaussianRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        let (top, rest) = m.split_at_mut(r + 1);
        for row in rest.iter_mut() {
            let f = &row[c] * &inv;
            if f.is_zero() {
                continue;
            }
            for (x, p) in row[c..cols].iter_mut().zip(&top[r][c..cols]) {
                *x -= &(&f * p);
            }
        }
        r += 1;
    }
    r
}

/// `p(z)` expanded around `α`: coefficient matrices `L_p = L^(p)(α)/p!`,
/// from repeated derivatives rather than a Taylor shift.
fn taylor_matrices(l: &MatPoly, alpha: &GaussianRational) -> Vec<Vec<Vec<GaussianRational>>> {
    let deg = l.degree().unwrap_or(0);
    let mut fact = GaussianRational::one();
    (0..=deg)
        .map(|p| {
            if p > 0 {
                fact = &fact * &q(p as i64);
            }
            let d = l.derivative(p);
            let inv = fact.inv();
            (0..l.n())
                .map(|i| (0..l.n()).map(|j| &d.get(i, j).eval(alpha) * &inv).collect())
                .collect()
        })
        .collect()
}

/// Partial multiplicities of `L` at `α` from the block-Toeplitz systems:
/// `dim ker T_m = Σ_j min(κ_j, m)`. Returned in descending order.
pub fn brute_partition(l: &MatPoly, alpha: &GaussianRational, algebraic: usize) -> Vec<usize> {
    let n = l.n();
    let ls = taylor_matrices(l, alpha);
    let kernel = |m: usize| -> usize {
        let size = m * n;
        let mut t = vec![vec![GaussianRational::zero(); size]; size];
        for bi in 0..m {
            for bj in 0..=bi {
                if let Some(block) = ls.get(bi - bj) {
                    for i in 0..n {
                        for j in 0..n {
                            t[bi * n + i][bj * n + j] = block[i][j].clone();
                        }
                    }
                }
            }
        }
        size - rank(t)
    };
    let dims: Vec<usize> = (0..=algebraic + 1).map(|m| if m == 0 { 0 } else { kernel(m) }).collect();
    // at_least[m] = #{j : κ_j ≥ m}
    let at_least: Vec<usize> = (1..dims.len()).map(|m| dims[m] - dims[m - 1]).collect();
    let mut parts = Vec::new();
    for m in 1..at_least.len() {
        for _ in 0..(at_least[m - 1] - at_least[m]) {
            parts.push(m);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Multiplicity of `α` as a root of `p` by repeated exact division.
pub fn multiplicity(p: &Poly, alpha: &GaussianRational) -> usize {
    let lin = Poly::linear(alpha);
    let mut rest = p.clone();
    let mut k = 0;
    while !rest.is_zero() {
        match rest.div_exact(&lin) {
            Some(next) => {
                rest = next;
                k += 1;
            }
            None => break,
        }
    }
    k
}

/// Positive and negative root counts of a real-rooted polynomial by
/// Descartes' rule of signs.
pub fn descartes(p: &Poly) -> (usize, usize) {
    let signs = |flip: bool| -> usize {
        let s: Vec<i32> = p
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(j, c)| {
                let s = c.real_sign()?;
                Some(if flip && j % 2 == 1 { -s } else { s })
            })
            .filter(|&s| s != 0)
            .collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    };
    (signs(false), signs(true))
}

/// `e^{M}` by truncated Taylor series with scaling and squaring.
pub fn expm(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let norm: f64 = m.iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 2f64.powi(squarings as i32);
    let a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|x| x / scale).collect()).collect();
    let mul = |x: &[Vec<f64>], y: &[Vec<f64>]| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
    };
    let mut result: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let mut term = result.clone();
    for k in 1..30 {
        term = mul(&term, &a).into_iter().map(|r| r.into_iter().map(|x| x / k as f64).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}

pub fn to_f64(m: &Matrix) -> Vec<Vec<f64>> {
    m.to_complex().into_iter().map(|r| r.into_iter().map(|c: Complex64| c.re).collect()).collect()
}

/// Random Gaussian-integer matrix with nonzero determinant.
pub fn random_invertible(r: &mut ChaCha8Rng, n: usize, c: i64, complex: bool) -> Matrix {
    loop {
        let rows: Vec<Vec<GaussianRational>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let im = if complex { r.gen_range(-1..=1) } else { 0 };
                        GaussianRational::complex(r.gen_range(-c..=c), im)
                    })
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows);
        if !m.det().is_zero() {
            return m;
        }
    }
}
