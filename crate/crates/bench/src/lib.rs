//! Deterministic inputs for the criterion benches.

use mpk_core::{GaussianRational, MatPoly, Poly};

/// Dense `n × n` matrix polynomial of degree `l` with small integer
/// coefficients in `[-3, 3]`, fixed by `seed`.
pub fn dense(n: usize, l: usize, seed: i64) -> MatPoly {
    MatPoly::from_fn(n, |i, j| {
        let coeffs: Vec<i64> =
            (0..=l).map(|p| ((seed + 7 * i as i64 + 3 * j as i64 + 5 * p as i64 + (i * j * p) as i64) % 7) - 3).collect();
        Poly::from_ints(&coeffs)
    })
}

/// `Uᵀ diag(z - a_k) U` with the unit upper triangular `U` of ones, which
/// is Hermitian and representable.
pub fn hermitian(n: usize) -> MatPoly {
    let diag: Vec<Poly> = (0..n)
        .map(|k| {
            let a = GaussianRational::frac(k as i64 - 1, 2);
            let lin = Poly::linear(&a);
            if k % 2 == 0 { lin } else { lin.scale(&GaussianRational::from_int(-1)) }
        })
        .collect();
    MatPoly::from_fn(n, |i, j| {
        (0..=i.min(j)).fold(Poly::from_ints(&[]), |acc, k| &acc + &diag[k])
    })
}
