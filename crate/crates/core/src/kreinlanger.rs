//! Krein–Langer representations `Ĺ(z) = S∞ + Γ⁺(A - z)⁻¹Γ` for Hermitian
//! matrix polynomials with exact real spectrum.
//!
//! `A` is a direct sum of Jordan blocks, `J` the matching direct sum of
//! `±G` (anti-diagonal ones), and `Γ⁺ = Γ*J`. `Γ` is recovered from the
//! principal parts of `Ĺ - S∞` one pole level at a time.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_rank_one_split, outer_adj, Matrix};
use crate::matpoly::{DegreeReport, MatPoly, MatRatFun};
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::roots::{find_roots_with_tol, RootValue, DEFAULT_NUMERIC_TOL};
use crate::scalar::{norm_root, GaussianRational};
use crate::spectral::{canonical_system_with_tol, RootFunctionRecord};

/// One Jordan block of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub alpha: GaussianRational,
    pub k: usize,
    /// `ε = ±1`; the block of `J` is `ε·G_k`.
    pub sign: i32,
    /// Diagonal slot of the root function behind this block.
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub s_inf: Matrix,
    pub a: Matrix,
    pub j: Matrix,
    pub gamma: Matrix,
    pub kappa: usize,
    pub blocks: Vec<BlockSpec>,
}

impl Representation {
    /// `Γ⁺ = Γ*J`.
    pub fn gamma_plus(&self) -> Matrix {
        &self.gamma.adjoint() * &self.j
    }

    /// `K`, the dimension of the state space.
    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }
}

/// Hermitian, invertible, `deg m_ij ≤ deg χ`, exact real spectrum; checked
/// in that order.
pub fn check_representability(l: &MatPoly) -> Result<DegreeReport> {
    if let Some(degree) = l.hermitian_defect() {
        return Err(Error::NotHermitian { degree });
    }
    let report = l.degree_report()?;
    if !report.minors_within_det_degree {
        return Err(Error::DivergentAtInfinity {
            max_minor_degree: report.max_minor_degree.unwrap_or(0),
            det_degree: report.det_degree,
        });
    }
    for root in find_roots_with_tol(&l.det(), DEFAULT_NUMERIC_TOL).roots {
        match &root.value {
            RootValue::Exact(a) if a.is_real() => {}
            RootValue::Approx { value, .. } if value.im.abs() <= 1e-9 * value.norm().max(1.0) => {
                return Err(Error::NonExactEigenvalue(root.value.to_string()));
            }
            _ => return Err(Error::NonRealSpectrum(root.value.to_string())),
        }
    }
    Ok(report)
}

/// `S∞ = lim_{z→∞} Ĺ(z)`.
pub fn limit_at_infinity_matrix(l_hat: &MatRatFun) -> Result<Matrix> {
    let s = l_hat.limit_at_infinity()?;
    if !s.is_hermitian() {
        return Err(Error::Verification("limit at infinity is not Hermitian".into()));
    }
    Ok(s)
}

/// Coefficient of `(z-α)^k` in `⟨ψ_i, φ_j⟩`, where `⟨a, b⟩ = Σ a_c · b̄_c`
/// conjugates the coefficients of `b`.
fn pairing_limit(psi: &[Poly], phi: &[Poly], alpha: &GaussianRational, k: usize) -> GaussianRational {
    let h = psi.iter().zip(phi).fold(Poly::zero(), |acc, (a, b)| acc + a * &b.conj_coeffs());
    let shifted = h.taylor_shift(alpha);
    debug_assert!(shifted.iter().take(k).all(Zero::is_zero));
    shifted.get(k).cloned().unwrap_or_else(GaussianRational::zero)
}

/// `lim ⟨ψ, φ⟩/(z-α)^k` with `ψ = Lφ`; real and nonzero for a canonical
/// root function at a real eigenvalue.
pub fn chain_limit(l: &MatPoly, rec: &RootFunctionRecord) -> Result<GaussianRational> {
    let alpha = rec.exact_alpha().ok_or_else(|| Error::NonExactEigenvalue(rec.alpha.to_string()))?;
    let psi = l.mul_vec(&rec.phi);
    let value = pairing_limit(&psi, &rec.phi, alpha, rec.order);
    if value.is_zero() {
        return Err(Error::ZeroChainLimit { alpha: alpha.to_string() });
    }
    if !value.is_real() {
        return Err(Error::NonRealLimit { alpha: alpha.to_string(), value: value.to_string() });
    }
    Ok(value)
}

/// The anti-diagonal `k × k` matrix of ones.
pub fn sip_matrix(k: usize) -> Matrix {
    let mut g = Matrix::zeros(k, k);
    for i in 0..k {
        g[(i, k - 1 - i)] = GaussianRational::one();
    }
    g
}

/// Negative eigenvalue count of `ε·G_k`.
pub fn sip_negative_count(k: usize, sign: i32) -> usize {
    if k.is_multiple_of(2) || sign > 0 {
        k / 2
    } else {
        k / 2 + 1
    }
}

/// `A` (Jordan blocks), `J` (`ε·G` blocks) and `κ`.
pub fn assemble_aj(blocks: &[BlockSpec]) -> Result<(Matrix, Matrix, usize)> {
    let size: usize = blocks.iter().map(|b| b.k).sum();
    let mut a = Matrix::zeros(size, size);
    let mut j = Matrix::zeros(size, size);
    let mut kappa = 0;
    let mut off = 0;
    for b in blocks {
        let eps = GaussianRational::from_int(b.sign.into());
        for i in 0..b.k {
            a[(off + i, off + i)] = b.alpha.clone();
            if i + 1 < b.k {
                a[(off + i, off + i + 1)] = GaussianRational::one();
            }
            j[(off + i, off + b.k - 1 - i)] = eps.clone();
        }
        kappa += sip_negative_count(b.k, b.sign);
        off += b.k;
    }
    if &j * &j != Matrix::identity(size) || !j.is_hermitian() {
        return Err(Error::Verification("J is not a fundamental symmetry".into()));
    }
    if &j * &a != &a.transpose() * &j {
        return Err(Error::Verification("J·A differs from Aᵀ·J".into()));
    }
    let (_, neg, _) = j.inertia();
    if neg != kappa {
        return Err(Error::Verification(format!("κ = {kappa} but J has {neg} negative eigenvalues")));
    }
    Ok((a, j, kappa))
}

/// Blocks in order: `α` ascending, `k` descending, then column. Signs come
/// from the pairing matrix of all chains sharing `(α, k)`; it is diagonal
/// in the generic case, where each sign is that of [`chain_limit`].
pub fn block_specs(l: &MatPoly, records: &[RootFunctionRecord]) -> Result<Vec<BlockSpec>> {
    let mut sorted: Vec<&RootFunctionRecord> = records.iter().collect();
    for r in &sorted {
        if r.exact_alpha().is_none_or(|a| !a.is_real()) {
            return Err(Error::NonRealSpectrum(r.alpha.to_string()));
        }
    }
    let key = |r: &RootFunctionRecord| r.exact_alpha().expect("exact").re().clone();
    sorted.sort_by(|x, y| key(x).cmp(&key(y)).then(y.order.cmp(&x.order)).then(x.column.cmp(&y.column)));
    let mut blocks = Vec::with_capacity(sorted.len());
    let mut start = 0;
    while start < sorted.len() {
        let head = sorted[start];
        let alpha = head.exact_alpha().expect("exact").clone();
        let end = start
            + sorted[start..]
                .iter()
                .take_while(|r| r.order == head.order && r.exact_alpha() == Some(&alpha))
                .count();
        let group = &sorted[start..end];
        let psis: Vec<Vec<Poly>> = group.iter().map(|r| l.mul_vec(&r.phi)).collect();
        let gram = Matrix::from_rows(
            psis.iter()
                .map(|psi| group.iter().map(|r| pairing_limit(psi, &r.phi, &alpha, head.order)).collect())
                .collect(),
        );
        if !gram.is_hermitian() {
            return Err(Error::NonRealLimit { alpha: alpha.to_string(), value: format!("{gram:?}") });
        }
        let (pos, neg, zero) = gram.inertia();
        if zero > 0 {
            return Err(Error::ZeroChainLimit { alpha: alpha.to_string() });
        }
        let diagonal = (0..group.len()).all(|i| (0..group.len()).all(|j| i == j || gram[(i, j)].is_zero()));
        for (idx, r) in group.iter().enumerate() {
            let sign = if diagonal {
                gram[(idx, idx)].real_sign().expect("Hermitian diagonal")
            } else if idx < pos {
                1
            } else {
                -1
            };
            blocks.push(BlockSpec { alpha: alpha.clone(), k: r.order, sign, column: r.column });
        }
        debug_assert_eq!(pos + neg, group.len());
        start = end;
    }
    Ok(blocks)
}

/// Solves for `Γ` (rows grouped per block) such that the principal parts of
/// `Ĺ - S∞` equal those of `Γ⁺(A - z)⁻¹Γ`.
///
/// With `(A_b - z)⁻¹ = -Σ_m N^m/(z-α)^(m+1)`, the coefficient of
/// `(z-α)^-(m+1)` is `R_m = -Σ_b ε_b Σ_{a+a' = k_b-1-m} u_a* u_a'`, where
/// `u_a` is row `k_b-1-a` of the block. Levels are solved from the top
/// down: new blocks enter through a rank-one split on the complement of the
/// known leading rows, older blocks through a linear solve.
pub fn solve_gamma(l_hat: &MatRatFun, s_inf: &Matrix, blocks: &[BlockSpec]) -> Result<Matrix> {
    let n = l_hat.n();
    let strict = l_hat - &MatRatFun::constant(s_inf);
    let mut us: Vec<Vec<Vec<GaussianRational>>> = vec![Vec::new(); blocks.len()];
    let mut alphas: Vec<&GaussianRational> = Vec::new();
    for b in blocks {
        if !alphas.contains(&&b.alpha) {
            alphas.push(&b.alpha);
        }
    }
    for alpha in alphas {
        let idx: Vec<usize> = (0..blocks.len()).filter(|&b| &blocks[b].alpha == alpha).collect();
        let kmax = idx.iter().map(|&b| blocks[b].k).max().unwrap_or(0);
        let order = strict.pole_order(alpha);
        if order > kmax {
            return Err(Error::ResidueStructure {
                alpha: alpha.to_string(),
                reason: format!("pole of order {order} exceeds the longest chain {kmax}"),
            });
        }
        let residues = strict.principal_part(alpha, kmax);
        for m in (0..kmax).rev() {
            solve_level(alpha, m, &residues[m], blocks, &idx, &mut us, n)?;
        }
    }
    let mut rows = Vec::new();
    for (b, u) in blocks.iter().zip(&us) {
        rows.extend((0..b.k).map(|i| u[b.k - 1 - i].clone()));
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, n));
    }
    Ok(Matrix::from_rows(rows))
}

fn solve_level(
    alpha: &GaussianRational,
    m: usize,
    residue: &Matrix,
    blocks: &[BlockSpec],
    idx: &[usize],
    us: &mut [Vec<Vec<GaussianRational>>],
    n: usize,
) -> Result<()> {
    let fail = |reason: String| Error::ResidueStructure { alpha: alpha.to_string(), reason };
    let eps = |b: usize| GaussianRational::from_int(blocks[b].sign.into());
    // -R_m minus the products of rows that are already known
    let mut target = -residue;
    for &b in idx {
        let k = blocks[b].k;
        if k > m + 2 {
            let d = k - 1 - m;
            for a in 1..d {
                target = &target - &outer_adj(&us[b][a], &us[b][d - a]).scale(&eps(b));
            }
        }
    }
    let old: Vec<usize> = idx.iter().copied().filter(|&b| blocks[b].k > m + 1).collect();
    let new: Vec<usize> = idx.iter().copied().filter(|&b| blocks[b].k == m + 1).collect();
    let c = Matrix::from_rows(old.iter().map(|&b| us[b][0].clone()).collect());
    let (perp, pinv) = if old.is_empty() {
        (Matrix::identity(n), None)
    } else {
        let cc_inv = (&c * &c.adjoint())
            .inverse()
            .ok_or_else(|| fail("leading rows of the longer blocks are dependent".into()))?;
        let b_mat = &c.adjoint() * &cc_inv;
        (&Matrix::identity(n) - &(&b_mat * &c), Some(b_mat))
    };
    let projected = &(&perp * &target) * &perp;
    let mut terms = hermitian_rank_one_split(&projected);
    if terms.len() != new.len() {
        return Err(fail(format!(
            "level {m}: {} new blocks but the projected residue has rank {}",
            new.len(),
            terms.len()
        )));
    }
    for &b in &new {
        let pos = terms
            .iter()
            .position(|t| t.weight.real_sign() == Some(blocks[b].sign))
            .ok_or_else(|| fail(format!("level {m}: no residue term of sign {}", -blocks[b].sign)))?;
        let term = terms.remove(pos);
        let w = term.weight.re().abs();
        let g = norm_root(&w).ok_or_else(|| Error::NoExactFactor {
            alpha: alpha.to_string(),
            value: crate::scalar::rational_to_string(&w),
        })?;
        let y: Vec<GaussianRational> = term.row.iter().map(|x| x * &g).collect();
        target = &target - &outer_adj(&y, &y).scale(&eps(b));
        us[b].push(y);
    }
    if let Some(b_mat) = pinv {
        // target = C*Z + Z*C with Z = E·X
        let bt = b_mat.adjoint();
        let half = GaussianRational::frac(1, 2);
        let w = (&(&bt * &target) * &b_mat).scale(&half);
        let z = &(&bt * &target) - &(&w * &c);
        for (r, &b) in old.iter().enumerate() {
            let x: Vec<GaussianRational> = z.row(r).iter().map(|v| v * &eps(b)).collect();
            us[b].push(x);
        }
    }
    let mut rebuilt = Matrix::zeros(n, n);
    for &b in idx {
        let k = blocks[b].k;
        if k > m {
            let d = k - 1 - m;
            for a in 0..=d {
                rebuilt = &rebuilt - &outer_adj(&us[b][a], &us[b][d - a]).scale(&eps(b));
            }
        }
    }
    if &rebuilt != residue {
        return Err(fail(format!("level {m}: residue equations are inconsistent")));
    }
    Ok(())
}

/// `S∞ + Γ⁺(A - z)⁻¹Γ` as an exact rational matrix, using
/// `((A_b - z)⁻¹)_{ij} = -1/(z-α)^(j-i+1)` for `j ≥ i`.
pub fn reconstruct(rep: &Representation) -> Result<MatRatFun> {
    let n = rep.s_inf.rows();
    let gp = rep.gamma_plus();
    let mut acc = MatRatFun::constant(&rep.s_inf);
    let mut off = 0;
    for b in &rep.blocks {
        for i in 0..b.k {
            for jj in i..b.k {
                let e = (jj - i + 1) as u32;
                let term = MatRatFun::from_fn(n, |p, q| {
                    let c = -(&gp[(p, off + i)] * &rep.gamma[(off + jj, q)]);
                    RatFun::pole_term(c, &b.alpha, e)
                });
                acc = &acc + &term;
            }
        }
        off += b.k;
    }
    Ok(acc)
}

/// Exact comparison of `Ĺ` with the reconstruction; reports the first
/// differing entry.
pub fn verify_representation(l_hat: &MatRatFun, rep: &Representation) -> Result<()> {
    let (a, j, _) = assemble_aj(&rep.blocks)?;
    if a != rep.a || j != rep.j {
        return Err(Error::Verification("A or J does not match the block table".into()));
    }
    let k = rep.state_dim();
    if rep.gamma.rows() != k || rep.gamma.cols() != l_hat.n() || rep.s_inf.rows() != l_hat.n() {
        return Err(Error::Dimension("Γ must be K × n and S∞ n × n".into()));
    }
    match l_hat.first_difference(&reconstruct(rep)?) {
        None => Ok(()),
        Some((row, col, diff)) => {
            Err(Error::Verification(format!("entry ({row}, {col}) differs by {diff}")))
        }
    }
}

/// The whole pipeline: checks, `S∞`, canonical system, block table, `A`,
/// `J`, `κ`, `Γ`, and the final exact verification.
pub fn represent(l: &MatPoly) -> Result<Representation> {
    check_representability(l)?;
    let l_hat = l.inverse_hat()?;
    let s_inf = limit_at_infinity_matrix(&l_hat)?;
    let sys = canonical_system_with_tol(l, DEFAULT_NUMERIC_TOL)?;
    let blocks = block_specs(l, &sys.records)?;
    let (a, j, kappa) = assemble_aj(&blocks)?;
    let gamma = solve_gamma(&l_hat, &s_inf, &blocks)?;
    let rep = Representation { s_inf, a, j, gamma, kappa, blocks };
    verify_representation(&l_hat, &rep)?;
    Ok(rep)
}
