//! Eigenvalue tables, canonical root functions and Jordan chains read off
//! the column transform `T` of a diagonal form.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, numeric_rank_scaled, Matrix};
use crate::matpoly::{taylor_shift_complex, MatPoly};
use crate::poly::Poly;
use crate::roots::{find_roots_with_tol, root_order, RootValue, DEFAULT_NUMERIC_TOL};
use crate::scalar::GaussianRational;
use crate::smith::{diagonalize, DiagForm};

/// Relative threshold below which numeric Taylor coefficients count as zero.
const NUMERIC_ZERO: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaEntry {
    /// 0-based diagonal slot `i`.
    pub column: usize,
    /// Multiplicity of `α` as a root of `d_i`.
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenGroup {
    pub alpha: RootValue,
    pub entries: Vec<OmegaEntry>,
}

impl EigenGroup {
    pub fn total_order(&self) -> usize {
        self.entries.iter().map(|e| e.order).sum()
    }
}

/// `Ω(α)` for every eigenvalue, exact values first in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EigenTable {
    pub groups: Vec<EigenGroup>,
}

impl EigenTable {
    pub fn total_order(&self) -> usize {
        self.groups.iter().map(EigenGroup::total_order).sum()
    }

    pub fn is_exact(&self) -> bool {
        self.groups.iter().all(|g| g.alpha.is_exact())
    }

    pub fn group(&self, alpha: &RootValue) -> Option<&EigenGroup> {
        self.groups.iter().find(|g| g.alpha.same_as(alpha))
    }
}

pub fn eigen_table(form: &DiagForm) -> Result<EigenTable> {
    eigen_table_with_tol(form, DEFAULT_NUMERIC_TOL)
}

pub fn eigen_table_with_tol(form: &DiagForm, tol: f64) -> Result<EigenTable> {
    let mut groups: Vec<EigenGroup> = Vec::new();
    for (column, d) in form.diagonal().iter().enumerate() {
        if d.is_zero() {
            return Err(Error::NotInvertible);
        }
        for root in find_roots_with_tol(d, tol).roots {
            let entry = OmegaEntry { column, order: root.multiplicity };
            match groups.iter_mut().find(|g| g.alpha.same_as(&root.value)) {
                Some(g) => g.entries.push(entry),
                None => groups.push(EigenGroup { alpha: root.value, entries: vec![entry] }),
            }
        }
    }
    groups.sort_by(|a, b| root_order(&a.alpha, &b.alpha));
    Ok(EigenTable { groups })
}

/// Taylor data of `φ` at `α`: exact vectors, or floating point ones when
/// `α` is only known numerically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainData {
    Exact {
        vectors: Vec<Vec<GaussianRational>>,
        /// `φ̃` with `φ = Σ_j (z-α)^j φ_j + (z-α)^k φ̃`.
        tail: Vec<Poly>,
    },
    Approx {
        vectors: Vec<Vec<Complex64>>,
        /// Coefficients of `φ̃` in powers of `(z-α)`, per component.
        tail: Vec<Vec<Complex64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootFunctionRecord {
    pub alpha: RootValue,
    pub column: usize,
    pub order: usize,
    /// The column `T_i` of the diagonal form.
    pub phi: Vec<Poly>,
    pub chain: ChainData,
}

impl RootFunctionRecord {
    pub fn exact_alpha(&self) -> Option<&GaussianRational> {
        self.alpha.exact()
    }

    pub fn exact_chain(&self) -> Option<&[Vec<GaussianRational>]> {
        match &self.chain {
            ChainData::Exact { vectors, .. } => Some(vectors),
            ChainData::Approx { .. } => None,
        }
    }

    pub fn chain_complex(&self) -> Vec<Vec<Complex64>> {
        match &self.chain {
            ChainData::Exact { vectors, .. } => vectors
                .iter()
                .map(|v| v.iter().map(GaussianRational::to_complex64).collect())
                .collect(),
            ChainData::Approx { vectors, .. } => vectors.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleCancellationRecord {
    pub alpha: RootValue,
    pub column: usize,
    pub psi: Vec<Poly>,
    pub vanish_order: usize,
}

/// Root function `φ = T_i` at `α` with its chain of length `k_i`.
pub fn root_function(form: &DiagForm, alpha: &RootValue, column: usize) -> Result<RootFunctionRecord> {
    let n = form.n();
    if column >= n {
        return Err(Error::NotInOmega { alpha: alpha.to_string(), column });
    }
    let d = form.d.get(column, column);
    let phi = form.t.column(column);
    let not_in = || Error::NotInOmega { alpha: alpha.to_string(), column };
    match alpha {
        RootValue::Exact(a) => {
            let order = d.root_multiplicity(a)?;
            if order == 0 {
                return Err(not_in());
            }
            let shifted: Vec<Vec<GaussianRational>> = phi.iter().map(|p| p.taylor_shift(a)).collect();
            let vectors: Vec<Vec<GaussianRational>> = (0..order)
                .map(|j| shifted.iter().map(|s| s.get(j).cloned().unwrap_or_else(GaussianRational::zero)).collect())
                .collect();
            if vectors[0].iter().all(Zero::is_zero) {
                return Err(Error::DegenerateChain);
            }
            let lin = Poly::linear(a);
            let tail = phi
                .iter()
                .zip(&shifted)
                .map(|(p, s)| {
                    let head = (0..order.min(s.len()))
                        .rev()
                        .fold(Poly::zero(), |acc, j| &acc * &lin + Poly::constant(s[j].clone()));
                    (p - &head).div_exact(&lin.pow(order as u32)).expect("head removes the low terms")
                })
                .collect();
            Ok(RootFunctionRecord {
                alpha: alpha.clone(),
                column,
                order,
                phi,
                chain: ChainData::Exact { vectors, tail },
            })
        }
        RootValue::Approx { value, tol } => {
            let order = find_roots_with_tol(d, *tol)
                .roots
                .into_iter()
                .find(|r| r.value.same_as(alpha))
                .map(|r| r.multiplicity)
                .ok_or_else(not_in)?;
            let shifted: Vec<Vec<Complex64>> =
                phi.iter().map(|p| taylor_shift_complex(&p.to_complex(), *value)).collect();
            let at = |s: &Vec<Complex64>, j: usize| s.get(j).copied().unwrap_or_default();
            let vectors: Vec<Vec<Complex64>> =
                (0..order).map(|j| shifted.iter().map(|s| at(s, j)).collect()).collect();
            if vectors[0].iter().all(|x| x.norm() == 0.0) {
                return Err(Error::DegenerateChain);
            }
            let tail = shifted.iter().map(|s| s.iter().skip(order).copied().collect()).collect();
            Ok(RootFunctionRecord {
                alpha: alpha.clone(),
                column,
                order,
                phi,
                chain: ChainData::Approx { vectors, tail },
            })
        }
    }
}

/// `ψ = L·φ`, certified to vanish at `α` to order exactly `k`.
pub fn pole_cancellation(l: &MatPoly, rec: &RootFunctionRecord) -> Result<PoleCancellationRecord> {
    let psi = l.mul_vec(&rec.phi);
    let found = match &rec.alpha {
        RootValue::Exact(a) => {
            let orders: Vec<usize> = psi
                .iter()
                .filter(|p| !p.is_zero())
                .map(|p| p.root_multiplicity(a))
                .collect::<Result<_>>()?;
            orders.into_iter().min()
        }
        RootValue::Approx { value, .. } => {
            let shifted: Vec<Vec<Complex64>> =
                psi.iter().map(|p| taylor_shift_complex(&p.to_complex(), *value)).collect();
            let scale = shifted.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
            let len = shifted.iter().map(Vec::len).max().unwrap_or(0);
            (0..len).find(|&j| {
                shifted.iter().any(|s| s.get(j).is_some_and(|x| x.norm() > NUMERIC_ZERO * scale))
            })
        }
    };
    if found != Some(rec.order) {
        return Err(Error::OrderMismatch {
            alpha: rec.alpha.to_string(),
            expected: rec.order,
            found: found.map_or_else(|| "∞".to_string(), |k| k.to_string()),
        });
    }
    Ok(PoleCancellationRecord {
        alpha: rec.alpha.clone(),
        column: rec.column,
        psi,
        vanish_order: rec.order,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    /// Number of leading chain equations that hold.
    pub valid_length: usize,
    /// The full chain holds and no vector extends it.
    pub maximal: bool,
}

/// `Σ_{p=0}^{i} L_p φ_{i-p} = 0` with `L_p = L^(p)(α)/p!`, for each `i`,
/// plus the rank test deciding whether a further vector exists.
pub fn verify_chain(l: &MatPoly, alpha: &GaussianRational, chain: &[Vec<GaussianRational>]) -> Result<ChainCheck> {
    if chain.is_empty() || chain[0].iter().all(Zero::is_zero) {
        return Err(Error::DegenerateChain);
    }
    let n = l.n();
    if chain.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(format!("chain vectors must have length {n}")));
    }
    let ls = l.taylor_coefficients(alpha);
    let lhs = |i: usize| -> Vec<GaussianRational> {
        let mut acc = vec![GaussianRational::zero(); n];
        for p in 0..=i.min(ls.len() - 1) {
            if i - p < chain.len() {
                for (a, b) in acc.iter_mut().zip(ls[p].mul_vec(&chain[i - p])) {
                    *a += &b;
                }
            }
        }
        acc
    };
    let k = chain.len();
    let valid_length = (0..k).find(|&i| lhs(i).iter().any(|x| !x.is_zero())).unwrap_or(k);
    if valid_length < k {
        return Ok(ChainCheck { valid_length, maximal: false });
    }
    // L_0 φ_k = -Σ_{p≥1} L_p φ_{k-p}
    let rhs: Vec<GaussianRational> = lhs(k).into_iter().map(|x| -x).collect();
    let maximal = ls[0].solve(&rhs).is_none();
    Ok(ChainCheck { valid_length, maximal })
}

/// Floating-point counterpart of [`verify_chain`] for numerically located
/// eigenvalues.
pub fn verify_chain_numeric(l: &MatPoly, alpha: Complex64, chain: &[Vec<Complex64>]) -> Result<ChainCheck> {
    if chain.is_empty() || chain[0].iter().all(|x| x.norm() == 0.0) {
        return Err(Error::DegenerateChain);
    }
    let n = l.n();
    let ls = l.taylor_coefficients_complex(alpha);
    let l_scale = ls.iter().flatten().flatten().map(|x| x.norm()).fold(0.0, f64::max).max(1.0);
    let scale = l_scale * chain.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max).max(1.0);
    let lhs = |i: usize| -> Vec<Complex64> {
        let mut acc = vec![Complex64::zero(); n];
        for (p, lp) in ls.iter().enumerate().take(i + 1) {
            if let Some(v) = chain.get(i - p) {
                for (r, a) in acc.iter_mut().enumerate() {
                    *a += (0..n).map(|c| lp[r][c] * v[c]).sum::<Complex64>();
                }
            }
        }
        acc
    };
    let k = chain.len();
    let valid_length = (0..k)
        .find(|&i| lhs(i).iter().any(|x| x.norm() > NUMERIC_ZERO * scale))
        .unwrap_or(k);
    if valid_length < k {
        return Ok(ChainCheck { valid_length, maximal: false });
    }
    let b = lhs(k);
    let augmented: Vec<Vec<Complex64>> =
        (0..n).map(|r| ls[0][r].iter().copied().chain([-b[r]]).collect()).collect();
    let maximal = numeric_rank_scaled(&ls[0], NUMERIC_ZERO, scale) < numeric_rank_scaled(&augmented, NUMERIC_ZERO, scale);
    Ok(ChainCheck { valid_length, maximal })
}

/// Everything derived from one diagonalization of `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalSystem {
    pub form: DiagForm,
    pub table: EigenTable,
    pub records: Vec<RootFunctionRecord>,
    pub pole_cancellations: Vec<PoleCancellationRecord>,
}

pub fn canonical_system(l: &MatPoly) -> Result<Vec<RootFunctionRecord>> {
    Ok(canonical_system_with_tol(l, DEFAULT_NUMERIC_TOL)?.records)
}

/// Diagonalize, tabulate `Ω(α)`, extract and certify every chain.
pub fn canonical_system_with_tol(l: &MatPoly, tol: f64) -> Result<CanonicalSystem> {
    let det = l.det();
    let det_degree = det.degree().ok_or(Error::NotInvertible)?;
    let form = diagonalize(l);
    let table = eigen_table_with_tol(&form, tol)?;
    let mut records = Vec::new();
    let mut pole_cancellations = Vec::new();
    for group in &table.groups {
        for entry in &group.entries {
            let rec = root_function(&form, &group.alpha, entry.column)?;
            let check = match (&group.alpha, &rec.chain) {
                (RootValue::Exact(a), ChainData::Exact { vectors, .. }) => verify_chain(l, a, vectors)?,
                (alpha, _) => verify_chain_numeric(l, alpha.to_complex64(), &rec.chain_complex())?,
            };
            if check.valid_length < rec.order || !check.maximal {
                return Err(Error::ChainInvalid {
                    alpha: group.alpha.to_string(),
                    reason: format!(
                        "column {}: {} of {} equations hold, maximal = {}",
                        rec.column, check.valid_length, rec.order, check.maximal
                    ),
                });
            }
            pole_cancellations.push(pole_cancellation(l, &rec)?);
            records.push(rec);
        }
        check_eigenvectors(l, group, &records[records.len() - group.entries.len()..])?;
    }
    let total: usize = records.iter().map(|r| r.order).sum();
    if total != det_degree {
        return Err(Error::ChainInvalid {
            alpha: "all eigenvalues".into(),
            reason: format!("total chain length {total} differs from deg det L = {det_degree}"),
        });
    }
    Ok(CanonicalSystem { form, table, records, pole_cancellations })
}

/// `{T_i(α) : i ∈ Ω(α)}` is a basis of `ker L(α)`.
fn check_eigenvectors(l: &MatPoly, group: &EigenGroup, records: &[RootFunctionRecord]) -> Result<()> {
    let n = l.n();
    let count = records.len();
    let (vec_rank, kernel_dim) = match &group.alpha {
        RootValue::Exact(a) => {
            let heads: Vec<Vec<GaussianRational>> =
                records.iter().map(|r| r.exact_chain().expect("exact")[0].clone()).collect();
            (Matrix::from_rows(heads).rank(), n - l.eval(a).rank())
        }
        RootValue::Approx { value, .. } => {
            let heads: Vec<Vec<Complex64>> = records.iter().map(|r| r.chain_complex()[0].clone()).collect();
            let scale = l.taylor_coefficients_complex(*value).iter().flatten().flatten().map(|x| x.norm()).fold(0.0, f64::max);
            (numeric_rank(&heads, NUMERIC_ZERO), n - numeric_rank_scaled(&l.eval_complex(*value), NUMERIC_ZERO, scale))
        }
    };
    if vec_rank != count || kernel_dim != count {
        return Err(Error::ChainInvalid {
            alpha: group.alpha.to_string(),
            reason: format!("{count} eigenvectors of rank {vec_rank}, dim ker L(α) = {kernel_dim}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn v(xs: &[i64]) -> Vec<GaussianRational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn mixed_chain_3x3() -> MatPoly {
        MatPoly::from_int_coeffs(&[
            &[&[], &[0, 1], &[]],
            &[&[1], &[], &[0, 1]],
            &[&[], &[], &[0, 0, -1, 1]],
        ])
    }

    fn hermitian_double_pole() -> MatPoly {
        MatPoly::from_int_coeffs(&[&[&[1], &[0, -1, 1]], &[&[0, -1, 1], &[]]])
    }

    #[test]
    fn eigen_table_of_mixed_chain_3x3() {
        let table = eigen_table(&diagonalize(&mixed_chain_3x3())).unwrap();
        assert_eq!(table.groups.len(), 2);
        assert_eq!(table.groups[0].alpha, RootValue::Exact(q(0)));
        assert_eq!(
            table.groups[0].entries,
            vec![OmegaEntry { column: 1, order: 1 }, OmegaEntry { column: 2, order: 2 }]
        );
        assert_eq!(table.groups[1].entries, vec![OmegaEntry { column: 2, order: 1 }]);
        assert_eq!(table.total_order(), 4);
        assert!(eigen_table(&diagonalize(&MatPoly::identity(2))).unwrap().groups.is_empty());
    }

    #[test]
    fn chains_of_mixed_chain_3x3() {
        let form = diagonalize(&mixed_chain_3x3());
        let rec = root_function(&form, &RootValue::Exact(q(0)), 2).unwrap();
        assert_eq!(rec.exact_chain().unwrap(), &[v(&[0, 0, 1]), v(&[-1, 0, 0])]);
        let rec1 = root_function(&form, &RootValue::Exact(q(1)), 2).unwrap();
        assert_eq!(rec1.exact_chain().unwrap(), &[v(&[-1, 0, 1])]);
        let psi = pole_cancellation(&mixed_chain_3x3(), &rec).unwrap().psi;
        assert_eq!(psi, vec![Poly::zero(), Poly::zero(), Poly::from_ints(&[0, 0, -1, 1])]);
        let check = verify_chain(&mixed_chain_3x3(), &q(0), rec.exact_chain().unwrap()).unwrap();
        assert_eq!(check, ChainCheck { valid_length: 2, maximal: true });
        assert!(matches!(
            root_function(&form, &RootValue::Exact(q(1)), 1),
            Err(Error::NotInOmega { column: 1, .. })
        ));
    }

    #[test]
    fn tail_reassembles_phi() {
        let form = diagonalize(&hermitian_double_pole());
        let rec = root_function(&form, &RootValue::Exact(q(1)), 1).unwrap();
        let ChainData::Exact { vectors, tail } = &rec.chain else { panic!() };
        let lin = Poly::linear(&q(1));
        for c in 0..2 {
            let head = &Poly::constant(vectors[0][c].clone()) + &(&lin * &Poly::constant(vectors[1][c].clone()));
            assert_eq!(&head + &(&lin.pow(2) * &tail[c]), rec.phi[c]);
        }
    }

    #[test]
    fn chains_of_hermitian_double_pole() {
        let sys = canonical_system(&hermitian_double_pole()).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[0].exact_chain().unwrap(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(sys[1].exact_chain().unwrap(), &[v(&[0, 1]), v(&[-1, 0])]);
    }

    #[test]
    fn z_times_identity() {
        let l = MatPoly::from_int_coeffs(&[&[&[0, 1], &[]], &[&[], &[0, 1]]]);
        let sys = canonical_system(&l).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[0].exact_chain().unwrap(), &[v(&[1, 0])]);
        assert_eq!(sys[1].exact_chain().unwrap(), &[v(&[0, 1])]);
    }

    #[test]
    fn single_eigenvector_chain() {
        let l = MatPoly::from_int_coeffs(&[&[&[-2, 1], &[]], &[&[], &[1]]]);
        let check = verify_chain(&l, &q(2), &[v(&[1, 0])]).unwrap();
        assert_eq!(check, ChainCheck { valid_length: 1, maximal: true });
        assert_eq!(verify_chain(&l, &q(2), &[v(&[0, 0])]), Err(Error::DegenerateChain));
        assert_eq!(verify_chain(&l, &q(2), &[v(&[0, 1])]).unwrap().valid_length, 0);
    }

    #[test]
    fn numeric_eigenvalues() {
        // z^2 - 2 has no rational roots
        let l = MatPoly::from_int_coeffs(&[&[&[-2, 0, 1], &[]], &[&[], &[1]]]);
        let sys = canonical_system_with_tol(&l, 1e-10).unwrap();
        assert_eq!(sys.records.len(), 2);
        assert!(!sys.table.is_exact());
        for rec in &sys.records {
            assert!((rec.alpha.to_complex64().re.abs() - 2f64.sqrt()).abs() < 1e-9);
        }
    }
}
