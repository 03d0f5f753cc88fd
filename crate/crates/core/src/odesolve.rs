//! General solution of `L(d/dt) u = 0` from the canonical system.
//!
//! A chain prefix `c_0..c_j` at `α` gives
//! `u(t) = (Σ_p t^(j-p)/(j-p)! c_p) e^(αt)`.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, Matrix};
use crate::matpoly::MatPoly;
use crate::poly::Poly;
use crate::roots::{RootValue, DEFAULT_NUMERIC_TOL};
use crate::scalar::GaussianRational;
use crate::spectral::{canonical_system_with_tol, ChainData};

/// Residual coefficients above this (relative) bound fail numeric checks.
pub const NUMERIC_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "vectors", rename_all = "snake_case")]
pub enum TermVectors {
    Exact(Vec<Vec<GaussianRational>>),
    Approx(Vec<Vec<Complex64>>),
}

impl TermVectors {
    pub fn len(&self) -> usize {
        match self {
            TermVectors::Exact(v) => v.len(),
            TermVectors::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionTerm {
    pub alpha: RootValue,
    /// Diagonal slot of the chain this term came from.
    pub column: usize,
    /// `c_0, …, c_j`.
    pub coeffs: TermVectors,
}

impl SolutionTerm {
    pub fn exact(alpha: GaussianRational, column: usize, coeffs: Vec<Vec<GaussianRational>>) -> Self {
        Self { alpha: RootValue::Exact(alpha), column, coeffs: TermVectors::Exact(coeffs) }
    }

    /// `j`, the top power of `t`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The vector polynomial `p(t)` in `u = p(t) e^(αt)`, expanded in
    /// monomials. `None` for numeric terms.
    pub fn polynomial_part(&self) -> Option<Vec<Poly>> {
        let TermVectors::Exact(cs) = &self.coeffs else {
            return None;
        };
        let j = self.degree();
        let n = cs.first().map_or(0, Vec::len);
        Some(
            (0..n)
                .map(|r| {
                    cs.iter().enumerate().fold(Poly::zero(), |acc, (p, c)| {
                        let f = factorial(j - p).inv();
                        acc + Poly::monomial(&c[r] * &f, j - p)
                    })
                })
                .collect(),
        )
    }

    /// Floating-point `p(t)` coefficients per component, ascending in `t`.
    pub fn polynomial_part_complex(&self) -> Vec<Vec<Complex64>> {
        let j = self.degree();
        let cs: Vec<Vec<Complex64>> = match &self.coeffs {
            TermVectors::Exact(v) => v.iter().map(|c| c.iter().map(GaussianRational::to_complex64).collect()).collect(),
            TermVectors::Approx(v) => v.clone(),
        };
        let n = cs.first().map_or(0, Vec::len);
        (0..n)
            .map(|r| {
                let mut out = vec![Complex64::zero(); j + 1];
                for (p, c) in cs.iter().enumerate() {
                    out[j - p] += c[r] / factorial(j - p).to_complex64();
                }
                out
            })
            .collect()
    }

    /// `u(t)` in floating point.
    pub fn eval(&self, t: f64) -> Vec<Complex64> {
        let e = (self.alpha.to_complex64() * t).exp();
        self.polynomial_part_complex()
            .iter()
            .map(|p| p.iter().rev().fold(Complex64::zero(), |acc, &c| acc * t + c) * e)
            .collect()
    }

    /// `Σ_p t^(j-p)/(j-p)! c_p`, the factorial-scaled form.
    pub fn render_factorial(&self) -> String {
        let j = self.degree();
        let parts: Vec<String> = match &self.coeffs {
            TermVectors::Exact(cs) => cs
                .iter()
                .enumerate()
                .map(|(p, c)| format!("{}{}", t_factor(j - p), vec_string(c.iter().map(ToString::to_string))))
                .collect(),
            TermVectors::Approx(cs) => cs
                .iter()
                .enumerate()
                .map(|(p, c)| format!("{}{}", t_factor(j - p), vec_string(c.iter().map(|x| format!("{x:.10}")))))
                .collect(),
        };
        format!("({}){}", parts.join(" + "), exp_factor(&self.alpha))
    }

    /// Vector of expanded polynomials in `t`.
    pub fn render_expanded(&self) -> String {
        match self.polynomial_part() {
            Some(p) => format!("{}{}", vec_string(p.iter().map(|x| x.to_string_in("t"))), exp_factor(&self.alpha)),
            None => self.render_factorial(),
        }
    }
}

impl fmt::Display for SolutionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_expanded())
    }
}

fn t_factor(e: usize) -> String {
    match e {
        0 => String::new(),
        1 => "t·".into(),
        _ => format!("t^{e}/{e}!·"),
    }
}

fn exp_factor(alpha: &RootValue) -> String {
    match alpha {
        RootValue::Exact(a) if a.is_zero() => String::new(),
        RootValue::Exact(a) if a.is_one() => "·e^t".into(),
        a => format!("·e^({a}·t)"),
    }
}

fn vec_string(items: impl Iterator<Item = String>) -> String {
    format!("({})ᵀ", items.collect::<Vec<_>>().join(", "))
}

pub(crate) fn factorial(k: usize) -> GaussianRational {
    (1..=k as i64).map(GaussianRational::from_int).product()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralSolution {
    pub terms: Vec<SolutionTerm>,
    pub dimension: usize,
    /// Rank of the stacked initial data `(u(0), u'(0), …, u^(nl)(0))`.
    pub independence_rank: usize,
}

pub fn general_solution(l: &MatPoly) -> Result<GeneralSolution> {
    general_solution_with_tol(l, DEFAULT_NUMERIC_TOL)
}

/// One term per chain prefix of every canonical chain.
pub fn general_solution_with_tol(l: &MatPoly, tol: f64) -> Result<GeneralSolution> {
    let sys = canonical_system_with_tol(l, tol)?;
    let mut terms = Vec::new();
    for rec in &sys.records {
        for j in 0..rec.order {
            let coeffs = match &rec.chain {
                ChainData::Exact { vectors, .. } => TermVectors::Exact(vectors[..=j].to_vec()),
                ChainData::Approx { vectors, .. } => TermVectors::Approx(vectors[..=j].to_vec()),
            };
            terms.push(SolutionTerm { alpha: rec.alpha.clone(), column: rec.column, coeffs });
        }
    }
    let jet_order = l.n() * l.degree().unwrap_or(0);
    let independence_rank = independence_rank(&terms, jet_order);
    if independence_rank != terms.len() {
        return Err(Error::Verification(format!(
            "{} solution terms span only rank {independence_rank}",
            terms.len()
        )));
    }
    Ok(GeneralSolution { dimension: terms.len(), terms, independence_rank })
}

/// Rank of the matrix whose rows are `(u(0), …, u^(jets)(0))` per term,
/// exact when every term is exact.
pub fn independence_rank(terms: &[SolutionTerm], jets: usize) -> usize {
    let jets = jets.max(terms.len());
    let exact: Option<Vec<Vec<GaussianRational>>> = terms
        .iter()
        .map(|t| {
            let a = t.alpha.exact()?;
            let p = t.polynomial_part()?;
            Some(exact_jets(a, &p, jets))
        })
        .collect();
    match exact {
        Some(rows) => Matrix::from_rows(rows).rank(),
        None => {
            let rows: Vec<Vec<Complex64>> = terms.iter().map(|t| complex_jets(t, jets)).collect();
            numeric_rank(&rows, 1e-8)
        }
    }
}

/// `u^(j)(0) = Σ_s C(j,s) α^(j-s) p^(s)(0)` for `j = 0..=jets`, flattened.
fn exact_jets(alpha: &GaussianRational, p: &[Poly], jets: usize) -> Vec<GaussianRational> {
    let mut out = Vec::with_capacity(p.len() * (jets + 1));
    for j in 0..=jets {
        for comp in p {
            let mut acc = GaussianRational::zero();
            let mut binom = GaussianRational::one();
            for s in 0..=j {
                // p^(s)(0) = s! · coeff_s
                let ds = &comp.coeff(s) * &factorial(s);
                acc += &(&(&binom * &alpha.pow((j - s) as u32)) * &ds);
                binom = &(&binom * &GaussianRational::from_int((j - s) as i64)) / &GaussianRational::from_int(s as i64 + 1);
            }
            out.push(acc);
        }
    }
    out
}

fn complex_jets(term: &SolutionTerm, jets: usize) -> Vec<Complex64> {
    let alpha = term.alpha.to_complex64();
    let p = term.polynomial_part_complex();
    let mut out = Vec::with_capacity(p.len() * (jets + 1));
    for j in 0..=jets {
        for comp in &p {
            let mut acc = Complex64::zero();
            let mut binom = 1.0f64;
            for s in 0..=j {
                let ds = comp.get(s).copied().unwrap_or_default() * factorial(s).to_complex64();
                acc += binom * alpha.powu((j - s) as u32) * ds;
                binom = binom * (j - s) as f64 / (s + 1) as f64;
            }
            out.push(acc);
        }
    }
    out
}

/// `e^(-αt) L(d/dt) u(t)`, a vector polynomial in `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "components", rename_all = "snake_case")]
pub enum Residual {
    Exact(Vec<Poly>),
    Approx(Vec<Vec<Complex64>>),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Exact(r) => r.iter().all(Zero::is_zero),
            Residual::Approx(r) => r.iter().flatten().all(|x| x.norm() <= NUMERIC_RESIDUAL_TOL),
        }
    }
}

/// `r(t) = Σ_s L_s p^(s)(t)` with `L_s = L^(s)(α)/s!`.
pub fn residual(l: &MatPoly, term: &SolutionTerm) -> Residual {
    let n = l.n();
    match (&term.alpha, term.polynomial_part()) {
        (RootValue::Exact(a), Some(p)) => {
            let ls = l.taylor_coefficients(a);
            let mut r = vec![Poly::zero(); n];
            for (s, ls_s) in ls.iter().enumerate() {
                let dp: Vec<Poly> = p.iter().map(|x| x.nth_derivative(s)).collect();
                for (i, ri) in r.iter_mut().enumerate() {
                    for (k, dpk) in dp.iter().enumerate() {
                        *ri = &*ri + &dpk.scale(&ls_s[(i, k)]);
                    }
                }
            }
            Residual::Exact(r)
        }
        _ => {
            let ls = l.taylor_coefficients_complex(term.alpha.to_complex64());
            let p = term.polynomial_part_complex();
            let deg = p.first().map_or(0, Vec::len);
            let mut r = vec![vec![Complex64::zero(); deg]; n];
            let scale = p.iter().flatten().map(|x| x.norm()).fold(1.0, f64::max);
            for (s, ls_s) in ls.iter().enumerate() {
                for (k, comp) in p.iter().enumerate() {
                    let d = complex_derivative(comp, s);
                    for (i, ri) in r.iter_mut().enumerate() {
                        for (e, c) in d.iter().enumerate() {
                            ri[e] += ls_s[i][k] * c / scale;
                        }
                    }
                }
            }
            Residual::Approx(r)
        }
    }
}

fn complex_derivative(p: &[Complex64], order: usize) -> Vec<Complex64> {
    (order..p.len())
        .map(|e| {
            let f: f64 = ((e - order + 1)..=e).map(|x| x as f64).product();
            p[e] * f
        })
        .collect()
}

/// Substitutes `u` into `L(d/dt)u`; exact for exact `α`.
pub fn verify_solution(l: &MatPoly, term: &SolutionTerm) -> Result<(), Residual> {
    let r = residual(l, term);
    if r.is_zero() {
        Ok(())
    } else {
        Err(r)
    }
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

    #[test]
    fn mixed_chain_3x3_has_four_solutions() {
        let sol = general_solution(&mixed_chain_3x3()).unwrap();
        assert_eq!(sol.dimension, 4);
        let polys: Vec<(RootValue, Vec<Poly>)> =
            sol.terms.iter().map(|t| (t.alpha.clone(), t.polynomial_part().unwrap())).collect();
        let zero = RootValue::Exact(q(0));
        for expected in [
            (zero.clone(), vec![Poly::zero(), Poly::one(), Poly::zero()]),
            (zero.clone(), vec![Poly::from_ints(&[-1]), Poly::zero(), Poly::z()]),
            (zero, vec![Poly::zero(), Poly::zero(), Poly::one()]),
            (RootValue::Exact(q(1)), vec![Poly::from_ints(&[-1]), Poly::zero(), Poly::one()]),
        ] {
            assert!(polys.contains(&expected), "missing {expected:?}");
        }
        for t in &sol.terms {
            assert_eq!(verify_solution(&mixed_chain_3x3(), t), Ok(()));
        }
    }

    #[test]
    fn wrong_vector_fails() {
        let t = SolutionTerm::exact(q(0), 0, vec![v(&[1, 0, 0])]);
        let Err(Residual::Exact(r)) = verify_solution(&mixed_chain_3x3(), &t) else { panic!() };
        assert_eq!(r, vec![Poly::zero(), Poly::one(), Poly::zero()]);
    }

    #[test]
    fn constant_basis_for_first_order() {
        let l = MatPoly::from_int_coeffs(&[&[&[0, 1], &[]], &[&[], &[0, 1]]]);
        let sol = general_solution(&l).unwrap();
        assert_eq!(sol.dimension, 2);
        assert_eq!(sol.terms[0].coeffs, TermVectors::Exact(vec![v(&[1, 0])]));
        assert_eq!(sol.terms[1].coeffs, TermVectors::Exact(vec![v(&[0, 1])]));
    }

    #[test]
    fn renderings() {
        let t = SolutionTerm::exact(q(0), 2, vec![v(&[0, 0, 1]), v(&[-1, 0, 0])]);
        assert_eq!(t.render_factorial(), "(t·(0, 0, 1)ᵀ + (-1, 0, 0)ᵀ)");
        assert_eq!(t.render_expanded(), "(-1, 0, t)ᵀ");
        let e = SolutionTerm::exact(q(1), 2, vec![v(&[-1, 0, 1])]);
        assert_eq!(e.render_expanded(), "(-1, 0, 1)ᵀ·e^t");
    }

    #[test]
    fn numeric_terms_verify() {
        let l = MatPoly::from_int_coeffs(&[&[&[-2, 0, 1], &[]], &[&[], &[-1, 1]]]);
        let sol = general_solution(&l).unwrap();
        assert_eq!(sol.dimension, 3);
        for t in &sol.terms {
            assert_eq!(verify_solution(&l, t).map_err(|_| ()), Ok(()));
        }
    }
}
