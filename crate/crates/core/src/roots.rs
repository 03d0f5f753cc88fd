//! Root extraction: exact Gaussian-rational roots by divisor enumeration,
//! with a companion-matrix fallback for whatever is left over.

use std::collections::HashSet;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::Poly;
use crate::scalar::GaussianRational;

/// Default relative tolerance for numerically located roots.
pub const DEFAULT_NUMERIC_TOL: f64 = 1e-10;

/// Norms above this bound are not factored; such factors go to the numeric path.
const MAX_FACTOR_NORM: u64 = 1_000_000_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootValue {
    Exact(GaussianRational),
    Approx { value: Complex64, tol: f64 },
}

impl RootValue {
    pub fn exact(&self) -> Option<&GaussianRational> {
        match self {
            RootValue::Exact(v) => Some(v),
            RootValue::Approx { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RootValue::Exact(_))
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            RootValue::Exact(v) => v.to_complex64(),
            RootValue::Approx { value, .. } => *value,
        }
    }

    /// Same eigenvalue: exact equality, or closeness for approximate values.
    pub fn same_as(&self, other: &RootValue) -> bool {
        match (self, other) {
            (RootValue::Exact(a), RootValue::Exact(b)) => a == b,
            (RootValue::Approx { value: a, tol }, RootValue::Approx { value: b, .. }) => {
                let scale = 1.0f64.max(a.norm()).max(b.norm());
                (a - b).norm() <= group_tolerance(*tol) * scale
            }
            _ => false,
        }
    }
}

/// Two numerically computed roots of different factors are merged when they
/// agree to this relative distance.
pub(crate) fn group_tolerance(tol: f64) -> f64 {
    (tol.sqrt() * 1e-2).max(tol)
}

impl fmt::Display for RootValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootValue::Exact(v) => write!(f, "{v}"),
            RootValue::Approx { value, .. } => write!(f, "≈({:.12}{:+.12}i)", value.re, value.im),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSpec {
    pub value: RootValue,
    pub multiplicity: usize,
}

impl RootSpec {
    pub fn is_exact(&self) -> bool {
        self.value.is_exact()
    }
}

/// Roots of `p` plus the factor left after removing every exact linear factor.
#[derive(Clone, Debug, PartialEq)]
pub struct RootFinding {
    pub roots: Vec<RootSpec>,
    /// `p = residual · Π_exact (z - α)^mult`.
    pub residual: Poly,
}

/// All roots of `p` with multiplicities. Constant `p` yields no roots.
pub fn find_roots(p: &Poly) -> Vec<RootSpec> {
    find_roots_with_tol(p, DEFAULT_NUMERIC_TOL).roots
}

pub fn find_roots_with_tol(p: &Poly, tol: f64) -> RootFinding {
    let mut roots = Vec::new();
    if p.is_constant() {
        return RootFinding { roots, residual: p.clone() };
    }
    let (lead, parts) = p.square_free().expect("nonconstant");
    let mut residual = Poly::constant(lead);
    for (factor, mult) in parts {
        let (exact, rest) = exact_linear_roots(&factor);
        for alpha in exact {
            roots.push(RootSpec { value: RootValue::Exact(alpha), multiplicity: mult });
        }
        if !rest.is_constant() {
            for value in numeric_roots(&rest, tol) {
                roots.push(RootSpec { value: RootValue::Approx { value, tol }, multiplicity: mult });
            }
            residual = &residual * &rest.pow(mult as u32);
        }
    }
    roots.sort_by(|a, b| root_order(&a.value, &b.value));
    RootFinding { roots, residual }
}

/// Exact values first, ascending by real then imaginary part; approximate after.
pub(crate) fn root_order(a: &RootValue, b: &RootValue) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match (a, b) {
        (RootValue::Exact(x), RootValue::Exact(y)) => x.re().cmp(y.re()).then_with(|| x.im().cmp(y.im())),
        (RootValue::Exact(_), RootValue::Approx { .. }) => Ordering::Less,
        (RootValue::Approx { .. }, RootValue::Exact(_)) => Ordering::Greater,
        (RootValue::Approx { value: x, .. }, RootValue::Approx { value: y, .. }) => x
            .re
            .partial_cmp(&y.re)
            .unwrap_or(Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal)),
    }
}

/// Exact roots of a square-free polynomial and the cofactor without them.
fn exact_linear_roots(f: &Poly) -> (Vec<GaussianRational>, Poly) {
    let mut found = Vec::new();
    let mut rest = f.clone();
    if rest.coeff(0).is_zero() {
        found.push(GaussianRational::zero());
        rest = rest.div_exact(&Poly::z()).expect("z divides");
    }
    if rest.is_constant() {
        return (found, rest);
    }
    if rest.degree() == Some(1) {
        let c = rest.coeffs();
        found.push(-(&c[0] / &c[1]));
        return (found, Poly::constant(c[1].clone()));
    }
    let Some(ints) = clear_denominators(&rest) else {
        return (found, rest);
    };
    let (a0, an) = (&ints[0], ints.last().expect("nonempty"));
    let (Some(tops), Some(bottoms)) = (gaussian_divisors(a0, false), gaussian_divisors(an, true)) else {
        return (found, rest);
    };
    let mut seen = HashSet::new();
    'outer: for u in &tops {
        for v in &bottoms {
            let cand = &to_gr(u) / &to_gr(v);
            if !seen.insert(cand.clone()) {
                continue;
            }
            if rest.eval(&cand).is_zero() {
                rest = rest.div_exact(&Poly::linear(&cand)).expect("root divides");
                found.push(cand);
                if rest.is_constant() {
                    break 'outer;
                }
            }
        }
    }
    (found, rest)
}

type GaussInt = (BigInt, BigInt);

fn to_gr(g: &GaussInt) -> GaussianRational {
    GaussianRational::new(BigRational::from_integer(g.0.clone()), BigRational::from_integer(g.1.clone()))
}

fn clear_denominators(p: &Poly) -> Option<Vec<GaussInt>> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    let scale = GaussianRational::from_real(BigRational::from_integer(l));
    p.coeffs().iter().map(|c| (c * &scale).to_gaussian_int()).collect()
}

fn gauss_divides(u: &GaussInt, w: &GaussInt) -> bool {
    // w / u = w·conj(u) / N(u)
    let n = &u.0 * &u.0 + &u.1 * &u.1;
    let re = &w.0 * &u.0 + &w.1 * &u.1;
    let im = &w.1 * &u.0 - &w.0 * &u.1;
    re.is_multiple_of(&n) && im.is_multiple_of(&n)
}

/// Gaussian-integer divisors of `w`. With `up_to_units`, only the
/// representative with `re > 0, im ≥ 0` of each associate class is kept.
fn gaussian_divisors(w: &GaussInt, up_to_units: bool) -> Option<Vec<GaussInt>> {
    let norm = &w.0 * &w.0 + &w.1 * &w.1;
    let norm = norm.to_u64().filter(|&n| n <= MAX_FACTOR_NORM)?;
    let mut out = Vec::new();
    for d in integer_divisors(norm) {
        let mut x: u64 = 0;
        while x * x <= d {
            let rest = d - x * x;
            let y = (rest as f64).sqrt().round() as u64;
            for y in [y.saturating_sub(1), y, y + 1] {
                if y * y == rest {
                    for (sx, sy) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                        let g: GaussInt = (BigInt::from(x as i64 * sx), BigInt::from(y as i64 * sy));
                        if up_to_units && !(g.0.is_positive() && !g.1.is_negative()) {
                            continue;
                        }
                        if gauss_divides(&g, w) && !out.contains(&g) {
                            out.push(g);
                        }
                    }
                }
            }
            x += 1;
        }
    }
    Some(out)
}

fn integer_divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Eigenvalues of the companion matrix of a square-free `f`, Newton-polished.
fn numeric_roots(f: &Poly, tol: f64) -> Vec<Complex64> {
    let monic = f.monic();
    let c = monic.to_complex();
    let n = c.len() - 1;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i];
    }
    let eig = nalgebra::linalg::Schur::try_new(m, 1e-15, 100_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect::<Vec<_>>())
        .unwrap_or_else(|| durand_kerner(&c));
    let df = monic.derivative();
    eig.into_iter()
        .map(|mut x| {
            for _ in 0..50 {
                let fx = monic.eval_complex(x);
                let dfx = df.eval_complex(x);
                if dfx.norm() == 0.0 {
                    break;
                }
                let step = fx / dfx;
                x -= step;
                if step.norm() <= f64::EPSILON * x.norm().max(1.0) {
                    break;
                }
            }
            debug_assert!(residual_ok(&monic, x, tol), "numeric root failed tolerance");
            x
        })
        .collect()
}

fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let eval = |x: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..1000 {
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(z[i]) / denom;
            z[i] -= step;
        }
    }
    z
}

/// `|f(x)| ≤ tol · Σ |c_j| |x|^j`.
pub(crate) fn residual_ok(f: &Poly, x: Complex64, tol: f64) -> bool {
    let scale: f64 = f
        .to_complex()
        .iter()
        .enumerate()
        .map(|(j, c)| c.norm() * x.norm().powi(j as i32))
        .sum();
    f.eval_complex(x).norm() <= tol * scale.max(f64::MIN_POSITIVE)
}

/// `p` recovered from its exact roots and residual factor.
pub fn reassemble(found: &RootFinding) -> Result<Poly> {
    let mut acc = found.residual.clone();
    for r in &found.roots {
        if let RootValue::Exact(a) = &r.value {
            acc = &acc * &Poly::linear(a).pow(r.multiplicity as u32);
        }
    }
    Ok(acc)
}
