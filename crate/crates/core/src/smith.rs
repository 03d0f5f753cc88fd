//! Diagonal forms `D(z) = S(z) L(z) T(z)` by tracked elementary moves.
//!
//! The working matrix is reduced in place while every row move is mirrored
//! on `S` and every column move on `T`, which is the block-matrix method
//! written out as two accumulators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_traits::{One, Zero};

use crate::matpoly::MatPoly;
use crate::poly::Poly;
use crate::scalar::GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Row,
    Col,
}

/// The action of one move on lines (rows or columns) of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveKind {
    Swap { i: usize, j: usize },
    /// Line `i` times a nonzero constant.
    Scale { i: usize, c: GaussianRational },
    /// Line `i` plus `q(z)` times line `j`.
    AddMultiple { i: usize, j: usize, q: Poly },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryMove {
    pub side: Side,
    #[serde(flatten)]
    pub kind: MoveKind,
}

impl ElementaryMove {
    /// Determinant of the elementary matrix.
    pub fn det(&self) -> GaussianRational {
        match &self.kind {
            MoveKind::Swap { i, j } if i != j => -GaussianRational::one(),
            MoveKind::Scale { c, .. } => c.clone(),
            _ => GaussianRational::one(),
        }
    }

    /// Apply to `m`: rows for `Side::Row`, columns for `Side::Col`.
    pub fn apply(&self, m: &mut MatPoly) {
        let n = m.n();
        match (&self.side, &self.kind) {
            (Side::Row, MoveKind::Swap { i, j }) => {
                for c in 0..n {
                    let a = m.get(*i, c).clone();
                    m.set(*i, c, m.get(*j, c).clone());
                    m.set(*j, c, a);
                }
            }
            (Side::Col, MoveKind::Swap { i, j }) => {
                for r in 0..n {
                    let a = m.get(r, *i).clone();
                    m.set(r, *i, m.get(r, *j).clone());
                    m.set(r, *j, a);
                }
            }
            (Side::Row, MoveKind::Scale { i, c }) => {
                for col in 0..n {
                    let v = m.get(*i, col).scale(c);
                    m.set(*i, col, v);
                }
            }
            (Side::Col, MoveKind::Scale { i, c }) => {
                for r in 0..n {
                    let v = m.get(r, *i).scale(c);
                    m.set(r, *i, v);
                }
            }
            (Side::Row, MoveKind::AddMultiple { i, j, q }) => {
                for c in 0..n {
                    let v = m.get(*i, c) + &(q * m.get(*j, c));
                    m.set(*i, c, v);
                }
            }
            (Side::Col, MoveKind::AddMultiple { i, j, q }) => {
                for r in 0..n {
                    let v = m.get(r, *i) + &(m.get(r, *j) * q);
                    m.set(r, *i, v);
                }
            }
        }
    }
}

/// Tie-breaking among minimal-degree pivot candidates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PivotStrategy {
    /// Lowest row, then lowest column.
    #[default]
    MinDegreeFirst,
    /// Highest row, then highest column.
    MinDegreeLast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagForm {
    pub s: MatPoly,
    pub d: MatPoly,
    pub t: MatPoly,
    pub det_s: GaussianRational,
    pub det_t: GaussianRational,
    pub transcript: Vec<ElementaryMove>,
}

impl DiagForm {
    /// Wrap an externally supplied triple; determinants must be constants.
    pub fn from_parts(s: MatPoly, d: MatPoly, t: MatPoly) -> Result<Self, DiagFailure> {
        let det_s = constant_det(&s, "S")?;
        let det_t = constant_det(&t, "T")?;
        Ok(Self { s, d, t, det_s, det_t, transcript: Vec::new() })
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }

    /// `d_0, …, d_{n-1}`.
    pub fn diagonal(&self) -> Vec<Poly> {
        self.d.diagonal()
    }

    /// Product of all diagonal entries.
    pub fn diagonal_product(&self) -> Poly {
        self.diagonal().iter().fold(Poly::one(), |acc, d| acc * d)
    }
}

/// Rebuild `(S, T)` by applying `moves` to identity matrices.
pub fn replay(n: usize, moves: &[ElementaryMove]) -> (MatPoly, MatPoly) {
    let mut s = MatPoly::identity(n);
    let mut t = MatPoly::identity(n);
    for mv in moves {
        match mv.side {
            Side::Row => mv.apply(&mut s),
            Side::Col => mv.apply(&mut t),
        }
    }
    (s, t)
}

pub fn diagonalize(l: &MatPoly) -> DiagForm {
    diagonalize_with(l, PivotStrategy::default())
}

pub fn diagonalize_with(l: &MatPoly, strategy: PivotStrategy) -> DiagForm {
    let n = l.n();
    let mut run = Run {
        m: l.clone(),
        s: MatPoly::identity(n),
        t: MatPoly::identity(n),
        det_s: GaussianRational::one(),
        det_t: GaussianRational::one(),
        transcript: Vec::new(),
    };
    for k in 0..n {
        while let Some((r, c)) = pick_pivot(&run.m, k, strategy) {
            if r != k {
                run.push(Side::Row, MoveKind::Swap { i: k, j: r });
            }
            if c != k {
                run.push(Side::Col, MoveKind::Swap { i: k, j: c });
            }
            if run.reduce_cross(k) {
                break;
            }
        }
        let pivot = run.m.get(k, k);
        if pivot.is_constant() && !pivot.is_zero() && !pivot.coeff(0).is_one() {
            let c = pivot.coeff(0).inv();
            run.push(Side::Row, MoveKind::Scale { i: k, c });
        }
    }
    DiagForm {
        s: run.s,
        d: run.m,
        t: run.t,
        det_s: run.det_s,
        det_t: run.det_t,
        transcript: run.transcript,
    }
}

struct Run {
    m: MatPoly,
    s: MatPoly,
    t: MatPoly,
    det_s: GaussianRational,
    det_t: GaussianRational,
    transcript: Vec<ElementaryMove>,
}

impl Run {
    fn push(&mut self, side: Side, kind: MoveKind) {
        let mv = ElementaryMove { side, kind };
        mv.apply(&mut self.m);
        match side {
            Side::Row => {
                mv.apply(&mut self.s);
                self.det_s *= &mv.det();
            }
            Side::Col => {
                mv.apply(&mut self.t);
                self.det_t *= &mv.det();
            }
        }
        self.transcript.push(mv);
    }

    /// Divide the pivot out of its column and row. Returns true when both
    /// are cleared.
    fn reduce_cross(&mut self, k: usize) -> bool {
        let n = self.m.n();
        let pivot = self.m.get(k, k).clone();
        let mut clean = true;
        for i in k + 1..n {
            if self.m.get(i, k).is_zero() {
                continue;
            }
            let (q, r) = self.m.get(i, k).divmod(&pivot).expect("pivot nonzero");
            if !q.is_zero() {
                self.push(Side::Row, MoveKind::AddMultiple { i, j: k, q: -q });
            }
            clean &= r.is_zero();
        }
        for j in k + 1..n {
            if self.m.get(k, j).is_zero() {
                continue;
            }
            let (q, r) = self.m.get(k, j).divmod(&pivot).expect("pivot nonzero");
            if !q.is_zero() {
                self.push(Side::Col, MoveKind::AddMultiple { i: j, j: k, q: -q });
            }
            clean &= r.is_zero();
        }
        clean
    }
}

fn pick_pivot(m: &MatPoly, k: usize, strategy: PivotStrategy) -> Option<(usize, usize)> {
    let n = m.n();
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for i in k..n {
        for j in k..n {
            cells.push((i, j));
        }
    }
    if strategy == PivotStrategy::MinDegreeLast {
        cells.reverse();
    }
    let mut best: Option<(usize, (usize, usize))> = None;
    for (i, j) in cells {
        if let Some(d) = m.get(i, j).degree() {
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, (i, j)));
            }
        }
    }
    best.map(|(_, cell)| cell)
}

/// The check of [`verify_diag`] that failed.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagFailure {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("S·L·T differs from D at ({row}, {col})")]
    Product { row: usize, col: usize },
    #[error("D has a nonzero off-diagonal entry at ({row}, {col})")]
    NotDiagonal { row: usize, col: usize },
    #[error("det {which} = {det} is not a nonzero constant")]
    NotUnimodular { which: &'static str, det: String },
    #[error("product of diagonal entries is not det S · det T · det L")]
    DetIdentity,
}

impl DiagFailure {
    /// Short label of the violated check: `a`, `b`, `c` or `d`.
    pub fn check(&self) -> char {
        match self {
            DiagFailure::Dimension(_) | DiagFailure::Product { .. } => 'a',
            DiagFailure::NotDiagonal { .. } => 'b',
            DiagFailure::NotUnimodular { .. } => 'c',
            DiagFailure::DetIdentity => 'd',
        }
    }
}

fn constant_det(m: &MatPoly, which: &'static str) -> Result<GaussianRational, DiagFailure> {
    let det = m.det();
    if det.is_constant() && !det.is_zero() {
        Ok(det.coeff(0))
    } else {
        Err(DiagFailure::NotUnimodular { which, det: det.to_string() })
    }
}

/// Independent check of a diagonal form against `L`; recomputes every
/// determinant rather than trusting the stored ones.
pub fn verify_diag(l: &MatPoly, form: &DiagForm) -> Result<(), DiagFailure> {
    let n = l.n();
    if [form.s.n(), form.d.n(), form.t.n()].iter().any(|&k| k != n) {
        return Err(DiagFailure::Dimension(format!("L is {n}×{n}")));
    }
    let slt = &(&form.s * l) * &form.t;
    for i in 0..n {
        for j in 0..n {
            if slt.get(i, j) != form.d.get(i, j) {
                return Err(DiagFailure::Product { row: i, col: j });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !form.d.get(i, j).is_zero() {
                return Err(DiagFailure::NotDiagonal { row: i, col: j });
            }
        }
    }
    let det_s = constant_det(&form.s, "S")?;
    let det_t = constant_det(&form.t, "T")?;
    let det_l = l.det();
    if !det_l.is_zero() && form.diagonal_product() != det_l.scale(&(&det_s * &det_t)) {
        return Err(DiagFailure::DetIdentity);
    }
    Ok(())
}
