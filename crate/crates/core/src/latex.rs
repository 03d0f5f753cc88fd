//! LaTeX rendering for scalars, polynomials, matrices and ODE solutions.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::kreinlanger::Representation;
use crate::linalg::Matrix;
use crate::matpoly::{MatPoly, MatRatFun};
use crate::odesolve::{SolutionTerm, TermVectors};
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::roots::RootValue;
use crate::scalar::GaussianRational;
use crate::smith::DiagForm;

fn rational(r: &BigRational) -> String {
    let body = if r.is_integer() {
        r.numer().abs().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    };
    if r.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

pub fn scalar(c: &GaussianRational) -> String {
    if c.im().is_zero() {
        return rational(c.re());
    }
    let im = if c.im().abs().is_one() { "i".to_string() } else { format!("{}i", rational(&c.im().abs())) };
    let sign = if c.im().is_negative() { "-" } else { "+" };
    if c.re().is_zero() {
        return if c.im().is_negative() { format!("-{im}") } else { im };
    }
    format!("({}{sign}{im})", rational(c.re()))
}

pub fn poly(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (j, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let s = scalar(c);
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mono = match j {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{{{j}}}"),
        };
        if j > 0 && body == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&body);
            out.push_str(&mono);
        }
    }
    out
}

pub fn ratfun(f: &RatFun, var: &str) -> String {
    if f.is_polynomial() {
        poly(f.num(), var)
    } else {
        format!("\\frac{{{}}}{{{}}}", poly(f.num(), var), poly(f.den(), var))
    }
}

fn pmatrix(rows: impl Iterator<Item = Vec<String>>) -> String {
    let body: Vec<String> = rows.map(|r| r.join(" & ")).collect();
    format!("\\begin{{pmatrix}}{}\\end{{pmatrix}}", body.join(" \\\\ "))
}

pub fn matrix(m: &Matrix) -> String {
    pmatrix((0..m.rows()).map(|i| m.row(i).iter().map(scalar).collect()))
}

pub fn matpoly(m: &MatPoly) -> String {
    pmatrix((0..m.n()).map(|i| m.row(i).iter().map(|p| poly(p, "z")).collect()))
}

pub fn matratfun(m: &MatRatFun) -> String {
    pmatrix((0..m.n()).map(|i| (0..m.n()).map(|j| ratfun(m.get(i, j), "z")).collect()))
}

pub fn diag_form(form: &DiagForm) -> String {
    format!("S(z) = {},\\quad D(z) = {},\\quad T(z) = {}", matpoly(&form.s), matpoly(&form.d), matpoly(&form.t))
}

fn exponential(alpha: &RootValue) -> String {
    match alpha {
        RootValue::Exact(a) if a.is_zero() => String::new(),
        RootValue::Exact(a) if a.is_one() => "e^{t}".into(),
        RootValue::Exact(a) => format!("e^{{{}t}}", scalar(a)),
        RootValue::Approx { value, .. } => format!("e^{{({:.10}{:+.10}i)t}}", value.re, value.im),
    }
}

/// `u(t) = p(t) e^{αt}` with `p` written out per component.
pub fn solution(term: &SolutionTerm) -> String {
    let body = match term.polynomial_part() {
        Some(p) => pmatrix(p.iter().map(|c| vec![poly(c, "t")])),
        None => {
            let TermVectors::Approx(_) = &term.coeffs else { unreachable!() };
            let p = term.polynomial_part_complex();
            pmatrix(p.iter().map(|c| {
                let s: Vec<String> = c
                    .iter()
                    .enumerate()
                    .map(|(e, x)| format!("({:.10}{:+.10}i)t^{{{e}}}", x.re, x.im))
                    .collect();
                vec![s.join("+")]
            }))
        }
    };
    format!("{body}{}", exponential(&term.alpha))
}

pub fn representation(rep: &Representation) -> String {
    format!(
        "S_\\infty = {},\\quad A = {},\\quad J = {},\\quad \\Gamma = {},\\quad \\kappa = {}",
        matrix(&rep.s_inf),
        matrix(&rep.a),
        matrix(&rep.j),
        matrix(&rep.gamma),
        rep.kappa
    )
}
