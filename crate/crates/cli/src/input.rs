//! Input documents: an `n × n` grid of coefficient lists, or the same data
//! as a list of coefficient matrices `A_0, A_1, …`.

use mpk_core::{GaussianRational, MatPoly, Matrix, Poly};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub n: usize,
    /// `entries[i][j]` lists the coefficients of `l_ij`, ascending powers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<Vec<GaussianRational>>>>,
    /// `coefficients[p]` is the `n × n` matrix `A_p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Vec<Vec<GaussianRational>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl InputDocument {
    pub fn from_entries(rows: &MatPoly) -> Self {
        let entries = rows.to_rows().into_iter().map(|r| r.into_iter().map(|p| p.coeffs().to_vec()).collect()).collect();
        InputDocument { n: rows.n(), entries: Some(entries), coefficients: None, name: None, notes: None }
    }

    /// Checks the shape against `n` and builds `L`.
    pub fn to_matpoly(&self) -> Result<MatPoly, String> {
        let n = self.n;
        if n == 0 {
            return Err("n must be at least 1".into());
        }
        match (&self.entries, &self.coefficients) {
            (Some(entries), None) => {
                if entries.len() != n || entries.iter().any(|r| r.len() != n) {
                    return Err(format!("entries must be a {n} × {n} grid"));
                }
                let rows = entries.iter().map(|r| r.iter().map(|c| Poly::new(c.clone())).collect()).collect();
                MatPoly::new(rows).map_err(|e| e.to_string())
            }
            (None, Some(coeffs)) => {
                if coeffs.is_empty() {
                    return Err("coefficients must list at least one matrix".into());
                }
                let mats = coeffs
                    .iter()
                    .enumerate()
                    .map(|(p, a)| {
                        if a.len() != n || a.iter().any(|r| r.len() != n) {
                            return Err(format!("coefficients[{p}] must be {n} × {n}"));
                        }
                        Ok(Matrix::from_rows(a.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                MatPoly::from_coefficients(&mats).map_err(|e| e.to_string())
            }
            (Some(_), Some(_)) => Err("give either entries or coefficients, not both".into()),
            (None, None) => Err("missing entries (or coefficients)".into()),
        }
    }
}

pub fn parse(text: &str, path: &str) -> Result<(InputDocument, MatPoly), InputError> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let l = doc.to_matpoly().map_err(|message| InputError::Shape { path: path.to_string(), message })?;
    Ok((doc, l))
}

pub fn load(path: &str) -> Result<(InputDocument, MatPoly), InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_string(), source })?;
    parse(&text, path)
}

// serde_json appends " at line L column C"; we report those separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
