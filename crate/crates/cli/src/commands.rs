use mpk_core::kreinlanger::{check_representability, represent};
use mpk_core::odesolve::{general_solution_with_tol, verify_solution};
use mpk_core::roots::find_roots_with_tol;
use mpk_core::smith::{diagonalize, verify_diag};
use mpk_core::spectral::{canonical_system_with_tol, eigen_table_with_tol, verify_chain, verify_chain_numeric, ChainData};
use mpk_core::{
    latex, ChainCheck, DiagForm, EigenTable, ElementaryMove, Error, GaussianRational, MatPoly, Poly,
    PoleCancellationRecord, Representation, RootFunctionRecord, RootSpec, SolutionTerm,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Diagonalize,
    Spectrum,
    Jordan,
    SolveOde,
    Represent,
    Verify,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub latex: bool,
    pub verify: bool,
    pub allow_numeric_roots: bool,
    pub tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { latex: false, verify: false, allow_numeric_roots: false, tol: mpk_core::DEFAULT_NUMERIC_TOL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Document {
    Diagonalize(DiagonalizeDoc),
    Spectrum(SpectrumDoc),
    Jordan(JordanDoc),
    SolveOde(SolveOdeDoc),
    Represent(RepresentDoc),
    Verify(VerifyDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn passed() -> Self {
        Check { status: Status::Passed, detail: None }
    }

    fn failed(detail: impl Into<String>) -> Self {
        Check { status: Status::Failed, detail: Some(detail.into()) }
    }

    fn skipped(detail: impl Into<String>) -> Self {
        Check { status: Status::Skipped, detail: Some(detail.into()) }
    }

    fn from_result<E: std::fmt::Display>(r: Result<(), E>) -> Self {
        match r {
            Ok(()) => Check::passed(),
            Err(e) => Check::failed(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalizeDoc {
    pub name: Option<String>,
    pub s: MatPoly,
    pub d: MatPoly,
    pub t: MatPoly,
    pub det_s: GaussianRational,
    pub det_t: GaussianRational,
    pub transcript: Vec<ElementaryMove>,
    /// Roots of each diagonal entry; absent when `det L ≡ 0` or when the
    /// roots are only known numerically and that was not allowed.
    pub eigen_table: Option<EigenTable>,
    pub verification: Check,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latex: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDoc {
    pub name: Option<String>,
    pub det: Poly,
    pub roots: Vec<RootSpec>,
    pub eigen_table: EigenTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latex: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub record: RootFunctionRecord,
    pub pole_cancellation: PoleCancellationRecord,
    pub check: ChainCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanDoc {
    pub name: Option<String>,
    pub diagonal: Vec<Poly>,
    pub eigen_table: EigenTable,
    pub chains: Vec<ChainEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latex: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub term: SolutionTerm,
    pub display: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latex: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOdeDoc {
    pub name: Option<String>,
    pub dimension: usize,
    pub independence_rank: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentDoc {
    pub name: Option<String>,
    pub representation: Representation,
    pub state_dim: usize,
    pub verification: Check,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latex: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub name: Option<String>,
    pub diagonal_form: Check,
    pub chains: Check,
    pub solutions: Check,
    pub representation: Check,
}

impl VerifyDoc {
    pub fn all_passed(&self) -> bool {
        [&self.diagonal_form, &self.chains, &self.solutions, &self.representation]
            .iter()
            .all(|c| c.status != Status::Failed)
    }
}

/// A document plus, when a verifier rejected it, the failure to report.
#[derive(Debug)]
pub struct Report {
    pub document: Document,
    pub failure: Option<CliError>,
}

impl Report {
    fn ok(document: Document) -> Self {
        Report { document, failure: None }
    }
}

pub fn run(cmd: Command, name: Option<String>, l: &MatPoly, opts: &Options) -> Result<Report, CliError> {
    match cmd {
        Command::Diagonalize => Ok(cmd_diagonalize(name, l, opts)),
        Command::Spectrum => cmd_spectrum(name, l, opts),
        Command::Jordan => cmd_jordan(name, l, opts),
        Command::SolveOde => cmd_solve_ode(name, l, opts),
        Command::Represent => cmd_represent(name, l, opts),
        Command::Verify => cmd_verify(name, l, opts),
    }
}

fn numeric_roots_present(p: &Poly, tol: f64) -> bool {
    find_roots_with_tol(p, tol).roots.iter().any(|r| !r.is_exact())
}

/// Refuses `det L ≡ 0`, and numeric eigenvalues unless they were allowed.
fn require_roots(l: &MatPoly, opts: &Options) -> Result<Poly, CliError> {
    let det = l.det();
    if det.degree().is_none() {
        return Err(CliError::Pipeline(Error::NotInvertible));
    }
    if !opts.allow_numeric_roots && numeric_roots_present(&det, opts.tol) {
        return Err(CliError::NumericRoots(format!(
            "det L = {det} has roots outside ℚ(i); rerun with --allow-numeric-roots"
        )));
    }
    Ok(det)
}

fn cmd_diagonalize(name: Option<String>, l: &MatPoly, opts: &Options) -> Report {
    let form = diagonalize(l);
    let verification = Check::from_result(verify_diag(l, &form));
    let numeric_blocked = !opts.allow_numeric_roots && form.diagonal().iter().any(|d| numeric_roots_present(d, opts.tol));
    let eigen_table = if numeric_blocked { None } else { eigen_table_with_tol(&form, opts.tol).ok() };
    let failure = verification.detail.clone().map(CliError::Verification);
    let latex = opts.latex.then(|| latex::diag_form(&form));
    let DiagForm { s, d, t, det_s, det_t, transcript } = form;
    let document =
        Document::Diagonalize(DiagonalizeDoc { name, s, d, t, det_s, det_t, transcript, eigen_table, verification, latex });
    Report { document, failure }
}

fn cmd_spectrum(name: Option<String>, l: &MatPoly, opts: &Options) -> Result<Report, CliError> {
    let det = require_roots(l, opts)?;
    let roots = find_roots_with_tol(&det, opts.tol).roots;
    let eigen_table = eigen_table_with_tol(&diagonalize(l), opts.tol)?;
    let latex = opts.latex.then(|| latex::poly(&det, "z"));
    Ok(Report::ok(Document::Spectrum(SpectrumDoc { name, det, roots, eigen_table, latex })))
}

fn recheck(l: &MatPoly, rec: &RootFunctionRecord) -> Result<ChainCheck, Error> {
    match &rec.chain {
        ChainData::Exact { vectors, .. } => verify_chain(l, rec.exact_alpha().expect("exact chain"), vectors),
        ChainData::Approx { .. } => verify_chain_numeric(l, rec.alpha.to_complex64(), &rec.chain_complex()),
    }
}

fn cmd_jordan(name: Option<String>, l: &MatPoly, opts: &Options) -> Result<Report, CliError> {
    require_roots(l, opts)?;
    let sys = canonical_system_with_tol(l, opts.tol)?;
    let mut chains = Vec::new();
    for (record, pole_cancellation) in sys.records.into_iter().zip(sys.pole_cancellations) {
        let check = recheck(l, &record)?;
        chains.push(ChainEntry { record, pole_cancellation, check });
    }
    let latex = opts.latex.then(|| {
        chains
            .iter()
            .map(|c| match c.record.exact_chain() {
                Some(vs) => {
                    let cols: Vec<String> = vs.iter().map(|v| latex::matrix(&column(v))).collect();
                    format!("\\alpha = {},\\quad {}", latex::scalar(c.record.exact_alpha().expect("exact")), cols.join(",\\ "))
                }
                None => format!("\\alpha \\approx {}", c.record.alpha),
            })
            .collect()
    });
    let diagonal = sys.form.diagonal();
    Ok(Report::ok(Document::Jordan(JordanDoc { name, diagonal, eigen_table: sys.table, chains, latex })))
}

fn column(v: &[GaussianRational]) -> mpk_core::Matrix {
    mpk_core::Matrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect())
}

fn cmd_solve_ode(name: Option<String>, l: &MatPoly, opts: &Options) -> Result<Report, CliError> {
    require_roots(l, opts)?;
    let sol = general_solution_with_tol(l, opts.tol)?;
    let mut failures = Vec::new();
    let terms = sol
        .terms
        .into_iter()
        .enumerate()
        .map(|(k, term)| {
            let verification = opts.verify.then(|| match verify_solution(l, &term) {
                Ok(()) => Check::passed(),
                Err(r) => {
                    failures.push(k);
                    Check::failed(format!("residual {r:?}"))
                }
            });
            let latex = opts.latex.then(|| latex::solution(&term));
            TermDoc { display: term.render_expanded(), term, verification, latex }
        })
        .collect();
    let failure = (!failures.is_empty())
        .then(|| CliError::Verification(format!("solution terms {failures:?} leave a nonzero residual")));
    let document = Document::SolveOde(SolveOdeDoc {
        name,
        dimension: sol.dimension,
        independence_rank: sol.independence_rank,
        terms,
    });
    Ok(Report { document, failure })
}

fn cmd_represent(name: Option<String>, l: &MatPoly, opts: &Options) -> Result<Report, CliError> {
    // represent() ends with the exact reconstruction check and fails otherwise
    let representation = represent(l)?;
    let latex = opts.latex.then(|| latex::representation(&representation));
    Ok(Report::ok(Document::Represent(RepresentDoc {
        name,
        state_dim: representation.state_dim(),
        representation,
        verification: Check::passed(),
        latex,
    })))
}

fn cmd_verify(name: Option<String>, l: &MatPoly, opts: &Options) -> Result<Report, CliError> {
    let form = diagonalize(l);
    let diagonal_form = Check::from_result(verify_diag(l, &form));
    let (chains, solutions) = match require_roots(l, opts) {
        Err(e) => (Check::skipped(e.to_string()), Check::skipped(e.to_string())),
        Ok(_) => {
            let chains = match canonical_system_with_tol(l, opts.tol) {
                Ok(sys) => Check::from_result(sys.records.iter().try_for_each(|rec| {
                    let c = recheck(l, rec)?;
                    if c.valid_length < rec.order || !c.maximal {
                        return Err(Error::ChainInvalid { alpha: rec.alpha.to_string(), reason: format!("{c:?}") });
                    }
                    Ok(())
                })),
                Err(e) => Check::failed(e.to_string()),
            };
            let solutions = match general_solution_with_tol(l, opts.tol) {
                Ok(sol) => Check::from_result(
                    sol.terms.iter().try_for_each(|t| verify_solution(l, t).map_err(|r| format!("residual {r:?}"))),
                ),
                Err(e) => Check::failed(e.to_string()),
            };
            (chains, solutions)
        }
    };
    let representation = match check_representability(l) {
        Err(e) => Check::skipped(e.to_string()),
        Ok(_) => match represent(l) {
            Ok(_) => Check::passed(),
            Err(e) => Check::failed(e.to_string()),
        },
    };
    let doc = VerifyDoc { name, diagonal_form, chains, solutions, representation };
    let failure = (!doc.all_passed()).then(|| CliError::Verification("one or more verifiers failed".into()));
    Ok(Report { document: Document::Verify(doc), failure })
}
