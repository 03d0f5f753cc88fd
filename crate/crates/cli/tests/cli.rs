use std::path::PathBuf;
use std::process::Command;

use mpk_cli::commands::{Document, Status};
use mpk_cli::InputDocument;
use mpk_core::{GaussianRational, MatPoly, Matrix, Poly, RootValue};
use serde_json::Value;

const COMMANDS: [&str; 6] = ["diagonalize", "spectrum", "jordan", "solve-ode", "represent", "verify"];

fn input(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/inputs").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn mpk(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mpk"));
    cmd.args(args).env_remove("MPK_NUMERIC_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn mpk");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run_file(cmd: &str, file: &str, flags: &[&str]) -> Run {
    let path = input(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(flags);
    mpk(&args, &[])
}

fn document(run: &Run) -> Document {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}\n{}", run.stdout))
}

fn exact(n: i64) -> RootValue {
    RootValue::Exact(GaussianRational::from_int(n))
}

#[test]
fn diagonalize_eigen_table() {
    let run = run_file("diagonalize", "ode-3x3.json", &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let Document::Diagonalize(doc) = document(&run) else { panic!("wrong document") };
    assert_eq!(doc.verification.status, Status::Passed);
    let mut pairs: Vec<(RootValue, usize)> = doc
        .eigen_table
        .unwrap()
        .groups
        .iter()
        .flat_map(|g| g.entries.iter().map(|e| (g.alpha.clone(), e.order)).collect::<Vec<_>>())
        .collect();
    pairs.sort_by_key(|(a, k)| (a.to_string(), *k));
    assert_eq!(pairs, [(exact(0), 1), (exact(0), 2), (exact(1), 1)]);
}

#[test]
fn diagonalize_identity() {
    let run = run_file("diagonalize", "identity.json", &["--latex"]);
    assert_eq!(run.code, 0);
    let Document::Diagonalize(doc) = document(&run) else { panic!("wrong document") };
    let i = MatPoly::identity(3);
    assert_eq!((&doc.s, &doc.d, &doc.t), (&i, &i, &i));
    assert!(doc.latex.unwrap().contains("pmatrix"));
}

#[test]
fn zero_denominator_is_a_parse_error() {
    for cmd in COMMANDS {
        let run = run_file(cmd, "bad-rational.json", &[]);
        assert_eq!(run.code, 1, "{cmd}");
        assert!(run.stdout.is_empty());
        assert!(run.stderr.contains("line 3, column"), "{}", run.stderr);
        assert!(run.stderr.contains("zero denominator"), "{}", run.stderr);
    }
}

#[test]
fn solve_ode_four_terms() {
    let run = run_file("solve-ode", "ode-3x3.json", &["--verify", "--latex"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let Document::SolveOde(doc) = document(&run) else { panic!("wrong document") };
    assert_eq!((doc.dimension, doc.independence_rank, doc.terms.len()), (4, 4, 4));
    assert!(doc.terms.iter().all(|t| t.verification.as_ref().unwrap().status == Status::Passed));
    let found: Vec<(RootValue, Vec<Poly>)> =
        doc.terms.iter().map(|t| (t.term.alpha.clone(), t.term.polynomial_part().unwrap())).collect();
    let p = Poly::from_ints;
    for expected in [
        (exact(0), vec![p(&[]), p(&[1]), p(&[])]),
        (exact(0), vec![p(&[-1]), p(&[]), p(&[0, 1])]),
        (exact(1), vec![p(&[-1]), p(&[]), p(&[1])]),
    ] {
        assert!(found.contains(&expected), "missing {expected:?}");
    }
}

#[test]
fn solve_ode_constant_basis() {
    let run = run_file("solve-ode", "zI.json", &[]);
    assert_eq!(run.code, 0);
    let Document::SolveOde(doc) = document(&run) else { panic!("wrong document") };
    assert_eq!(doc.dimension, 2);
    for t in &doc.terms {
        assert_eq!(t.term.alpha, exact(0));
        assert_eq!(t.term.degree(), 0);
    }
}

#[test]
fn singular_input_exits_2() {
    for cmd in ["spectrum", "jordan", "solve-ode"] {
        let run = run_file(cmd, "singular.json", &[]);
        assert_eq!(run.code, 2, "{cmd}");
        assert!(run.stderr.contains("det L ≡ 0"), "{}", run.stderr);
        assert!(run.stdout.is_empty());
    }
}

#[test]
fn represent_hermitian_double_poles() {
    let run = run_file("represent", "hermitian-2x2.json", &["--latex"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let Document::Represent(doc) = document(&run) else { panic!("wrong document") };
    let rep = doc.representation;
    assert_eq!(rep.kappa, 2);
    assert_eq!(rep.a, Matrix::from_ints(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]]));
    assert_eq!(rep.j, Matrix::from_ints(&[&[0, -1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, -1, 0]]));
    assert_eq!(doc.verification.status, Status::Passed);
    assert!(doc.latex.unwrap().contains("\\kappa = 2"));
}

#[test]
fn represent_constant_limit() {
    let run = run_file("represent", "z-one.json", &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let Document::Represent(doc) = document(&run) else { panic!("wrong document") };
    assert_eq!(doc.representation.s_inf, Matrix::from_ints(&[&[0, 0], &[0, -1]]));
    assert_eq!(doc.representation.kappa, 0);
}

#[test]
fn represent_refusals() {
    let run = run_file("represent", "divergent-at-infinity.json", &[]);
    assert_eq!(run.code, 4);
    assert!(run.stderr.contains("eigenvalue at ∞"), "{}", run.stderr);
    assert_eq!(run_file("represent", "non-hermitian.json", &[]).code, 3);
    assert_eq!(run_file("represent", "sqrt2.json", &[]).code, 5);
    assert_eq!(run_file("represent", "singular.json", &[]).code, 3);
}

#[test]
fn numeric_roots_need_the_flag() {
    let run = run_file("spectrum", "sqrt2.json", &[]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--allow-numeric-roots"));
    let run = run_file("spectrum", "sqrt2.json", &["--allow-numeric-roots"]);
    assert_eq!(run.code, 0);
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    for r in roots {
        let re = r["value"]["approx"]["value"][0].as_f64().unwrap();
        assert!((re.abs() - 2f64.sqrt()).abs() < 1e-9);
    }
    // documents without the flag carry no floats
    let run = run_file("diagonalize", "sqrt2.json", &[]);
    assert_eq!(run.code, 0);
    assert!(!run.stdout.contains("approx"));
}

#[test]
fn numeric_solutions_verify() {
    let run = run_file("solve-ode", "sqrt2.json", &["--allow-numeric-roots", "--verify"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let Document::SolveOde(doc) = document(&run) else { panic!("wrong document") };
    assert_eq!(doc.dimension, 2);
}

#[test]
fn tolerance_env() {
    let path = input("sqrt2.json");
    let args = ["spectrum", path.to_str().unwrap(), "--allow-numeric-roots"];
    let run = mpk(&args, &[("MPK_NUMERIC_TOL", "not a number")]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("MPK_NUMERIC_TOL"));
    let run = mpk(&args, &[("MPK_NUMERIC_TOL", "1e-12")]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("1e-12"));
}

#[test]
fn verify_reports_each_stage() {
    let run = run_file("verify", "hermitian-2x2.json", &[]);
    assert_eq!(run.code, 0);
    let Document::Verify(doc) = document(&run) else { panic!("wrong document") };
    assert!(doc.all_passed());
    assert_eq!(doc.representation.status, Status::Passed);
    let Document::Verify(doc) = document(&run_file("verify", "ode-3x3.json", &[])) else { panic!() };
    assert_eq!(doc.solutions.status, Status::Passed);
    assert_eq!(doc.representation.status, Status::Skipped);
}

#[test]
fn every_document_round_trips() {
    let files = std::fs::read_dir(input("")).unwrap();
    for entry in files {
        let path = entry.unwrap().path();
        let file = path.file_name().unwrap().to_str().unwrap().to_string();
        for cmd in COMMANDS {
            for flags in [&[][..], &["--latex", "--verify", "--allow-numeric-roots"][..]] {
                let run = run_file(cmd, &file, flags);
                if run.stdout.is_empty() {
                    assert_ne!(run.code, 0, "{cmd} {file}");
                    continue;
                }
                let raw: Value = serde_json::from_str(&run.stdout).expect("stdout is JSON");
                let doc: Document = serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{cmd} {file}: {e}"));
                let again = serde_json::to_value(&doc).unwrap();
                assert_eq!(raw, again, "{cmd} {file}");
                assert_eq!(serde_json::from_value::<Document>(again).unwrap(), doc);
            }
        }
    }
}

#[test]
fn coefficient_matrix_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    // [[z, 1], [1, 1]] as A_0, A_1
    let text = r#"{"n": 2, "coefficients": [
        [[{"re": "0"}, {"re": "1"}], [{"re": "1"}, {"re": "1"}]],
        [[{"re": "1"}, {"re": "0"}], [{"re": "0"}, {"re": "0"}]]]}"#;
    std::fs::write(&path, text).unwrap();
    let a = mpk(&["represent", path.to_str().unwrap()], &[]);
    let b = run_file("represent", "z-one.json", &[]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let (Document::Represent(x), Document::Represent(y)) = (document(&a), document(&b)) else { panic!() };
    assert_eq!(x.representation, y.representation);
}

#[test]
fn input_documents_round_trip() {
    let l = MatPoly::from_int_coeffs(&[&[&[1], &[0, -1, 1]], &[&[0, -1, 1], &[]]]);
    let doc = InputDocument::from_entries(&l);
    let text = serde_json::to_string(&doc).unwrap();
    let (back, m) = mpk_cli::input::parse(&text, "mem").unwrap();
    assert_eq!(back, doc);
    assert_eq!(m, l);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(mpk(&["transpose", "x.json"], &[]).code, 1);
    assert_eq!(mpk(&["spectrum"], &[]).code, 1);
    assert_eq!(mpk(&["spectrum", "/nonexistent.json"], &[]).code, 1);
    assert_eq!(mpk(&["--help"], &[]).code, 0);
}
