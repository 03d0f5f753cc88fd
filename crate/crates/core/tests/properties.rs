mod common;

use common::*;
use mpk_core::kreinlanger::represent;
use mpk_core::odesolve::{general_solution, verify_solution};
use mpk_core::roots::{find_roots_with_tol, reassemble};
use mpk_core::smith::{diagonalize_with, replay, verify_diag};
use mpk_core::spectral::canonical_system_with_tol;
use mpk_core::{
    GaussianRational, MatPoly, MatRatFun, Matrix, PivotStrategy, Poly, RatFun, RootValue, DEFAULT_NUMERIC_TOL,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn poly_strategy(max_deg: usize, c: i64) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-c..=c, 0..=max_deg + 1).prop_map(|v| Poly::from_ints(&v))
}

fn gaussian_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-3i64..=3, -2i64..=2), 0..=max_deg + 1)
        .prop_map(|v| Poly::new(v.into_iter().map(|(a, b)| GaussianRational::complex(a, b)).collect()))
}

fn matpoly_strategy(max_n: usize, max_l: usize, c: i64) -> impl Strategy<Value = MatPoly> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(poly_strategy(max_l, c), n * n)
            .prop_map(move |e| MatPoly::new(e.chunks(n).map(<[Poly]>::to_vec).collect()).unwrap())
    })
}

fn hermitian_strategy(max_n: usize, max_l: usize) -> impl Strategy<Value = MatPoly> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(gaussian_poly(max_l), n * n).prop_map(move |e| {
            MatPoly::from_fn(n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Less => e[i * n + j].clone(),
                std::cmp::Ordering::Greater => e[j * n + i].conj_coeffs(),
                std::cmp::Ordering::Equal => {
                    let p = &e[i * n + i];
                    Poly::new(p.coeffs().iter().map(|c| GaussianRational::new(c.re().clone(), Zero::zero())).collect())
                }
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn det_matches_cofactor(m in matpoly_strategy(4, 2, 3)) {
        prop_assert_eq!(m.det(), cofactor_det(&m));
    }

    #[test]
    fn det_degree_bound(m in matpoly_strategy(3, 3, 3)) {
        if let Some(d) = m.det().degree() {
            prop_assert!(d <= m.n() * m.degree().unwrap_or(0));
        }
    }

    #[test]
    fn eval_matches_horner(m in matpoly_strategy(3, 3, 3), a in -5i64..=5, b in 1i64..=4) {
        let z = GaussianRational::frac(a, b);
        prop_assert_eq!(m.eval(&z).to_rows(), horner_eval(&m, &z));
    }

    #[test]
    fn inverse_hat_multiplies_back(m in matpoly_strategy(3, 2, 2)) {
        prop_assume!(!m.det().is_zero());
        let inv = m.inverse_hat().unwrap().neg();
        let lm = MatRatFun::from_matpoly(&m);
        prop_assert!((&lm * &inv).is_identity());
        prop_assert!((&inv * &lm).is_identity());
    }

    #[test]
    fn hermitian_symmetries(m in hermitian_strategy(3, 2)) {
        prop_assert!(m.is_hermitian());
        let chi = m.det();
        prop_assert_eq!(chi.conj_coeffs(), chi.clone());
        if !chi.is_zero() {
            let l_hat = m.inverse_hat().unwrap();
            prop_assert_eq!(l_hat.adjoint(), l_hat);
        }
    }

    #[test]
    fn diagonal_forms_verify(m in matpoly_strategy(3, 2, 2)) {
        for strategy in [PivotStrategy::MinDegreeFirst, PivotStrategy::MinDegreeLast] {
            let form = diagonalize_with(&m, strategy);
            prop_assert_eq!(verify_diag(&m, &form), Ok(()));
            prop_assert_eq!(replay(m.n(), &form.transcript), (form.s.clone(), form.t.clone()));
            let dets = form.transcript.iter().fold(GaussianRational::one(), |acc, mv| acc * mv.det());
            prop_assert_eq!(dets, &form.det_s * &form.det_t);
        }
    }

    #[test]
    fn canonical_system_invariants(m in matpoly_strategy(3, 2, 2)) {
        let det = m.det();
        prop_assume!(!det.is_zero());
        let sys = canonical_system_with_tol(&m, DEFAULT_NUMERIC_TOL).unwrap();
        let total: usize = sys.records.iter().map(|r| r.order).sum();
        prop_assert_eq!(Some(total), det.degree());
        for group in &sys.table.groups {
            if let RootValue::Exact(alpha) = &group.alpha {
                prop_assert_eq!(m.n() - m.eval(alpha).rank(), group.entries.len());
                prop_assert_eq!(group.total_order(), multiplicity(&det, alpha));
            }
        }
        for (rec, pc) in sys.records.iter().zip(&sys.pole_cancellations) {
            let Some(alpha) = rec.exact_alpha() else { continue };
            let lin = Poly::linear(alpha).pow(rec.order as u32);
            let quotients: Vec<Poly> = pc.psi.iter().map(|p| p.div_exact(&lin).expect("divisible")).collect();
            prop_assert!(quotients.iter().any(|p| !p.eval(alpha).is_zero()));
        }
    }

    #[test]
    fn solutions_verify(m in matpoly_strategy(2, 2, 2)) {
        let det = m.det();
        prop_assume!(!det.is_zero());
        let sol = general_solution(&m).unwrap();
        prop_assert_eq!(Some(sol.dimension), det.degree());
        for t in &sol.terms {
            prop_assert!(verify_solution(&m, t).is_ok());
        }
    }

    #[test]
    fn poly_division(a in gaussian_poly(5), b in gaussian_poly(3)) {
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a.clone());
        prop_assert!(rem.is_zero() || rem.degree() < b.degree());
        let g = a.gcd(&b);
        prop_assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
    }

    #[test]
    fn taylor_shift_round_trip(p in gaussian_poly(5), a in -4i64..=4, b in -2i64..=2) {
        let alpha = GaussianRational::complex(a, b);
        let shifted = p.taylor_shift(&alpha);
        let lin = Poly::linear(&alpha);
        let back = shifted.iter().rev().fold(Poly::zero(), |acc, c| &acc * &lin + Poly::constant(c.clone()));
        prop_assert_eq!(back, p);
    }

    #[test]
    fn square_free_reassembles(p in gaussian_poly(4), q in gaussian_poly(2)) {
        let f = &p * &q.pow(2);
        prop_assume!(!f.is_zero() && !f.is_constant());
        let (lead, parts) = f.square_free().unwrap();
        let back = parts.iter().fold(Poly::constant(lead), |acc, (g, k)| acc * g.pow(*k as u32));
        prop_assert_eq!(back, f);
    }

    #[test]
    fn exact_roots_reassemble(roots in prop::collection::vec((-4i64..=4, 1i64..=3, 1usize..=3), 1..=3)) {
        let p = roots.iter().fold(Poly::one(), |acc, &(a, b, k)| {
            acc * Poly::linear(&GaussianRational::frac(a, b)).pow(k as u32)
        });
        let found = find_roots_with_tol(&p, DEFAULT_NUMERIC_TOL);
        prop_assert!(found.roots.iter().all(|r| r.is_exact()));
        prop_assert_eq!(reassemble(&found).unwrap(), p);
    }

    #[test]
    fn ratfun_field_ops(a in gaussian_poly(3), b in gaussian_poly(3), c in gaussian_poly(2)) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let f = RatFun::new(a, b.clone()).unwrap();
        let g = RatFun::new(c.clone(), b).unwrap();
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        prop_assert_eq!(&f * &RatFun::from_poly(c.clone()), RatFun::new(f.num() * &c, f.den().clone()).unwrap());
        prop_assert_eq!(f.num().gcd(f.den()), Poly::one());
    }
}

/// Congruences of `diag(s₁(z-a), s₂(z-b))` by constant `U`, with signs
/// mixed, so both block signs occur.
#[test]
fn signed_congruences_represent() {
    let mut r = rng(21);
    use rand::Rng;
    for case in 0..40 {
        let a = GaussianRational::frac(r.gen_range(-5..=5), r.gen_range(1..=2));
        let mut b = GaussianRational::frac(r.gen_range(-5..=5), r.gen_range(1..=2));
        while b == a {
            b = GaussianRational::frac(r.gen_range(-5..=5), 1);
        }
        let signs = [if r.gen_bool(0.5) { 1 } else { -1 }, if r.gen_bool(0.5) { 1 } else { -1 }];
        let u = random_invertible(&mut r, 2, 2, case % 3 == 0);
        let d = [Poly::linear(&a).scale(&q(signs[0])), Poly::linear(&b).scale(&q(signs[1]))];
        let m = MatPoly::from_fn(2, |i, j| {
            (0..2).fold(Poly::zero(), |acc, k| acc + d[k].scale(&(&u[(k, i)] * &u[(k, j)].conj())))
        });
        let rep = represent(&m).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let negatives = signs.iter().filter(|&&s| s < 0).count();
        assert_eq!(rep.kappa, negatives, "case {case}");
        assert_eq!(&rep.j * &rep.j, Matrix::identity(2));
    }
}

/// Double roots: `Uᵀ diag((z-a)², 1) Ū` needs a length-two chain.
#[test]
fn double_pole_congruences_represent() {
    let mut r = rng(22);
    use rand::Rng;
    for case in 0..20 {
        let a = GaussianRational::frac(r.gen_range(-4..=4), r.gen_range(1..=2));
        let u = random_invertible(&mut r, 2, 2, false);
        let d = [Poly::linear(&a).pow(2), Poly::one()];
        let m = MatPoly::from_fn(2, |i, j| {
            (0..2).fold(Poly::zero(), |acc, k| acc + d[k].scale(&(&u[(k, i)] * &u[(k, j)].conj())))
        });
        if !m.degree_report().unwrap().minors_within_det_degree {
            continue;
        }
        let rep = represent(&m).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert_eq!(rep.state_dim(), 2, "case {case}");
        assert_eq!(rep.kappa, 1, "case {case}");
    }
}
