use std::fs;
use std::path::Path;

use num_traits::Zero;
use proptest::prelude::*;

use centra::equivariance::{centralizer_up_to, equivariant_space, is_equivariant};
use centra::exactla::rat;
use centra::invariants::invariant_space;
use centra::liealg::stock;
use centra::normalform::{normal_form, FormalField, NormalFormReport};
use centra::polyalg::{lie_bracket, lie_derivative};
use centra::problem::Problem;
use centra::superposition::{chen_reduce, field_along};
use centra::{LieAlgebra, Poly, QMatrix, Rational, VectorField};

fn problem(name: &str) -> Problem {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name);
    Problem::parse(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn chen_problem_file_solves_exactly() {
    let p = problem("chen_diag12.json");
    let m = p.algebra(64).unwrap();
    let q = p.field.unwrap();
    let red = chen_reduce(&m, &q, 6, 64).unwrap();
    let y0 = p.y0.unwrap();
    let x = red.solve(&y0, &Rational::zero()).unwrap();
    assert_eq!(x.eval_exact(&Rational::zero()), Some(y0));
    assert!(x.derivative().sub(&field_along(&q, &x).unwrap()).unwrap().is_zero());
}

#[test]
fn every_sample_problem_validates() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        let p = Problem::parse(&text).unwrap();
        assert!(p.algebra(200).is_ok());
        count += 1;
    }
    assert!(count >= 6);
}

#[test]
fn rotation_invariants_are_powers_of_the_radius() {
    let m = stock::so2();
    let r2 = Poly::parse(2, "x1^2 + x2^2").unwrap();
    for k in 1..=6u32 {
        let basis = invariant_space(&m, k);
        if k % 2 == 1 {
            assert!(basis.is_empty());
        } else {
            assert_eq!(basis.len(), 1);
            let c = basis[0].coeff(r2.pow(k / 2).terms().next().unwrap().0);
            assert_eq!(basis[0], r2.pow(k / 2).scale(&c));
        }
    }
}

#[test]
fn normal_form_report_round_trips() {
    let a = QMatrix::diag_i64(&[-1, 2, 3]);
    let f = VectorField::parse(&["-x1", "-x2 + 5/2*x1*x3", "x1*x2^2"]).unwrap();
    let nf = normal_form(&FormalField::from_field(&f, 5).unwrap(), 5, Some(&a)).unwrap();
    let report = nf.report(Some(&a));
    let json = serde_json::to_string(&report).unwrap();
    let back: NormalFormReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
}

fn diagonal_algebra(rows: &[Vec<i64>]) -> LieAlgebra {
    let gens: Vec<QMatrix> = rows.iter().map(|r| QMatrix::diag_i64(r)).collect();
    LieAlgebra::closure_in(rows[0].len(), &gens, 8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn centralizer_is_closed_under_bracket(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 3), 1..3)) {
        let m = diagonal_algebra(&rows);
        let g = centralizer_up_to(&m, 3);
        let fields: Vec<&VectorField> = g.per_degree.values().flatten().collect();
        for f in &fields {
            for h in &fields {
                prop_assert!(is_equivariant(&m, &lie_bracket(f, h).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn invariants_times_fields_stay_equivariant(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 3), 1..3)) {
        let m = diagonal_algebra(&rows);
        for phi in (1..=2).flat_map(|k| invariant_space(&m, k)) {
            for b in m.basis() {
                prop_assert!(lie_derivative(b, &phi).unwrap().is_zero());
            }
            for f in (0..=2).flat_map(|k| equivariant_space(&m, k)) {
                prop_assert!(is_equivariant(&m, &f.mul_poly(&phi).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn identity_always_commutes(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 2), 1..3)) {
        let m = diagonal_algebra(&rows);
        let basis = equivariant_space(&m, 1);
        let e = VectorField::identity(2);
        prop_assert!(is_equivariant(&m, &e).unwrap());
        prop_assert!(basis.len() >= 2);
        prop_assert!(basis.iter().all(|f| f.components().iter().all(|p| p.terms().all(|(_, c)| *c != rat(0)))));
    }
}
