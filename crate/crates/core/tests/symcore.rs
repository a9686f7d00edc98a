mod common;

use common::*;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;
use twistform_core::{contract, del_op, normalize, wedge, Form, LaurentPoly, MultiIndex, Scalar, VectorField};

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        }
    }

    #[test]
    fn normalize_idempotent(raw in prop::collection::vec((prop::collection::vec(-2i32..=2, 3), scalar()), 0..8)) {
        let f = normalize(3, raw);
        let g = normalize(3, f.terms().clone());
        prop_assert_eq!(&g, &f);
        prop_assert!(f.terms().values().all(|c| !c.is_zero()));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn wedge_antisymmetric_on_one_forms(a in form(4, 1), b in form(4, 1)) {
        prop_assert_eq!(wedge(&a, &b).unwrap(), -&wedge(&b, &a).unwrap());
        prop_assert!(wedge(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn wedge_associative(a in form(4, 1), b in form(4, 1), c in form(4, 2)) {
        let l = wedge(&wedge(&a, &b).unwrap(), &c).unwrap();
        let r = wedge(&a, &wedge(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn odd_forms_square_to_zero(a in form(5, 3)) {
        prop_assert!(wedge(&a, &a).is_err() || wedge(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(a in form(4, 1), b in form(4, 1), f in form(4, 0), c in form(4, 2)) {
        for (x, y) in [(&a, &b), (&f, &c), (&c, &a)] {
            let lhs = del_op(&wedge(x, y).unwrap());
            let sign = if x.degree() % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            let rhs = &wedge(&del_op(x), y).unwrap() + &wedge(x, &del_op(y)).unwrap().scale(&sign);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn contraction_is_antiderivation(xi in vector_field(4), a in form(4, 1), b in form(4, 2)) {
        let lhs = contract(&xi, &wedge(&a, &b).unwrap()).unwrap();
        let rhs = &wedge(&contract(&xi, &a).unwrap(), &b).unwrap()
            - &wedge(&a, &contract(&xi, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let twice = contract(&xi, &contract(&xi, &b).unwrap()).unwrap();
        prop_assert!(twice.is_zero());
    }

    #[test]
    fn float_evaluation_tracks_exact(f in poly(3), pt in prop::collection::vec((1i64..=9, 1i64..=9), 3)) {
        let exact: Vec<Scalar> = pt.iter().map(|(a, b)| Scalar::ratio(*a, 4) + Scalar::ratio(*b, 8) * Scalar::i()).collect();
        let z: Vec<Complex64> = exact.iter().map(Scalar::to_complex64).collect();
        let v = f.eval(&z).unwrap();
        let w = f.eval_exact(&exact).unwrap().to_complex64();
        let scale: f64 = f.terms().iter().map(|(e, c)| {
            let mut t = c.to_complex64().norm();
            for (zi, ei) in z.iter().zip(e) { t *= zi.norm().powi(*ei); }
            t
        }).sum::<f64>().max(1.0);
        prop_assert!((v - w).norm() <= 1e-12 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn del_squared_vanishes(a in prop_oneof![form(4, 0), form(4, 1), form(4, 2)]) {
        prop_assert!(del_op(&del_op(&a)).is_zero());
    }
}

#[test]
fn chart_zero_form_evaluates_by_substitution() {
    // z3 dz1 + dz2 at (1, 2, 3)
    let g = &Form::term(MultiIndex::new(vec![0]).unwrap(), LaurentPoly::var(3, 2))
        + &Form::term(MultiIndex::new(vec![1]).unwrap(), LaurentPoly::one(3));
    let v = g.eval_at(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)]).unwrap();
    assert_eq!(v.get(&[0]), Complex64::new(3.0, 0.0));
    assert_eq!(v.get(&[1]), Complex64::new(1.0, 0.0));
    assert_eq!(v.terms.len(), 2);
}

#[test]
fn euler_kernel_on_c2_matches_brute_force() {
    // ambient Λ¹ ⊗ S¹ on C²: basis x_i dx_j; solve ξ⌟α = 0 by hand-built 3x4 system
    let basis: Vec<(usize, usize)> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
    let xi = VectorField::euler(2);
    let images: Vec<Form> = basis
        .iter()
        .map(|&(i, j)| contract(&xi, &Form::term(MultiIndex::new(vec![j]).unwrap(), LaurentPoly::var(2, i))).unwrap())
        .collect();
    // images are functions x_i x_j; kernel = combinations cancelling on x0², x0x1, x1²
    let mono = |f: &Form, e: [i32; 2]| f.coeff(&MultiIndex::empty()).coeff(&e);
    let mut kernel = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    let w = [a, b, c, d];
                    let ok = [[2, 0], [1, 1], [0, 2]].iter().all(|e| {
                        images.iter().zip(&w).fold(Scalar::zero(), |acc, (f, &k)| acc + mono(f, *e) * Scalar::from_int(k)).is_zero()
                    });
                    if ok && w != [0, 0, 0, 0] {
                        kernel.push(w);
                    }
                }
            }
        }
    }
    // one-dimensional: multiples of −x1 dx0 + x0 dx1
    assert!(kernel.iter().all(|w| w[0] == 0 && w[3] == 0 && w[1] == -w[2]));
    assert!(kernel.contains(&[0, 1, -1, 0]));
    let alpha = &Form::term(MultiIndex::new(vec![0]).unwrap(), -LaurentPoly::var(2, 1))
        + &Form::term(MultiIndex::new(vec![1]).unwrap(), LaurentPoly::var(2, 0));
    assert!(contract(&xi, &alpha).unwrap().is_zero());
}

#[test]
fn constant_forms_are_closed() {
    let c = wedge(&Form::dz(4, 0), &Form::dz(4, 3)).unwrap().scale(&(Scalar::from_int(2) + Scalar::i()));
    assert!(del_op(&c).is_zero());
}
