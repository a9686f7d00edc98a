mod common;

use common::lefschetz::*;
use common::*;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use twistform_core::atlas::*;
use twistform_core::curvature::*;
use twistform_core::structures::{construct_pn, standard_contact_pn};
use twistform_core::weight::WeightModel;
use twistform_core::{wedge, Form, MultiIndex, Scalar};

fn c(i: usize) -> ChartId {
    ChartId::single(i)
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn lefschetz_commutator_normalization() {
    // [L, Λ] = (p+q−n) on (p,q)-forms fixes the sign and scale of Λ
    for n in 1..=3 {
        let ones = vec![BigRational::one(); n];
        for p in 0..=n {
            for qd in 0..=n {
                let m = commutator_oracle(n, p, qd, &ones);
                let want = Scalar::from_int(p as i64 + qd as i64 - n as i64);
                for (i, row) in m.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        assert_eq!(v, &if i == j { want.clone() } else { Scalar::zero() }, "n={n} ({p},{qd})");
                    }
                }
            }
        }
    }
}

#[test]
fn curvature_operator_matches_oracle() {
    let mut rng = Lcg(17);
    for n in 1..=4usize {
        for trial in 0..3 {
            let mut lam: Vec<BigRational> = (0..n).map(|_| q(rng.int(-9, 9), rng.int(1, 4))).collect();
            lam.sort();
            let spec = Spectrum::new(lam.clone()).unwrap();
            for p in 0..=n {
                for qd in 0..=n {
                    let m = commutator_oracle(n, p, qd, &lam);
                    let basis = words(n, p, qd);
                    let u: Vec<Scalar> = (0..basis.len())
                        .map(|_| Scalar::from_int(rng.int(-3, 3)) + Scalar::from_int(rng.int(-3, 3)) * Scalar::i())
                        .collect();
                    let comps: BTreeMap<(MultiIndex, MultiIndex), Scalar> =
                        basis.iter().zip(&u).map(|((j, k, _), v)| ((j.clone(), k.clone()), v.clone())).collect();
                    let got = curvature_op_apply_exact(&spec, &comps).unwrap();
                    for (row, (j, k, _)) in basis.iter().enumerate() {
                        let want = (0..basis.len()).fold(Scalar::zero(), |acc, col| acc + &m[row][col] * &u[col]);
                        assert_eq!(got[&(j.clone(), k.clone())], want, "n={n} trial={trial} ({p},{qd})");
                    }
                }
            }
        }
    }
}

#[test]
fn curvature_operator_examples() {
    let spec = Spectrum::new(vec![1.0, 2.0, 3.0]).unwrap();
    let full = MultiIndex::full(3);
    let e = MultiIndex::empty();
    assert_eq!(curvature_factor(&spec, &full, &e).unwrap(), 0.0);
    assert_eq!(curvature_factor(&spec, &e, &e).unwrap(), -6.0);
    let dz1 = MultiIndex::new(vec![0]).unwrap();
    let comps = BTreeMap::from([((dz1.clone(), e.clone()), Complex64::new(1.0, 0.0))]);
    let out = curvature_op_apply(&spec, &comps).unwrap();
    assert_eq!(out[&(dz1, e.clone())], Complex64::new(-5.0, 0.0));
    let bad = BTreeMap::from([((MultiIndex::new(vec![3]).unwrap(), e), Complex64::new(1.0, 0.0))]);
    assert!(matches!(curvature_op_apply(&spec, &bad), Err(CurvatureError::IndexOutOfRange { .. })));
}

#[test]
fn m_positive_matches_subset_enumeration() {
    let mut rng = Lcg(5);
    for trial in 0..500 {
        let n = 1 + trial % 12;
        let v: Vec<i64> = (0..n).map(|_| rng.int(-6, 6)).collect();
        let spec = Spectrum::new(v.iter().map(|&x| x as f64).collect()).unwrap();
        let exact = Spectrum::new(v.iter().map(|&x| q(x, 1)).collect()).unwrap();
        let mut min = vec![i64::MAX; n + 1];
        for mask in 1u32..(1 << n) {
            let size = mask.count_ones() as usize;
            let s: i64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).sum();
            min[size] = min[size].min(s);
        }
        for m in 1..=n {
            let brute = min[m] >= 0;
            assert_eq!(m_positive(&spec, m).unwrap(), brute, "{v:?} m={m}");
            assert_eq!(m_positive(&exact, m).unwrap(), brute);
        }
        assert!(m_positive(&spec, n + 1).is_err());
    }
}

#[test]
fn pairing_examples() {
    let one = Spectrum::new(vec![1.0, 1.0, 1.0]).unwrap();
    let g = BTreeMap::from([(MultiIndex::new(vec![0]).unwrap(), Complex64::new(1.0, 0.0))]);
    assert_eq!(contact_pairing_value(&one, &g, 1).unwrap(), -2.0);
    let zero = Spectrum::new(vec![0.0; 3]).unwrap();
    assert_eq!(contact_pairing_value(&zero, &g, 1).unwrap(), 0.0);
    assert!(contact_pairing_value(&one, &g, 2).is_err());
}

#[test]
fn pairing_sign_iff_dual_positivity() {
    let mut rng = Lcg(23);
    for trial in 0..200 {
        let n = 2 + trial % 5;
        let p = trial % n;
        if p == 0 {
            continue;
        }
        let v: Vec<i64> = (0..n).map(|_| rng.int(-5, 5)).collect();
        let spec = Spectrum::new(v.iter().map(|&x| q(x, 1)).collect()).unwrap();
        let all_nonneg = MultiIndex::all(n, p).into_iter().all(|j| {
            let g = BTreeMap::from([(j, Scalar::one())]);
            contact_pairing_value_exact(&spec, &g, p).unwrap() >= BigRational::zero()
        });
        let dual = m_positive(&spec.negated(), n - p).unwrap();
        assert_eq!(all_nonneg, dual, "{v:?} p={p}");
        if dual {
            let g: BTreeMap<MultiIndex, Scalar> = MultiIndex::all(n, p)
                .into_iter()
                .map(|j| (j, Scalar::from_int(rng.int(-3, 3)) + Scalar::from_int(rng.int(-3, 3)) * Scalar::i()))
                .collect();
            assert!(contact_pairing_value_exact(&spec, &g, p).unwrap() >= BigRational::zero());
        }
    }
}

fn random_hermitian(rng: &mut Lcg, n: usize, positive: bool) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.int(-4, 4) as f64, rng.int(-4, 4) as f64) / 4.0);
    if positive {
        &a * a.adjoint() + DMatrix::identity(n, n)
    } else {
        (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
    }
}

#[test]
fn point_frame_spectrum_solves_generalized_problem() {
    let mut rng = Lcg(41);
    for n in 1..=5 {
        let m = random_hermitian(&mut rng, n, true);
        let h = random_hermitian(&mut rng, n, false);
        let f = PointFrame::new(vec![], m.clone(), h.clone(), None).unwrap();
        let spec = f.spectrum();
        assert_eq!(spec.len(), n);
        for &l in spec.values() {
            let d = (&h - &m * Complex64::new(l, 0.0)).determinant().norm();
            assert!(d < 1e-8 * (1.0 + h.norm()).powi(n as i32), "n={n} λ={l} det={d}");
        }
        let trace: f64 = spec.values().iter().sum();
        let sc = scalar_curvature(&f).unwrap();
        assert!((sc - trace / (2.0 * std::f64::consts::PI)).abs() < 1e-10 * (1.0 + trace.abs()));
    }
}

#[test]
fn point_frame_validation() {
    let id = DMatrix::<Complex64>::identity(2, 2);
    let neg = -id.clone();
    assert!(matches!(PointFrame::new(vec![], neg, id.clone(), None), Err(CurvatureError::NotPositiveDefinite)));
    let mut skew = id.clone();
    skew[(0, 1)] = Complex64::new(1.0, 0.0);
    assert!(matches!(PointFrame::new(vec![], id.clone(), skew, None), Err(CurvatureError::NotHermitian)));
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0)]));
    let f = PointFrame::new(vec![], id.clone(), diag, None).unwrap();
    assert!((scalar_curvature(&f).unwrap() - 4.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
    let f = PointFrame::new(vec![], id.clone(), DMatrix::zeros(2, 2), None).unwrap();
    assert_eq!(scalar_curvature(&f).unwrap(), 0.0);
    assert!(Spectrum::new(vec![1.0, f64::NAN]).is_err());
}

#[test]
fn fs_frame_examples() {
    let origin = vec![Complex64::new(0.0, 0.0); 3];
    let f = fs_frame(3, 2, &origin).unwrap();
    assert!((&f.frame.curvature - DMatrix::<Complex64>::identity(3, 3) * Complex64::new(2.0, 0.0)).norm() < 1e-15);
    assert!(f.dphi.iter().all(|x| x.norm() == 0.0));
    let pt = points(c(0), 3, 1, 3)[0].to_complex();
    let f = fs_frame(3, 0, &pt).unwrap();
    assert!(f.frame.curvature.norm() == 0.0 && f.dphi.iter().all(|x| x.norm() == 0.0));
    for k in 1..=3 {
        let f = fs_frame(3, k, &pt).unwrap();
        let eig = f.frame.curvature.clone().symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|&e| e > 0.0));
        // curvature is k times the metric
        assert!(f.frame.spectrum().values().iter().all(|&l| (l - k as f64).abs() < 1e-12));
    }
}

#[test]
fn fs_scalar_curvature_is_constant() {
    // h² the FS metric on O(n+1), n = 3
    let vals: Vec<f64> = points(c(0), 3, 20, 12)
        .iter()
        .map(|p| scalar_curvature(&fs_frame(3, 4, &p.to_complex()).unwrap().frame).unwrap())
        .collect();
    for v in &vals {
        assert!((v - vals[0]).abs() <= 1e-9);
    }
    assert!((vals[0] - 6.0 / std::f64::consts::PI).abs() < 1e-9);
}

fn dz2(n: usize, a: usize, b: usize) -> Form {
    wedge(&Form::dz(n, a), &Form::dz(n, b)).unwrap()
}

#[test]
fn kernel_rank_examples() {
    let t = ChartModel::Torus(4);
    let ch = t.charts()[0].clone();
    let omega = &dz2(4, 0, 1) + &dz2(4, 2, 3);
    let s = make_section(t, BundleDescriptor::Trivial, 2, BTreeMap::from([(ch.clone(), omega)])).unwrap();
    for pt in points(ch.clone(), 4, 10, 1) {
        assert_eq!(kernel_rank_at(&s, &pt).unwrap(), 0);
    }
    let g = construct_pn(3).unwrap();
    let one = ChartPoint::new(c(0), vec![Scalar::one(); 3]);
    assert_eq!(kernel_rank_at(&g, &one).unwrap(), 2);
    assert_eq!(kernel_rank_at(&g.scale(&Scalar::zero()), &one).unwrap(), 3);
}

#[test]
fn kernel_rank_is_chart_independent() {
    for s in [construct_pn(3).unwrap(), standard_contact_pn(3).unwrap()] {
        for (i, pt) in points(c(0), 3, 50, 31).into_iter().enumerate() {
            let a = kernel_rank_at(&s, &pt).unwrap();
            let other = pt.transfer(s.model(), &c(1 + i % 3)).unwrap();
            assert_eq!(kernel_rank_at(&s, &other).unwrap(), a);
        }
    }
}

#[test]
fn direct_sum_examples() {
    let s = construct_pn(3).unwrap();
    let fs = WeightModel::FubiniStudy { k: 2 };
    for (i, pt) in points(c(0), 3, 50, 77).into_iter().enumerate() {
        let pt = pt.transfer(s.model(), &c(i % 4)).unwrap();
        let r = directsum_at(&s, &fs, &pt).unwrap();
        assert_eq!(r.dim_intersection, 0);
        assert_eq!(directsum_at_numeric(&s, &fs, &pt, 1e-9).unwrap(), r);
    }
    let origin = ChartPoint::new(c(0), vec![Scalar::zero(); 3]);
    assert_eq!(directsum_at(&s, &WeightModel::Flat, &origin).unwrap().dim_intersection, 0);
    let zero = s.scale(&Scalar::zero());
    assert_eq!(directsum_at(&zero, &fs, &origin).unwrap().dim_intersection, 3);
}
