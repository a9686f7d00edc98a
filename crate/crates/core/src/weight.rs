//! Local weights `φ` of fibre metrics `h = e^{-φ}`.
//!
//! The Fubini–Study weight `k·log(1+Σ|z_j|²)` only involves the variables
//! selected by a mask (the projective factor of a chart); torus variables
//! carry the flat metric.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum WeightModel {
    Flat,
    FubiniStudy { k: i64 },
}

fn masked_norm_sqr(point: &[Complex64], mask: &[bool]) -> f64 {
    point.iter().zip(mask).filter(|(_, m)| **m).map(|(z, _)| z.norm_sqr()).sum()
}

impl WeightModel {
    fn k(&self) -> i64 {
        match self {
            WeightModel::Flat => 0,
            WeightModel::FubiniStudy { k } => *k,
        }
    }

    /// `φ` at the point.
    pub fn phi(&self, point: &[Complex64], mask: &[bool]) -> f64 {
        let k = self.k();
        if k == 0 {
            return 0.0;
        }
        k as f64 * num_traits::Float::ln_1p(masked_norm_sqr(point, mask))
    }

    /// Coefficients of `∂φ = Σ a_j dz_j`: `a_j = k·z̄_j/(1+|z|²)`.
    pub fn dphi(&self, point: &[Complex64], mask: &[bool]) -> Vec<Complex64> {
        let k = self.k() as f64;
        let s = 1.0 + masked_norm_sqr(point, mask);
        point
            .iter()
            .zip(mask)
            .map(|(z, m)| if *m && k != 0.0 { z.conj() * (k / s) } else { Complex64::new(0.0, 0.0) })
            .collect()
    }

    /// Exact `∂φ` coefficients at a Gaussian-rational point.
    pub fn dphi_exact(&self, point: &[Scalar], mask: &[bool]) -> Vec<Scalar> {
        let k = self.k();
        if k == 0 {
            return vec![Scalar::zero(); point.len()];
        }
        let mut s = BigRational::one();
        for (z, m) in point.iter().zip(mask) {
            if *m {
                s += z.norm_sqr();
            }
        }
        let f = Scalar::from_rational(BigRational::from_integer(k.into()) / s);
        point
            .iter()
            .zip(mask)
            .map(|(z, m)| if *m { &z.conj() * &f } else { Scalar::zero() })
            .collect()
    }

    /// `H` with `i∂∂̄φ = Σ H_{jl} i dz_j∧dz̄_l`:
    /// `H_{jl} = k(δ_{jl}(1+|z|²) − z̄_j z_l)/(1+|z|²)²` on masked variables.
    pub fn ddbar(&self, point: &[Complex64], mask: &[bool]) -> DMatrix<Complex64> {
        let n = point.len();
        let k = self.k() as f64;
        let s = 1.0 + masked_norm_sqr(point, mask);
        DMatrix::from_fn(n, n, |j, l| {
            if !(mask[j] && mask[l]) || k == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let delta = if j == l { s } else { 0.0 };
            (Complex64::new(delta, 0.0) - point[j].conj() * point[l]) * (k / (s * s))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fs_at_origin() {
        let z = vec![Complex64::new(0.0, 0.0); 3];
        let m = vec![true; 3];
        let w = WeightModel::FubiniStudy { k: 4 };
        assert_eq!(w.phi(&z, &m), 0.0);
        assert!(w.dphi(&z, &m).iter().all(|a| a.norm() == 0.0));
        let h = w.ddbar(&z, &m);
        assert_eq!(h, DMatrix::identity(3, 3) * Complex64::new(4.0, 0.0));
    }

    #[test]
    fn exact_gradient_matches_float() {
        let pt = vec![Scalar::ratio(1, 2), Scalar::from_int(1) + Scalar::i()];
        let m = vec![true, true];
        let w = WeightModel::FubiniStudy { k: 3 };
        let ex = w.dphi_exact(&pt, &m);
        let fl = w.dphi(&pt.iter().map(Scalar::to_complex64).collect::<Vec<_>>(), &m);
        for (a, b) in ex.iter().zip(&fl) {
            assert!((a.to_complex64() - b).norm() < 1e-15);
        }
    }
}
