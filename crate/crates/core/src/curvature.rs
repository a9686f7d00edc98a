//! Pointwise curvature algebra: spectra of `iΘ` relative to `ω`, the
//! curvature operator on `(J,K)` components, m-positivity, scalar
//! curvature, and contraction kernels of sections at points.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::atlas::{ChartPoint, Section};
use crate::error::AlgebraError;
use crate::form::{del_op, Form, MultiIndex};
use crate::linalg::{numeric_rank, rank};
use crate::numeric::NumForm;
use crate::scalar::Scalar;
use crate::structures::StructureError;
use crate::weight::WeightModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("multi-index out of range for n = {n}")]
    IndexOutOfRange { n: usize },
    #[error("m = {m} outside 1..={n}")]
    MOutOfRange { m: usize, n: usize },
    #[error("spectrum contains NaN")]
    NotANumber,
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("degree-0 section has no contraction map")]
    DegreeZero,
    #[error("point chart not in the section's model")]
    UnknownChart,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Eigenvalues sorted ascending.
#[derive(Clone, PartialEq, Debug)]
pub struct Spectrum<T> {
    values: Vec<T>,
}

impl<T: Clone + PartialOrd> Spectrum<T> {
    pub fn new(mut values: Vec<T>) -> Result<Self, CurvatureError> {
        if values.iter().any(|v| v.partial_cmp(v).is_none()) {
            return Err(CurvatureError::NotANumber);
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        Ok(Spectrum { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<T: Clone + PartialOrd + core::ops::Neg<Output = T>> Spectrum<T> {
    /// Spectrum of the dual bundle, `−λ`, re-sorted.
    pub fn negated(&self) -> Self {
        Spectrum::new(self.values.iter().rev().map(|v| -v.clone()).collect()).unwrap()
    }
}

fn check_index(idx: &MultiIndex, n: usize) -> Result<(), CurvatureError> {
    if idx.as_slice().iter().any(|&i| i >= n) {
        return Err(CurvatureError::IndexOutOfRange { n });
    }
    Ok(())
}

/// `Σ_{j∈J} λ_j + Σ_{k∈K} λ_k − Σ_l λ_l`.
pub fn curvature_factor<T>(spec: &Spectrum<T>, j: &MultiIndex, k: &MultiIndex) -> Result<T, CurvatureError>
where
    T: Clone + Zero + Add<Output = T> + Sub<Output = T>,
{
    let n = spec.values.len();
    check_index(j, n)?;
    check_index(k, n)?;
    let sum = |idx: &[usize]| idx.iter().fold(T::zero(), |a, &i| a + spec.values[i].clone());
    let all = spec.values.iter().cloned().fold(T::zero(), |a, b| a + b);
    Ok(sum(j.as_slice()) + sum(k.as_slice()) - all)
}

/// Applies the diagonalized curvature operator to `(J,K)` components.
pub fn curvature_op_apply(
    spec: &Spectrum<f64>,
    components: &BTreeMap<(MultiIndex, MultiIndex), Complex64>,
) -> Result<BTreeMap<(MultiIndex, MultiIndex), Complex64>, CurvatureError> {
    let mut out = BTreeMap::new();
    for ((j, k), u) in components {
        let f = curvature_factor(spec, j, k)?;
        out.insert((j.clone(), k.clone()), u * f);
    }
    Ok(out)
}

/// Exact variant over rational spectra and Gaussian-rational components.
pub fn curvature_op_apply_exact(
    spec: &Spectrum<num_rational::BigRational>,
    components: &BTreeMap<(MultiIndex, MultiIndex), Scalar>,
) -> Result<BTreeMap<(MultiIndex, MultiIndex), Scalar>, CurvatureError> {
    let mut out = BTreeMap::new();
    for ((j, k), u) in components {
        let f = Scalar::from_rational(curvature_factor(spec, j, k)?);
        out.insert((j.clone(), k.clone()), u * &f);
    }
    Ok(out)
}

/// Sum of the `m` smallest eigenvalues is nonnegative.
pub fn m_positive<T>(spec: &Spectrum<T>, m: usize) -> Result<bool, CurvatureError>
where
    T: Clone + Zero + PartialOrd + Add<Output = T>,
{
    let n = spec.values.len();
    if m == 0 || m > n {
        return Err(CurvatureError::MOutOfRange { m, n });
    }
    let s = spec.values[..m].iter().cloned().fold(T::zero(), |a, b| a + b);
    Ok(s >= T::zero())
}

/// `−Σ_J λ_{C_J} |Γ_J|²`, `C_J` the complement of `J`.
pub fn contact_pairing_value(
    spec: &Spectrum<f64>,
    gamma: &BTreeMap<MultiIndex, Complex64>,
    p: usize,
) -> Result<f64, CurvatureError> {
    let n = spec.values.len();
    let mut acc = 0.0;
    for (j, g) in gamma {
        check_index(j, n)?;
        if j.len() != p {
            return Err(CurvatureError::Dimension("component degree differs from p"));
        }
        let lc: f64 = j.complement(n).as_slice().iter().map(|&i| spec.values[i]).sum();
        acc -= lc * g.norm_sqr();
    }
    Ok(acc)
}

/// Exact variant of [`contact_pairing_value`].
pub fn contact_pairing_value_exact(
    spec: &Spectrum<num_rational::BigRational>,
    gamma: &BTreeMap<MultiIndex, Scalar>,
    p: usize,
) -> Result<num_rational::BigRational, CurvatureError> {
    let n = spec.values.len();
    let mut acc = num_rational::BigRational::zero();
    for (j, g) in gamma {
        check_index(j, n)?;
        if j.len() != p {
            return Err(CurvatureError::Dimension("component degree differs from p"));
        }
        let lc = j
            .complement(n)
            .as_slice()
            .iter()
            .fold(num_rational::BigRational::zero(), |a, &i| a + &spec.values[i]);
        acc -= lc * g.norm_sqr();
    }
    Ok(acc)
}

/// Metric and curvature matrices at a point: `ω = Σ M_{jk} i dz_j∧dz̄_k`,
/// `iΘ = Σ H_{jk} i dz_j∧dz̄_k`.
#[derive(Clone, PartialEq, Debug)]
pub struct PointFrame {
    pub point: Vec<Complex64>,
    pub metric: DMatrix<Complex64>,
    pub curvature: DMatrix<Complex64>,
    pub weight: Option<WeightModel>,
}

fn is_hermitian(m: &DMatrix<Complex64>) -> bool {
    let scale = m.iter().map(|x| x.norm()).fold(1.0f64, f64::max);
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= 1e-12 * scale))
}

impl PointFrame {
    pub fn new(
        point: Vec<Complex64>,
        metric: DMatrix<Complex64>,
        curvature: DMatrix<Complex64>,
        weight: Option<WeightModel>,
    ) -> Result<Self, CurvatureError> {
        let n = metric.nrows();
        if metric.ncols() != n || curvature.nrows() != n || curvature.ncols() != n {
            return Err(CurvatureError::Dimension("metric and curvature must be square of equal size"));
        }
        if !point.is_empty() && point.len() != n {
            return Err(CurvatureError::Dimension("point length differs from matrix size"));
        }
        if !is_hermitian(&metric) || !is_hermitian(&curvature) {
            return Err(CurvatureError::NotHermitian);
        }
        // complex Cholesky takes square roots of any diagonal, so test eigenvalues
        if !metric.clone().symmetric_eigen().eigenvalues.iter().all(|&e| e > 0.0) {
            return Err(CurvatureError::NotPositiveDefinite);
        }
        Ok(PointFrame { point, metric, curvature, weight })
    }

    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }

    /// Eigenvalues of the curvature relative to the metric
    /// (`H v = λ M v`), via `L⁻¹ H L^{−*}` with `M = L L^*`.
    pub fn spectrum(&self) -> Spectrum<f64> {
        let chol = self.metric.clone().cholesky().expect("checked at construction");
        let l = chol.l();
        let linv = l.clone().try_inverse().expect("Cholesky factor is invertible");
        let a = &linv * &self.curvature * linv.adjoint();
        // symmetrize against rounding before the Hermitian solver
        let a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = a.symmetric_eigen();
        Spectrum::new(eig.eigenvalues.iter().cloned().collect()).expect("finite eigenvalues")
    }
}

/// `(1/2π)·tr(M⁻¹ H)`.
pub fn scalar_curvature(frame: &PointFrame) -> Result<f64, CurvatureError> {
    if !frame.metric.clone().symmetric_eigen().eigenvalues.iter().all(|&e| e > 0.0) {
        return Err(CurvatureError::NotPositiveDefinite);
    }
    let inv = frame.metric.clone().cholesky().ok_or(CurvatureError::NotPositiveDefinite)?.inverse();
    let t = (inv * &frame.curvature).trace();
    Ok(t.re / (2.0 * core::f64::consts::PI))
}

/// Fubini–Study data at a chart point of ℙⁿ.
#[derive(Clone, PartialEq, Debug)]
pub struct FsFrame {
    /// Metric `ω_FS`, curvature `k·ω_FS`.
    pub frame: PointFrame,
    /// `∂φ` coefficients for `φ = k·log(1+|z|²)`.
    pub dphi: Vec<Complex64>,
}

pub fn fs_frame(n: usize, k: i64, point: &[Complex64]) -> Result<FsFrame, CurvatureError> {
    if point.len() != n {
        return Err(CurvatureError::Dimension("point length differs from n"));
    }
    let mask = vec![true; n];
    let metric = WeightModel::FubiniStudy { k: 1 }.ddbar(point, &mask);
    let w = WeightModel::FubiniStudy { k };
    let curvature = w.ddbar(point, &mask);
    let frame = PointFrame::new(point.to_vec(), metric, curvature, Some(w))?;
    Ok(FsFrame { frame, dphi: w.dphi(point, &mask) })
}

/// Rows of the map `ξ ↦ ξ⌟ω` for a constant q-form `ω` (q ≥ 1).
fn contraction_rows<T: Clone + Zero + core::ops::Neg<Output = T>>(
    n: usize,
    omega: &BTreeMap<MultiIndex, T>,
) -> Vec<Vec<T>> {
    let mut row_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (idx, c) in omega {
        for (k, &i) in idx.as_slice().iter().enumerate() {
            let mut rest = idx.as_slice().to_vec();
            rest.remove(k);
            let next = rows.len();
            let r = *row_of.entry(rest).or_insert(next);
            if r == rows.len() {
                rows.push(vec![T::zero(); n]);
            }
            let v = if k % 2 == 1 { -c.clone() } else { c.clone() };
            rows[r][i] = v;
        }
    }
    rows
}

fn chart_form<'a>(s: &'a Section, pt: &ChartPoint) -> Result<&'a Form, CurvatureError> {
    s.chart_form(&pt.chart).ok_or(CurvatureError::UnknownChart)
}

/// Dimension of `{ξ : ξ⌟Γ = 0}` at a point, exact.
pub fn kernel_rank_at(s: &Section, pt: &ChartPoint) -> Result<usize, CurvatureError> {
    let g = chart_form(s, pt)?;
    if g.degree() == 0 {
        return Err(CurvatureError::DegreeZero);
    }
    let n = g.nvars();
    let vals = g.eval_exact(&pt.coords)?;
    Ok(n - rank(&contraction_rows(n, &vals), n))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DirectSumReport {
    /// `dim ker(ξ⌟Γ)`.
    pub dim_f: usize,
    /// `dim ker(ξ⌟D'_hΓ)`.
    pub dim_g: usize,
    pub dim_intersection: usize,
}

/// Exact `D'_hΓ = ∂Γ − ∂φ∧Γ` at a Gaussian-rational point.
fn dprime_exact(s: &Section, g: &Form, weight: &WeightModel, pt: &ChartPoint) -> Result<BTreeMap<MultiIndex, Scalar>, CurvatureError> {
    let n = g.nvars();
    let mask = s.model().projective_mask();
    let a = weight.dphi_exact(&pt.coords, &mask);
    let gam = g.eval_exact(&pt.coords)?;
    let mut out = del_op(g).eval_exact(&pt.coords)?;
    if g.degree() < n {
        for (j, aj) in a.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            for (idx, c) in &gam {
                if let Some((odd, merged)) = crate::numeric::merge_sign(&[j], idx.as_slice()) {
                    let key = MultiIndex::new(merged).unwrap();
                    let v = aj * c;
                    let e = out.entry(key).or_insert_with(Scalar::zero);
                    // subtract ∂φ∧Γ
                    if odd {
                        *e += &v;
                    } else {
                        *e -= &v;
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
    }
    Ok(out)
}

/// Dimensions of `F = ker(ξ⌟Γ)`, `G = ker(ξ⌟D'_hΓ)` and `F∩G`, exact.
pub fn directsum_at(s: &Section, weight: &WeightModel, pt: &ChartPoint) -> Result<DirectSumReport, CurvatureError> {
    let g = chart_form(s, pt)?;
    if g.degree() == 0 {
        return Err(CurvatureError::DegreeZero);
    }
    let n = g.nvars();
    let f_rows = contraction_rows(n, &g.eval_exact(&pt.coords)?);
    let g_rows = if g.degree() < n { contraction_rows(n, &dprime_exact(s, g, weight, pt)?) } else { Vec::new() };
    let mut both = f_rows.clone();
    both.extend(g_rows.iter().cloned());
    Ok(DirectSumReport {
        dim_f: n - rank(&f_rows, n),
        dim_g: n - rank(&g_rows, n),
        dim_intersection: n - rank(&both, n),
    })
}

/// Floating-point counterpart of [`directsum_at`] with a relative
/// singular-value threshold.
pub fn directsum_at_numeric(
    s: &Section,
    weight: &WeightModel,
    pt: &ChartPoint,
    rel_tol: f64,
) -> Result<DirectSumReport, CurvatureError> {
    let g = chart_form(s, pt)?;
    if g.degree() == 0 {
        return Err(CurvatureError::DegreeZero);
    }
    let n = g.nvars();
    let z = pt.to_complex();
    let gam = g.eval_at(&z)?;
    let mut dprime = del_op(g).eval_at(&z)?;
    if g.degree() < n {
        let a = weight.dphi(&z, &s.model().projective_mask());
        let mut dphi = NumForm::zero(n);
        for (j, v) in a.into_iter().enumerate() {
            dphi.add_term(vec![j], v);
        }
        dprime = dprime.sub(&dphi.wedge(&gam));
    }
    let to_map = |f: &NumForm| -> BTreeMap<MultiIndex, Complex64> {
        f.terms.iter().map(|(k, v)| (MultiIndex::new(k.clone()).unwrap(), *v)).collect()
    };
    let to_mat = |rows: &[Vec<Complex64>]| DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let f_rows = contraction_rows(n, &to_map(&gam));
    let g_rows = if g.degree() < n { contraction_rows(n, &to_map(&dprime)) } else { Vec::new() };
    let mut both = f_rows.clone();
    both.extend(g_rows.iter().cloned());
    Ok(DirectSumReport {
        dim_f: n - numeric_rank(&to_mat(&f_rows), rel_tol),
        dim_g: n - numeric_rank(&to_mat(&g_rows), rel_tol),
        dim_intersection: n - numeric_rank(&to_mat(&both), rel_tol),
    })
}
