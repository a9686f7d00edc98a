//! p-contact and s-symplectic structures: verification, constructions,
//! the quadratic map `T`, and pointwise checks against fibre weights.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::atlas::{
    make_section, pullback, AtlasError, BundleDescriptor, ChartId, ChartModel, ChartPoint, Section,
};
use crate::error::AlgebraError;
use crate::form::{del_op, wedge, wedge_power, Form, MultiIndex};
use crate::laurent::LaurentPoly;
use crate::numeric::NumForm;
use crate::scalar::Scalar;
use crate::weight::WeightModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("section gluing is not verified")]
    NotGlueVerified,
    #[error("parity: {0}")]
    Parity(String),
    #[error("dimension: {0}")]
    Dimension(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("chart {chart}: top coefficient {witness} is not constant")]
    NonConstantTop { chart: ChartId, witness: LaurentPoly },
    #[error("point chart {0} not in the section's model")]
    UnknownChart(ChartId),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Structure {
    PContact,
    SSymplectic,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FailReason {
    ZeroTopForm,
    /// The native chart coefficient has negative exponents.
    NotPolynomial,
    NonConstantTopForm,
}

impl FailReason {
    pub fn label(&self) -> &'static str {
        match self {
            FailReason::ZeroTopForm => "zero top form",
            FailReason::NotPolynomial => "top coefficient not polynomial",
            FailReason::NonConstantTopForm => "top coefficient not constant",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Holds(Structure),
    Fails { reason: FailReason, chart: ChartId, witness: LaurentPoly },
}

/// Degree/dimension bookkeeping attached to every report.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ParityRecord {
    pub degree: usize,
    pub dim: usize,
    /// `p` odd for p-contact, `s` even for s-symplectic.
    pub degree_parity_ok: bool,
    pub dim_mod4: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureReport {
    pub structure: Structure,
    pub verdict: Verdict,
    pub top_form_constants: BTreeMap<ChartId, Scalar>,
    pub parity: ParityRecord,
    /// `L² ≅ −K`: on each projective factor ℙᵐ with O(k), `2k = m+1`.
    pub bundle_root_check: bool,
    /// Charts whose form has negative exponents (poles off the chart's
    /// coordinate hyperplanes). Reported, not part of the verdict.
    pub pole_charts: Vec<ChartId>,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Holds(_))
    }
}

/// Whether `L²` is the anticanonical bundle on the model.
pub fn bundle_root_check(model: &ChartModel, bundle: &BundleDescriptor) -> bool {
    match (model, bundle) {
        (ChartModel::Projective(m), BundleDescriptor::Twist(k)) => 2 * k == *m as i64 + 1,
        (ChartModel::Projective(_), BundleDescriptor::Trivial) => false,
        (ChartModel::Torus(_), BundleDescriptor::Trivial) => true,
        (ChartModel::Product(a, b), BundleDescriptor::Product(x, y)) => {
            bundle_root_check(a, x) && bundle_root_check(b, y)
        }
        _ => false,
    }
}

fn decide_top(top: LaurentPoly) -> Result<Scalar, (FailReason, LaurentPoly)> {
    if top.is_zero() {
        return Err((FailReason::ZeroTopForm, top));
    }
    if !top.is_polynomial() {
        return Err((FailReason::NotPolynomial, top));
    }
    match top.as_constant() {
        Some(c) => Ok(c),
        None => Err((FailReason::NonConstantTopForm, top)),
    }
}

fn top_report<F>(s: &Section, structure: Structure, parity: ParityRecord, mut top: F) -> Result<StructureReport, StructureError>
where
    F: FnMut(&Form) -> Result<Form, AlgebraError>,
{
    let mut constants = BTreeMap::new();
    let mut verdict = Verdict::Holds(structure);
    for (c, g) in s.chart_forms() {
        let t = top(g)?.top_coefficient().expect("top degree");
        match decide_top(t) {
            Ok(v) => {
                constants.insert(c.clone(), v);
            }
            Err((reason, witness)) => {
                if matches!(verdict, Verdict::Holds(_)) {
                    verdict = Verdict::Fails { reason, chart: c.clone(), witness };
                }
            }
        }
    }
    Ok(StructureReport {
        structure,
        verdict,
        top_form_constants: constants,
        parity,
        bundle_root_check: bundle_root_check(s.model(), s.bundle()),
        pole_charts: s
            .chart_forms()
            .iter()
            .filter(|(_, g)| g.coeffs().values().any(|f| !f.is_polynomial()))
            .map(|(c, _)| c.clone())
            .collect(),
    })
}

/// `Γ∧∂Γ` for a chart form.
pub fn contact_top(g: &Form) -> Result<Form, AlgebraError> {
    wedge(g, &del_op(g))
}

/// Decides whether a glued section is a p-contact structure: each chart's
/// `Γ_α∧∂Γ_α` must have a nonzero constant coefficient.
pub fn is_p_contact(s: &Section) -> Result<StructureReport, StructureError> {
    let p = s.degree();
    let n = s.model().dim();
    if n != 2 * p + 1 {
        return Err(StructureError::Dimension(alloc::format!(
            "degree {} needs dimension {}, model has {}",
            p,
            2 * p + 1,
            n
        )));
    }
    if p.is_multiple_of(2) {
        return Err(StructureError::Parity(alloc::format!("p = {} is even, so n = {} is not 3 mod 4", p, n)));
    }
    if !s.is_glue_verified() {
        return Err(StructureError::NotGlueVerified);
    }
    let parity = ParityRecord { degree: p, dim: n, degree_parity_ok: true, dim_mod4: n % 4 };
    top_report(s, Structure::PContact, parity, contact_top)
}

/// Decides whether a glued section is an s-symplectic structure via `Ω∧Ω`.
pub fn is_s_symplectic(s: &Section) -> Result<StructureReport, StructureError> {
    let deg = s.degree();
    let n = s.model().dim();
    if n != 2 * deg {
        return Err(StructureError::Dimension(alloc::format!(
            "degree {} needs dimension {}, model has {}",
            deg,
            2 * deg,
            n
        )));
    }
    if deg % 2 == 1 {
        return Err(StructureError::Parity(alloc::format!("s = {} is odd, so Ω∧Ω vanishes identically", deg)));
    }
    if !s.is_glue_verified() {
        return Err(StructureError::NotGlueVerified);
    }
    let parity = ParityRecord { degree: deg, dim: n, degree_parity_ok: true, dim_mod4: n % 4 };
    top_report(s, Structure::SSymplectic, parity, |g| wedge(g, g))
}

fn verified(s: Section) -> Result<Section, StructureError> {
    let (s, cert) = s.verify_gluing();
    match cert.first_failure() {
        None => Ok(s),
        Some(o) => Err(StructureError::Precondition(alloc::format!(
            "constructed section fails to glue on overlap {} -> {}",
            o.from,
            o.to
        ))),
    }
}

/// The explicit O(p+1)-valued p-contact structure on ℙⁿ, `n = 2p+1`, p odd.
///
/// Chart 0 carries `z_n dz_1∧…∧dz_p + dz_{p+1}∧…∧dz_{n−1}`; chart α is
/// obtained by pulling back to chart α and multiplying by `(z_0^{(α)})^{p+1}`.
pub fn construct_pn(n: usize) -> Result<Section, StructureError> {
    if n % 4 != 3 {
        return Err(StructureError::Parity(alloc::format!(
            "n = {} is not 3 mod 4, so p = (n-1)/2 is not odd",
            n
        )));
    }
    let p = (n - 1) / 2;
    let model = ChartModel::Projective(n);
    let first = MultiIndex::new((0..p).collect()).unwrap();
    let second = MultiIndex::new((p..n - 1).collect()).unwrap();
    let g0 = &Form::term(first, LaurentPoly::var(n, n - 1)) + &Form::term(second, LaurentPoly::one(n));
    let c0 = ChartId::single(0);
    let mut forms = BTreeMap::new();
    for c in model.charts() {
        let f = if c == c0 {
            g0.clone()
        } else {
            // z_0 is the first variable of every chart α ≥ 1
            let mut e = vec![0; n];
            e[0] = (p + 1) as i32;
            pullback(&g0, &c0, &c, &model)?.mul_poly(&LaurentPoly::monomial(n, e, Scalar::one()))
        };
        forms.insert(c, f);
    }
    verified(make_section(model, BundleDescriptor::Twist(p as i64 + 1), p, forms)?)
}

/// `Γ = η∧(∂η)^l` for an F-valued contact form η on ℙⁿ; F^{l+1}-valued.
pub fn contact_power(eta: &Section, l: usize) -> Result<Section, StructureError> {
    if eta.degree() != 1 {
        return Err(StructureError::Precondition(alloc::format!("η has degree {}, expected 1", eta.degree())));
    }
    let f = match (eta.model(), eta.bundle()) {
        (ChartModel::Projective(_), BundleDescriptor::Twist(f)) => *f,
        (ChartModel::Projective(_), BundleDescriptor::Trivial) => 0,
        _ => return Err(StructureError::Precondition("η must live on a projective model".into())),
    };
    let n = eta.model().dim();
    if n != 4 * l + 3 {
        return Err(StructureError::Dimension(alloc::format!(
            "l = {} gives p = {}, needing n = {}, model has {}",
            l,
            2 * l + 1,
            4 * l + 3,
            n
        )));
    }
    if !eta.is_glue_verified() {
        return Err(StructureError::NotGlueVerified);
    }
    let out = eta.map_forms(BundleDescriptor::Twist((l as i64 + 1) * f), 2 * l + 1, |_, g| {
        Ok(wedge(g, &wedge_power(&del_op(g), l)?)?)
    })?;
    verified(out)
}

/// `Γ̃ = π*Ω ∧ Γ` on `Y × Z`, valued in the external tensor bundle.
pub fn product_structure(omega: &Section, gamma: &Section) -> Result<Section, StructureError> {
    let r = is_s_symplectic(omega)?;
    if !r.holds() {
        return Err(StructureError::Precondition("Ω∧Ω vanishes somewhere".into()));
    }
    let r = is_p_contact(gamma)?;
    if !r.holds() {
        return Err(StructureError::Precondition("Γ∧∂Γ vanishes somewhere".into()));
    }
    let model = ChartModel::Product(Box::new(omega.model().clone()), Box::new(gamma.model().clone()));
    let bundle = BundleDescriptor::Product(Box::new(omega.bundle().clone()), Box::new(gamma.bundle().clone()));
    let (dy, total) = (omega.model().dim(), model.dim());
    let mut forms = BTreeMap::new();
    for c in model.charts() {
        let (a, b) = model.split(&c).unwrap();
        let o = omega.chart_forms()[&a].lift(total, 0);
        let g = gamma.chart_forms()[&b].lift(total, dy);
        forms.insert(c, wedge(&o, &g)?);
    }
    verified(make_section(model, bundle, omega.degree() + gamma.degree(), forms)?)
}

/// Per product chart, whether `Γ̃∧∂Γ̃ = π*(Ω∧Ω) ∧ (Γ∧∂Γ)` holds exactly.
pub fn product_identity(omega: &Section, gamma: &Section, product: &Section) -> Result<Vec<(ChartId, bool)>, StructureError> {
    let model = product.model();
    let (dy, total) = (omega.model().dim(), model.dim());
    let mut out = Vec::new();
    for (c, g) in product.chart_forms() {
        let (a, b) = model.split(c).ok_or_else(|| StructureError::UnknownChart(c.clone()))?;
        let o = &omega.chart_forms()[&a];
        let z = &gamma.chart_forms()[&b];
        let lhs = contact_top(g)?;
        let rhs = wedge(&wedge(o, o)?.lift(total, 0), &contact_top(z)?.lift(total, dy))?;
        out.push((c.clone(), lhs == rhs));
    }
    Ok(out)
}

/// The homogeneous standard contact form `Σ x_{2i}dx_{2i+1} − x_{2i+1}dx_{2i}`
/// on ℂ^{n+1}, as an O(2)-valued section on ℙⁿ (n odd).
pub fn standard_contact_pn(n: usize) -> Result<Section, StructureError> {
    if n.is_multiple_of(2) {
        return Err(StructureError::Parity(alloc::format!("n = {} is even", n)));
    }
    let m = n + 1;
    let mut eta = Form::zero(m, 1);
    for i in 0..m / 2 {
        let (a, b) = (2 * i, 2 * i + 1);
        eta = &eta + &Form::term(MultiIndex::new(vec![b]).unwrap(), LaurentPoly::var(m, a));
        eta = &eta - &Form::term(MultiIndex::new(vec![a]).unwrap(), LaurentPoly::var(m, b));
    }
    let s = crate::cohomology::section_from_homogeneous(&eta, 2)
        .map_err(|e| StructureError::Precondition(alloc::format!("{}", e)))?;
    verified(s)
}

/// Symmetric matrix of a quadratic form on coefficient vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticForm {
    pub dim: usize,
    pub matrix: Vec<Vec<Scalar>>,
}

impl QuadraticForm {
    /// `cᵀ M c` (no conjugation: `T` is holomorphic).
    pub fn eval(&self, c: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.dim {
            if c[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                acc += &(&(&c[i] * &self.matrix[i][j]) * &c[j]);
            }
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }
}

/// `T(Γ)`: the constant coefficient of `Γ_0∧∂Γ_0` on chart 0.
pub fn t_of_chart_form(g: &Form) -> Result<Scalar, StructureError> {
    let top = contact_top(g)?.top_coefficient().ok_or_else(|| {
        StructureError::Dimension("chart form is not of contact type".into())
    })?;
    top.as_constant().ok_or(StructureError::NonConstantTop { chart: ChartId::single(0), witness: top })
}

pub fn t_value(s: &Section) -> Result<Scalar, StructureError> {
    let p = s.degree();
    match (s.model(), s.bundle()) {
        (ChartModel::Projective(n), BundleDescriptor::Twist(k)) if *n == 2 * p + 1 && *k == p as i64 + 1 => {}
        _ => return Err(StructureError::Precondition("T needs a degree-p section of O(p+1) on P^(2p+1)".into())),
    }
    t_of_chart_form(&s.chart_forms()[&ChartId::single(0)])
}

/// Polarization of `T` on the span of `basis`.
pub fn quadratic_t(basis: &[Section]) -> Result<QuadraticForm, StructureError> {
    let c0 = ChartId::single(0);
    let mut diag = Vec::with_capacity(basis.len());
    for s in basis {
        if !s.is_glue_verified() {
            return Err(StructureError::NotGlueVerified);
        }
        diag.push(t_value(s)?);
    }
    let d = basis.len();
    let half = Scalar::ratio(1, 2);
    let mut matrix = vec![vec![Scalar::zero(); d]; d];
    for i in 0..d {
        matrix[i][i] = diag[i].clone();
        for j in i + 1..d {
            let sum = &basis[i].chart_forms()[&c0] + &basis[j].chart_forms()[&c0];
            let b = &(&(&t_of_chart_form(&sum)? - &diag[i]) - &diag[j]) * &half;
            matrix[i][j] = b.clone();
            matrix[j][i] = b;
        }
    }
    Ok(QuadraticForm { dim: d, matrix })
}

/// Evaluated data of a section at a chart point.
struct PointData {
    n: usize,
    gamma: NumForm,
    dgamma: NumForm,
    dphi: NumForm,
    dphi_raw: Vec<Complex64>,
    phi: f64,
    degree: usize,
}

fn point_data(s: &Section, weight: &WeightModel, pt: &ChartPoint) -> Result<PointData, StructureError> {
    let g = s.chart_form(&pt.chart).ok_or_else(|| StructureError::UnknownChart(pt.chart.clone()))?;
    let z = pt.to_complex();
    let mask = s.model().projective_mask();
    let n = g.nvars();
    let dphi_raw = weight.dphi(&z, &mask);
    let mut dphi = NumForm::zero(n);
    for (j, a) in dphi_raw.iter().enumerate() {
        if a.norm() != 0.0 {
            dphi.add_term(vec![j], *a);
        }
    }
    Ok(PointData {
        n,
        gamma: g.eval_at(&z)?,
        dgamma: del_op(g).eval_at(&z)?,
        dphi,
        dphi_raw,
        phi: weight.phi(&z, &mask),
        degree: g.degree(),
    })
}

/// One row of a pointwise report.
#[derive(Clone, PartialEq, Debug)]
pub struct PointValue {
    pub index: usize,
    pub chart: ChartId,
    /// `None` when the point was skipped.
    pub value: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct NoContactReport {
    pub rows: Vec<PointValue>,
    pub max_residual: f64,
    /// `D'_hΓ = 0` at every evaluated point (residual ≤ 1e−9).
    pub holds: bool,
}

pub const NO_CONTACT_TOL: f64 = 1e-9;

fn skip_note(e: &StructureError) -> Option<String> {
    match e {
        StructureError::Algebra(AlgebraError::Pole { var }) => Some(alloc::format!("pole in variable {}", var)),
        _ => None,
    }
}

/// Residual `|∂Γ − ∂φ∧Γ|` at each point.
pub fn no_contact_check_at(s: &Section, weight: &WeightModel, points: &[ChartPoint]) -> Result<NoContactReport, StructureError> {
    let mut rows = Vec::new();
    let mut max = 0.0f64;
    for (index, pt) in points.iter().enumerate() {
        let r = point_data(s, weight, pt).map(|d| {
            let g = if d.degree < d.n { d.dphi.wedge(&d.gamma) } else { NumForm::zero(d.n) };
            d.dgamma.sub(&g).norm()
        });
        match r {
            Ok(v) => {
                max = max.max(v);
                rows.push(PointValue { index, chart: pt.chart.clone(), value: Some(v), note: None });
            }
            Err(e) => match skip_note(&e) {
                Some(note) => rows.push(PointValue { index, chart: pt.chart.clone(), value: None, note: Some(note) }),
                None => return Err(e),
            },
        }
    }
    Ok(NoContactReport { rows, max_residual: max, holds: max <= NO_CONTACT_TOL })
}

/// Powers of `i` as exact complex floats.
fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Factor turning the coefficient of `dz_1∧…∧dz_n∧dz̄_1∧…∧dz̄_n` into a
/// density against Lebesgue measure: `(−1)^{n(n−1)/2} (−2i)^n`.
fn lebesgue_factor(n: usize) -> Complex64 {
    let sign = if (n * (n.saturating_sub(1)) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    // (−2i)^n = 2^n (−i)^n = 2^n i^{3n}
    i_pow(3 * n) * (sign * pow2(n))
}

fn pow2(n: usize) -> f64 {
    (0..n).fold(1.0, |a, _| a * 2.0)
}

/// Volume density of `dV_{Γ,h}` against Lebesgue measure, by two routes.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct VolumeSample {
    /// `i^{n²} (Γ∧∂Γ)∧conj(Γ∧∂Γ) e^{−2φ}`.
    pub local: f64,
    /// `i ∂(Γ∧Γ̄ e^{−φ}) ∧ ∂̄(Γ∧Γ̄ e^{−φ})`.
    pub formula: f64,
    /// Largest imaginary part seen (should be rounding noise).
    pub imag_residue: f64,
}

impl VolumeSample {
    pub fn relative_difference(&self) -> f64 {
        (self.local - self.formula).abs() / self.local.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn volume_form_at(s: &Section, weight: &WeightModel, pt: &ChartPoint) -> Result<VolumeSample, StructureError> {
    let d = point_data(s, weight, pt)?;
    let n = d.n;
    let g = s.chart_form(&pt.chart).unwrap();
    let c = contact_top(g)?
        .top_coefficient()
        .ok_or_else(|| StructureError::Dimension("section is not of contact type".into()))?
        .eval(&pt.to_complex())?;
    let leb = lebesgue_factor(n);
    let local = i_pow(n * n) * c * c.conj() * exp(-2.0 * d.phi) * leb;

    // mixed algebra: generators 0..n are dz, n..2n are dz̄
    let m = 2 * n;
    let lift = |f: &NumForm, conj: bool| {
        let mut r = NumForm::zero(m);
        for (k, v) in &f.terms {
            if conj {
                r.add_term(k.iter().map(|i| i + n).collect(), v.conj());
            } else {
                r.add_term(k.clone(), *v);
            }
        }
        r
    };
    let gam = lift(&d.gamma, false);
    let gbar = lift(&d.gamma, true);
    let dg = lift(&d.dgamma, false);
    let dbar_gbar = lift(&d.dgamma, true);
    let mut dphi = NumForm::zero(m);
    let mut dbar_phi = NumForm::zero(m);
    for (j, a) in d.dphi_raw.iter().enumerate() {
        dphi.add_term(vec![j], *a);
        dbar_phi.add_term(vec![j + n], a.conj());
    }
    let ew = exp(-d.phi);
    let gg = gam.wedge(&gbar);
    let sign = if d.degree % 2 == 0 { 1.0 } else { -1.0 };
    let del_p = dg.wedge(&gbar).sub(&dphi.wedge(&gg)).scale(Complex64::new(ew, 0.0));
    let dbar_p = gam
        .wedge(&dbar_gbar)
        .scale(Complex64::new(sign, 0.0))
        .sub(&dbar_phi.wedge(&gg))
        .scale(Complex64::new(ew, 0.0));
    let dv = del_p.wedge(&dbar_p).scale(Complex64::new(0.0, 1.0));
    let full: Vec<usize> = (0..m).collect();
    let formula = dv.get(&full) * leb;
    Ok(VolumeSample {
        local: local.re,
        formula: formula.re,
        imag_residue: local.im.abs().max(formula.im.abs()),
    })
}

fn exp(x: f64) -> f64 {
    num_traits::Float::exp(x)
}

/// Relative deviation between `Γ∧D'_hΓ` (numeric, `D'_h = ∂ − ∂φ∧`) and
/// the symbolic `Γ∧∂Γ` evaluated at the point.
pub fn metric_independence_at(s: &Section, weight: &WeightModel, pt: &ChartPoint) -> Result<f64, StructureError> {
    let d = point_data(s, weight, pt)?;
    let g = s.chart_form(&pt.chart).unwrap();
    if 2 * d.degree + 1 > d.n {
        return Err(StructureError::Dimension("Γ∧∂Γ exceeds top degree".into()));
    }
    let dprime = d.dgamma.sub(&d.dphi.wedge(&d.gamma));
    let lhs = d.gamma.wedge(&dprime);
    let rhs = contact_top(g)?.eval_at(&pt.to_complex())?;
    let scale = rhs.norm();
    let diff = lhs.sub(&rhs).norm();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// Exact counterpart at a Gaussian-rational point: whether
/// `Γ∧(∂Γ − ∂φ∧Γ) = Γ∧∂Γ` holds with no rounding.
pub fn metric_independence_exact(s: &Section, weight: &WeightModel, pt: &ChartPoint) -> Result<bool, StructureError> {
    let g = s.chart_form(&pt.chart).ok_or_else(|| StructureError::UnknownChart(pt.chart.clone()))?;
    let n = g.nvars();
    let mask = s.model().projective_mask();
    let freeze = |f: &Form| -> Result<Form, StructureError> {
        let vals = f.eval_exact(&pt.coords)?;
        Ok(Form::from_terms(n, f.degree(), vals.into_iter().map(|(k, v)| (k, LaurentPoly::constant(n, v))))?)
    };
    let gam = freeze(g)?;
    let dg = freeze(&del_op(g))?;
    let a = weight.dphi_exact(&pt.coords, &mask);
    let dphi = Form::from_terms(
        n,
        1,
        a.into_iter().enumerate().map(|(j, v)| (MultiIndex::new(vec![j]).unwrap(), LaurentPoly::constant(n, v))),
    )?;
    let lhs = wedge(&gam, &(&dg - &wedge(&dphi, &gam)?))?;
    let rhs = freeze(&contact_top(g)?)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_factor_small_n() {
        // dz∧dz̄ = −2i dx∧dy
        assert_eq!(lebesgue_factor(1), Complex64::new(0.0, -2.0));
        // n = 3: i^9 · factor = 8
        assert_eq!(i_pow(9) * lebesgue_factor(3), Complex64::new(8.0, 0.0));
        assert_eq!(i_pow(4) * lebesgue_factor(2), Complex64::new(4.0, 0.0));
    }

    #[test]
    fn bundle_root() {
        assert!(bundle_root_check(&ChartModel::Projective(3), &BundleDescriptor::Twist(2)));
        assert!(!bundle_root_check(&ChartModel::Projective(3), &BundleDescriptor::Twist(1)));
        assert!(bundle_root_check(&ChartModel::Torus(4), &BundleDescriptor::Trivial));
    }
}
