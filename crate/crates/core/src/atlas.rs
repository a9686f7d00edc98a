//! Chart models, line-bundle cocycles, pullbacks and gluing checks.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::error::AlgebraError;
use crate::form::{wedge, Form, MultiIndex};
use crate::laurent::{Exponent, LaurentPoly};
use crate::scalar::Scalar;

/// Identifier of a chart. Single-factor models use one entry; products
/// concatenate the ids of their factors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ChartId(pub Vec<usize>);

impl ChartId {
    pub fn single(i: usize) -> Self {
        ChartId(vec![i])
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| alloc::format!("{}", i)).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ChartModel {
    /// ℙⁿ with its n+1 standard affine charts.
    Projective(usize),
    /// Flat torus ℂⁿ/Λ with one chart; forms have constant coefficients.
    Torus(usize),
    Product(Box<ChartModel>, Box<ChartModel>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BundleDescriptor {
    /// O(k) on projective space.
    Twist(i64),
    Trivial,
    /// External tensor product of the factor bundles.
    Product(Box<BundleDescriptor>, Box<BundleDescriptor>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("chart {0} does not exist in this model")]
    UnknownChart(ChartId),
    #[error("bundle {bundle:?} is not defined on model {model:?}")]
    BundleMismatch { model: ChartModel, bundle: BundleDescriptor },
    #[error("chart {chart}: form degree {got}, expected {expected}")]
    DegreeMismatch { chart: ChartId, expected: usize, got: usize },
    #[error("chart {chart}: form has {got} variables, chart has {expected}")]
    NvarsMismatch { chart: ChartId, expected: usize, got: usize },
    #[error("no form given for chart {0}")]
    MissingChart(ChartId),
    #[error("chart {chart}: coefficient depends on torus variable {var}")]
    NonConstantTorus { chart: ChartId, var: usize },
    #[error("degree {degree} exceeds dimension {dim}")]
    DegreeTooLarge { degree: usize, dim: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Monomial coordinate change: `z_j^{(from)} = Π_m (z_m^{(to)})^{rows[j][m]}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordinateChange {
    pub rows: Vec<Vec<i32>>,
    pub to_nvars: usize,
}

impl CoordinateChange {
    fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|j| (0..n).map(|m| i32::from(j == m)).collect())
            .collect();
        CoordinateChange { rows, to_nvars: n }
    }

    fn block(a: &Self, b: &Self) -> Self {
        let to_nvars = a.to_nvars + b.to_nvars;
        let mut rows = Vec::new();
        for r in &a.rows {
            let mut row = r.clone();
            row.resize(to_nvars, 0);
            rows.push(row);
        }
        for r in &b.rows {
            let mut row = vec![0; a.to_nvars];
            row.extend_from_slice(r);
            rows.push(row);
        }
        CoordinateChange { rows, to_nvars }
    }

    /// Image of the monomial with exponent `e` (in from-variables).
    pub fn map_exponent(&self, e: &[i32]) -> Exponent {
        let mut out = vec![0; self.to_nvars];
        for (ej, row) in e.iter().zip(&self.rows) {
            if *ej == 0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                *o += ej * a;
            }
        }
        out
    }

    /// `d z_j^{(from)}` written in to-chart differentials.
    fn differential(&self, j: usize) -> Form {
        let row = &self.rows[j];
        let mut out = Form::zero(self.to_nvars, 1);
        for (m, &a) in row.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut e = row.clone();
            e[m] -= 1;
            let c = LaurentPoly::monomial(self.to_nvars, e, Scalar::from_int(a as i64));
            out = &out + &Form::term(MultiIndex::new(vec![m]).unwrap(), c);
        }
        out
    }
}

impl ChartModel {
    /// Complex dimension, i.e. variables per chart.
    pub fn dim(&self) -> usize {
        match self {
            ChartModel::Projective(n) | ChartModel::Torus(n) => *n,
            ChartModel::Product(a, b) => a.dim() + b.dim(),
        }
    }

    fn id_len(&self) -> usize {
        match self {
            ChartModel::Projective(_) | ChartModel::Torus(_) => 1,
            ChartModel::Product(a, b) => a.id_len() + b.id_len(),
        }
    }

    /// All charts, in increasing id order.
    pub fn charts(&self) -> Vec<ChartId> {
        match self {
            ChartModel::Projective(n) => (0..=*n).map(ChartId::single).collect(),
            ChartModel::Torus(_) => vec![ChartId::single(0)],
            ChartModel::Product(a, b) => {
                let mut out = Vec::new();
                for x in a.charts() {
                    for y in b.charts() {
                        let mut v = x.0.clone();
                        v.extend_from_slice(&y.0);
                        out.push(ChartId(v));
                    }
                }
                out
            }
        }
    }

    pub fn contains(&self, c: &ChartId) -> bool {
        match self {
            ChartModel::Projective(n) => c.0.len() == 1 && c.0[0] <= *n,
            ChartModel::Torus(_) => c.0 == [0],
            ChartModel::Product(a, b) => match self.split(c) {
                Some((x, y)) => a.contains(&x) && b.contains(&y),
                None => false,
            },
        }
    }

    fn check(&self, c: &ChartId) -> Result<(), AtlasError> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(AtlasError::UnknownChart(c.clone()))
        }
    }

    /// Splits a product chart id into its factor ids.
    pub fn split(&self, c: &ChartId) -> Option<(ChartId, ChartId)> {
        match self {
            ChartModel::Product(a, _) if c.0.len() == self.id_len() => {
                let k = a.id_len();
                Some((ChartId(c.0[..k].to_vec()), ChartId(c.0[k..].to_vec())))
            }
            _ => None,
        }
    }

    /// Variable names on a chart: `z{j}` on projective charts (skipping the
    /// chart's own index), `w1..wn` on the torus, concatenated on products.
    pub fn labels(&self, c: &ChartId) -> Result<Vec<String>, AtlasError> {
        self.check(c)?;
        Ok(match self {
            ChartModel::Projective(n) => (0..=*n)
                .filter(|&j| j != c.0[0])
                .map(|j| alloc::format!("z{}", j))
                .collect(),
            ChartModel::Torus(n) => (1..=*n).map(|j| alloc::format!("w{}", j)).collect(),
            ChartModel::Product(a, b) => {
                let (x, y) = self.split(c).unwrap();
                let mut l = a.labels(&x)?;
                let mut r = b.labels(&y)?;
                if l.iter().any(|s| r.contains(s)) {
                    l = l.into_iter().map(|s| alloc::format!("a_{}", s)).collect();
                    r = r.into_iter().map(|s| alloc::format!("b_{}", s)).collect();
                }
                l.extend(r);
                l
            }
        })
    }

    /// Which chart variables belong to a torus factor.
    pub fn torus_mask(&self) -> Vec<bool> {
        match self {
            ChartModel::Projective(n) => vec![false; *n],
            ChartModel::Torus(n) => vec![true; *n],
            ChartModel::Product(a, b) => {
                let mut m = a.torus_mask();
                m.extend(b.torus_mask());
                m
            }
        }
    }

    /// Which chart variables belong to a projective factor.
    pub fn projective_mask(&self) -> Vec<bool> {
        self.torus_mask().into_iter().map(|t| !t).collect()
    }

    /// Coordinate change expressing from-chart variables in to-chart ones.
    pub fn coordinate_change(&self, from: &ChartId, to: &ChartId) -> Result<CoordinateChange, AtlasError> {
        self.check(from)?;
        self.check(to)?;
        Ok(match self {
            ChartModel::Projective(n) => {
                let (a, b) = (from.0[0], to.0[0]);
                if a == b {
                    return Ok(CoordinateChange::identity(*n));
                }
                let pos_b = |j: usize| if j < b { j } else { j - 1 };
                // z_j^{(a)} = x_j/x_a = (x_j/x_b)·(x_a/x_b)^{-1}
                let rows = (0..=*n)
                    .filter(|&j| j != a)
                    .map(|j| {
                        let mut row = vec![0; *n];
                        if j != b {
                            row[pos_b(j)] += 1;
                        }
                        row[pos_b(a)] -= 1;
                        row
                    })
                    .collect();
                CoordinateChange { rows, to_nvars: *n }
            }
            ChartModel::Torus(n) => CoordinateChange::identity(*n),
            ChartModel::Product(l, r) => {
                let (fa, fb) = self.split(from).unwrap();
                let (ta, tb) = self.split(to).unwrap();
                CoordinateChange::block(&l.coordinate_change(&fa, &ta)?, &r.coordinate_change(&fb, &tb)?)
            }
        })
    }

    pub fn supports(&self, bundle: &BundleDescriptor) -> bool {
        match (self, bundle) {
            (ChartModel::Projective(_), BundleDescriptor::Twist(_) | BundleDescriptor::Trivial) => true,
            (ChartModel::Torus(_), BundleDescriptor::Trivial) => true,
            (ChartModel::Product(a, b), BundleDescriptor::Product(x, y)) => a.supports(x) && b.supports(y),
            _ => false,
        }
    }
}

impl fmt::Display for ChartModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartModel::Projective(n) => write!(f, "P{}", n),
            ChartModel::Torus(n) => write!(f, "T{}", n),
            ChartModel::Product(a, b) => write!(f, "{} x {}", Paren(a.as_ref()), Paren(b.as_ref())),
        }
    }
}

/// Parenthesizes nested products so the rendering parses unambiguously.
struct Paren<'a, T>(&'a T);

impl<T: fmt::Display + Nested> fmt::Display for Paren<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_product() {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

trait Nested {
    fn is_product(&self) -> bool;
}

impl Nested for ChartModel {
    fn is_product(&self) -> bool {
        matches!(self, ChartModel::Product(..))
    }
}

impl Nested for BundleDescriptor {
    fn is_product(&self) -> bool {
        matches!(self, BundleDescriptor::Product(..))
    }
}

impl fmt::Display for BundleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleDescriptor::Twist(k) => write!(f, "O({})", k),
            BundleDescriptor::Trivial => f.write_str("trivial"),
            BundleDescriptor::Product(a, b) => write!(f, "{} x {}", Paren(a.as_ref()), Paren(b.as_ref())),
        }
    }
}

/// `g_{from,to}` in to-chart coordinates, so that `e_to = g·e_from` and
/// `Γ_from = g_{from,to}·Γ_to`. For O(k) on ℙⁿ this is `(z_from^{(to)})^{-k}`.
pub fn transition_function(
    model: &ChartModel,
    bundle: &BundleDescriptor,
    from: &ChartId,
    to: &ChartId,
) -> Result<LaurentPoly, AtlasError> {
    model.check(from)?;
    model.check(to)?;
    if !model.supports(bundle) {
        return Err(AtlasError::BundleMismatch { model: model.clone(), bundle: bundle.clone() });
    }
    let n = model.dim();
    Ok(match (model, bundle) {
        (ChartModel::Projective(_), BundleDescriptor::Twist(k)) if *k != 0 && from != to => {
            let (a, b) = (from.0[0], to.0[0]);
            let mut e = vec![0; n];
            e[if a < b { a } else { a - 1 }] = -(*k as i32);
            LaurentPoly::monomial(n, e, Scalar::one())
        }
        (ChartModel::Product(l, r), BundleDescriptor::Product(x, y)) => {
            let (fa, fb) = model.split(from).unwrap();
            let (ta, tb) = model.split(to).unwrap();
            let gl = transition_function(l, x, &fa, &ta)?.lift(n, 0);
            let gr = transition_function(r, y, &fb, &tb)?.lift(n, l.dim());
            &gl * &gr
        }
        _ => LaurentPoly::one(n),
    })
}

/// Pulls a from-chart function back to to-chart coordinates.
pub fn pullback_function(
    f: &LaurentPoly,
    from: &ChartId,
    to: &ChartId,
    model: &ChartModel,
) -> Result<LaurentPoly, AtlasError> {
    let cc = model.coordinate_change(from, to)?;
    if f.nvars() != cc.rows.len() {
        return Err(AlgebraError::NvarsMismatch { left: f.nvars(), right: cc.rows.len() }.into());
    }
    Ok(f.map_exponents(cc.to_nvars, |e| cc.map_exponent(e)))
}

/// Rewrites a from-chart form in to-chart coordinates (chain rule on
/// differentials, monomial substitution on coefficients).
pub fn pullback(form: &Form, from: &ChartId, to: &ChartId, model: &ChartModel) -> Result<Form, AtlasError> {
    let cc = model.coordinate_change(from, to)?;
    if form.nvars() != cc.rows.len() {
        return Err(AlgebraError::NvarsMismatch { left: form.nvars(), right: cc.rows.len() }.into());
    }
    if from == to {
        return Ok(form.clone());
    }
    let m = cc.to_nvars;
    let diffs: Vec<Form> = (0..cc.rows.len()).map(|j| cc.differential(j)).collect();
    let mut out = Form::zero(m, form.degree());
    for (idx, f) in form.coeffs() {
        let g = f.map_exponents(m, |e| cc.map_exponent(e));
        let mut d = Form::function(LaurentPoly::one(m));
        for &i in idx.as_slice() {
            d = wedge(&d, &diffs[i])?;
        }
        out = &out + &d.mul_poly(&g);
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GlueStatus {
    Unverified,
    Verified,
    /// First failing ordered overlap and the nonzero difference there.
    Failed { from: ChartId, to: ChartId, witness: Form },
}

/// A global bundle-valued holomorphic form given chartwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Section {
    model: ChartModel,
    bundle: BundleDescriptor,
    degree: usize,
    chart_forms: BTreeMap<ChartId, Form>,
    glue_status: GlueStatus,
}

/// Validates shapes and builds an unverified section.
pub fn make_section(
    model: ChartModel,
    bundle: BundleDescriptor,
    degree: usize,
    mut chart_forms: BTreeMap<ChartId, Form>,
) -> Result<Section, AtlasError> {
    if !model.supports(&bundle) {
        return Err(AtlasError::BundleMismatch { model, bundle });
    }
    let dim = model.dim();
    if degree > dim {
        return Err(AtlasError::DegreeTooLarge { degree, dim });
    }
    for c in chart_forms.keys() {
        model.check(c)?;
    }
    let mask = model.torus_mask();
    for c in model.charts() {
        let f = chart_forms.get(&c).ok_or_else(|| AtlasError::MissingChart(c.clone()))?;
        if f.nvars() != dim {
            return Err(AtlasError::NvarsMismatch { chart: c, expected: dim, got: f.nvars() });
        }
        if f.degree() != degree {
            return Err(AtlasError::DegreeMismatch { chart: c, expected: degree, got: f.degree() });
        }
        for g in f.coeffs().values() {
            for e in g.terms().keys() {
                if let Some(var) = e.iter().zip(&mask).position(|(x, t)| *t && *x != 0) {
                    return Err(AtlasError::NonConstantTorus { chart: c, var });
                }
            }
        }
    }
    chart_forms.retain(|c, _| model.contains(c));
    Ok(Section { model, bundle, degree, chart_forms, glue_status: GlueStatus::Unverified })
}

/// Outcome for one ordered overlap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OverlapRecord {
    pub from: ChartId,
    pub to: ChartId,
    /// `None` when the identity holds; otherwise `Γ_to − g_{to,from}·Γ_from`
    /// in to-chart coordinates.
    pub witness: Option<Form>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GluingCertificate {
    pub overlaps: Vec<OverlapRecord>,
}

impl GluingCertificate {
    pub fn verified(&self) -> bool {
        self.overlaps.iter().all(|o| o.witness.is_none())
    }

    pub fn first_failure(&self) -> Option<&OverlapRecord> {
        self.overlaps.iter().find(|o| o.witness.is_some())
    }
}

/// Checks `Γ_to = g_{to,from}·Γ_from` with `Γ_from` pulled back into the
/// to-chart's coordinates.
pub fn check_overlap(s: &Section, from: &ChartId, to: &ChartId) -> Result<OverlapRecord, AtlasError> {
    let gf = s.chart_form(from).ok_or_else(|| AtlasError::UnknownChart(from.clone()))?;
    let gt = s.chart_form(to).ok_or_else(|| AtlasError::UnknownChart(to.clone()))?;
    let moved = pullback(gf, from, to, &s.model)?;
    // g_{to,from} lives in from-coordinates; move it too
    let g = transition_function(&s.model, &s.bundle, to, from)?;
    let g = pullback_function(&g, from, to, &s.model)?;
    let diff = gt - &moved.mul_poly(&g);
    Ok(OverlapRecord {
        from: from.clone(),
        to: to.clone(),
        witness: (!diff.is_zero()).then_some(diff),
    })
}

/// Checks every ordered pair of distinct charts.
pub fn glue_check(s: &Section) -> GluingCertificate {
    let charts = s.model.charts();
    let mut overlaps = Vec::new();
    for a in &charts {
        for b in &charts {
            if a == b {
                continue;
            }
            overlaps.push(check_overlap(s, a, b).expect("section charts are valid"));
        }
    }
    GluingCertificate { overlaps }
}

impl Section {
    pub fn model(&self) -> &ChartModel {
        &self.model
    }

    pub fn bundle(&self) -> &BundleDescriptor {
        &self.bundle
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn chart_forms(&self) -> &BTreeMap<ChartId, Form> {
        &self.chart_forms
    }

    pub fn chart_form(&self, c: &ChartId) -> Option<&Form> {
        self.chart_forms.get(c)
    }

    pub fn glue_status(&self) -> &GlueStatus {
        &self.glue_status
    }

    pub fn is_glue_verified(&self) -> bool {
        self.glue_status == GlueStatus::Verified
    }

    /// Runs [`glue_check`] and records the outcome in the returned section.
    pub fn verify_gluing(mut self) -> (Section, GluingCertificate) {
        let cert = glue_check(&self);
        self.glue_status = match cert.first_failure() {
            None => GlueStatus::Verified,
            Some(o) => GlueStatus::Failed {
                from: o.from.clone(),
                to: o.to.clone(),
                witness: o.witness.clone().unwrap(),
            },
        };
        (self, cert)
    }

    /// Applies `f` chartwise; the result is unverified.
    pub fn map_forms<F>(&self, bundle: BundleDescriptor, degree: usize, mut f: F) -> Result<Section, AtlasError>
    where
        F: FnMut(&ChartId, &Form) -> Result<Form, AtlasError>,
    {
        let mut forms = BTreeMap::new();
        for (c, g) in &self.chart_forms {
            forms.insert(c.clone(), f(c, g)?);
        }
        make_section(self.model.clone(), bundle, degree, forms)
    }

    /// Chartwise sum with a section of the same shape; unverified.
    pub fn add(&self, o: &Section) -> Result<Section, AtlasError> {
        if o.model != self.model || o.bundle != self.bundle {
            return Err(AtlasError::BundleMismatch { model: o.model.clone(), bundle: o.bundle.clone() });
        }
        if o.degree != self.degree {
            return Err(AtlasError::DegreeMismatch { chart: ChartId(vec![]), expected: self.degree, got: o.degree });
        }
        self.map_forms(self.bundle.clone(), self.degree, |c, g| Ok(g + &o.chart_forms[c]))
    }

    /// Chartwise scalar multiple; keeps the gluing status, which scaling preserves.
    pub fn scale(&self, c: &Scalar) -> Section {
        let mut r = self.clone();
        for g in r.chart_forms.values_mut() {
            *g = g.scale(c);
        }
        if c.is_zero() {
            r.glue_status = if self.glue_status == GlueStatus::Unverified {
                GlueStatus::Unverified
            } else {
                GlueStatus::Verified
            };
        }
        r
    }

    /// Renders one chart's form with the chart's variable names.
    pub fn render_chart(&self, c: &ChartId) -> Option<String> {
        let labels = self.model.labels(c).ok()?;
        Some(self.chart_forms.get(c)?.render(&labels))
    }
}

/// A point given in one chart's coordinates, with exact coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChartPoint {
    pub chart: ChartId,
    pub coords: Vec<Scalar>,
}

impl ChartPoint {
    pub fn new(chart: ChartId, coords: Vec<Scalar>) -> Self {
        ChartPoint { chart, coords }
    }

    pub fn to_complex(&self) -> Vec<num_complex::Complex64> {
        self.coords.iter().map(Scalar::to_complex64).collect()
    }

    /// The same point of the manifold in another chart's coordinates.
    /// Errors with a pole if the point lies off the target chart.
    pub fn transfer(&self, model: &ChartModel, to: &ChartId) -> Result<ChartPoint, AtlasError> {
        let cc = model.coordinate_change(to, &self.chart)?;
        let mut coords = Vec::with_capacity(cc.rows.len());
        for row in &cc.rows {
            let mono = LaurentPoly::monomial(cc.to_nvars, row.clone(), Scalar::one());
            coords.push(mono.eval_exact(&self.coords)?);
        }
        Ok(ChartPoint { chart: to.clone(), coords })
    }
}
