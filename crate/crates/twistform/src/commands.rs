//! Subcommand logic. Each command maps parsed inputs to a certificate and
//! an exit code; the binary only does argument parsing and IO.

use rayon::prelude::*;
use thiserror::Error;
use twistform_core::atlas::{BundleDescriptor, ChartModel, ChartPoint, GluingCertificate, Section};
use twistform_core::cohomology::{self, CohomologyError, VanishingStep};
use twistform_core::curvature::{self, CurvatureError, PointFrame, Spectrum};
use twistform_core::structures::{self, StructureError, StructureReport, Verdict};
use twistform_core::weight::WeightModel;

use crate::certificate::{Certificate, ChartConstant, NamedForm, Overlap, PointRow, Step};
use crate::input::FrameInput;
use crate::sample::seeded_points;

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Relative singular-value threshold for numeric kernels.
pub const KERNEL_TOL: f64 = 1e-9;
/// Agreement required between the two volume-density routes.
pub const VOLUME_TOL: f64 = 1e-6;
/// Spread allowed across points for the FS scalar curvature.
pub const CONSTANCY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

impl From<StructureError> for UsageError {
    fn from(e: StructureError) -> Self {
        UsageError(e.to_string())
    }
}

impl From<CohomologyError> for UsageError {
    fn from(e: CohomologyError) -> Self {
        UsageError(e.to_string())
    }
}

impl From<CurvatureError> for UsageError {
    fn from(e: CurvatureError) -> Self {
        UsageError(e.to_string())
    }
}

pub struct Outcome {
    pub cert: Certificate,
    pub code: i32,
    /// A constructed section, for commands that can write one out.
    pub section: Option<Section>,
}

pub type CmdResult = Result<Outcome, UsageError>;

fn outcome(cert: Certificate, positive: bool) -> Outcome {
    Outcome { cert, code: if positive { EXIT_POSITIVE } else { EXIT_NEGATIVE }, section: None }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum WeightChoice {
    /// `k·log(1+|z|²)` on projective coordinates, `k` from the bundle.
    Fs,
    Flat,
}

/// The weight for a section's bundle: Fubini–Study with the bundle's twist
/// on projective factors, or flat.
pub fn weight_for(s: &Section, choice: WeightChoice) -> Result<WeightModel, UsageError> {
    fn twists(m: &ChartModel, b: &BundleDescriptor, out: &mut Vec<i64>) {
        match (m, b) {
            (ChartModel::Projective(_), BundleDescriptor::Twist(k)) => out.push(*k),
            (ChartModel::Product(l, r), BundleDescriptor::Product(x, y)) => {
                twists(l, x, out);
                twists(r, y, out);
            }
            _ => {}
        }
    }
    if choice == WeightChoice::Flat {
        return Ok(WeightModel::Flat);
    }
    let mut ks = Vec::new();
    twists(s.model(), s.bundle(), &mut ks);
    ks.dedup();
    match ks.as_slice() {
        [] => Ok(WeightModel::Flat),
        [k] => Ok(WeightModel::FubiniStudy { k: *k }),
        _ => Err(UsageError("projective factors carry different twists; one FS weight cannot cover them".into())),
    }
}

fn weight_name(w: &WeightModel) -> String {
    match w {
        WeightModel::Flat => "flat".into(),
        WeightModel::FubiniStudy { k } => format!("fubini-study(k={})", k),
    }
}

fn glue(s: Section) -> (Section, GluingCertificate) {
    if s.is_glue_verified() {
        let cert = twistform_core::atlas::glue_check(&s);
        (s, cert)
    } else {
        s.verify_gluing()
    }
}

fn record_overlaps(cert: &mut Certificate, s: &Section, g: &GluingCertificate) {
    for o in &g.overlaps {
        let labels = s.model().labels(&o.to).expect("chart of the model");
        cert.overlaps.push(Overlap {
            from: o.from.to_string(),
            to: o.to.to_string(),
            status: if o.witness.is_some() { "failed".into() } else { "verified".into() },
            witness: o.witness.as_ref().map(|w| w.render(&labels)),
        });
    }
}

fn record_section(cert: &mut Certificate, s: &Section) {
    cert.fact("model", s.model()).fact("bundle", s.bundle()).fact("degree", s.degree());
    for c in s.chart_forms().keys() {
        cert.forms.push(NamedForm { name: format!("chart {}", c), form: s.render_chart(c).unwrap() });
    }
}

fn verdict_text(r: &StructureReport) -> String {
    match &r.verdict {
        Verdict::Holds(structures::Structure::PContact) => format!("{}-contact", r.parity.degree),
        Verdict::Holds(structures::Structure::SSymplectic) => format!("{}-symplectic", r.parity.degree),
        Verdict::Fails { reason, chart, .. } => format!("fails: {} on chart {}", reason.label(), chart),
    }
}

fn record_report(cert: &mut Certificate, s: &Section, r: &StructureReport) {
    for (c, v) in &r.top_form_constants {
        cert.chart_constants.push(ChartConstant { chart: c.to_string(), constant: v.to_string(), poles: r.pole_charts.contains(c) });
    }
    cert.fact("parity.degree", r.parity.degree)
        .fact("parity.dim", r.parity.dim)
        .fact("parity.dim_mod_4", r.parity.dim_mod4)
        .fact("parity.degree_ok", r.parity.degree_parity_ok)
        .fact("bundle_root_check", r.bundle_root_check);
    if let Verdict::Fails { chart, witness, .. } = &r.verdict {
        let labels = s.model().labels(chart).unwrap();
        cert.fact("witness", witness.render(&labels));
    }
    cert.verdict = verdict_text(r);
}

/// Glue, then decide a structure; negative on gluing failure.
fn decide<F>(cert: &mut Certificate, s: Section, decide: F) -> Result<(Section, bool), UsageError>
where
    F: FnOnce(&Section) -> Result<StructureReport, StructureError>,
{
    let (s, g) = glue(s);
    record_section(cert, &s);
    record_overlaps(cert, &s, &g);
    if let Some(o) = g.first_failure() {
        cert.verdict = format!("gluing fails on overlap {} -> {}", o.from, o.to);
        return Ok((s, false));
    }
    let r = decide(&s)?;
    record_report(cert, &s, &r);
    let ok = r.holds();
    Ok((s, ok))
}

fn coords(p: &ChartPoint) -> Vec<String> {
    p.coords.iter().map(|c| c.to_string()).collect()
}

fn point_row(i: usize, p: &ChartPoint) -> PointRow {
    PointRow { index: i, chart: p.chart.to_string(), coords: coords(p), values: Default::default(), note: None }
}

fn skipped(mut row: PointRow, e: &dyn std::fmt::Display) -> PointRow {
    row.note = Some(format!("skipped: {}", e));
    row
}

pub fn construct_pn(n: usize) -> CmdResult {
    let mut cert = Certificate::new("construct-pn");
    cert.input("n", n);
    let s = structures::construct_pn(n)?;
    let (s, ok) = decide(&mut cert, s, structures::is_p_contact)?;
    Ok(Outcome { section: Some(s), ..outcome(cert, ok) })
}

/// Pointwise extras for `verify`: metric independence and the
/// no-contact residual under the chosen weight.
fn verify_points(cert: &mut Certificate, s: &Section, w: &WeightModel, points: usize, seed: u64) {
    cert.seed = Some(seed);
    cert.input("weight", weight_name(w)).input("points", points);
    let pts = seeded_points(s.model(), points, seed);
    let rows: Vec<PointRow> = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let row = point_row(i, p);
            let dev = match structures::metric_independence_at(s, w, p) {
                Ok(d) => d,
                Err(e) => return skipped(row, &e),
            };
            let exact = structures::metric_independence_exact(s, w, p).unwrap_or(false);
            let nc = structures::no_contact_check_at(s, w, std::slice::from_ref(p)).ok().and_then(|r| r.rows[0].value);
            let mut row = row;
            row.values.insert("metric_dev".into(), dev);
            row.values.insert("metric_exact".into(), if exact { 1.0 } else { 0.0 });
            if let Some(v) = nc {
                row.values.insert("no_contact_residual".into(), v);
            }
            row
        })
        .collect();
    let max = rows.iter().filter_map(|r| r.values.get("metric_dev")).fold(0.0f64, |a, &b| a.max(b));
    cert.fact("max_metric_dev", max);
    cert.points = rows;
}

pub fn verify(s: Section, weight: Option<WeightChoice>, points: usize, seed: u64) -> CmdResult {
    let mut cert = Certificate::new("verify");
    cert.input("model", s.model()).input("bundle", s.bundle()).input("degree", s.degree());
    let (s, ok) = decide(&mut cert, s, structures::is_p_contact)?;
    if let Some(choice) = weight {
        let w = weight_for(&s, choice)?;
        verify_points(&mut cert, &s, &w, points, seed);
    }
    Ok(outcome(cert, ok))
}

pub fn symplectic_verify(s: Section) -> CmdResult {
    let mut cert = Certificate::new("symplectic-verify");
    cert.input("model", s.model()).input("bundle", s.bundle()).input("degree", s.degree());
    let (_, ok) = decide(&mut cert, s, structures::is_s_symplectic)?;
    Ok(outcome(cert, ok))
}

pub fn product(omega: Section, gamma: Section) -> CmdResult {
    let mut cert = Certificate::new("product");
    cert.input("omega", format!("{} {}", omega.model(), omega.bundle()))
        .input("gamma", format!("{} {}", gamma.model(), gamma.bundle()));
    let (omega, g1) = glue(omega);
    let (gamma, g2) = glue(gamma);
    for (name, g) in [("omega", g1), ("gamma", g2)] {
        if let Some(o) = g.first_failure() {
            return Err(UsageError(format!("{} fails to glue on overlap {} -> {}", name, o.from, o.to)));
        }
    }
    let prod = structures::product_structure(&omega, &gamma)?;
    let ident = structures::product_identity(&omega, &gamma, &prod)?;
    for (c, ok) in &ident {
        cert.fact(&format!("identity.{}", c), if *ok { "holds" } else { "fails" });
    }
    let all = ident.iter().all(|(_, ok)| *ok);
    let (prod, ok) = decide(&mut cert, prod, structures::is_p_contact)?;
    Ok(Outcome { section: Some(prod), ..outcome(cert, ok && all) })
}

pub fn contact_power(eta: Section, l: usize, source: &str) -> CmdResult {
    let mut cert = Certificate::new("contact-power");
    cert.input("eta", source).input("l", l);
    let (eta, g) = glue(eta);
    if let Some(o) = g.first_failure() {
        return Err(UsageError(format!("eta fails to glue on overlap {} -> {}", o.from, o.to)));
    }
    let s = structures::contact_power(&eta, l)?;
    let (s, ok) = decide(&mut cert, s, structures::is_p_contact)?;
    Ok(Outcome { section: Some(s), ..outcome(cert, ok) })
}

pub fn standard_contact(n: usize) -> Result<Section, UsageError> {
    Ok(structures::standard_contact_pn(n)?)
}

pub fn cohom_dim(n: usize, p: usize, k: i64) -> CmdResult {
    let mut cert = Certificate::new("cohom-dim");
    cert.input("n", n).input("p", p).input("k", k);
    let z = cohomology::zspace_basis(n, p, k);
    cert.fact("ambient_dim", z.ambient_dim).fact("dim", z.dim());
    let labels: Vec<String> = (0..=n).map(|i| format!("x{}", i)).collect();
    for (i, b) in z.basis.iter().enumerate() {
        cert.forms.push(NamedForm { name: format!("basis {}", i), form: b.render(&labels) });
    }
    cert.verdict = format!("H^{{{},0}}(P^{}, O({})) has dimension {}", p, n, k, z.dim());
    Ok(outcome(cert, true))
}

fn step_row(s: &VanishingStep) -> Step {
    Step {
        group: s.group.to_string(),
        justification: s.justification.label().into(),
        conditions: s.conditions.clone(),
        vanishes: s.vanishes,
    }
}

pub fn bott(p: i64, q: i64, k: i64, space_dim: usize) -> CmdResult {
    let mut cert = Certificate::new("bott");
    cert.input("p", p).input("q", q).input("k", k).input("N", space_dim);
    let s = cohomology::bott_vanishing(p, q, k, space_dim);
    cert.verdict = if s.vanishes { format!("{} = 0", s.group) } else { format!("{}: not covered", s.group) };
    let ok = s.vanishes;
    cert.steps.push(step_row(&s));
    Ok(outcome(cert, ok))
}

pub fn hypersurface_cert(n: usize, d: usize) -> CmdResult {
    let mut cert = Certificate::new("hypersurface-cert");
    cert.input("n", n).input("d", d);
    let c = cohomology::hypersurface_certificate(n, d)?;
    cert.fact("target", &c.target).fact("k", cohomology::hypersurface_twist(n, d)).fact("not_covered", c.not_covered_count());
    cert.steps = c.steps.iter().map(step_row).collect();
    cert.verdict = if c.vanishes { format!("{} = 0", c.target) } else { format!("{}: not certified", c.target) };
    Ok(outcome(cert, c.vanishes))
}

fn record_spectrum(cert: &mut Certificate, spec: &Spectrum<f64>) -> Result<(), UsageError> {
    let vals: Vec<String> = spec.values().iter().map(|v| v.to_string()).collect();
    cert.fact("spectrum", vals.join(" "));
    for m in 1..=spec.len() {
        cert.fact(&format!("m_positive.{:02}", m), curvature::m_positive(spec, m)?);
    }
    Ok(())
}

fn m_verdict(cert: &mut Certificate, spec: &Spectrum<f64>, m: Option<usize>) -> Result<bool, UsageError> {
    match m {
        Some(m) => {
            let ok = curvature::m_positive(spec, m)?;
            cert.verdict = if ok { format!("{}-positive", m) } else { format!("not {}-positive", m) };
            Ok(ok)
        }
        None => {
            cert.verdict = "computed".into();
            Ok(true)
        }
    }
}

pub fn curvature_spectrum(values: Vec<f64>, m: Option<usize>) -> CmdResult {
    let mut cert = Certificate::new("curvature");
    cert.input("source", "spectrum");
    if let Some(m) = m {
        cert.input("m", m);
    }
    let spec = Spectrum::new(values)?;
    if spec.is_empty() {
        return Err(UsageError("empty spectrum".into()));
    }
    record_spectrum(&mut cert, &spec)?;
    let ok = m_verdict(&mut cert, &spec, m)?;
    Ok(outcome(cert, ok))
}

pub fn curvature_frame(f: FrameInput, m: Option<usize>) -> CmdResult {
    let mut cert = Certificate::new("curvature");
    cert.input("source", "frame");
    if let Some(m) = m {
        cert.input("m", m);
    }
    let frame = PointFrame::new(f.point, f.metric, f.curvature, None)?;
    let spec = frame.spectrum();
    record_spectrum(&mut cert, &spec)?;
    cert.fact("scalar_curvature", curvature::scalar_curvature(&frame)?);
    let ok = m_verdict(&mut cert, &spec, m)?;
    Ok(outcome(cert, ok))
}

/// Scalar curvature of the FS frame at seeded points; positive when it is
/// constant across points.
pub fn curvature_fs(n: usize, k: i64, points: usize, seed: u64) -> CmdResult {
    let mut cert = Certificate::new("curvature");
    cert.input("source", "fubini-study").input("n", n).input("k", k).input("points", points);
    cert.seed = Some(seed);
    let pts = seeded_points(&ChartModel::Projective(n), points, seed);
    let rows: Vec<Result<PointRow, CurvatureError>> = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let f = curvature::fs_frame(n, k, &p.to_complex())?;
            let mut row = point_row(i, p);
            row.values.insert("scalar_curvature".into(), curvature::scalar_curvature(&f.frame)?);
            row.values.insert("min_eigenvalue".into(), f.frame.spectrum().values()[0]);
            Ok(row)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let sc: Vec<f64> = rows.iter().map(|r| r.values["scalar_curvature"]).collect();
    let (lo, hi) = sc.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let spread = if sc.is_empty() { 0.0 } else { hi - lo };
    cert.fact("spread", spread);
    if let Some(v) = sc.first() {
        cert.fact("scalar_curvature", v);
    }
    cert.points = rows;
    let ok = spread <= CONSTANCY_TOL;
    cert.verdict = if ok { "constant scalar curvature".into() } else { "scalar curvature varies".into() };
    Ok(outcome(cert, ok))
}

/// Kernel ranks (and with `directsum`, the F∩G check) at seeded points.
pub fn rank(s: Section, directsum: bool, weight: WeightChoice, points: usize, seed: u64) -> CmdResult {
    let mut cert = Certificate::new("rank");
    cert.input("model", s.model()).input("bundle", s.bundle()).input("degree", s.degree()).input("points", points);
    cert.seed = Some(seed);
    if s.degree() == 0 {
        return Err(UsageError("contraction kernels need a form of degree at least 1".into()));
    }
    let w = weight_for(&s, weight)?;
    if directsum {
        cert.input("weight", weight_name(&w)).input("mode", "directsum");
    }
    let pts = seeded_points(s.model(), points, seed);
    let rows: Vec<(PointRow, bool)> = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut row = point_row(i, p);
            if directsum {
                let exact = curvature::directsum_at(&s, &w, p);
                let numeric = curvature::directsum_at_numeric(&s, &w, p, KERNEL_TOL);
                match (exact, numeric) {
                    (Ok(r), Ok(q)) => {
                        row.values.insert("dim_f".into(), r.dim_f as f64);
                        row.values.insert("dim_g".into(), r.dim_g as f64);
                        row.values.insert("dim_intersection".into(), r.dim_intersection as f64);
                        row.values.insert("dim_intersection_numeric".into(), q.dim_intersection as f64);
                        (row, r.dim_intersection == 0)
                    }
                    (Err(e), _) | (_, Err(e)) => (skipped(row, &e), true),
                }
            } else {
                match curvature::kernel_rank_at(&s, p) {
                    Ok(r) => {
                        row.values.insert("kernel_dim".into(), r as f64);
                        (row, r == 0)
                    }
                    Err(e) => (skipped(row, &e), true),
                }
            }
        })
        .collect();
    let ok = rows.iter().all(|(_, ok)| *ok);
    let mismatch = rows.iter().filter(|(r, _)| r.values.get("dim_intersection") != r.values.get("dim_intersection_numeric")).count();
    if directsum {
        cert.fact("exact_numeric_mismatches", mismatch);
        cert.verdict = if ok { "direct sum at every point".into() } else { "F and G intersect".into() };
    } else {
        cert.verdict = if ok { "kernel zero at every point".into() } else { "nonzero kernel".into() };
    }
    cert.points = rows.into_iter().map(|(r, _)| r).collect();
    Ok(outcome(cert, ok))
}

/// Volume density by both routes at seeded points.
pub fn volume(s: Section, weight: WeightChoice, points: usize, seed: u64) -> CmdResult {
    let mut cert = Certificate::new("volume");
    cert.input("model", s.model()).input("bundle", s.bundle()).input("degree", s.degree()).input("points", points);
    cert.seed = Some(seed);
    let (s, g) = glue(s);
    if let Some(o) = g.first_failure() {
        return Err(UsageError(format!("section fails to glue on overlap {} -> {}", o.from, o.to)));
    }
    let r = structures::is_p_contact(&s)?;
    if !r.holds() {
        return Err(UsageError(format!("section is not p-contact ({})", verdict_text(&r))));
    }
    let w = weight_for(&s, weight)?;
    cert.input("weight", weight_name(&w));
    let pts = seeded_points(s.model(), points, seed);
    let rows: Vec<(PointRow, bool)> = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut row = point_row(i, p);
            match structures::volume_form_at(&s, &w, p) {
                Ok(v) => {
                    row.values.insert("local".into(), v.local);
                    row.values.insert("formula".into(), v.formula);
                    row.values.insert("relative_difference".into(), v.relative_difference());
                    row.values.insert("imaginary_residue".into(), v.imag_residue);
                    let ok = v.local > 0.0 && v.relative_difference() <= VOLUME_TOL;
                    (row, ok)
                }
                Err(e) => (skipped(row, &e), true),
            }
        })
        .collect();
    let ok = rows.iter().all(|(_, ok)| *ok);
    let max = rows.iter().filter_map(|(r, _)| r.values.get("relative_difference")).fold(0.0f64, |a, &b| a.max(b));
    cert.fact("max_relative_difference", max);
    cert.points = rows.into_iter().map(|(r, _)| r).collect();
    cert.verdict = if ok { "positive density, routes agree".into() } else { "volume check failed".into() };
    Ok(outcome(cert, ok))
}

pub fn spin_root(n: usize) -> CmdResult {
    let mut cert = Certificate::new("spin-root");
    cert.input("n", n);
    let k = cohomology::spin_root_k(n);
    match k {
        Some(k) => {
            cert.fact("k", k);
            cert.verdict = format!("O({})^2 = O({}) = -K", k, n + 1);
        }
        None => cert.verdict = format!("no square root of O({}) in Pic(P^{})", n + 1, n),
    }
    Ok(outcome(cert, k.is_some()))
}

