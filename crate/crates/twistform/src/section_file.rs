//! Section files: a versioned TOML header plus one canonical form string
//! per chart.
//!
//! ```toml
//! format = "twistform-section/1"
//! model = "P3"
//! bundle = "O(2)"
//! degree = 1
//!
//! [[chart]]
//! id = [0]
//! form = "[z3] dz1 + [1] dz2"
//! ```

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;
use twistform_core::atlas::{make_section, AtlasError, BundleDescriptor, ChartId, ChartModel, Section};

use crate::text::{parse_form, ParseError};

pub const SECTION_FORMAT: &str = "twistform-section/1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed file: {0}")]
    Toml(String),
    #[error("unsupported format '{0}', expected '{SECTION_FORMAT}'")]
    Header(String),
    #[error("bad model '{0}'")]
    Model(String),
    #[error("bad bundle '{0}'")]
    Bundle(String),
    #[error("chart {chart}: {err}")]
    Form { chart: ChartId, err: ParseError },
    #[error("duplicate chart {0}")]
    DuplicateChart(ChartId),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

#[derive(Serialize, Deserialize)]
struct SectionDoc {
    format: String,
    model: String,
    bundle: String,
    degree: usize,
    #[serde(rename = "chart", default)]
    charts: Vec<ChartDoc>,
}

#[derive(Serialize, Deserialize)]
struct ChartDoc {
    id: Vec<usize>,
    form: String,
}

/// Splits `A x B` at the first top-level ` x `, removing one layer of
/// enclosing parentheses from each side.
fn split_product(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ' ' if depth == 0 && s[i..].starts_with(" x ") => {
                return Some((unparen(&s[..i]), unparen(&s[i + 3..])));
            }
            _ => {}
        }
    }
    None
}

fn unparen(s: &str) -> &str {
    let t = s.trim();
    match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) if !t.starts_with("O(") => inner,
        _ => t,
    }
}

pub fn parse_model(s: &str) -> Result<ChartModel, FormatError> {
    let bad = || FormatError::Model(s.to_string());
    if let Some((a, b)) = split_product(s) {
        return Ok(ChartModel::Product(Box::new(parse_model(a)?), Box::new(parse_model(b)?)));
    }
    let s = s.trim();
    let (kind, n) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
    let n: usize = n.parse().map_err(|_| bad())?;
    match kind {
        "P" => Ok(ChartModel::Projective(n)),
        "T" => Ok(ChartModel::Torus(n)),
        _ => Err(bad()),
    }
}

pub fn parse_bundle(s: &str) -> Result<BundleDescriptor, FormatError> {
    let bad = || FormatError::Bundle(s.to_string());
    if let Some((a, b)) = split_product(s) {
        return Ok(BundleDescriptor::Product(Box::new(parse_bundle(a)?), Box::new(parse_bundle(b)?)));
    }
    let s = s.trim();
    if s == "trivial" {
        return Ok(BundleDescriptor::Trivial);
    }
    let k = s.strip_prefix("O(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    Ok(BundleDescriptor::Twist(k.trim().parse().map_err(|_| bad())?))
}

pub fn write_section(s: &Section) -> String {
    let model = s.model();
    let doc = SectionDoc {
        format: SECTION_FORMAT.into(),
        model: model.to_string(),
        bundle: s.bundle().to_string(),
        degree: s.degree(),
        charts: s
            .chart_forms()
            .keys()
            .map(|c| ChartDoc { id: c.0.clone(), form: s.render_chart(c).expect("chart of the section") })
            .collect(),
    };
    toml::to_string(&doc).expect("section documents serialize")
}

/// Parses a section file. The result is not yet glue-verified.
pub fn read_section(text: &str) -> Result<Section, FormatError> {
    let doc: SectionDoc = toml::from_str(text).map_err(|e| FormatError::Toml(e.to_string()))?;
    if doc.format != SECTION_FORMAT {
        return Err(FormatError::Header(doc.format));
    }
    let model = parse_model(&doc.model)?;
    let bundle = parse_bundle(&doc.bundle)?;
    let mut forms = BTreeMap::new();
    for c in doc.charts {
        let id = ChartId(c.id);
        let labels = model.labels(&id)?;
        let f = parse_form(&c.form, &labels, doc.degree).map_err(|err| FormatError::Form { chart: id.clone(), err })?;
        if forms.insert(id.clone(), f).is_some() {
            return Err(FormatError::DuplicateChart(id));
        }
    }
    Ok(make_section(model, bundle, doc.degree, forms)?)
}
