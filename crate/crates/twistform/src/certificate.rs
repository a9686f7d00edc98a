//! Certificates: the machine-readable record every command emits.
//!
//! The structured format is TOML with a versioned header and parses back
//! with [`parse`]. The table format is for reading in a terminal.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;

pub const CERT_FORMAT: &str = "twistform-cert/1";

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Structured,
    Table,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct Certificate {
    pub format: String,
    pub command: String,
    pub toolchain_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdict: String,
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, String>,
    #[serde(default, rename = "chart_constant", skip_serializing_if = "Vec::is_empty")]
    pub chart_constants: Vec<ChartConstant>,
    #[serde(default, rename = "overlap", skip_serializing_if = "Vec::is_empty")]
    pub overlaps: Vec<Overlap>,
    #[serde(default, rename = "step", skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<Step>,
    #[serde(default, rename = "point", skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointRow>,
    #[serde(default, rename = "form", skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<NamedForm>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct ChartConstant {
    pub chart: String,
    pub constant: String,
    /// The chart form has negative exponents.
    #[serde(default)]
    pub poles: bool,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct Overlap {
    pub from: String,
    pub to: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub group: String,
    pub justification: String,
    #[serde(default)]
    pub conditions: Vec<String>,
    pub vanishes: bool,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct PointRow {
    pub index: usize,
    pub chart: String,
    /// Point coordinates as rendered Gaussian rationals.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coords: Vec<String>,
    #[serde(default)]
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct NamedForm {
    pub name: String,
    pub form: String,
}

impl Certificate {
    pub fn new(command: &str) -> Self {
        Certificate {
            format: CERT_FORMAT.into(),
            command: command.into(),
            toolchain_version: concat!("twistform ", env!("CARGO_PKG_VERSION")).into(),
            seed: None,
            verdict: String::new(),
            inputs: BTreeMap::new(),
            facts: BTreeMap::new(),
            chart_constants: Vec::new(),
            overlaps: Vec::new(),
            steps: Vec::new(),
            points: Vec::new(),
            forms: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.facts.insert(key.into(), value.to_string());
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Toml(String),
    #[error("unsupported certificate format '{0}', expected '{CERT_FORMAT}'")]
    Header(String),
}

pub fn emit(cert: &Certificate, format: OutputFormat) -> String {
    match format {
        OutputFormat::Structured => toml::to_string(cert).expect("certificates serialize"),
        OutputFormat::Table => table(cert),
    }
}

pub fn parse(text: &str) -> Result<Certificate, CertError> {
    let c: Certificate = toml::from_str(text).map_err(|e| CertError::Toml(e.to_string()))?;
    if c.format != CERT_FORMAT {
        return Err(CertError::Header(c.format));
    }
    Ok(c)
}

fn columns(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut w: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |out: &mut String, cells: Vec<&str>| {
        let mut s = String::from("  ");
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let pad = w[i] - c.chars().count();
                s.push_str(c);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(out, header.to_vec());
    for r in rows {
        line(out, r.iter().map(String::as_str).collect());
    }
}

fn table(c: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} ({})", c.command, c.toolchain_version);
    let _ = writeln!(out, "verdict: {}", c.verdict);
    if let Some(s) = c.seed {
        let _ = writeln!(out, "seed: {}", s);
    }
    for (title, map) in [("inputs", &c.inputs), ("facts", &c.facts)] {
        if !map.is_empty() {
            let _ = writeln!(out, "{}:", title);
            let rows: Vec<Vec<String>> = map.iter().map(|(k, v)| vec![k.clone(), v.clone()]).collect();
            columns(&mut out, &["key", "value"], &rows);
        }
    }
    if !c.chart_constants.is_empty() {
        out.push_str("chart constants:\n");
        let rows: Vec<Vec<String>> = c
            .chart_constants
            .iter()
            .map(|r| vec![r.chart.clone(), r.constant.clone(), if r.poles { "yes".into() } else { "no".into() }])
            .collect();
        columns(&mut out, &["chart", "constant", "poles"], &rows);
    }
    if !c.overlaps.is_empty() {
        out.push_str("overlaps:\n");
        let rows: Vec<Vec<String>> = c
            .overlaps
            .iter()
            .map(|o| vec![o.from.clone(), o.to.clone(), o.status.clone(), o.witness.clone().unwrap_or_default()])
            .collect();
        columns(&mut out, &["from", "to", "status", "witness"], &rows);
    }
    if !c.steps.is_empty() {
        out.push_str("steps:\n");
        let rows: Vec<Vec<String>> = c
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                vec![
                    (i + 1).to_string(),
                    s.group.clone(),
                    s.justification.clone(),
                    if s.vanishes { "0".into() } else { "?".into() },
                    s.conditions.join("; "),
                ]
            })
            .collect();
        columns(&mut out, &["#", "group", "justification", "value", "conditions"], &rows);
    }
    if !c.points.is_empty() {
        out.push_str("points:\n");
        let keys: Vec<String> = c.points.iter().flat_map(|p| p.values.keys().cloned()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let mut header = vec!["#", "chart"];
        header.extend(keys.iter().map(String::as_str));
        header.push("note");
        let rows: Vec<Vec<String>> = c
            .points
            .iter()
            .map(|p| {
                let mut r = vec![p.index.to_string(), p.chart.clone()];
                r.extend(keys.iter().map(|k| p.values.get(k).map_or(String::from("-"), |v| cell(*v))));
                r.push(p.note.clone().unwrap_or_default());
                r
            })
            .collect();
        columns(&mut out, &header, &rows);
    }
    for f in &c.forms {
        let _ = writeln!(out, "{}: {}", f.name, f.form);
    }
    out
}

fn cell(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{:.6e}", v)
    }
}
