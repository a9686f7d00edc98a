//! Plain-text numeric inputs for the curvature command.
//!
//! A spectrum file lists real numbers separated by whitespace or commas.
//! A frame file has `metric`, `curvature` and optional `point` sections;
//! matrix rows are whitespace-separated entries written `re` or `re,im`.
//! `#` starts a comment in both.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InputError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing section '{0}'")]
    Missing(&'static str),
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_spectrum(text: &str) -> Result<Vec<f64>, InputError> {
    let mut out = Vec::new();
    for (line, l) in lines(text) {
        for tok in l.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v: f64 = tok.parse().map_err(|_| InputError::Syntax { line, msg: format!("not a number: '{}'", tok) })?;
            out.push(v);
        }
    }
    Ok(out)
}

fn complex(tok: &str, line: usize) -> Result<Complex64, InputError> {
    let bad = || InputError::Syntax { line, msg: format!("not a complex entry: '{}'", tok) };
    let mut parts = tok.split(',');
    let re: f64 = parts.next().unwrap_or("").parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(s) => s.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// A parsed matrix row and its line number.
type Row = (usize, Vec<Complex64>);

#[derive(Debug)]
pub struct FrameInput {
    pub point: Vec<Complex64>,
    pub metric: DMatrix<Complex64>,
    pub curvature: DMatrix<Complex64>,
}

pub fn parse_frame(text: &str) -> Result<FrameInput, InputError> {
    let mut sections: Vec<(&str, Vec<Row>)> = Vec::new();
    for (line, l) in lines(text) {
        match l {
            "metric" | "curvature" | "point" => sections.push((l, Vec::new())),
            _ => {
                let row = l.split_whitespace().map(|t| complex(t, line)).collect::<Result<Vec<_>, _>>()?;
                match sections.last_mut() {
                    Some((_, rows)) => rows.push((line, row)),
                    None => return Err(InputError::Syntax { line, msg: "data before a section header".into() }),
                }
            }
        }
    }
    let matrix = |name: &'static str| -> Result<DMatrix<Complex64>, InputError> {
        let rows = &sections.iter().find(|(n, _)| *n == name).ok_or(InputError::Missing(name))?.1;
        let n = rows.len();
        for (line, r) in rows {
            if r.len() != n {
                return Err(InputError::Syntax { line: *line, msg: format!("{} row has {} entries, expected {}", name, r.len(), n) });
            }
        }
        Ok(DMatrix::from_fn(n, n, |i, j| rows[i].1[j]))
    };
    let point = sections
        .iter()
        .find(|(n, _)| *n == "point")
        .map(|(_, rows)| rows.iter().flat_map(|(_, r)| r.iter().copied()).collect())
        .unwrap_or_default();
    Ok(FrameInput { point, metric: matrix("metric")?, curvature: matrix("curvature")? })
}
