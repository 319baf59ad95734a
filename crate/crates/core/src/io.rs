//! Text formats: meshes, cochain CSV and key-value scenario files.
//!
//! Mesh files:
//!
//! ```text
//! # comment
//! dim 2
//! v 0 0
//! v 1 0
//! v 0 1
//! s 0 1 2
//! c 0 0 1 0 0 1
//! ```
//!
//! `v` lines give vertex coordinates (`dim` of them), `s` lines give top simplices by
//! 0-based vertex index, and an optional `c` line after an `s` line gives flat chart
//! coordinates for that simplex's vertices in the same order. Either every simplex has a
//! chart or none does.
//!
//! Cochain CSV files start with `# degree=<p> parity=<straight|twisted>`, then the
//! header `simplex_index,value`; missing simplices are zero.

use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Chain, ComplexError, Parity, SimplicialComplex};
use crate::forms_dec::Cochain;
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Complex(#[from] ComplexError),
}

fn perr(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_floats(line: usize, fields: &[&str]) -> Result<Vec<f64>, IoError> {
    fields
        .iter()
        .map(|f| f.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| perr(line, format!("bad number {f:?}"))))
        .collect()
}

pub fn parse_mesh(text: &str) -> Result<SimplicialComplex, IoError> {
    let mut dim: Option<usize> = None;
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let mut charts: Vec<Option<Vec<Vec<f64>>>> = Vec::new();
    let mut last = 0;
    for (line, l) in content_lines(text) {
        last = line;
        let fields: Vec<&str> = l.split_whitespace().collect();
        match fields[0] {
            "dim" => {
                if fields.len() != 2 {
                    return Err(perr(line, "expected `dim <n>`"));
                }
                let d = fields[1].parse().map_err(|_| perr(line, format!("bad dimension {:?}", fields[1])))?;
                if d == 0 {
                    return Err(perr(line, "dimension must be positive"));
                }
                dim = Some(d);
            }
            "v" => {
                let d = dim.ok_or_else(|| perr(line, "`dim` must come before vertices"))?;
                if fields.len() != d + 1 {
                    return Err(perr(line, format!("vertex needs {d} coordinates, got {}", fields.len() - 1)));
                }
                vertices.push(parse_floats(line, &fields[1..])?);
            }
            "s" => {
                if fields.len() < 2 {
                    return Err(perr(line, "simplex needs at least one vertex"));
                }
                let s = fields[1..]
                    .iter()
                    .map(|f| f.parse::<usize>().map_err(|_| perr(line, format!("bad vertex index {f:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(&bad) = s.iter().find(|&&v| v >= vertices.len()) {
                    return Err(perr(line, format!("vertex {bad} not defined ({} vertices so far)", vertices.len())));
                }
                simplices.push(s);
                charts.push(None);
            }
            "c" => {
                let s = simplices.last().ok_or_else(|| perr(line, "chart line must follow a simplex"))?;
                let coords = parse_floats(line, &fields[1..])?;
                if coords.is_empty() || coords.len() % s.len() != 0 {
                    return Err(perr(line, format!("chart needs the same number of coordinates for each of {} vertices", s.len())));
                }
                let per = coords.len() / s.len();
                *charts.last_mut().expect("chart slot") = Some(coords.chunks(per).map(<[f64]>::to_vec).collect());
            }
            other => return Err(perr(line, format!("unknown record {other:?}"))),
        }
    }
    if simplices.is_empty() {
        return Err(perr(last, "mesh has no simplices"));
    }
    let with = charts.iter().filter(|c| c.is_some()).count();
    let charts = match with {
        0 => None,
        n if n == charts.len() => Some(charts.into_iter().map(|c| c.expect("checked")).collect()),
        _ => return Err(perr(last, "either every simplex has a chart or none does")),
    };
    Ok(SimplicialComplex::build_with_charts(vertices, &simplices, charts)?)
}

/// Render a complex in the mesh format; top simplices keep their input orientation.
pub fn write_mesh(complex: &SimplicialComplex) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", complex.embedding_dim());
    for v in complex.vertices() {
        let coords: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
        let _ = writeln!(out, "v {}", coords.join(" "));
    }
    let n = complex.dim();
    for (t, &sign) in complex.input_orientation().iter().enumerate() {
        let mut s = complex.simplex(n, t).to_vec();
        let mut chart = complex.has_charts().then(|| complex.top_coords(t));
        if sign < 0 && s.len() > 1 {
            s.swap(0, 1);
            if let Some(c) = chart.as_mut() {
                c.swap(0, 1);
            }
        }
        let idx: Vec<String> = s.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "s {}", idx.join(" "));
        if let Some(c) = chart {
            let coords: Vec<String> = c.iter().flatten().map(|x| format!("{x}")).collect();
            let _ = writeln!(out, "c {}", coords.join(" "));
        }
    }
    out
}

fn parse_header(line: usize, l: &str) -> Result<(usize, Parity), IoError> {
    let mut degree = None;
    let mut parity = None;
    for field in l.trim_start_matches('#').split_whitespace() {
        match field.split_once('=') {
            Some(("degree", v)) => degree = Some(v.parse().map_err(|_| perr(line, format!("bad degree {v:?}")))?),
            Some(("parity", v)) => parity = Some(Parity::parse(v).ok_or_else(|| perr(line, format!("bad parity {v:?}")))?),
            _ => return Err(perr(line, format!("unexpected header field {field:?}"))),
        }
    }
    Ok((degree.ok_or_else(|| perr(line, "header lacks degree="))?, parity.ok_or_else(|| perr(line, "header lacks parity="))?))
}

pub fn parse_cochain(text: &str, complex: &SimplicialComplex) -> Result<Cochain<Rational>, IoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty cochain file"))?;
    if !header.starts_with('#') {
        return Err(perr(hl, "expected `# degree=<p> parity=<straight|twisted>`"));
    }
    let (degree, parity) = parse_header(hl, header)?;
    if degree > complex.dim() {
        return Err(perr(hl, format!("degree {degree} exceeds complex dimension {}", complex.dim())));
    }
    let mut values = vec![Rational::from_integer(0.into()); complex.count(degree)];
    let mut seen = vec![false; values.len()];
    for (line, l) in lines {
        if l.starts_with('#') || l.eq_ignore_ascii_case("simplex_index,value") {
            continue;
        }
        let (i, v) = l.split_once(',').ok_or_else(|| perr(line, "expected `simplex_index,value`"))?;
        let i: usize = i.trim().parse().map_err(|_| perr(line, format!("bad simplex index {i:?}")))?;
        if i >= values.len() {
            return Err(perr(line, format!("simplex index {i} out of range ({} {degree}-simplices)", values.len())));
        }
        if seen[i] {
            return Err(perr(line, format!("simplex index {i} given twice")));
        }
        seen[i] = true;
        values[i] = parse_rational(v).ok_or_else(|| perr(line, format!("bad value {v:?}")))?;
    }
    Ok(Cochain { degree, values, parity })
}

pub fn write_cochain(c: &Cochain<Rational>) -> String {
    let mut out = format!("# degree={} parity={}\nsimplex_index,value\n", c.degree, c.parity);
    for (i, v) in c.values.iter().enumerate() {
        let _ = writeln!(out, "{i},{}", format_rational(v));
    }
    out
}

pub fn write_cochain_f64(c: &Cochain<f64>) -> String {
    let mut out = format!("# degree={} parity={}\nsimplex_index,value\n", c.degree, c.parity);
    for (i, v) in c.values.iter().enumerate() {
        let _ = writeln!(out, "{i},{v:.17e}");
    }
    out
}

/// Chain file: a `# degree=<p> parity=<...>` header, then `vertex tuple,coefficient` rows such
/// as `0 1 2,1/2`. A reversed tuple negates the coefficient.
pub fn parse_chain(text: &str, complex: &SimplicialComplex) -> Result<Chain, IoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty chain file"))?;
    if !header.starts_with('#') {
        return Err(perr(hl, "expected `# degree=<p> parity=<straight|twisted>`"));
    }
    let (degree, parity) = parse_header(hl, header)?;
    let mut chain = Chain::zero(degree, parity);
    for (line, l) in lines {
        if l.starts_with('#') {
            continue;
        }
        let (t, v) = l.split_once(',').ok_or_else(|| perr(line, "expected `v0 v1 ...,coefficient`"))?;
        let tuple = t
            .split_whitespace()
            .map(|f| f.parse::<usize>().map_err(|_| perr(line, format!("bad vertex {f:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if tuple.len() != degree + 1 {
            return Err(perr(line, format!("a {degree}-simplex needs {} vertices", degree + 1)));
        }
        let c = parse_rational(v).ok_or_else(|| perr(line, format!("bad coefficient {v:?}")))?;
        let (idx, sign) = complex.oriented_index(&tuple).ok_or_else(|| perr(line, format!("{tuple:?} is not a simplex of the mesh")))?;
        chain.add_term(idx, if sign < 0 { -c } else { c });
    }
    Ok(chain)
}

/// Key-value scenario file: `key = value` per line, `#` comments, repeatable keys.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scenario {
    entries: Vec<(String, String, usize)>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let mut entries = Vec::new();
        for (line, l) in content_lines(text) {
            let (k, v) = l.split_once('=').ok_or_else(|| perr(line, "expected `key = value`"))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(perr(line, "empty key"));
            }
            entries.push((k.to_string(), v.trim().to_string(), line));
        }
        Ok(Scenario { entries })
    }

    /// Last value of `key` with its line number.
    pub fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.iter().rev().find(|e| e.0 == key).map(|e| (e.1.as_str(), e.2))
    }

    pub fn get_all(&self, key: &str) -> Vec<(&str, usize)> {
        self.entries.iter().filter(|e| e.0 == key).map(|e| (e.1.as_str(), e.2)).collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = (&str, usize)> {
        self.entries.iter().map(|e| (e.0.as_str(), e.2))
    }

    /// Whitespace-separated values of `key`, parsed as `T`.
    pub fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<(Vec<T>, usize)>, IoError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => Ok(Some((parse_list(v, line, key)?, line))),
        }
    }

    pub fn scalar<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, IoError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse().map(Some).map_err(|_| perr(line, format!("bad value for {key}: {v:?}"))),
        }
    }
}

pub fn parse_list<T: std::str::FromStr>(v: &str, line: usize, key: &str) -> Result<Vec<T>, IoError> {
    v.split_whitespace()
        .map(|f| f.parse::<T>().map_err(|_| perr(line, format!("bad value for {key}: {f:?}"))))
        .collect()
}
