//! `dump-matrix` argument parsing and output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::value::RawValue;

use qtem_core::matrices::{curl_curl_matrix, local_gradient_matrix, vector_mass_matrix};
use qtem_core::scalar::Mat6;
use qtem_core::{element_matrix, EdgeSign, MatrixKind, Point, TriangleGeometry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DumpKind {
    Kind(MatrixKind),
    CurlCurl,
    VectorMass,
    Gradient,
}

impl DumpKind {
    fn name(self) -> &'static str {
        match self {
            DumpKind::Kind(k) => k.name(),
            DumpKind::CurlCurl => "curl_curl",
            DumpKind::VectorMass => "vector_mass",
            DumpKind::Gradient => "gradient",
        }
    }
}

impl FromStr for DumpKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "curl_curl" => Ok(DumpKind::CurlCurl),
            "vector_mass" => Ok(DumpKind::VectorMass),
            "gradient" => Ok(DumpKind::Gradient),
            _ => s.parse().map(DumpKind::Kind).map_err(|e: qtem_core::Error| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corners(pub [Point; 3]);

impl FromStr for Corners {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let pts: Vec<&str> = s.split_whitespace().collect();
        if pts.len() != 3 {
            return Err(format!("expected three corners \"x1,y1 x2,y2 x3,y3\", got {}", pts.len()));
        }
        let mut out = [[0.0; 2]; 3];
        for (k, p) in pts.iter().enumerate() {
            let (x, y) = p.split_once(',').ok_or_else(|| format!("corner `{p}` is not of the form x,y"))?;
            for (d, v) in [x, y].into_iter().enumerate() {
                out[k][d] = v
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("invalid coordinate `{v}`"))?;
            }
        }
        Ok(Corners(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Signs(pub [EdgeSign; 3]);

impl FromStr for Signs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(format!("expected three signs such as +-+, got `{s}`"));
        }
        let mut out = [EdgeSign::Plus; 3];
        for (k, ch) in chars.into_iter().enumerate() {
            out[k] = EdgeSign::from_char(ch).ok_or_else(|| format!("invalid sign `{ch}`"))?;
        }
        Ok(Signs(out))
    }
}

pub struct Dump {
    kind: DumpKind,
    geom: TriangleGeometry,
    entries: Mat6<f64>,
}

pub fn dump(kind: DumpKind, corners: Corners, signs: Signs) -> qtem_core::Result<Dump> {
    let geom = TriangleGeometry::new(corners.0)?.with_edge_signs(signs.0);
    let entries = match kind {
        DumpKind::Kind(k) => element_matrix(k, &geom).entries,
        DumpKind::CurlCurl => curl_curl_matrix(&geom),
        DumpKind::VectorMass => vector_mass_matrix(&geom),
        DumpKind::Gradient => local_gradient_matrix(&geom),
    };
    Ok(Dump { kind, geom, entries })
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct JsonDump<'a> {
    kind: &'a str,
    corners: Vec<[Box<RawValue>; 2]>,
    signs: String,
    reordered: bool,
    area: Box<RawValue>,
    entries: Vec<Vec<Box<RawValue>>>,
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(num(x)).expect("formatted float is valid JSON")
}

impl Dump {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(|&x| num(x)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = JsonDump {
            kind: self.kind.name(),
            corners: self.geom.corners.iter().map(|p| [raw(p[0]), raw(p[1])]).collect(),
            signs: self.geom.edge_sign.iter().map(|s| s.as_char()).collect(),
            reordered: self.geom.reordered,
            area: raw(self.geom.area),
            entries: self.entries.iter().map(|r| r.iter().map(|&x| raw(x)).collect()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("dump serializes")
    }
}
