use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Degree, HomogeneousPolynomial, MultiIndex, Space};
use crate::error::{Error, Result};

/// Wire form of a section:
/// `{"space": "CP2", "degree": 3, "coeffs": [{"alpha": [3,0,0], "re": 1.0, "im": 0.0}, ...]}`.
///
/// `degree` is an integer for `CP1`/`CP2` and for bidegree `(d, d)` on
/// `CP1xCP1`; unequal bidegrees are written as a two-element array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub space: String,
    pub degree: DegreeJson,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DegreeJson {
    Single(u32),
    Pair([u32; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl From<&HomogeneousPolynomial> for PolynomialJson {
    fn from(p: &HomogeneousPolynomial) -> Self {
        let degree = match p.degree() {
            Degree::Total(d) => DegreeJson::Single(d),
            Degree::Bi(a, b) if a == b => DegreeJson::Single(a),
            Degree::Bi(a, b) => DegreeJson::Pair([a, b]),
        };
        PolynomialJson {
            space: p.space().label().to_string(),
            degree,
            coeffs: p
                .terms()
                .map(|(k, c)| CoeffJson {
                    alpha: k.exponents().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl PolynomialJson {
    pub fn to_polynomial(&self) -> Result<HomogeneousPolynomial> {
        let parse_err = |location: String, message: String| Error::Parse { location, message };
        let space: Space = self
            .space
            .parse()
            .map_err(|e: Error| parse_err("space".into(), e.to_string()))?;
        let degree = match (space, &self.degree) {
            (Space::Cp1xCp1, DegreeJson::Single(d)) => Degree::Bi(*d, *d),
            (Space::Cp1xCp1, DegreeJson::Pair([a, b])) => Degree::Bi(*a, *b),
            (_, DegreeJson::Single(d)) => Degree::Total(*d),
            (_, DegreeJson::Pair(_)) => {
                return Err(parse_err(
                    "degree".into(),
                    format!("bidegree given for {space}"),
                ))
            }
        };
        let mut p = HomogeneousPolynomial::zero(space, degree)
            .map_err(|e| parse_err("degree".into(), e.to_string()))?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(parse_err(format!("coeffs[{i}]"), "non-finite coefficient".into()));
            }
            p.add_term(MultiIndex::new(c.alpha.clone()), Complex64::new(c.re, c.im))
                .map_err(|e| parse_err(format!("coeffs[{i}].alpha"), e.to_string()))?;
        }
        Ok(p)
    }
}

pub fn write_polynomial(p: &HomogeneousPolynomial, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(&PolynomialJson::from(p))?;
    std::fs::write(path, json)?;
    Ok(())
}

/// Reads a section file. Syntax errors carry `line:column`; semantic errors
/// carry the JSON path of the offending entry.
pub fn read_polynomial(path: &Path) -> Result<HomogeneousPolynomial> {
    let text = std::fs::read_to_string(path)?;
    parse_polynomial(&text)
}

pub fn parse_polynomial(text: &str) -> Result<HomogeneousPolynomial> {
    let wire: PolynomialJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    wire.to_polynomial()
}
