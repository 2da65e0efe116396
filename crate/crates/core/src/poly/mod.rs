//! Homogeneous and affine polynomials over the complex numbers.
//!
//! A [`HomogeneousPolynomial`] is a global section of `O(d)` on `CP1`/`CP2` or of
//! `O(d1, d2)` on `CP1 x CP1`, stored sparsely in the monomial basis. Chart
//! representatives are [`AffinePolynomial`]s with a dense coefficient grid.

mod affine;
mod exact_poly;
mod json;

pub use affine::AffinePolynomial;
pub use exact_poly::ExactPolynomial;
pub use json::{parse_polynomial, read_polynomial, write_polynomial, PolynomialJson};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit roundoff of `f64`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Ambient spaces supported by the laboratory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    #[serde(rename = "CP1")]
    Cp1,
    #[serde(rename = "CP2")]
    Cp2,
    #[serde(rename = "CP1xCP1")]
    Cp1xCp1,
}

impl Space {
    /// Number of homogeneous variables.
    pub fn num_vars(self) -> usize {
        match self {
            Space::Cp1 => 2,
            Space::Cp2 => 3,
            Space::Cp1xCp1 => 4,
        }
    }

    /// Complex dimension of the space.
    pub fn dimension(self) -> usize {
        match self {
            Space::Cp1 => 1,
            Space::Cp2 | Space::Cp1xCp1 => 2,
        }
    }

    /// Number of standard affine charts.
    pub fn num_charts(self) -> usize {
        match self {
            Space::Cp1 => 2,
            Space::Cp2 => 3,
            Space::Cp1xCp1 => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Space::Cp1 => "CP1",
            Space::Cp2 => "CP2",
            Space::Cp1xCp1 => "CP1xCP1",
        }
    }

    /// The degree type naturally carried by a section of degree `d`.
    pub fn degree(self, d: u32) -> Degree {
        match self {
            Space::Cp1 | Space::Cp2 => Degree::Total(d),
            Space::Cp1xCp1 => Degree::Bi(d, d),
        }
    }

    fn validate_degree(self, degree: Degree) -> Result<()> {
        match (self, degree) {
            (Space::Cp1 | Space::Cp2, Degree::Total(_)) | (Space::Cp1xCp1, Degree::Bi(_, _)) => {
                Ok(())
            }
            _ => Err(Error::InvalidArgument(format!(
                "degree {degree:?} does not fit space {self}"
            ))),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CP1" => Ok(Space::Cp1),
            "CP2" => Ok(Space::Cp2),
            "CP1xCP1" => Ok(Space::Cp1xCp1),
            other => Err(Error::InvalidArgument(format!("unknown space '{other}'"))),
        }
    }
}

/// Degree of a section: total degree on `CP^n`, bidegree on `CP1 x CP1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Degree {
    Total(u32),
    Bi(u32, u32),
}

impl Degree {
    /// Largest exponent any single variable can carry.
    pub fn max_exponent(self) -> u32 {
        match self {
            Degree::Total(d) => d,
            Degree::Bi(a, b) => a.max(b),
        }
    }

    /// Total degree of each monomial.
    pub fn total(self) -> u32 {
        match self {
            Degree::Total(d) => d,
            Degree::Bi(a, b) => a + b,
        }
    }
}

/// Exponent vector of a monomial in the homogeneous variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Checks the degree constraint of `space`/`degree`.
    pub fn fits(&self, space: Space, degree: Degree) -> bool {
        if self.0.len() != space.num_vars() {
            return false;
        }
        match (space, degree) {
            (Space::Cp1 | Space::Cp2, Degree::Total(d)) => self.total() == d,
            (Space::Cp1xCp1, Degree::Bi(a, b)) => {
                self.0[0] + self.0[1] == a && self.0[2] + self.0[3] == b
            }
            _ => false,
        }
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// All monomials of the section space, in rank order. The rank of a monomial
/// is its position in this list; the ensemble keys its random stream on it.
pub fn monomials(space: Space, degree: Degree) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    match (space, degree) {
        (Space::Cp1, Degree::Total(d)) => {
            for a in (0..=d).rev() {
                out.push(MultiIndex(vec![a, d - a]));
            }
        }
        (Space::Cp2, Degree::Total(d)) => {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    out.push(MultiIndex(vec![a, b, d - a - b]));
                }
            }
        }
        (Space::Cp1xCp1, Degree::Bi(d1, d2)) => {
            for a in (0..=d1).rev() {
                for b in (0..=d2).rev() {
                    out.push(MultiIndex(vec![a, d1 - a, b, d2 - b]));
                }
            }
        }
        _ => {}
    }
    out
}

/// A value together with an a-priori bound on its rounding error.
///
/// `magnitude` is `sum |c_a| |v^a|`, so `|value| / magnitude` is the
/// normwise backward error of the point as a zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub error_bound: f64,
    pub magnitude: f64,
}

impl Evaluation {
    pub fn backward_error(&self) -> f64 {
        if self.magnitude > 0.0 {
            self.value.norm() / self.magnitude
        } else {
            0.0
        }
    }
}

/// Section of `O(d)` (or `O(d1, d2)`) in the monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial {
    space: Space,
    degree: Degree,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl HomogeneousPolynomial {
    /// The zero section.
    pub fn zero(space: Space, degree: Degree) -> Result<Self> {
        space.validate_degree(degree)?;
        Ok(HomogeneousPolynomial {
            space,
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds a section from `(multi-index, coefficient)` terms. Repeated
    /// indices are summed; exact zeros are dropped.
    pub fn from_terms<I>(space: Space, degree: Degree, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = Self::zero(space, degree)?;
        for (alpha, c) in terms {
            p.add_term(alpha, c)?;
        }
        Ok(p)
    }

    /// Convenience constructor from real coefficients on exponent vectors.
    pub fn from_real_terms(space: Space, degree: Degree, terms: &[(&[u32], f64)]) -> Result<Self> {
        Self::from_terms(
            space,
            degree,
            terms
                .iter()
                .map(|(e, c)| (MultiIndex(e.to_vec()), Complex64::new(*c, 0.0))),
        )
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) -> Result<()> {
        if !alpha.fits(self.space, self.degree) {
            return Err(Error::InvalidArgument(format!(
                "multi-index {:?} invalid for {} of degree {:?}",
                alpha.0, self.space, self.degree
            )));
        }
        let zero = Complex64::new(0.0, 0.0);
        match self.coeffs.entry(alpha) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == zero {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if c != zero {
                    v.insert(c);
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// Total degree `d` for `CP^n` sections, first-factor degree on `CP1 x CP1`.
    pub fn d(&self) -> u32 {
        match self.degree {
            Degree::Total(d) => d,
            Degree::Bi(a, _) => a,
        }
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff every coefficient is real, i.e. the section commutes with the
    /// standard real structures.
    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|c| c.im == 0.0)
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Action of the real structure on sections: conjugates every coefficient.
    pub fn conjugate_section(&self) -> Self {
        HomogeneousPolynomial {
            space: self.space,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.conj())).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= s;
        }
        out.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        out
    }

    /// Sum of two sections of the same space and degree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space || self.degree != other.degree {
            return Err(Error::Mismatch(format!(
                "{}/{:?} vs {}/{:?}",
                self.space, self.degree, other.space, other.degree
            )));
        }
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(k.clone(), *c)?;
        }
        Ok(out)
    }

    /// Product of two sections on the same space; degrees add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let degree = match (self.degree, other.degree) {
            (Degree::Total(a), Degree::Total(b)) if self.space == other.space => Degree::Total(a + b),
            (Degree::Bi(a, b), Degree::Bi(c, d)) if self.space == other.space => Degree::Bi(a + c, b + d),
            _ => {
                return Err(Error::Mismatch(format!(
                    "{}/{:?} vs {}/{:?}",
                    self.space, self.degree, other.space, other.degree
                )))
            }
        };
        let mut out = HomogeneousPolynomial::zero(self.space, degree)?;
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let e = ka.0.iter().zip(&kb.0).map(|(x, y)| x + y).collect();
                out.add_term(MultiIndex(e), ca * cb)?;
            }
        }
        Ok(out)
    }

    /// Product with the homogeneous variable `var`.
    pub fn mul_var(&self, var: usize) -> Result<Self> {
        self.check_var(var)?;
        let degree = match (self.space, self.degree) {
            (Space::Cp1xCp1, Degree::Bi(a, b)) => {
                if var < 2 {
                    Degree::Bi(a + 1, b)
                } else {
                    Degree::Bi(a, b + 1)
                }
            }
            (_, Degree::Total(d)) => Degree::Total(d + 1),
            (_, deg) => deg,
        };
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let mut e = k.0.clone();
                e[var] += 1;
                (MultiIndex(e), *c)
            })
            .collect();
        Ok(HomogeneousPolynomial {
            space: self.space,
            degree,
            coeffs,
        })
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.space.num_vars() {
            return Err(Error::InvalidArgument(format!(
                "variable index {var} out of range for {}",
                self.space
            )));
        }
        Ok(())
    }

    /// Partial derivative with respect to the homogeneous variable `var`.
    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        self.check_var(var)?;
        let degree = match (self.space, self.degree) {
            (Space::Cp1xCp1, Degree::Bi(a, b)) => {
                if var < 2 {
                    Degree::Bi(a.saturating_sub(1), b)
                } else {
                    Degree::Bi(a, b.saturating_sub(1))
                }
            }
            (_, Degree::Total(d)) => Degree::Total(d.saturating_sub(1)),
            (_, deg) => deg,
        };
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let e = k.0[var];
            if e == 0 {
                continue;
            }
            let mut ex = k.0.clone();
            ex[var] -= 1;
            coeffs.insert(MultiIndex(ex), *c * e as f64);
        }
        Ok(HomogeneousPolynomial {
            space: self.space,
            degree,
            coeffs,
        })
    }

    /// Evaluates at a homogeneous point, reporting an a-priori rounding bound.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Evaluation> {
        let n = self.space.num_vars();
        if point.len() != n {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, {} expected",
                point.len(),
                n
            )));
        }
        let maxe = self.degree.max_exponent() as usize;
        let powers: Vec<Vec<Complex64>> = point
            .iter()
            .map(|&z| {
                let mut p = Vec::with_capacity(maxe + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=maxe {
                    p.push(acc);
                    acc *= z;
                }
                p
            })
            .collect();
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (k, c) in &self.coeffs {
            let mut term = *c;
            for (i, &e) in k.0.iter().enumerate() {
                term *= powers[i][e as usize];
            }
            value += term;
            magnitude += term.norm();
        }
        let steps = 3.0 * (self.degree.total() as f64 + 2.0) + self.coeffs.len() as f64;
        Ok(Evaluation {
            value,
            error_bound: 1.01 * steps * UNIT_ROUNDOFF * magnitude,
            magnitude,
        })
    }

    /// Substitutes `x_a -> m[0][0] x_a + m[0][1] x_b`,
    /// `x_b -> m[1][0] x_a + m[1][1] x_b`. Both variables must belong to the
    /// same factor on `CP1 x CP1`.
    pub fn linear_substitution(&self, a: usize, b: usize, m: [[Complex64; 2]; 2]) -> Result<Self> {
        let n = self.space.num_vars();
        let same_factor = self.space != Space::Cp1xCp1 || a / 2 == b / 2;
        if a >= n || b >= n || a == b || !same_factor {
            return Err(Error::InvalidArgument(format!(
                "cannot substitute variables {a}, {b} on {}",
                self.space
            )));
        }
        // Binary-form powers (m_r0 x_a + m_r1 x_b)^e as coefficient lists in x_a.
        let maxe = self.degree.max_exponent() as usize;
        let powers = |row: usize| {
            let mut out = vec![vec![Complex64::new(1.0, 0.0)]];
            for e in 1..=maxe {
                let prev: &Vec<Complex64> = &out[e - 1];
                let mut next = vec![Complex64::new(0.0, 0.0); e + 1];
                for (k, &c) in prev.iter().enumerate() {
                    next[k + 1] += c * m[row][0];
                    next[k] += c * m[row][1];
                }
                out.push(next);
            }
            out
        };
        let (pa, pb) = (powers(0), powers(1));
        let mut out = Self::zero(self.space, self.degree)?;
        for (alpha, &c) in &self.coeffs {
            let (ja, jb) = (alpha.0[a] as usize, alpha.0[b] as usize);
            for (ka, &ca) in pa[ja].iter().enumerate() {
                for (kb, &cb) in pb[jb].iter().enumerate() {
                    let coef = c * ca * cb;
                    if coef == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut e = alpha.0.clone();
                    let total = (ja + jb) as u32;
                    e[a] = (ka + kb) as u32;
                    e[b] = total - e[a];
                    out.add_term(MultiIndex(e), coef)?;
                }
            }
        }
        Ok(out)
    }

    /// Restriction to the standard affine chart `chart` (see [`AffinePolynomial`]).
    pub fn dehomogenize(&self, chart: usize) -> Result<AffinePolynomial> {
        AffinePolynomial::from_homogeneous(self, chart)
    }

    /// Exact rational copy of the real parts of the coefficients.
    pub fn to_exact(&self) -> ExactPolynomial {
        ExactPolynomial::from_homogeneous(self)
    }
}
