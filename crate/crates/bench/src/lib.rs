//! Fixtures shared by the benchmarks: fixed Kostlan sections so every run
//! times the same inputs.

use lefschetz_core::{sample_section, AffinePolynomial, EnsembleSpec, Field, HomogeneousPolynomial, Space};

pub const SEED: u64 = 0x5eed;

pub fn section(space: Space, d: u32, field: Field) -> HomogeneousPolynomial {
    sample_section(&EnsembleSpec::new(space, d, field, SEED), 0)
}

/// Real coefficients of a univariate Kostlan polynomial, lowest first.
pub fn real_univariate(d: u32) -> Vec<f64> {
    section(Space::Cp1, d, Field::Real)
        .dehomogenize(0)
        .expect("chart 0 exists")
        .coeffs()
        .iter()
        .map(|c| c.re)
        .collect()
}

pub fn complex_univariate(d: u32) -> AffinePolynomial {
    section(Space::Cp1, d, Field::Complex).dehomogenize(0).expect("chart 0 exists")
}
