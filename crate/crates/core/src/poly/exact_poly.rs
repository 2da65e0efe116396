use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Degree, HomogeneousPolynomial, MultiIndex, Space};
use crate::exact::f64_to_rational;

/// Real homogeneous polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPolynomial {
    space: Space,
    degree: Degree,
    coeffs: BTreeMap<MultiIndex, BigRational>,
}

impl ExactPolynomial {
    pub(super) fn from_homogeneous(p: &HomogeneousPolynomial) -> Self {
        let coeffs = p
            .terms()
            .filter(|(_, c)| c.re != 0.0)
            .map(|(k, c)| (k.clone(), f64_to_rational(c.re)))
            .collect();
        ExactPolynomial {
            space: p.space(),
            degree: p.degree(),
            coeffs,
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> BigRational {
        self.coeffs.get(alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let degree = shift_degree(self.space, self.degree, var, -1);
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let e = k.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut ex = k.exponents().to_vec();
            ex[var] -= 1;
            coeffs.insert(MultiIndex::new(ex), c * BigInt::from(e));
        }
        ExactPolynomial {
            space: self.space,
            degree,
            coeffs,
        }
    }

    pub fn mul_var(&self, var: usize) -> Self {
        let degree = shift_degree(self.space, self.degree, var, 1);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let mut ex = k.exponents().to_vec();
                ex[var] += 1;
                (MultiIndex::new(ex), c.clone())
            })
            .collect();
        ExactPolynomial {
            space: self.space,
            degree,
            coeffs,
        }
    }

    /// `self + s * other`, assuming matching space and degree.
    pub fn add_scaled(&self, other: &Self, s: &BigRational) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let entry = coeffs.entry(k.clone()).or_insert_with(BigRational::zero);
            *entry += c * s;
        }
        coeffs.retain(|_, c| !c.is_zero());
        ExactPolynomial {
            space: self.space,
            degree: self.degree,
            coeffs,
        }
    }

    /// `sum_{i in factor} x_i d_i P - deg_factor * P`, which vanishes identically
    /// for homogeneous `P` (Euler's relation). `factor` is 0 except for the
    /// second factor of `CP1 x CP1`.
    pub fn euler_defect(&self, factor: usize) -> Self {
        let (vars, deg): (Vec<usize>, u32) = match (self.space, self.degree) {
            (Space::Cp1xCp1, Degree::Bi(a, b)) => {
                if factor == 0 {
                    (vec![0, 1], a)
                } else {
                    (vec![2, 3], b)
                }
            }
            (space, Degree::Total(d)) => ((0..space.num_vars()).collect(), d),
            (_, Degree::Bi(a, _)) => (vec![0, 1], a),
        };
        let one = BigRational::from_integer(BigInt::from(1));
        let mut acc = ExactPolynomial {
            space: self.space,
            degree: self.degree,
            coeffs: BTreeMap::new(),
        };
        for v in vars {
            acc = acc.add_scaled(&self.partial_derivative(v).mul_var(v), &one);
        }
        acc.add_scaled(self, &BigRational::from_integer(-BigInt::from(deg)))
    }
}

fn shift_degree(space: Space, degree: Degree, var: usize, delta: i64) -> Degree {
    let bump = |d: u32| (d as i64 + delta).max(0) as u32;
    match (space, degree) {
        (Space::Cp1xCp1, Degree::Bi(a, b)) => {
            if var < 2 {
                Degree::Bi(bump(a), b)
            } else {
                Degree::Bi(a, bump(b))
            }
        }
        (_, Degree::Total(d)) => Degree::Total(bump(d)),
        (_, deg) => deg,
    }
}
