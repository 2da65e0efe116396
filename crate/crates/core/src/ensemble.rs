//! Gaussian ensembles on spaces of sections with the Fubini–Study L² product.
//!
//! In the monomial basis the Fubini–Study L² product is diagonal with
//! `<z^a, z^a> proportional to 1 / w_a`, where `w_a` is the multinomial
//! coefficient (product of binomials on `CP1 x CP1`). The Gaussian with
//! density `exp(-|s|^2)` therefore has independent coefficients
//! `sqrt(w_a) * g_a` with `g_a` of variance 1/2 per real component.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{monomials, Degree, HomogeneousPolynomial, MultiIndex, Space};

/// Real or complex Gaussian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Which ensemble to draw from, and the seed that keys every stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub space: Space,
    pub degree: u32,
    pub field: Field,
    pub master_seed: u64,
}

impl EnsembleSpec {
    pub fn new(space: Space, degree: u32, field: Field, master_seed: u64) -> Self {
        assert!(degree >= 1, "degree must be at least 1");
        EnsembleSpec {
            space,
            degree,
            field,
            master_seed,
        }
    }

    pub fn section_degree(&self) -> Degree {
        self.space.degree(self.degree)
    }

    /// Dimension `N_d` of the space of sections.
    pub fn n_d(&self) -> usize {
        let d = self.degree as usize;
        match self.space {
            Space::Cp1 => d + 1,
            Space::Cp2 => (d + 1) * (d + 2) / 2,
            Space::Cp1xCp1 => (d + 1) * (d + 1),
        }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    if n <= 1000 {
        // Exact while the running value stays below 2^53.
        let mut c = 1.0f64;
        for i in 1..=k {
            c = c * (n - k + i) as f64 / i as f64;
        }
        c
    } else {
        ln_binomial(n, k).exp()
    }
}

fn ln_binomial(n: u32, k: u32) -> f64 {
    let ln_fact = |m: u32| (2..=m).map(|j| (j as f64).ln()).sum::<f64>();
    ln_fact(n) - ln_fact(k) - ln_fact(n - k)
}

/// Variance weight `w_a` of the monomial `alpha` in the Kostlan ensemble.
pub fn kostlan_weight(space: Space, degree: Degree, alpha: &MultiIndex) -> Result<f64> {
    if !alpha.fits(space, degree) {
        return Err(Error::InvalidArgument(format!(
            "multi-index {:?} invalid for {space} degree {degree:?}",
            alpha.exponents()
        )));
    }
    let e = alpha.exponents();
    Ok(match (space, degree) {
        (Space::Cp1, Degree::Total(d)) => binomial(d, e[0]),
        (Space::Cp2, Degree::Total(d)) => binomial(d, e[0]) * binomial(d - e[0], e[1]),
        (Space::Cp1xCp1, Degree::Bi(a, b)) => binomial(a, e[0]) * binomial(b, e[2]),
        _ => unreachable!("checked by fits"),
    })
}

/// The full table of weights for one section space.
#[derive(Clone, Debug)]
pub struct KostlanWeights {
    weights: BTreeMap<MultiIndex, f64>,
}

impl KostlanWeights {
    pub fn new(space: Space, degree: Degree) -> Self {
        let weights = monomials(space, degree)
            .into_iter()
            .map(|a| {
                let w = kostlan_weight(space, degree, &a).expect("enumerated index is valid");
                (a, w)
            })
            .collect();
        KostlanWeights { weights }
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<f64> {
        self.weights.get(alpha).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Uniform double in (0, 1].
fn open_unit(x: u64) -> f64 {
    ((x >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard Gaussian pair keyed by `(seed, stream, position)`: the two
/// components are independent with variance 1/2 each.
pub(crate) fn gaussian_pair(rng: &mut ChaCha8Rng, position: u64) -> (f64, f64) {
    rng.set_word_pos(position as u128 * 4);
    let u1 = open_unit(rng.next_u64());
    let u2 = open_unit(rng.next_u64());
    let r = (-u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Counter-based generator for one trial: stream = trial index.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// Draws the section of trial `trial_index`. The coefficient of the monomial
/// of rank `r` depends only on `(master_seed, trial_index, r)`.
pub fn sample_section(spec: &EnsembleSpec, trial_index: u64) -> HomogeneousPolynomial {
    let degree = spec.section_degree();
    let mut rng = trial_rng(spec.master_seed, trial_index);
    let terms = monomials(spec.space, degree)
        .into_iter()
        .enumerate()
        .map(|(rank, alpha)| {
            let w = kostlan_weight(spec.space, degree, &alpha).expect("valid index");
            let (a, b) = gaussian_pair(&mut rng, rank as u64);
            let g = match spec.field {
                Field::Complex => Complex64::new(a, b),
                Field::Real => Complex64::new(a, 0.0),
            };
            (alpha, g * w.sqrt())
        })
        .collect::<Vec<_>>();
    HomogeneousPolynomial::from_terms(spec.space, degree, terms).expect("valid section")
}

/// Fubini–Study L² product `<P, Q> = sum conj(p_a) q_a / w_a`, antilinear in
/// the first slot.
pub fn l2_inner_product(p: &HomogeneousPolynomial, q: &HomogeneousPolynomial) -> Result<Complex64> {
    if p.space() != q.space() || p.degree() != q.degree() {
        return Err(Error::Mismatch(format!(
            "{}/{:?} vs {}/{:?}",
            p.space(),
            p.degree(),
            q.space(),
            q.degree()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (alpha, a) in p.terms() {
        let b = q.coeff(alpha);
        if b == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = kostlan_weight(p.space(), p.degree(), alpha)?;
        acc += a.conj() * b / w;
    }
    Ok(acc)
}

/// `||P||` for the Fubini–Study L² product.
pub fn l2_norm(p: &HomogeneousPolynomial) -> f64 {
    l2_inner_product(p, p).map(|z| z.re.max(0.0).sqrt()).unwrap_or(0.0)
}
