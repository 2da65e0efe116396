//! Closed real intervals with outward rounding.

use std::ops::{Add, Mul, Neg, Sub};

use crate::poly::HomogeneousPolynomial;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi || lo.is_nan() || hi.is_nan(), "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// `[c - r, c + r]` rounded outward.
    pub fn centered(c: f64, r: f64) -> Self {
        Interval {
            lo: (c - r).next_down(),
            hi: (c + r).next_up(),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Whether `self` lies in the interior of `other`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn sqr(self) -> Interval {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.contains_zero() {
            Interval::new(0.0, a.max(b).next_up())
        } else {
            Interval::new(a.min(b).next_down().max(0.0), a.max(b).next_up())
        }
    }

    pub fn powi(self, e: u32) -> Interval {
        match e {
            0 => Interval::point(1.0),
            1 => self,
            _ if e % 2 == 0 => self.powi(e / 2).sqr(),
            _ => self * self.powi(e - 1),
        }
    }

    pub fn scale(self, s: f64) -> Interval {
        self * Interval::point(s)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new((self.lo - o.hi).next_down(), (self.hi - o.lo).next_up())
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        if p.iter().any(|x| x.is_nan()) {
            // 0 * inf: fall back to the whole line.
            return Interval::new(f64::NEG_INFINITY, f64::INFINITY);
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }
}

/// Range enclosure of a real homogeneous polynomial over a box of real
/// homogeneous coordinates. Coefficients are read from their real parts.
pub fn eval_homogeneous(p: &HomogeneousPolynomial, point: &[Interval]) -> Interval {
    let maxe = p.degree().max_exponent() as usize;
    let powers: Vec<Vec<Interval>> = point
        .iter()
        .map(|&x| {
            let mut v = Vec::with_capacity(maxe + 1);
            let mut acc = Interval::point(1.0);
            for _ in 0..=maxe {
                v.push(acc);
                acc = acc * x;
            }
            v
        })
        .collect();
    let mut sum = Interval::point(0.0);
    for (alpha, c) in p.terms() {
        let mut term = Interval::point(c.re);
        for (i, &e) in alpha.exponents().iter().enumerate() {
            if e > 0 {
                term = term * powers[i][e as usize];
            }
        }
        sum = sum + term;
    }
    sum
}

/// Interval Horner for `sum c[k] x^k`.
pub fn eval_univariate(c: &[f64], x: Interval) -> Interval {
    c.iter()
        .rev()
        .fold(Interval::point(0.0), |acc, &ck| acc * x + Interval::point(ck))
}
