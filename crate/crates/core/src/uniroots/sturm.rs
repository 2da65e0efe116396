use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{f64s_to_scaled_integers, rational_to_f64};

/// Univariate polynomial with integer coefficients, constant term first.
///
/// `formal_degree` is the degree the polynomial was declared with; it exceeds
/// the true degree when leading coefficients vanish, which is how a root at
/// infinity shows up for a binary form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
    formal_degree: usize,
}

impl IntPoly {
    /// Builds the primitive part of `coeffs`. The zero polynomial is rejected.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let formal_degree = coeffs.len().saturating_sub(1);
        let mut coeffs = coeffs;
        trim(&mut coeffs);
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        }
        let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if !content.is_one() {
            for c in &mut coeffs {
                *c /= &content;
            }
        }
        Ok(IntPoly {
            coeffs,
            formal_degree,
        })
    }

    /// The exact polynomial represented by the doubles `coeffs`.
    pub fn from_f64(coeffs: &[f64]) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        let (ints, _) = f64s_to_scaled_integers(coeffs);
        Self::new(ints)
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Result<Self> {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::new(ints)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn formal_degree(&self) -> usize {
        self.formal_degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect()
    }

    /// Sign of `p(x)` for rational `x`.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        sign_at(&self.coeffs, x)
    }

    /// Nearest double to `p(x)`, for diagnostics.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn degree(p: &[BigInt]) -> usize {
    p.len() - 1
}

fn is_zero_poly(p: &[BigInt]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `sum p_j (n/m)^j`, computed as the sign of `sum p_j n^j m^(deg-j)`.
fn sign_at(p: &[BigInt], x: &BigRational) -> i32 {
    let (n, m) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut mpow = BigInt::one();
    for c in p.iter().rev() {
        acc = acc * n + c * &mpow;
        mpow *= m;
    }
    // The Horner sum above multiplies the constant term by m^deg, the leading
    // term by 1, which is p(n/m) * m^deg with m > 0.
    sign(&acc)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = degree(a) + 1 - db;
    while !is_zero_poly(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] -= &lr * bk;
        }
        r.pop();
        trim(&mut r);
        e -= 1;
        if r.is_empty() {
            r.push(BigInt::zero());
        }
    }
    if e > 0 {
        let q: BigInt = Pow::pow(lb, e as u32);
        for x in r.iter_mut() {
            *x *= &q;
        }
    }
    r
}

/// Sturm sequence of a polynomial, stored as subresultant polynomials with
/// the sign that turns each into the classical Euclidean Sturm element.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    polys: Vec<Vec<BigInt>>,
    signs: Vec<i32>,
    base: IntPoly,
}

impl SturmSequence {
    pub fn new(p: &IntPoly) -> Self {
        let mut polys = vec![p.coeffs.clone()];
        let mut signs = vec![1];
        if p.degree() == 0 {
            return SturmSequence {
                polys,
                signs,
                base: p.clone(),
            };
        }
        let dp = p.derivative();
        polys.push(dp.clone());
        signs.push(1);
        let (mut a, mut b) = (p.coeffs.clone(), dp);
        let (mut sa, mut sb) = (1i32, 1i32);
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        while degree(&b) > 0 {
            let delta = degree(&a) - degree(&b);
            let r = prem(&a, &b);
            if is_zero_poly(&r) {
                break;
            }
            let beta = &g * Pow::pow(&h, delta as u32);
            let next: Vec<BigInt> = r.iter().map(|x| x / &beta).collect();
            let lb = sign(&b[degree(&b)]);
            let lb_pow = if (delta + 1) % 2 == 1 { lb } else { 1 };
            let s_next = -sa * lb_pow * sign(&beta);
            a = b;
            sa = sb;
            b = next;
            sb = s_next;
            g = a[degree(&a)].clone();
            if delta > 0 {
                h = Pow::pow(&g, delta as u32) / Pow::pow(&h, (delta - 1) as u32);
            }
            polys.push(b.clone());
            signs.push(sb);
        }
        SturmSequence {
            polys,
            signs,
            base: p.clone(),
        }
    }

    /// Whether the base polynomial has no repeated complex roots.
    pub fn is_squarefree(&self) -> bool {
        self.polys.last().is_some_and(|q| degree(q) == 0)
    }

    fn variations<I: Iterator<Item = i32>>(signs: I) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(
            self.polys
                .iter()
                .zip(&self.signs)
                .map(|(q, s)| s * sign_at(q, x)),
        )
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.polys.iter().zip(&self.signs).map(|(q, s)| {
            let l = s * sign(&q[degree(q)]);
            if positive || degree(q) % 2 == 0 {
                l
            } else {
                -l
            }
        }))
    }

    /// Distinct real roots on the whole line.
    pub fn count_line(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_interval(&self, a: &BigRational, b: &BigRational) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn base(&self) -> &IntPoly {
        &self.base
    }
}

/// Where to count real roots.
#[derive(Clone, Debug, PartialEq)]
pub enum RealDomain {
    Line,
    /// Half-open interval `(a, b]`.
    Interval(BigRational, BigRational),
    /// The real projective line: the real line plus the point at infinity,
    /// which is a root when the true degree is below the formal degree.
    Projective,
}

/// Exact number of distinct real roots of `p` in `domain`.
pub fn sturm_count_real_roots(p: &IntPoly, domain: &RealDomain) -> usize {
    let seq = SturmSequence::new(p);
    match domain {
        RealDomain::Line => seq.count_line(),
        RealDomain::Interval(a, b) => seq.count_interval(a, b),
        RealDomain::Projective => {
            seq.count_line() + usize::from(p.formal_degree() > p.degree())
        }
    }
}

/// Closed isolating interval `[lo, hi]` holding exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn midpoint(&self) -> f64 {
        rational_to_f64(&((&self.lo + &self.hi) / BigInt::from(2)))
    }

    pub fn width(&self) -> f64 {
        rational_to_f64(&(&self.hi - &self.lo))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Power of two bounding the modulus of every root (Cauchy's bound).
fn root_bound(p: &[BigInt]) -> BigRational {
    let lc = p[degree(p)].abs();
    let max = p[..degree(p)]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    let bound = BigRational::one() + BigRational::new(max, lc);
    let mut m = BigRational::one();
    while m <= bound {
        m *= BigInt::from(2);
    }
    m
}

fn squarefree_part(p: &IntPoly, seq: &SturmSequence) -> IntPoly {
    if seq.is_squarefree() {
        return p.clone();
    }
    let gcd = seq.polys.last().expect("nonempty").clone();
    IntPoly::new(exact_quotient(&p.coeffs, &gcd)).expect("quotient of nonzero polynomial")
}

/// Quotient of polynomials known to divide exactly over the rationals, scaled
/// back to integers.
fn exact_quotient(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b);
    let lb = BigRational::from_integer(b[db].clone());
    let mut r: Vec<BigRational> = a.iter().cloned().map(BigRational::from_integer).collect();
    let mut q = vec![BigRational::zero(); degree(a) - db + 1];
    for k in (0..q.len()).rev() {
        let coef = &r[k + db] / &lb;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &coef * BigRational::from_integer(bj.clone());
        }
        q[k] = coef;
    }
    let den = q.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    q.iter().map(|c| c.numer() * (&den / c.denom())).collect()
}

/// One isolating interval per distinct real root, in increasing order, each of
/// width below `1e-10`.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<RootInterval> {
    isolate_real_roots_to(p, 1e-10)
}

/// As [`isolate_real_roots`] with a chosen target width.
pub fn isolate_real_roots_to(p: &IntPoly, width: f64) -> Vec<RootInterval> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let seq = SturmSequence::new(p);
    let sf = squarefree_part(p, &seq);
    let seq = SturmSequence::new(&sf);
    let m = root_bound(&sf.coeffs);
    let mut out = Vec::new();
    let mut stack = vec![(-m.clone(), m)];
    let two = BigInt::from(2);
    while let Some((a, b)) = stack.pop() {
        let n = seq.count_interval(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(refine(&sf, a, b, width));
            continue;
        }
        let mid = (&a + &b) / &two;
        // Keep the right half first on the stack so roots come out sorted.
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out
}

/// Narrows `(a, b]` holding one simple root of a squarefree `p` by bisection
/// on the sign of `p`.
fn refine(p: &IntPoly, a: BigRational, b: BigRational, width: f64) -> RootInterval {
    let two = BigInt::from(2);
    if p.sign_at(&b) == 0 {
        return RootInterval { lo: b.clone(), hi: b };
    }
    let (mut lo, mut hi) = (a, b);
    let sb = p.sign_at(&hi);
    loop {
        if rational_to_f64(&(&hi - &lo)) < width {
            return RootInterval { lo, hi };
        }
        let mid = (&lo + &hi) / &two;
        let sm = p.sign_at(&mid);
        if sm == 0 {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if sm == sb {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_counts() {
        assert_eq!(sturm_count_real_roots(&ip(&[-1, 0, 1]), &RealDomain::Line), 2);
        assert_eq!(sturm_count_real_roots(&ip(&[1, 0, 1]), &RealDomain::Line), 0);
        assert_eq!(sturm_count_real_roots(&ip(&[0, -1, 0, 1]), &RealDomain::Line), 3);
        // (x-1)^2 (x+2): two distinct roots
        assert_eq!(sturm_count_real_roots(&ip(&[2, -3, 0, 1]), &RealDomain::Line), 2);
        // x^2 - 1 with formal degree 3 has a root at infinity
        assert_eq!(sturm_count_real_roots(&ip(&[-1, 0, 1, 0]), &RealDomain::Projective), 3);
        assert_eq!(sturm_count_real_roots(&ip(&[5]), &RealDomain::Line), 0);
    }

    #[test]
    fn interval_counts_are_half_open() {
        let p = ip(&[0, -1, 0, 1]);
        assert_eq!(sturm_count_real_roots(&p, &RealDomain::Interval(q(-1, 1), q(1, 1))), 2);
        assert_eq!(sturm_count_real_roots(&p, &RealDomain::Interval(q(-2, 1), q(1, 2))), 2);
        assert_eq!(sturm_count_real_roots(&p, &RealDomain::Interval(q(1, 2), q(2, 1))), 1);
    }

    #[test]
    fn isolates_three_roots() {
        let iv = isolate_real_roots(&ip(&[0, -1, 0, 1]));
        assert_eq!(iv.len(), 3);
        for (i, want) in [-1.0, 0.0, 1.0].iter().enumerate() {
            assert!(iv[i].width() < 1e-10);
            assert!((iv[i].midpoint() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(IntPoly::new(vec![BigInt::zero(); 3]).is_err());
    }

    #[test]
    fn exact_quotient_divides() {
        // (x^2 - 1)(x - 3) / (x - 1) = (x + 1)(x - 3)
        let a = vec![3, -1, -3, 1].into_iter().map(BigInt::from).collect::<Vec<_>>();
        let b = vec![-1, 1].into_iter().map(BigInt::from).collect::<Vec<_>>();
        assert_eq!(exact_quotient(&a, &b), vec![-3, -2, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }
}
