//! Exact conversions between `f64` and dyadic rationals.
//!
//! Every finite double is a dyadic rational `m * 2^e`; converting before any
//! exact computation makes the result exact for the polynomial *as stored*.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Splits a finite double into an odd (or zero) integer mantissa and a binary exponent.
pub fn decompose(x: f64) -> (i64, i64) {
    assert!(x.is_finite(), "cannot convert non-finite value {x} to a dyadic rational");
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (mut m, mut e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), biased - 1075)
    };
    let tz = m.trailing_zeros() as i64;
    m >>= tz;
    e += tz;
    (if negative { -m } else { m }, e)
}

/// Exact rational value of a double.
pub fn f64_to_rational(x: f64) -> BigRational {
    let (m, e) = decompose(x);
    if m == 0 {
        return BigRational::zero();
    }
    if e >= 0 {
        BigRational::from_integer(BigInt::from(m) << (e as usize))
    } else {
        BigRational::new(BigInt::from(m), BigInt::one() << ((-e) as usize))
    }
}

/// Scales a list of doubles by a common power of two so that every entry
/// becomes an integer. Returns the integers and the exponent `s` such that
/// `x_i = n_i * 2^s`. The scaling factor is positive, so signs and roots of
/// any polynomial built from the list are unchanged.
pub fn f64s_to_scaled_integers(xs: &[f64]) -> (Vec<BigInt>, i64) {
    let parts: Vec<(i64, i64)> = xs.iter().map(|&x| decompose(x)).collect();
    let emin = parts
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|(_, e)| *e)
        .min()
        .unwrap_or(0);
    let ints = parts
        .into_iter()
        .map(|(m, e)| {
            if m == 0 {
                BigInt::zero()
            } else {
                BigInt::from(m) << ((e - emin) as usize)
            }
        })
        .collect();
    (ints, emin)
}

/// Nearest double to a rational (within one ulp; exact for dyadics that fit).
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    // Bring the quotient to a 64-bit integer, then rescale.
    let k = 64 - (nb - db);
    let scaled = if k >= 0 {
        (q.numer() << (k as usize)) / q.denom()
    } else {
        q.numer() / (q.denom() << ((-k) as usize))
    };
    ldexp(scaled.to_f64().unwrap_or(f64::NAN), -k)
}

/// `x * 2^k` without intermediate overflow for large `|k|`.
pub fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k as i32)
}

/// Dyadic rational `m / 2^k` with small numerator, used for bisection points.
pub fn dyadic(m: i64, k: u32) -> BigRational {
    BigRational::new(BigInt::from(m), BigInt::one() << (k as usize))
}

pub fn sign(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_recovers_value() {
        for &x in &[1.0, -3.5, 1e-300, 5e-324, 123456.789, -0.1, 2f64.powi(60)] {
            let (m, e) = decompose(x);
            assert_eq!(ldexp(m as f64, e), x);
            assert!(m % 2 != 0);
        }
    }

    #[test]
    fn rational_round_trip() {
        for &x in &[0.0, 1.0, -0.1, 1e-200, 7.25e150, 3.0e-310] {
            assert_eq!(rational_to_f64(&f64_to_rational(x)), x);
        }
    }

    #[test]
    fn scaled_integers_share_exponent() {
        let xs = [0.5, 3.0, -0.125, 0.0];
        let (ints, s) = f64s_to_scaled_integers(&xs);
        assert_eq!(s, -3);
        let back: Vec<i64> = ints.iter().map(|n| n.to_i64().unwrap()).collect();
        assert_eq!(back, vec![4, 24, -1, 0]);
    }
}
