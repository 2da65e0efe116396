use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

fn norm1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Companion matrix of `c` (constant term first, nonzero leading term):
/// ones on the subdiagonal, `-c_i / c_n` in the last column.
fn companion(c: &[Complex64]) -> DMatrix<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    m
}

/// Diagonal similarity by powers of two equalising row and column norms.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += norm1(m[(j, i)]);
                    row += norm1(m[(i, j)]);
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let sum = col + row;
            let mut f = 1.0;
            let mut c = col;
            while c < row / 2.0 {
                f *= 2.0;
                c *= 4.0;
            }
            while c > row * 2.0 {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + row) / f < 0.95 * sum {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            return;
        }
    }
}

/// Eigenvalues of the balanced companion matrix, or `None` when the QR
/// iteration does not converge.
pub fn companion_roots(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Some(Vec::new());
    }
    if n == 1 {
        return Some(vec![-c[0] / c[1]]);
    }
    let mut m = companion(c);
    balance(&mut m);
    let schur = Schur::try_new(m, f64::EPSILON, 100 * n)?;
    let (_, t) = schur.unpack();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].norm() > 0.0 {
            // Leftover 2x2 block: solve its characteristic quadratic.
            let (a, b, cc, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let tr = a + d;
            let det = a * d - b * cc;
            let disc = (tr * tr - det * 4.0).sqrt();
            out.push((tr + disc) / 2.0);
            out.push((tr - disc) / 2.0);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let c = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let mut r = companion_roots(&c).unwrap();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn balancing_preserves_spectrum() {
        let c: Vec<Complex64> = [1e-8, 3.0, -2e6, 0.5, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let r = companion_roots(&c).unwrap();
        for z in r {
            let p = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci);
            let mag = c.iter().rev().fold(0.0, |acc, ci| acc * z.norm() + ci.norm());
            assert!(p.norm() < 1e-12 * mag);
        }
    }
}
