//! Inclusion disks for all roots at once.
//!
//! For pairwise distinct approximations `z_1..z_n` of the roots of `p` with
//! leading coefficient `a`, put `W_j = p(z_j) / (a prod_{i != j} (z_j - z_i))`.
//! The matrix `diag(z) - 1 W^T` has characteristic polynomial `p / a`, and
//! column-wise Gershgorin gives disks `D(z_j - W_j, (n-1)|W_j|)`: every
//! connected component made of `m` disks holds exactly `m` roots.

use num_complex::Complex64;

use crate::poly::UNIT_ROUNDOFF;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InclusionDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl InclusionDisk {
    pub fn overlaps(&self, other: &InclusionDisk) -> bool {
        (self.center - other.center).norm() <= self.radius + other.radius
    }

    pub fn meets_real_axis(&self) -> bool {
        self.center.im.abs() <= self.radius
    }
}

/// Disks for the approximations `z`, with radii inflated to cover rounding
/// in the computation of the Weierstrass corrections. Approximations whose
/// imaginary part is exactly zero give disks centred on the real axis.
/// `None` when two approximations coincide.
pub fn inclusion_disks(c: &[Complex64], z: &[Complex64]) -> Option<Vec<InclusionDisk>> {
    let n = c.len() - 1;
    debug_assert_eq!(z.len(), n);
    let lead = c[n];
    let gamma_eval = 1.01 * (4 * n + 2) as f64 * UNIT_ROUNDOFF;
    let rho = 1.01 * (4 * n + 8) as f64 * UNIT_ROUNDOFF;
    let mut out = Vec::with_capacity(n);
    for (j, &zj) in z.iter().enumerate() {
        // W_j = p(z_j) / (a prod (z_j - z_i)). Outside the unit disk use
        // p(z) = z^n q(1/z) and fold z^n into the product as z_j * prod
        // z_j / (z_j - z_i), so nothing overflows at high degree.
        let az = zj.norm();
        let outside = az > 1.0;
        let x = if outside { zj.inv() } else { zj };
        let ax = x.norm();
        let mut p = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        let mut eval = |ci: Complex64| {
            p = p * x + ci;
            mag = mag * ax + ci.norm();
        };
        if outside {
            c.iter().for_each(|&ci| eval(ci));
        } else {
            c.iter().rev().for_each(|&ci| eval(ci));
        }
        let mut prod = ScaledProduct::new(lead);
        for (i, &zi) in z.iter().enumerate() {
            if i != j {
                let diff = zj - zi;
                if diff.norm() == 0.0 {
                    return None;
                }
                prod.mul(if outside { diff / zj } else { diff });
            }
        }
        if outside {
            prod.mul(zj.inv());
        }
        let (den, shift) = prod.parts();
        if !mag.is_finite() || !den.norm().is_finite() || den.norm() == 0.0 {
            return None;
        }
        let w = ldexp_c(p / den, -shift);
        let noise = ldexp_c(Complex64::new(mag / den.norm(), 0.0), -shift).re;
        if noise == 0.0 && mag > 0.0 {
            return None;
        }
        let err = 2.0 * (gamma_eval * noise * (1.0 + rho) + rho * w.norm());
        let mut center = zj - w;
        let mut radius = (n as f64 - 1.0) * (w.norm() + err) + err + UNIT_ROUNDOFF * center.norm();
        if zj.im == 0.0 && c.iter().all(|ci| ci.im == 0.0) {
            radius += center.im.abs();
            center.im = 0.0;
        }
        if !radius.is_finite() {
            return None;
        }
        out.push(InclusionDisk {
            center,
            radius: radius * (1.0 + 4.0 * UNIT_ROUNDOFF),
        });
    }
    Some(out)
}

/// Product of complex factors kept as `value * 2^shift` with `value` of
/// moderate size.
struct ScaledProduct {
    value: Complex64,
    shift: i32,
}

impl ScaledProduct {
    fn new(start: Complex64) -> Self {
        let mut s = ScaledProduct { value: start, shift: 0 };
        s.normalize();
        s
    }

    fn mul(&mut self, f: Complex64) {
        self.value *= f;
        self.normalize();
    }

    fn normalize(&mut self) {
        let m = self.value.norm();
        if m == 0.0 || !m.is_finite() {
            return;
        }
        let e = m.log2().floor() as i32;
        if e.abs() > 64 {
            self.value = ldexp_c(self.value, -e);
            self.shift += e;
        }
    }

    fn parts(&self) -> (Complex64, i32) {
        (self.value, self.shift)
    }
}

fn ldexp_c(z: Complex64, k: i32) -> Complex64 {
    let s = 2f64.powi(k);
    if s.is_finite() && s > 0.0 {
        Complex64::new(z.re * s, z.im * s)
    } else {
        let h = 2f64.powi(k / 2);
        let r = 2f64.powi(k - k / 2);
        Complex64::new(z.re * h * r, z.im * h * r)
    }
}

/// Connected components of the union of disks, as index lists.
pub fn components(disks: &[InclusionDisk]) -> Vec<Vec<usize>> {
    let n = disks.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if disks[i].overlaps(&disks[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Snaps approximations within `tol` (relative) of the real axis onto it.
pub fn snap_real(z: &mut [Complex64], tol: f64) {
    for zi in z.iter_mut() {
        if zi.im.abs() <= tol * zi.norm().max(1.0) {
            zi.im = 0.0;
        }
    }
}

/// Number of real roots of the real polynomial `c`, certified by isolated
/// real-centred inclusion disks, or `None` when the disks cannot decide.
pub fn certified_real_count(c: &[f64], approx: &[Complex64]) -> Option<usize> {
    let cc: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut z = approx.to_vec();
    snap_real(&mut z, 1e-9);
    let disks = inclusion_disks(&cc, &z)?;
    let mut count = 0;
    for comp in components(&disks) {
        if comp.iter().all(|&i| !disks[i].meets_real_axis()) {
            continue;
        }
        if comp.len() == 1 && disks[comp[0]].center.im == 0.0 {
            count += 1;
            continue;
        }
        return None;
    }
    Some(count)
}
