//! Topology of the real locus of a real plane curve: component counts, the
//! Morse-theoretic Betti bound from one fiber and the critical points, and
//! the Harnack and Smith-Thom audits.

mod bernstein;
mod quadtree;
mod sweep;

pub use bernstein::BernsteinPatch;
pub use quadtree::{real_locus_components, ComponentCount};
pub use sweep::{components_by_sweep, fiber_polynomial};

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::critpoints::{classify_real, solve_critical_points, CriticalPointSet, PencilModel};
use crate::error::{Error, Result};
use crate::poly::{HomogeneousPolynomial, Space};
use crate::uniroots::{IntPoly, SturmSequence};

/// First fiber angle tried by [`fiber_betti`].
pub const DEFAULT_FIBER_ANGLE: f64 = 0.377;
const FIBER_ANGLE_STEP: f64 = 0.618_033_988_749_894_9;
const FIBER_ATTEMPTS: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveTopologyReport {
    pub degree: u32,
    pub component_count: usize,
    pub certified: bool,
    pub depth: u32,
    pub betti_upper_bound: usize,
    pub harnack_bound: usize,
    pub fiber_point_count: usize,
    pub real_crit_count: usize,
    /// Independent count from the fiber sweep, when it could decide.
    pub sweep_components: Option<usize>,
}

impl CurveTopologyReport {
    /// Total mod-2 Betti number of the real locus, a disjoint union of
    /// circles.
    pub fn real_betti(&self) -> usize {
        2 * self.component_count
    }
}

/// Real points on a fiber of the pencil, and the angle actually used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberCount {
    pub angle: f64,
    pub points: usize,
}

/// Number of real points of `f` on the pencil line `[x : sin a : cos a]`,
/// counted exactly on `RP1`. When the restriction vanishes or has a
/// multiple root the angle is advanced by a fixed irrational step.
pub fn fiber_betti(f: &HomogeneousPolynomial, angle: f64) -> Result<FiberCount> {
    if f.space() != Space::Cp2 || !f.is_real() {
        return Err(Error::InvalidArgument("fiber counts need a real plane curve".into()));
    }
    for attempt in 0..FIBER_ATTEMPTS {
        let a = angle + attempt as f64 * FIBER_ANGLE_STEP;
        let coeffs = fiber_polynomial(f, a);
        if coeffs.iter().all(|&c| c == 0.0) {
            continue;
        }
        let p = IntPoly::from_f64(&coeffs)?;
        let seq = SturmSequence::new(&p);
        if !seq.is_squarefree() {
            continue;
        }
        let at_infinity = usize::from(p.formal_degree() > p.degree());
        return Ok(FiberCount {
            angle: a,
            points: seq.count_line() + at_infinity,
        });
    }
    Err(Error::degenerate("no fiber with a squarefree restriction"))
}

/// `4 * fiber points + real critical points`, from an already classified
/// critical set.
pub fn betti_bound_from(f: &HomogeneousPolynomial, set: &CriticalPointSet) -> Result<(usize, FiberCount)> {
    if !set.classified {
        return Err(Error::InvalidArgument("critical points are not classified".into()));
    }
    if set.ambiguous {
        return Err(Error::degenerate("real critical points are ambiguous"));
    }
    let fiber = fiber_betti(f, DEFAULT_FIBER_ANGLE)?;
    Ok((4 * fiber.points + set.real_count(), fiber))
}

/// Upper bound on the total Betti number of the real locus: four times the
/// real points of one fiber plus the real critical points of the pencil.
pub fn betti_upper_bound(f: &HomogeneousPolynomial) -> Result<usize> {
    let set = real_critical_points(f)?;
    Ok(betti_bound_from(f, &set)?.0)
}

fn real_critical_points(f: &HomogeneousPolynomial) -> Result<CriticalPointSet> {
    let set = solve_critical_points(f, PencilModel::ProjectionFromPoint)?;
    classify_real(&set, f)
}

/// Maximal number of components of a smooth real plane curve: genus + 1.
pub fn harnack_bound(d: u32) -> usize {
    let d = d.max(1) as usize;
    (d - 1) * d.saturating_sub(2) / 2 + 1
}

/// Total Betti number of the complex curve, `d^2 - 3d + 4`.
pub fn smith_thom_bound(d: u32) -> usize {
    let d = d as usize;
    d * d + 4 - 3 * d
}

/// Component count with the Betti bound of the same curve.
pub fn count_components(f: &HomogeneousPolynomial, max_depth: u32) -> Result<CurveTopologyReport> {
    let count = real_locus_components(f, max_depth)?;
    let set = real_critical_points(f)?;
    let (bound, fiber) = betti_bound_from(f, &set)?;
    let sweep_components = components_by_sweep(f, &set)?;
    Ok(CurveTopologyReport {
        degree: f.d(),
        component_count: count.components,
        certified: count.certified,
        depth: count.depth,
        betti_upper_bound: bound,
        harnack_bound: harnack_bound(f.d()),
        fiber_point_count: fiber.points,
        real_crit_count: set.real_count(),
        sweep_components,
    })
}

/// Failed audits of a certified report, empty when all hold.
pub fn audit(report: &CurveTopologyReport) -> Vec<String> {
    let mut failures = Vec::new();
    if !report.certified {
        return failures;
    }
    let c = report.component_count;
    if c > report.harnack_bound {
        failures.push(format!("{c} components exceed the Harnack bound {}", report.harnack_bound));
    }
    if 2 * c > smith_thom_bound(report.degree) {
        failures.push(format!("2 x {c} exceeds d^2 - 3d + 4 = {}", smith_thom_bound(report.degree)));
    }
    if 2 * c > report.betti_upper_bound {
        failures.push(format!("2 x {c} exceeds the Betti bound {}", report.betti_upper_bound));
    }
    if report.sweep_components.is_some_and(|s| s != c) {
        failures.push(format!("sweep counts {:?} components", report.sweep_components));
    }
    failures
}

pub const CSV_HEADER: &str = "trial,d,components,certified,depth,betti_bound,fiber_count,real_crit,harnack";

pub fn write_csv_row<W: Write>(out: &mut W, trial: u64, r: &CurveTopologyReport) -> std::io::Result<()> {
    writeln!(
        out,
        "{trial},{},{},{},{},{},{},{},{}",
        r.degree,
        r.component_count,
        r.certified,
        r.depth,
        r.betti_upper_bound,
        r.fiber_point_count,
        r.real_crit_count,
        r.harnack_bound
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Degree;

    fn conic(signs: [f64; 3]) -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_real_terms(
            Space::Cp2,
            Degree::Total(2),
            &[(&[2, 0, 0], signs[0]), (&[0, 2, 0], signs[1]), (&[0, 0, 2], signs[2])],
        )
        .unwrap()
    }

    #[test]
    fn harnack_values() {
        assert_eq!(harnack_bound(1), 1);
        assert_eq!(harnack_bound(2), 1);
        assert_eq!(harnack_bound(4), 4);
        assert_eq!(smith_thom_bound(4), 8);
    }

    #[test]
    fn circle_is_one_certified_component() {
        let f = conic([1.0, 1.0, -1.0]);
        let r = count_components(&f, 12).unwrap();
        assert_eq!(r.component_count, 1);
        assert!(r.certified);
        assert_eq!(r.fiber_point_count, 2);
        assert_eq!(r.real_crit_count, 2);
        assert_eq!(r.betti_upper_bound, 10);
        assert_eq!(r.sweep_components, Some(1));
        assert!(audit(&r).is_empty());
    }

    #[test]
    fn empty_conic_has_nothing() {
        let f = conic([1.0, 1.0, 1.0]);
        let r = count_components(&f, 12).unwrap();
        assert_eq!(r.component_count, 0);
        assert!(r.certified);
        assert_eq!(r.betti_upper_bound, 0);
        assert_eq!(r.sweep_components, Some(0));
    }

    #[test]
    fn oval_around_the_base_point() {
        // y^2 + z^2 - x^2 contains no line through [1:0:0] tangentially.
        let f = conic([-1.0, 1.0, 1.0]);
        let r = count_components(&f, 12).unwrap();
        assert_eq!((r.component_count, r.real_crit_count), (1, 0));
        assert_eq!(r.sweep_components, Some(1));
    }
}
