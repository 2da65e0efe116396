//! Single-section analyses on a stored polynomial, for debugging a trial.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::critpoints::{classify_real, solve_critical_points, CriticalPointSet, PencilModel};
use crate::error::{Error, Result};
use crate::pmcheck::{pm_weighted_count, Bump, PlanarTest, PmEstimate, QuadratureGrid};
use crate::poly::{read_polynomial, HomogeneousPolynomial, Space};
use crate::topology::{self, count_components, CurveTopologyReport};
use crate::uniroots::complex_roots;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReplayKind {
    Crit,
    Topology,
    Pm,
}

impl fmt::Display for ReplayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReplayKind::Crit => "crit",
            ReplayKind::Topology => "topology",
            ReplayKind::Pm => "pm",
        })
    }
}

impl FromStr for ReplayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crit" => Ok(ReplayKind::Crit),
            "topology" => Ok(ReplayKind::Topology),
            "pm" => Ok(ReplayKind::Pm),
            _ => Err(Error::InvalidArgument(format!("unknown analysis {s:?}; use crit, topology or pm"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayOptions {
    pub max_depth: u32,
    pub resolution: usize,
    /// Test functions for `pm`; when empty, one centered bump is chosen
    /// whose boundary avoids the roots.
    pub bumps: Vec<Bump>,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        ReplayOptions { max_depth: 14, resolution: 1024, bumps: Vec::new() }
    }
}

/// One log-potential count against one bump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmReplay {
    pub bump: Bump,
    pub estimate: PmEstimate,
    pub error: f64,
}

/// Outcome of one replayed analysis. A degenerate section is a result,
/// not an error: `degenerate` holds the reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayFragment {
    pub kind: ReplayKind,
    pub space: Space,
    pub d: u32,
    pub degenerate: Option<String>,
    pub critical_points: Option<CriticalPointSet>,
    pub topology: Option<CurveTopologyReport>,
    pub audit: Vec<String>,
    pub pm: Vec<PmReplay>,
}

/// Reads a section and reruns one analysis on it.
pub fn replay(path: &Path, kind: ReplayKind, options: &ReplayOptions) -> Result<ReplayFragment> {
    let f = read_polynomial(path)?;
    replay_section(&f, kind, options)
}

pub fn replay_section(f: &HomogeneousPolynomial, kind: ReplayKind, options: &ReplayOptions) -> Result<ReplayFragment> {
    let mut fragment = ReplayFragment {
        kind,
        space: f.space(),
        d: f.d(),
        degenerate: None,
        critical_points: None,
        topology: None,
        audit: Vec::new(),
        pm: Vec::new(),
    };
    let result = match kind {
        ReplayKind::Crit => crit(f).map(|set| fragment.critical_points = Some(set)),
        ReplayKind::Topology => count_components(f, options.max_depth).map(|r| {
            fragment.audit = topology::audit(&r);
            fragment.topology = Some(r);
        }),
        ReplayKind::Pm => pm(f, options).map(|rows| fragment.pm = rows),
    };
    match result {
        Ok(()) => Ok(fragment),
        Err(Error::DegenerateInstance(reason)) => {
            fragment.degenerate = Some(reason);
            Ok(fragment)
        }
        Err(e) => Err(e),
    }
}

fn crit(f: &HomogeneousPolynomial) -> Result<CriticalPointSet> {
    let set = solve_critical_points(f, PencilModel::for_space(f.space())?)?;
    if f.is_real() {
        classify_real(&set, f)
    } else {
        Ok(set)
    }
}

fn pm(f: &HomogeneousPolynomial, options: &ReplayOptions) -> Result<Vec<PmReplay>> {
    if f.space() != Space::Cp1 {
        return Err(Error::InvalidArgument("the log-potential check runs on CP1 sections".into()));
    }
    let chart = f.dehomogenize(0)?;
    let bumps = if options.bumps.is_empty() {
        let roots = complex_roots(&chart)?.roots;
        vec![centered_bump(&roots, options.resolution)?]
    } else {
        options.bumps.clone()
    };
    bumps
        .into_iter()
        .map(|bump| {
            let grid = QuadratureGrid::around(&bump, options.resolution)?;
            let estimate = pm_weighted_count(&chart, &bump, &grid)?;
            Ok(PmReplay { bump, error: estimate.error(), estimate })
        })
        .collect()
}

fn centered_bump(roots: &[Complex64], resolution: usize) -> Result<Bump> {
    for k in 0..40 {
        let b = Bump::smooth(Complex64::new(0.0, 0.0), 1.0 + 0.05 * k as f64)?;
        let margin = 2.0 * QuadratureGrid::around(&b, resolution)?.step();
        if roots.iter().all(|&r| b.boundary_distance(r) > margin) {
            return Ok(b);
        }
    }
    Err(Error::degenerate("roots crowd every centered bump boundary"))
}
