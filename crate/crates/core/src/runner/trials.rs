//! One function per experiment kind, mapping a trial index to a record.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;

use super::config::{ExperimentConfig, ExperimentKind};
use crate::critpoints::{self, classify_real, solve_critical_points, CriticalPointSet, PencilModel};
use crate::ensemble::{sample_section, trial_rng, EnsembleSpec};
use crate::error::{Error, Result};
use crate::geomstats::{tube_mass, tube_width, CellPartition};
use crate::pmcheck::{pm_convergence_study, pm_weighted_count, Bump, PlanarTest, QuadratureGrid};
use crate::poly::{AffinePolynomial, HomogeneousPolynomial};
use crate::topology::{self, count_components};
use crate::uniroots::{complex_roots, real_root_count};

/// Offset of the auxiliary random stream (bump placement, scale factors),
/// kept apart from the coefficient stream of the same trial.
const AUX_STREAM: u64 = 0x5bd1_e995_0000_0000;

/// Per-degree state shared by every trial of that degree.
pub(crate) struct DegreeContext<'a> {
    pub config: &'a ExperimentConfig,
    pub d: u32,
    pub spec: EnsembleSpec,
    pub partition: Option<&'a CellPartition>,
}

/// What one accepted trial contributes to the summary.
#[derive(Clone, Debug)]
pub(crate) enum Metrics {
    RealRoots { count: usize },
    Crit { count: usize, expected: usize },
    Equi { cells: Vec<usize> },
    Tube { fraction: f64 },
    Betti { report: topology::CurveTopologyReport, violations: Vec<String> },
    Pm { errors: Vec<Vec<f64>>, invariance: f64 },
    Growth { real: usize, fraction: f64 },
}

impl Metrics {
    /// The values averaged into the degree's mean, in CSV order.
    pub fn primary(&self) -> Vec<f64> {
        match self {
            Metrics::RealRoots { count } => vec![*count as f64],
            Metrics::Crit { count, .. } => vec![*count as f64],
            Metrics::Equi { cells } => vec![cells.len() as f64],
            Metrics::Tube { fraction } => vec![*fraction],
            Metrics::Betti { report, .. } if report.certified => vec![report.component_count as f64],
            Metrics::Betti { .. } => vec![],
            Metrics::Pm { errors, .. } => errors.iter().filter_map(|e| e.last().copied()).collect(),
            Metrics::Growth { real, .. } => vec![*real as f64],
        }
    }
}

pub(crate) struct TrialRecord {
    pub rows: String,
    pub points: String,
    pub metrics: Metrics,
}

pub(crate) enum Outcome {
    Accepted(TrialRecord),
    Discarded { reason: String, section: HomogeneousPolynomial },
}

/// Header of `trials.csv` for each kind.
pub fn trials_header(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::RealRoots => "trial,d,real_roots,method",
        ExperimentKind::ComplexCrit => "trial,d,points,expected,min_separation,max_residual",
        ExperimentKind::Equi => "trial,d,points,min_separation,max_residual",
        ExperimentKind::EquiRealTube => "trial,d,points,in_tube,fraction",
        ExperimentKind::RealBetti => {
            "trial,d,components,certified,depth,betti_bound,fiber_count,real_crit,harnack,sweep,violations"
        }
        ExperimentKind::PmCheck => "trial,d,bump,resolution,estimate,direct,error,invariance",
        ExperimentKind::GrowthSweep => "trial,d,points,real,in_tube,fraction",
    }
}

/// Header of `points.csv`, for the kinds that store critical points.
pub fn points_header(kind: ExperimentKind) -> Option<String> {
    match kind {
        ExperimentKind::Equi => Some("d,trial_index,point_index,cell".into()),
        ExperimentKind::ComplexCrit | ExperimentKind::EquiRealTube | ExperimentKind::GrowthSweep => {
            Some(format!("d,{}", critpoints::CSV_HEADER))
        }
        _ => None,
    }
}

/// Runs one trial. Degenerate instances become discards; any other error
/// is returned with the trial's provenance.
pub(crate) fn run_trial(ctx: &DegreeContext, index: u64) -> Result<Outcome> {
    let f = sample_section(&ctx.spec, index);
    let result = match ctx.config.kind {
        ExperimentKind::RealRoots => real_roots(ctx, index, &f),
        ExperimentKind::ComplexCrit => complex_crit(ctx, index, &f),
        ExperimentKind::Equi => equi(ctx, index, &f),
        ExperimentKind::EquiRealTube => tube(ctx, index, &f, false),
        ExperimentKind::RealBetti => betti(ctx, index, &f),
        ExperimentKind::PmCheck => pm(ctx, index, &f),
        ExperimentKind::GrowthSweep => tube(ctx, index, &f, true),
    };
    match result {
        Ok(record) => Ok(Outcome::Accepted(record)),
        Err(Error::DegenerateInstance(reason)) => Ok(Outcome::Discarded { reason, section: f }),
        Err(e) => Err(Error::InvalidArgument(format!(
            "{} d={} trial {index}: {e}",
            ctx.config.kind, ctx.d
        ))),
    }
}

fn real_roots(ctx: &DegreeContext, index: u64, f: &HomogeneousPolynomial) -> Result<TrialRecord> {
    let chart = f.dehomogenize(0)?;
    let coeffs: Vec<f64> = chart.coeffs().iter().map(|c| c.re).collect();
    let (affine, method) = real_root_count(&coeffs)?;
    // A vanishing leading coefficient puts a root at infinity.
    let at_infinity = ctx.d as usize - coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    let count = affine + at_infinity;
    Ok(TrialRecord {
        rows: format!("{index},{},{count},{method:?}\n", ctx.d),
        points: String::new(),
        metrics: Metrics::RealRoots { count },
    })
}

fn solve(ctx: &DegreeContext, f: &HomogeneousPolynomial) -> Result<(CriticalPointSet, usize)> {
    let pencil = PencilModel::for_space(ctx.spec.space)?;
    let set = solve_critical_points(f, pencil)?;
    let expected = pencil.expected_count(ctx.spec.section_degree());
    if set.len() != expected {
        return Err(Error::degenerate(format!("{} critical points, expected {expected}", set.len())));
    }
    Ok((set, expected))
}

fn point_rows(d: u32, index: u64, set: &CriticalPointSet) -> Result<String> {
    let mut buf = Vec::new();
    critpoints::write_csv_rows(&mut buf, index, set)?;
    let text = String::from_utf8(buf).expect("csv rows are ascii");
    Ok(text.lines().map(|l| format!("{d},{l}\n")).collect())
}

fn complex_crit(ctx: &DegreeContext, index: u64, f: &HomogeneousPolynomial) -> Result<TrialRecord> {
    let (set, expected) = solve(ctx, f)?;
    Ok(TrialRecord {
        rows: format!(
            "{index},{},{},{expected},{},{}\n",
            ctx.d,
            set.len(),
            set.min_separation,
            set.max_residual
        ),
        points: point_rows(ctx.d, index, &set)?,
        metrics: Metrics::Crit { count: set.len(), expected },
    })
}

fn equi(ctx: &DegreeContext, index: u64, f: &HomogeneousPolynomial) -> Result<TrialRecord> {
    let partition = ctx.partition.expect("equi runs build a partition");
    let (set, _) = solve(ctx, f)?;
    let cells: Vec<usize> = set.points.iter().map(|p| partition.locate(&p.coords)).collect();
    let mut points = String::new();
    for (i, c) in cells.iter().enumerate() {
        let _ = writeln!(points, "{},{index},{i},{c}", ctx.d);
    }
    Ok(TrialRecord {
        rows: format!("{index},{},{},{},{}\n", ctx.d, set.len(), set.min_separation, set.max_residual),
        points,
        metrics: Metrics::Equi { cells },
    })
}

/// Tube fraction, and with `classify` the real critical points as well.
fn tube(ctx: &DegreeContext, index: u64, f: &HomogeneousPolynomial, classify: bool) -> Result<TrialRecord> {
    let (mut set, _) = solve(ctx, f)?;
    if classify {
        set = classify_real(&set, f)?;
        if set.ambiguous {
            return Err(Error::degenerate("real critical points are ambiguous"));
        }
    }
    let w = ctx.config.tube_multiplier * tube_width(ctx.d);
    let fraction = tube_mass(&set.points, w)?;
    let in_tube = set.points.iter().filter(|p| p.dist_to_conjugate <= 2.0 * w).count();
    let d = ctx.d;
    let n = set.len();
    let (rows, metrics) = if classify {
        let real = set.real_count();
        (format!("{index},{d},{n},{real},{in_tube},{fraction}\n"), Metrics::Growth { real, fraction })
    } else {
        (format!("{index},{d},{n},{in_tube},{fraction}\n"), Metrics::Tube { fraction })
    };
    Ok(TrialRecord {
        rows,
        points: point_rows(d, index, &set)?,
        metrics,
    })
}

fn betti(ctx: &DegreeContext, index: u64, f: &HomogeneousPolynomial) -> Result<TrialRecord> {
    let report = count_components(f, ctx.config.max_depth)?;
    let violations = topology::audit(&report);
    let mut buf = Vec::new();
    topology::write_csv_row(&mut buf, index, &report)?;
    let row = String::from_utf8(buf).expect("csv rows are ascii");
    let sweep = report.sweep_components.map(|s| s.to_string()).unwrap_or_default();
    let rows = format!("{},{sweep},{}\n", row.trim_end(), violations.len());
    Ok(TrialRecord {
        rows,
        points: String::new(),
        metrics: Metrics::Betti { report, violations },
    })
}

/// A smooth bump whose boundary keeps two coarse cells clear of every root.
fn place_bump<R: Rng>(rng: &mut R, roots: &[Complex64], coarse: usize) -> Result<Bump> {
    for _ in 0..64 {
        let center = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let b = Bump::smooth(center, rng.random_range(0.4..1.2))?;
        let margin = 2.0 * QuadratureGrid::around(&b, coarse)?.step();
        if roots.iter().all(|&r| b.boundary_distance(r) > margin) {
            return Ok(b);
        }
    }
    Err(Error::degenerate("no bump boundary clear of the roots"))
}

fn pm(ctx: &DegreeContext, index: u64, f: &HomogeneousPolynomial) -> Result<TrialRecord> {
    let chart: AffinePolynomial = f.dehomogenize(0)?;
    let roots = complex_roots(&chart)?;
    if !roots.all_simple() || roots.len() != ctx.d as usize {
        return Err(Error::degenerate("roots are not simple or one lies at infinity"));
    }
    let resolutions = &ctx.config.resolutions;
    let coarse = *resolutions.iter().min().expect("validated");
    let mut rng = trial_rng(ctx.spec.master_seed ^ AUX_STREAM, index);
    let mut rows = String::new();
    let mut errors = Vec::new();
    let mut invariance = 0.0f64;
    for bump in 0..ctx.config.bumps_per_trial {
        let chi = place_bump(&mut rng, &roots.roots, coarse)?;
        let c = Complex64::from_polar(rng.random_range(-2.0f64..2.0).exp(), rng.random_range(0.0..std::f64::consts::TAU));
        let scaled = AffinePolynomial::univariate(chart.coeffs().iter().map(|&a| a * c).collect());
        let study = pm_convergence_study(&chart, &chi, resolutions)?;
        let finest = study.last().expect("validated");
        let grid = QuadratureGrid::around(&chi, finest.resolution)?;
        let gap = (finest.estimate - pm_weighted_count(&scaled, &chi, &grid)?.value).abs();
        invariance = invariance.max(gap);
        for r in &study {
            let _ = writeln!(
                rows,
                "{index},{},{bump},{},{},{},{},{gap}",
                ctx.d, r.resolution, r.estimate, r.direct, r.error
            );
        }
        errors.push(study.iter().map(|r| r.error).collect());
    }
    Ok(TrialRecord {
        rows,
        points: String::new(),
        metrics: Metrics::Pm { errors, invariance },
    })
}
