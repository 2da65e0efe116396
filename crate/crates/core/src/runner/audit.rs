//! Recomputes a run's summary from its raw CSV files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    acceptance_checks, mean_stderr, primary_column, ExperimentKind, ExperimentReport, DISCARDS_FILE, POINTS_FILE,
    SUMMARY_FILE, TRIALS_FILE,
};
use crate::error::{Error, Result};
use crate::geomstats::{build_partition, growth_regression, sampling_floor, EmpiricalMeasure, GrowthPoint};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub values_checked: usize,
    pub mismatches: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn compare(&mut self, what: impl FnOnce() -> String, reported: f64, recomputed: f64) {
        self.values_checked += 1;
        let same = (reported.is_nan() && recomputed.is_nan())
            || (reported - recomputed).abs() <= 1e-9 * reported.abs().max(recomputed.abs()).max(1.0);
        if !same {
            self.mismatches.push(format!("{}: summary {reported}, raw data {recomputed}", what()));
        }
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    fn read(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let header = reader.headers().map_err(|e| csv_error(path, e))?.iter().map(String::from).collect();
        let rows = reader.records().collect::<std::result::Result<_, _>>().map_err(|e| csv_error(path, e))?;
        Ok(Table { header, rows })
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no column {name:?}")))
    }

    fn num<T: std::str::FromStr>(row: &csv::StringRecord, col: usize) -> Result<T> {
        row[col]
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("cannot parse {:?}", &row[col])))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let location = match e.position() {
        Some(p) => format!("{}:{}", path.display(), p.line()),
        None => path.display().to_string(),
    };
    Error::Parse { location, message: e.to_string() }
}

/// Checks every summary number of the run in `dir` against its raw files.
pub fn audit(dir: &Path) -> Result<AuditReport> {
    let report: ExperimentReport = serde_json::from_str(&fs::read_to_string(dir.join(SUMMARY_FILE))?)?;
    let config = &report.config;
    let trials = Table::read(&dir.join(TRIALS_FILE))?;
    let discards = Table::read(&dir.join(DISCARDS_FILE))?;
    let mut out = AuditReport::default();

    let (t_col, d_col) = (trials.column("trial")?, trials.column("d")?);
    let (primary, filter) = primary_column(config.kind);
    let p_col = trials.column(primary)?;
    let finest = config.resolutions.iter().max().copied().unwrap_or(0).to_string();
    let filter = match filter {
        Some((col, "finest")) => Some((trials.column(col)?, finest.as_str())),
        Some((col, value)) => Some((trials.column(col)?, value)),
        None => None,
    };

    let mut by_degree: BTreeMap<u32, Vec<&csv::StringRecord>> = BTreeMap::new();
    for row in &trials.rows {
        by_degree.entry(Table::num(row, d_col)?).or_default().push(row);
    }
    let mut discarded: BTreeMap<u32, usize> = BTreeMap::new();
    let dd_col = discards.column("d")?;
    for row in &discards.rows {
        *discarded.entry(Table::num(row, dd_col)?).or_default() += 1;
    }
    let unknown: Vec<u32> =
        by_degree.keys().filter(|d| report.degree(**d).is_none()).copied().collect();
    if !unknown.is_empty() {
        out.mismatches.push(format!("raw rows for degrees {unknown:?} missing from the summary"));
    }

    for s in &report.degrees {
        let d = s.d;
        let rows = by_degree.get(&d).map(Vec::as_slice).unwrap_or(&[]);
        let accepted: BTreeSet<u64> = rows.iter().map(|r| Table::num(r, t_col)).collect::<Result<_>>()?;
        out.compare(|| format!("d={d} accepted"), s.accepted as f64, accepted.len() as f64);
        let disc = discarded.get(&d).copied().unwrap_or(0);
        out.compare(|| format!("d={d} discarded"), s.discarded as f64, disc as f64);
        out.compare(|| format!("d={d} attempted"), s.attempted as f64, (accepted.len() + disc) as f64);
        let values: Vec<f64> = rows
            .iter()
            .filter(|r| filter.is_none_or(|(c, v)| &r[c] == v))
            .map(|r| Table::num(r, p_col))
            .collect::<Result<_>>()?;
        let (mean, stderr) = mean_stderr(&values);
        out.compare(|| format!("d={d} n"), s.n as f64, values.len() as f64);
        out.compare(|| format!("d={d} mean"), s.mean, mean);
        out.compare(|| format!("d={d} stderr"), s.stderr, stderr);
        audit_extras(&mut out, config.kind, s, rows, &trials, &filter)?;
    }

    if config.kind == ExperimentKind::Equi {
        audit_equi(&mut out, &report, dir)?;
    }
    if let Some(r) = report.regression {
        let points: Vec<GrowthPoint> =
            report.degrees.iter().map(|s| GrowthPoint { d: s.d, mean: s.mean, stderr: s.stderr }).collect();
        let fit = growth_regression(&points)?;
        out.compare(|| "regression slope".into(), r.slope, fit.slope);
        out.compare(|| "regression intercept".into(), r.intercept, fit.intercept);
    }
    let checks = acceptance_checks(config, &report.degrees, report.regression.as_ref(), report.calibration.as_ref());
    for c in &checks {
        out.values_checked += 1;
        match report.check(&c.name) {
            Some(r) if r.passed == c.passed => {}
            Some(r) => out.mismatches.push(format!("check {}: summary says {}, recomputed {}", c.name, r.passed, c.passed)),
            None => out.mismatches.push(format!("check {} missing from the summary", c.name)),
        }
    }
    Ok(out)
}

fn audit_extras(
    out: &mut AuditReport,
    kind: ExperimentKind,
    s: &super::DegreeSummary,
    rows: &[&csv::StringRecord],
    trials: &Table,
    filter: &Option<(usize, &str)>,
) -> Result<()> {
    let d = s.d;
    let reported = |k: &str| s.extras.get(k).copied().unwrap_or(f64::NAN);
    let column = |name: &str| -> Result<Vec<f64>> {
        let c = trials.column(name)?;
        rows.iter().map(|r| Table::num(r, c)).collect()
    };
    match kind {
        ExperimentKind::ComplexCrit => {
            let (p, e) = (column("points")?, column("expected")?);
            let bad = p.iter().zip(&e).filter(|(a, b)| a != b).count();
            out.compare(|| format!("d={d} mismatches"), reported("mismatches"), bad as f64);
        }
        ExperimentKind::RealBetti => {
            let cert = trials.column("certified")?;
            let certified: Vec<&&csv::StringRecord> = rows.iter().filter(|r| &r[cert] == "true").collect();
            let v = trials.column("violations")?;
            let violations: usize = certified.iter().map(|r| Table::num::<usize>(r, v)).sum::<Result<usize>>()?;
            out.compare(|| format!("d={d} certified"), reported("certified"), certified.len() as f64);
            out.compare(|| format!("d={d} violations"), reported("violations"), violations as f64);
        }
        ExperimentKind::PmCheck => {
            let (e, inv) = (trials.column("error")?, trials.column("invariance")?);
            let mut max_error = 0.0f64;
            let mut max_inv = 0.0f64;
            for r in rows {
                if filter.is_none_or(|(c, v)| &r[c] == v) {
                    max_error = max_error.max(Table::num(r, e)?);
                }
                max_inv = max_inv.max(Table::num(r, inv)?);
            }
            out.compare(|| format!("d={d} max_error"), reported("max_error"), max_error);
            out.compare(|| format!("d={d} max_invariance"), reported("max_invariance"), max_inv);
        }
        ExperimentKind::GrowthSweep => {
            let (f, se) = mean_stderr(&column("fraction")?);
            out.compare(|| format!("d={d} tube_fraction"), reported("tube_fraction"), f);
            out.compare(|| format!("d={d} tube_fraction_stderr"), reported("tube_fraction_stderr"), se);
        }
        _ => {}
    }
    Ok(())
}

fn audit_equi(out: &mut AuditReport, report: &ExperimentReport, dir: &Path) -> Result<()> {
    let config = &report.config;
    let partition = build_partition(config.space, config.partition_k)?;
    let points = Table::read(&dir.join(POINTS_FILE))?;
    let (d_col, c_col) = (points.column("d")?, points.column("cell")?);
    let mut measures: BTreeMap<u32, EmpiricalMeasure> = BTreeMap::new();
    for row in &points.rows {
        let cell: usize = Table::num(row, c_col)?;
        if cell >= partition.len() {
            return Err(Error::InvalidArgument(format!("cell {cell} outside the partition")));
        }
        let m = measures.entry(Table::num(row, d_col)?).or_insert_with(|| EmpiricalMeasure::new(partition.len()));
        m.counts[cell] += 1;
        m.total += 1;
    }
    for s in &report.degrees {
        let Some(m) = measures.get(&s.d) else {
            out.mismatches.push(format!("d={} has no points", s.d));
            continue;
        };
        let disc = m.discrepancy(&partition)?;
        let floor = sampling_floor(&partition, m.total, config.thresholds.floor_replicates, s.seed ^ super::FLOOR_STREAM);
        let reported = |k: &str| s.extras.get(k).copied().unwrap_or(f64::NAN);
        out.compare(|| format!("d={} sup", s.d), reported("sup"), disc.sup);
        out.compare(|| format!("d={} l1", s.d), reported("l1"), disc.l1);
        out.compare(|| format!("d={} floor", s.d), reported("floor"), floor);
        out.compare(|| format!("d={} points_total", s.d), reported("points_total"), m.total as f64);
    }
    Ok(())
}
