//! Partitions against FS-uniform oracles, and the statistics helpers.

use std::f64::consts::{FRAC_PI_2, PI};

use lefschetz_core::critpoints::CriticalPoint;
use lefschetz_core::ensemble::trial_rng;
use lefschetz_core::geomstats::{
    build_partition, chart_point, integrate_test_function, sample_fs_uniform, tube_mass, CellPartition,
    EmpiricalMeasure, TestFunction,
};
use lefschetz_core::Space;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

const SPACES: [Space; 3] = [Space::Cp1, Space::Cp2, Space::Cp1xCp1];

/// FS-uniform points by normalizing complex Gaussian vectors (per factor),
/// independent of the chart-based sampler.
fn gaussian_point<R: Rng>(space: Space, rng: &mut R) -> Vec<Complex64> {
    (0..space.num_vars())
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Max over cells of |count - N vol| / sqrt(N vol (1 - vol)).
fn worst_z(partition: &CellPartition, m: &EmpiricalMeasure) -> f64 {
    let n = m.total as f64;
    partition
        .cells
        .iter()
        .zip(&m.counts)
        .map(|(c, &k)| {
            let v = c.fs_volume;
            (k as f64 - n * v).abs() / (n * v * (1.0 - v)).sqrt()
        })
        .fold(0.0, f64::max)
}

#[test]
fn samplers_match_cell_volumes() {
    for space in SPACES {
        let p = build_partition(space, 32).unwrap();
        let mut chart = EmpiricalMeasure::new(p.len());
        let mut gauss = EmpiricalMeasure::new(p.len());
        let mut rng = trial_rng(5, 0);
        for _ in 0..100_000 {
            chart.add_point(&p, &sample_fs_uniform(space, &mut rng));
            gauss.add_point(&p, &gaussian_point(space, &mut rng));
        }
        assert!(worst_z(&p, &chart) < 3.5, "{space} chart sampler z = {}", worst_z(&p, &chart));
        assert!(worst_z(&p, &gauss) < 3.5, "{space} gaussian z = {}", worst_z(&p, &gauss));
    }
}

#[test]
fn oracle_passes_at_every_resolution() {
    let mut rng = trial_rng(6, 0);
    let points: Vec<Vec<Complex64>> = (0..50_000).map(|_| sample_fs_uniform(Space::Cp2, &mut rng)).collect();
    for k in [4, 8, 16, 32, 64, 128] {
        let p = build_partition(Space::Cp2, k).unwrap();
        let mut m = EmpiricalMeasure::new(k);
        for v in &points {
            m.add_point(&p, v);
        }
        assert_eq!(m.counts.iter().sum::<u64>(), m.total);
        // Sup of k multinomial deviations: 4 standard errors of the largest cell.
        let vmax = p.cells.iter().map(|c| c.fs_volume).fold(0.0, f64::max);
        let tol = 4.0 * (vmax * (1.0 - vmax) / 50_000.0).sqrt();
        assert!(m.discrepancy(&p).unwrap().sup < tol, "K={k}");
    }
}

#[test]
fn conjugate_sets_give_mirrored_counts() {
    let p = build_partition(Space::Cp2, 32).unwrap();
    let mut rng = trial_rng(7, 0);
    let mut m = EmpiricalMeasure::new(p.len());
    for _ in 0..2000 {
        let v = sample_fs_uniform(Space::Cp2, &mut rng);
        let c: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        m.add_point(&p, &v);
        m.add_point(&p, &c);
    }
    for (i, cell) in p.cells.iter().enumerate() {
        // Mirror of the cell: locate the conjugate of an interior point.
        let u: Vec<Complex64> = cell
            .radial
            .iter()
            .zip(&cell.angular)
            .map(|(r, a)| Complex64::from_polar(0.5 * (r.0 + r.1), 0.5 * (a.0 + a.1)))
            .collect();
        let v = lefschetz_core::geomstats::from_chart(Space::Cp2, cell.chart, &u);
        let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        let j = p.locate(&conj);
        assert_eq!(m.counts[i], m.counts[j]);
    }
}

#[test]
fn discrepancy_extremes() {
    let p = build_partition(Space::Cp1xCp1, 8).unwrap();
    let mut m = EmpiricalMeasure::new(p.len());
    let v = vec![Complex64::new(1.0, 0.0), Complex64::new(0.2, 0.1), Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0)];
    for _ in 0..10 {
        m.add_point(&p, &v);
    }
    let j = p.locate(&v);
    assert_eq!(m.counts[j], 10);
    let d = m.discrepancy(&p).unwrap();
    assert!((d.sup - (1.0 - p.cells[j].fs_volume)).abs() < 1e-12);
    assert!((d.l1 - 2.0 * (1.0 - p.cells[j].fs_volume)).abs() < 1e-12);

    let proportional = EmpiricalMeasure {
        counts: vec![1; 4],
        total: 4,
        trials: 1,
    };
    let q = build_partition(Space::Cp1, 4).unwrap();
    assert!(proportional.discrepancy(&q).unwrap().sup < 1e-12);
}

#[test]
fn indicators_agree_with_binning() {
    let p = build_partition(Space::Cp2, 16).unwrap();
    let mut rng = trial_rng(8, 0);
    let points: Vec<Vec<Complex64>> = (0..3000).map(|_| sample_fs_uniform(Space::Cp2, &mut rng)).collect();
    let mut m = EmpiricalMeasure::new(p.len());
    for v in &points {
        m.add_point(&p, v);
    }
    let freq = m.frequencies();
    for (i, cell) in p.cells.iter().enumerate() {
        let chi = TestFunction::CellIndicator {
            space: Space::Cp2,
            cell: cell.clone(),
        };
        assert!((integrate_test_function(&chi, &points).unwrap() - freq[i]).abs() < 1e-15);
    }
    let one = TestFunction::CellIndicator {
        space: Space::Cp2,
        cell: lefschetz_core::geomstats::Cell {
            chart: 0,
            radial: vec![(0.0, 1.0); 2],
            angular: vec![(0.0, 2.0 * PI); 2],
            fs_volume: 1.0 / 3.0,
            next_split: 0,
        },
    };
    let in_chart0 = points.iter().filter(|v| chart_point(Space::Cp2, v).chart == 0).count();
    assert!((integrate_test_function(&one, &points).unwrap() - in_chart0 as f64 / 3000.0).abs() < 1e-15);
}

#[test]
fn bump_mean_matches_its_integral() {
    // FS-uniform mean of the bump equals its FS integral, computed here in
    // geodesic polar coordinates about the center: on CP2 the volume of the
    // sphere of radius r is proportional to sin^3 r cos r.
    let center = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let radius = 0.6;
    let chi = TestFunction::bump(Space::Cp2, &center, radius).unwrap();
    let n = 200_000;
    let mut rng = trial_rng(9, 0);
    let pts: Vec<Vec<Complex64>> = (0..n).map(|_| sample_fs_uniform(Space::Cp2, &mut rng)).collect();
    let mc = integrate_test_function(&chi, &pts).unwrap();
    let steps = 20_000;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..steps {
        let r = FRAC_PI_2 * (i as f64 + 0.5) / steps as f64;
        let w = r.sin().powi(3) * r.cos();
        den += w;
        if r < radius {
            num += w * (1.0 - (r / radius).powi(2)).powi(3);
        }
    }
    let exact = num / den;
    let se = (exact / n as f64).sqrt();
    assert!((mc - exact).abs() < 4.0 * se, "{mc} vs {exact}");
}

fn point_at(dist: f64) -> CriticalPoint {
    CriticalPoint {
        coords: vec![],
        fiber: Complex64::new(0.0, 0.0),
        coordinate: Complex64::new(0.0, 0.0),
        residual: 0.0,
        is_real: dist == 0.0,
        dist_to_conjugate: dist,
    }
}

#[test]
fn tube_mass_extremes() {
    let real: Vec<_> = (0..5).map(|_| point_at(0.0)).collect();
    assert_eq!(tube_mass(&real, 1e-3).unwrap(), 1.0);
    let far: Vec<_> = (0..5).map(|_| point_at(FRAC_PI_2)).collect();
    assert_eq!(tube_mass(&far, 0.5).unwrap(), 0.0);
    assert!(tube_mass(&far, 0.0).is_err());
}
