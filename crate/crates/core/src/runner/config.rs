use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ensemble::Field;
use crate::error::{Error, Result};
use crate::poly::Space;

/// The experiments the runner knows how to schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    RealRoots,
    ComplexCrit,
    Equi,
    EquiRealTube,
    RealBetti,
    PmCheck,
    GrowthSweep,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::RealRoots,
        ExperimentKind::ComplexCrit,
        ExperimentKind::Equi,
        ExperimentKind::EquiRealTube,
        ExperimentKind::RealBetti,
        ExperimentKind::PmCheck,
        ExperimentKind::GrowthSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RealRoots => "real-roots",
            ExperimentKind::ComplexCrit => "complex-crit",
            ExperimentKind::Equi => "equi",
            ExperimentKind::EquiRealTube => "equi-real-tube",
            ExperimentKind::RealBetti => "real-betti",
            ExperimentKind::PmCheck => "pm-check",
            ExperimentKind::GrowthSweep => "growth-sweep",
        }
    }

    fn allowed_spaces(self) -> &'static [Space] {
        match self {
            ExperimentKind::RealRoots | ExperimentKind::PmCheck => &[Space::Cp1],
            ExperimentKind::RealBetti => &[Space::Cp2],
            _ => &[Space::Cp2, Space::Cp1xCp1],
        }
    }

    fn allowed_fields(self) -> &'static [Field] {
        match self {
            ExperimentKind::RealRoots
            | ExperimentKind::EquiRealTube
            | ExperimentKind::RealBetti
            | ExperimentKind::GrowthSweep => &[Field::Real],
            ExperimentKind::ComplexCrit | ExperimentKind::Equi | ExperimentKind::PmCheck => {
                &[Field::Complex, Field::Real]
            }
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown experiment kind {s:?}")))
    }
}

/// Acceptance thresholds checked after a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Means must sit within this many standard errors of the prediction.
    pub se_window: f64,
    /// Sup-discrepancy at the last degree over that at the first.
    pub equi_ratio: f64,
    /// Sup-discrepancy at the last degree over the sampling floor.
    pub floor_factor: f64,
    pub floor_replicates: u64,
    /// Quadrature error allowed per unit of degree.
    pub pm_error_per_degree: f64,
    pub pm_invariance: f64,
    /// Upper bound on the log-log growth slope.
    pub slope_bound: f64,
    pub calibration_degrees: Vec<u32>,
    /// Open window the calibration slope must fall into.
    pub calibration_window: (f64, f64),
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            se_window: 3.0,
            equi_ratio: 0.5,
            floor_factor: 3.0,
            floor_replicates: 16,
            pm_error_per_degree: 1e-3,
            pm_invariance: 1e-6,
            slope_bound: 1.5,
            calibration_degrees: (4..=64).collect(),
            calibration_window: (1.0, 1.6),
        }
    }
}

/// Everything a run depends on. Identical configs give identical raw
/// output, whatever the worker count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub space: Space,
    pub field: Field,
    pub master_seed: u64,
    pub degrees: Vec<u32>,
    /// Accepted trials per degree.
    pub trials: usize,
    pub partition_k: usize,
    /// The tube width is this multiple of `log d / sqrt d`.
    pub tube_multiplier: f64,
    pub max_depth: u32,
    /// Ascending quadrature resolutions; the last is the one checked.
    pub resolutions: Vec<usize>,
    pub bumps_per_trial: usize,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub out_dir: Option<PathBuf>,
    pub max_discard_rate: f64,
    /// Also store every accepted section, not only the discarded ones.
    pub save_sections: bool,
    #[serde(default)]
    pub thresholds: Thresholds,
}

impl ExperimentConfig {
    /// Defaults for one kind, sized like the acceptance runs.
    pub fn preset(kind: ExperimentKind) -> Self {
        let (space, field, degrees, trials): (Space, Field, Vec<u32>, usize) = match kind {
            ExperimentKind::RealRoots => (Space::Cp1, Field::Real, vec![9, 25, 100], 10_000),
            ExperimentKind::ComplexCrit => (Space::Cp2, Field::Complex, (3..=12).collect(), 50),
            ExperimentKind::Equi => (Space::Cp2, Field::Complex, vec![4, 8, 12, 16], 200),
            ExperimentKind::EquiRealTube => (Space::Cp2, Field::Real, vec![4, 8, 12, 16, 20], 200),
            ExperimentKind::RealBetti => (Space::Cp2, Field::Real, (3..=12).collect(), 40),
            ExperimentKind::PmCheck => (Space::Cp1, Field::Complex, vec![2, 4, 6, 8, 10], 4),
            ExperimentKind::GrowthSweep => (Space::Cp2, Field::Real, (4..=20).step_by(2).collect(), 100),
        };
        ExperimentConfig {
            kind,
            space,
            field,
            master_seed: 1,
            degrees,
            trials,
            partition_k: 32,
            tube_multiplier: 1.0,
            max_depth: 14,
            resolutions: vec![128, 256, 512, 1024],
            bumps_per_trial: 3,
            workers: 0,
            out_dir: None,
            max_discard_rate: 0.05,
            save_sections: false,
            thresholds: Thresholds::default(),
        }
    }

    /// Parses a JSON config. Missing fields come from the preset of the
    /// config's kind, or of `kind` when given; a conflicting kind is an
    /// error.
    pub fn from_json(text: &str, kind: Option<ExperimentKind>) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let serde_json::Value::Object(fields) = value else {
            return Err(Error::InvalidConfig("config must be a JSON object".into()));
        };
        let declared = match fields.get("kind") {
            Some(k) => Some(serde_json::from_value::<ExperimentKind>(k.clone())?),
            None => None,
        };
        let kind = match (declared, kind) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidConfig(format!("config is for {a}, not {b}")));
            }
            (Some(k), _) | (None, Some(k)) => k,
            (None, None) => return Err(Error::InvalidConfig("config names no experiment kind".into())),
        };
        let serde_json::Value::Object(mut merged) = serde_json::to_value(Self::preset(kind))? else {
            unreachable!("a struct serializes to an object")
        };
        merged.extend(fields);
        let config: ExperimentConfig = serde_json::from_value(serde_json::Value::Object(merged))
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.degrees.is_empty() {
            return bad("no degrees".into());
        }
        if self.degrees.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("degrees {:?} are not strictly ascending", self.degrees));
        }
        if self.degrees[0] == 0 {
            return bad("degree 0 has no zeros".into());
        }
        if !self.kind.allowed_spaces().contains(&self.space) {
            return bad(format!("{} does not run on {:?}", self.kind, self.space));
        }
        if !self.kind.allowed_fields().contains(&self.field) {
            return bad(format!("{} needs the {:?} ensemble", self.kind, self.kind.allowed_fields()[0]));
        }
        if !(0.0..=1.0).contains(&self.max_discard_rate) {
            return bad(format!("max_discard_rate {} is not a rate", self.max_discard_rate));
        }
        match self.kind {
            ExperimentKind::Equi if self.partition_k < 2 => bad("partition_k must be at least 2".into()),
            ExperimentKind::EquiRealTube | ExperimentKind::GrowthSweep if !(self.tube_multiplier > 0.0) => {
                bad("tube_multiplier must be positive".into())
            }
            ExperimentKind::RealBetti if self.max_depth == 0 || self.max_depth > 30 => {
                bad(format!("max_depth {} outside 1..=30", self.max_depth))
            }
            ExperimentKind::PmCheck if self.resolutions.is_empty() || self.bumps_per_trial == 0 => {
                bad("pm-check needs resolutions and at least one bump".into())
            }
            ExperimentKind::PmCheck if self.resolutions.windows(2).any(|w| w[0] >= w[1]) => {
                bad(format!("resolutions {:?} are not strictly ascending", self.resolutions))
            }
            ExperimentKind::PmCheck if self.resolutions.iter().any(|&r| r < crate::pmcheck::MIN_RESOLUTION) => {
                bad(format!("resolutions below {}", crate::pmcheck::MIN_RESOLUTION))
            }
            ExperimentKind::GrowthSweep if self.degrees.len() < 4 => bad("a regression needs four degrees".into()),
            _ => Ok(()),
        }
    }
}
