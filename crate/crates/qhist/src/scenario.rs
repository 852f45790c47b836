//! Scenario files and command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qhist_core::processor::Program;
use qhist_core::C64;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::formats::{parse_json, read_text, ProgramJson};
use crate::grid::TranslateMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    EraseDemo,
    Processor,
    Validate,
    Resource,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::EraseDemo => "erase-demo",
            Kind::Processor => "processor",
            Kind::Validate => "validate",
            Kind::Resource => "resource",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Dyadic,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranslateJson {
    #[default]
    Shift,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridJson {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    #[serde(default)]
    pub translate: TranslateJson,
}

/// A real amplitude or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AmpJson {
    Real(f64),
    Complex([f64; 2]),
}

impl AmpJson {
    pub fn value(self) -> C64 {
        match self {
            AmpJson::Real(re) => C64::new(re, 0.0),
            AmpJson::Complex([re, im]) => C64::new(re, im),
        }
    }
}

/// One global tolerance, or per-suite overrides by suite name.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ToleranceJson {
    All(f64),
    PerSuite(BTreeMap<String, f64>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ProgramRef {
    Path(String),
    Inline(ProgramJson),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioJson {
    pub kind: Option<Kind>,
    #[serde(default)]
    pub backend: Backend,
    pub grid: Option<GridJson>,
    pub max_level: Option<u32>,
    pub tolerance: Option<ToleranceJson>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub pairs: Vec<[AmpJson; 2]>,
    #[serde(default)]
    pub cv_level: u32,
    pub program: Option<ProgramRef>,
}

/// Values given on the command line; each replaces the scenario's own.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub backend: Option<Backend>,
    pub seed: Option<u64>,
    pub max_level: Option<u32>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub x_min: f64,
    pub h: f64,
    pub n: usize,
    pub translate: TranslateMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: Option<Kind>,
    pub backend: Backend,
    pub grid: Option<GridOptions>,
    pub max_level: u32,
    pub tolerance: Option<ToleranceJson>,
    pub seed: Option<u64>,
    pub pairs: Vec<(C64, C64)>,
    pub cv_level: u32,
    pub program: Option<Program>,
}

/// Window used when a grid backend is requested from the command line on
/// a scenario without grid options.
pub const DEFAULT_GRID: GridJson = GridJson {
    x_min: -2.0,
    x_max: 2.0,
    n: 4096,
    translate: TranslateJson::Shift,
};

impl Scenario {
    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Self> {
        let label = path.display().to_string();
        let raw: ScenarioJson = parse_json(&read_text(path)?, &label)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(raw, &label, &base, overrides)
    }

    /// `base` resolves relative program paths.
    pub fn from_json(
        raw: ScenarioJson,
        label: &str,
        base: &Path,
        overrides: &Overrides,
    ) -> CliResult<Self> {
        let backend = overrides.backend.unwrap_or(raw.backend);
        let grid = match (backend, raw.grid) {
            (Backend::Grid, Some(g)) => Some(grid_options(g)?),
            (Backend::Grid, None) if overrides.backend.is_some() => {
                Some(grid_options(DEFAULT_GRID)?)
            }
            (Backend::Grid, None) => {
                return Err(CliError::Config(format!(
                    "{label}: backend \"grid\" needs grid options"
                )))
            }
            (Backend::Dyadic, Some(_)) if overrides.backend.is_none() => {
                return Err(CliError::Config(format!(
                    "{label}: grid options given but the backend is \"dyadic\""
                )))
            }
            (Backend::Dyadic, _) => None,
        };
        let pairs = raw
            .pairs
            .iter()
            .enumerate()
            .map(|(i, [a, b])| {
                let (a, b) = (a.value(), b.value());
                let n2 = a.norm_sqr() + b.norm_sqr();
                if !(n2 - 1.0).abs().le(&1e-9) {
                    return Err(CliError::Schema {
                        file: label.to_string(),
                        path: format!("pairs[{i}]"),
                        message: format!("|α|² + |β|² = {n2}, expected 1"),
                    });
                }
                Ok((a, b))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let program = match raw.program {
            None => None,
            Some(ProgramRef::Inline(p)) => Some(p.into_program(label)?),
            Some(ProgramRef::Path(p)) => {
                let path = resolve(base, &p);
                let plabel = path.display().to_string();
                let json: ProgramJson = parse_json(&read_text(&path)?, &plabel)?;
                Some(json.into_program(&plabel)?)
            }
        };
        let tolerance = match overrides.tolerance {
            Some(t) => Some(ToleranceJson::All(t)),
            None => raw.tolerance,
        };
        Ok(Self {
            kind: raw.kind,
            backend,
            grid,
            max_level: overrides
                .max_level
                .or(raw.max_level)
                .unwrap_or(qhist_core::DEFAULT_MAX_LEVEL),
            tolerance,
            seed: overrides.seed.or(raw.seed),
            pairs,
            cv_level: raw.cv_level,
            program,
        })
    }

    /// Rejects a scenario whose declared kind differs from the command.
    pub fn expect_kind(&self, kind: Kind) -> CliResult<()> {
        match self.kind {
            Some(k) if k != kind => Err(CliError::Config(format!(
                "scenario is of kind {:?}, not {:?}",
                k.name(),
                kind.name()
            ))),
            _ => Ok(()),
        }
    }

    pub fn tolerance_for(&self, suite: &str, default: f64) -> f64 {
        match &self.tolerance {
            Some(ToleranceJson::All(t)) => *t,
            Some(ToleranceJson::PerSuite(m)) => m.get(suite).copied().unwrap_or(default),
            None => default,
        }
    }

    pub fn require_program(&self) -> CliResult<&Program> {
        self.program
            .as_ref()
            .ok_or_else(|| CliError::Config("scenario has no program".into()))
    }
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn grid_options(g: GridJson) -> CliResult<GridOptions> {
    if !(g.x_min.is_finite() && g.x_max.is_finite() && g.x_min < g.x_max) {
        return Err(CliError::Config(format!(
            "grid window [{}, {}) is empty or not finite",
            g.x_min, g.x_max
        )));
    }
    if !g.n.is_power_of_two() {
        return Err(CliError::Config(format!(
            "grid size {} is not a power of two",
            g.n
        )));
    }
    Ok(GridOptions {
        x_min: g.x_min,
        h: (g.x_max - g.x_min) / g.n as f64,
        n: g.n,
        translate: match g.translate {
            TranslateJson::Shift => TranslateMethod::Shift,
            TranslateJson::Spectral => TranslateMethod::Spectral,
        },
    })
}
