//! JSON design configuration files.
//!
//! ```json
//! { "schema": 1, "preset": "isotropic", "L1": 1.5, "L2": 1.5 }
//! { "schema": 1, "a": [0, 0], "b": [2, -2], "alpha1": 0, "alpha2": 90,
//!   "angle_unit": "deg", "L1": 1, "L2": 1 }
//! ```
//!
//! Explicit keys override the preset. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::DesignParams;
use crate::linalg::Vec2;
use crate::manipulability::AmplificationBounds;

pub const SCHEMA_VERSION: u32 = 1;

/// Preset geometry: anchor offset `M = 2` and bar length `L = 1`.
pub const PRESET_M: f64 = 2.0;
pub const PRESET_L: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Isotropic,
    Biglide,
}

impl Preset {
    pub fn parse(s: &str) -> Option<Preset> {
        match s {
            "isotropic" => Some(Preset::Isotropic),
            "biglide" => Some(Preset::Biglide),
            _ => None,
        }
    }

    pub fn design(self) -> DesignParams {
        match self {
            Preset::Isotropic => DesignParams::isotropic(PRESET_M, PRESET_L),
            Preset::Biglide => DesignParams::biglide(PRESET_M, PRESET_L),
        }
        .expect("preset geometry is valid")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    #[default]
    Rad,
    Deg,
}

/// On-disk form of a design.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfigFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    #[serde(default)]
    pub angle_unit: AngleUnit,
    #[serde(rename = "L1", default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<f64>,
    #[serde(rename = "L2", default, skip_serializing_if = "Option::is_none")]
    pub l2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_hi: Option<f64>,
}

/// A resolved configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoadedConfig {
    pub design: DesignParams,
    pub bounds: AmplificationBounds,
}

impl From<Preset> for LoadedConfig {
    fn from(p: Preset) -> Self {
        LoadedConfig { design: p.design(), bounds: AmplificationBounds::default() }
    }
}

impl DesignConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDesign(format!("config schema error: {e}")))
    }

    pub fn resolve(&self) -> Result<LoadedConfig> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::InvalidDesign(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        let base = self.preset.map(Preset::design);
        let missing = |key: &str| Error::InvalidDesign(format!("missing key `{key}` (and no preset given)"));
        let angle = |v: f64| match self.angle_unit {
            AngleUnit::Rad => v,
            AngleUnit::Deg => v.to_radians(),
        };

        let a = self.a.map(|[x, y]| Vec2::new(x, y)).or(base.map(|d| d.a)).ok_or_else(|| missing("a"))?;
        let b = self.b.map(|[x, y]| Vec2::new(x, y)).or(base.map(|d| d.b)).ok_or_else(|| missing("b"))?;
        let alpha1 = self.alpha1.map(angle).or(base.map(|d| d.alpha1)).ok_or_else(|| missing("alpha1"))?;
        let alpha2 = self.alpha2.map(angle).or(base.map(|d| d.alpha2)).ok_or_else(|| missing("alpha2"))?;
        let l1 = self.l1.or(base.map(|d| d.l1)).ok_or_else(|| missing("L1"))?;
        let l2 = self.l2.or(base.map(|d| d.l2)).ok_or_else(|| missing("L2"))?;
        // default strokes follow the bar lengths, not the preset
        let rho_min = self.rho_min.unwrap_or(0.0);
        let rho_max = self.rho_max.unwrap_or(4.0 * l1.max(l2));
        let design = DesignParams::with_strokes(a, b, alpha1, alpha2, l1, l2, rho_min, rho_max)?;

        let defaults = AmplificationBounds::default();
        let bounds = AmplificationBounds {
            lo: self.lambda_lo.unwrap_or(defaults.lo),
            hi: self.lambda_hi.unwrap_or(defaults.hi),
        };
        if !(bounds.lo.is_finite() && bounds.hi.is_finite() && 0.0 <= bounds.lo && bounds.lo < bounds.hi) {
            return Err(Error::InvalidDesign(format!(
                "amplification bounds must satisfy 0 <= lambda_lo < lambda_hi (got {}, {})",
                bounds.lo, bounds.hi
            )));
        }
        Ok(LoadedConfig { design, bounds })
    }
}

/// Loads a design from `preset:<name>` or a JSON file path.
pub fn load(source: &str) -> Result<LoadedConfig> {
    if let Some(name) = source.strip_prefix("preset:") {
        return Preset::parse(name)
            .map(LoadedConfig::from)
            .ok_or_else(|| Error::InvalidDesign(format!("unknown preset `{name}` (expected isotropic or biglide)")));
    }
    let text = std::fs::read_to_string(Path::new(source))
        .map_err(|e| Error::InvalidDesign(format!("cannot read {source}: {e}")))?;
    DesignConfigFile::parse(&text)?.resolve()
}
