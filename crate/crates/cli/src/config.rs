//! Study configuration: one JSON file plus flag overrides.

use serde::{Deserialize, Serialize};

use geoop::featureset::{ComboSpec, GoConfig};
use geoop::surrogate::{Kernel, MeanFn};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub seed: u64,
    pub go: GoConfig,
    pub features: FeaturesConfig,
    pub reduce: ReduceConfig,
    pub sensitivity: SensitivityConfig,
    pub surrogate: SurrogateConfig,
    pub quality: QualityConfig,
    pub gen_airfoils: GenAirfoilsConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            seed: 0,
            go: GoConfig::default(),
            features: FeaturesConfig::default(),
            reduce: ReduceConfig::default(),
            sensitivity: SensitivityConfig::default(),
            surrogate: SurrogateConfig::default(),
            quality: QualityConfig::default(),
            gen_airfoils: GenAirfoilsConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct FeaturesConfig {
    /// Files or directories; directories contribute their `.dat`, `.obj`
    /// and `.stl` entries in name order.
    pub inputs: Vec<String>,
    /// Generate this many aerofoils from a Latin-hypercube sample instead.
    pub generate_airfoils: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReduceConfig {
    pub threshold: f64,
    pub samples: usize,
    pub sample_scale: f64,
    pub combos: Vec<String>,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig {
            threshold: 0.95,
            samples: 200,
            sample_scale: 1.0,
            combos: vec!["P".into(), "P+M+K+FT".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensitivityConfig {
    pub n: usize,
    pub epsilons: Vec<f64>,
    pub use_total: bool,
}

impl Default for SensitivityConfig {
    fn default() -> Self {
        SensitivityConfig {
            n: 1024,
            epsilons: vec![0.1, 0.05],
            use_total: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurrogateConfig {
    pub combos: Vec<String>,
    pub kernels: Vec<Kernel>,
    pub mean_fns: Vec<MeanFn>,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        SurrogateConfig {
            combos: ComboSpec::with_parameters().iter().map(ComboSpec::label).collect(),
            kernels: Kernel::ALL.to_vec(),
            mean_fns: vec![MeanFn::Constant],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QualityConfig {
    pub gamma0: f64,
    /// Median pairwise distance of the training rows when absent.
    pub kernel_length: Option<f64>,
}

impl Default for QualityConfig {
    fn default() -> Self {
        QualityConfig {
            gamma0: 1.0,
            kernel_length: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenAirfoilsConfig {
    pub n: usize,
    pub points: usize,
}

impl Default for GenAirfoilsConfig {
    fn default() -> Self {
        GenAirfoilsConfig { n: 100, points: 192 }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn parse_combos(labels: &[String]) -> Result<Vec<ComboSpec>, CliError> {
    if labels.is_empty() {
        return Err(bad("combination list is empty"));
    }
    labels
        .iter()
        .map(|l| ComboSpec::parse(l).map_err(|e| bad(e.to_string())))
        .collect()
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| bad(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let go = &self.go;
        if go.moment_order > geoop::moments::MAX_ORDER {
            return Err(bad(format!("go.moment_order {} exceeds {}", go.moment_order, geoop::moments::MAX_ORDER)));
        }
        if go.fd_samples < 16 || !go.fd_samples.is_power_of_two() {
            return Err(bad("go.fd_samples must be a power of two >= 16"));
        }
        if go.fd_sections < 2 || !go.fd_sections.is_power_of_two() {
            return Err(bad("go.fd_sections must be a power of two >= 2"));
        }
        if go.fd_per_section < 16 || !go.fd_per_section.is_power_of_two() {
            return Err(bad("go.fd_per_section must be a power of two >= 16"));
        }
        if go.profile_points < 3 {
            return Err(bad("go.profile_points must be at least 3"));
        }
        let r = &self.reduce;
        if !(r.threshold > 0.0 && r.threshold <= 1.0) {
            return Err(bad("reduce.threshold must lie in (0, 1]"));
        }
        if !(r.sample_scale > 0.0 && r.sample_scale.is_finite()) {
            return Err(bad("reduce.sample_scale must be positive"));
        }
        parse_combos(&r.combos)?;
        let s = &self.sensitivity;
        if s.n < 64 {
            return Err(bad("sensitivity.n must be at least 64"));
        }
        if s.epsilons.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(bad("sensitivity.epsilons must lie in [0, 1]"));
        }
        let g = &self.surrogate;
        parse_combos(&g.combos)?;
        if g.kernels.is_empty() || g.mean_fns.is_empty() {
            return Err(bad("surrogate kernel grid is empty"));
        }
        let q = &self.quality;
        if !q.gamma0.is_finite() {
            return Err(bad("quality.gamma0 must be finite"));
        }
        if q.kernel_length.is_some_and(|l| !(l > 0.0)) {
            return Err(bad("quality.kernel_length must be positive"));
        }
        if self.gen_airfoils.n == 0 || self.gen_airfoils.points < 16 {
            return Err(bad("gen_airfoils needs n >= 1 and points >= 16"));
        }
        Ok(())
    }
}
