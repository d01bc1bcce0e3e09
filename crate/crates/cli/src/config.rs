//! Run configuration: one JSON document drives a full pipeline run.

use anyhow::{bail, Context, Result};
use billiard_core::direction_set::{Accumulation, AccumulationSide, DirectionSetSpec};
use billiard_core::vanishing::GVariant;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionSetConfig {
    #[serde(default)]
    pub intervals: Vec<(f64, f64)>,
    #[serde(default)]
    pub isolated: Vec<f64>,
    #[serde(default)]
    pub accumulations: Vec<AccumulationConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccumulationConfig {
    pub target: f64,
    pub side: String,
    pub ratio: f64,
    pub count: usize,
    /// Distance from the target to the outermost generated point.
    #[serde(default = "default_offset")]
    pub offset: f64,
}

fn default_offset() -> f64 {
    0.3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StringLength {
    Auto(String),
    Fixed(f64),
}

impl Default for StringLength {
    fn default() -> Self {
        StringLength::Auto("auto".into())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Budget for the curve invariance residuals.
    #[serde(default = "default_invariance")]
    pub invariance_residual: f64,
    /// Hard limit on the reconstruction defect of g from (f, c); fitted
    /// needle-sharp functions need room here.
    #[serde(default = "default_reconstruction")]
    pub reconstruction: f64,
    /// Two-route agreement of the string field s.
    #[serde(default = "default_s_agreement")]
    pub s_route_agreement: f64,
    /// Base tolerance for the hdot + g = 0 check (a pointwise
    /// finite-difference budget is added on top).
    #[serde(default = "default_hdot_plus_g")]
    pub hdot_plus_g: f64,
    /// Analytic vs finite-difference boundary tangents.
    #[serde(default = "default_tangent_agreement")]
    pub tangent_agreement: f64,
}

fn default_invariance() -> f64 {
    1e-7
}
fn default_reconstruction() -> f64 {
    1e-8
}
fn default_s_agreement() -> f64 {
    1e-10
}
fn default_hdot_plus_g() -> f64 {
    1e-9
}
fn default_tangent_agreement() -> f64 {
    1e-6
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            invariance_residual: default_invariance(),
            reconstruction: default_reconstruction(),
            s_route_agreement: default_s_agreement(),
            hdot_plus_g: default_hdot_plus_g(),
            tangent_agreement: default_tangent_agreement(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub direction_set: DirectionSetConfig,
    /// "transversal" or "flat".
    #[serde(default = "default_variant")]
    pub variant: String,
    pub tau: f64,
    /// Fixed number or "auto".
    #[serde(default)]
    pub string_length: StringLength,
    /// "bump" (exact zeros, quadrature geometry) or "trigpoly" (fitted
    /// spectral geometry).
    #[serde(default = "default_backend")]
    pub backend: String,
    /// Curve sampling grid.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Degree cap for spectral fits.
    #[serde(default = "default_fit_degree")]
    pub fit_degree: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Scale factors for the sweep subcommand.
    #[serde(default = "default_sweep")]
    pub sweep_factors: Vec<f64>,
}

fn default_variant() -> String {
    "transversal".into()
}
fn default_backend() -> String {
    "bump".into()
}
fn default_grid() -> usize {
    4096
}
fn default_fit_degree() -> usize {
    billiard_core::vanishing::FIT_DEGREE
}
fn default_sweep() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 1.0]
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.variant.as_str(), "transversal" | "flat") {
            bail!("variant must be \"transversal\" or \"flat\", got {:?}", self.variant);
        }
        if !matches!(self.backend.as_str(), "bump" | "trigpoly") {
            bail!("backend must be \"bump\" or \"trigpoly\", got {:?}", self.backend);
        }
        if let StringLength::Auto(word) = &self.string_length {
            if word != "auto" {
                bail!("string_length must be a number or \"auto\", got {:?}", word);
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("invariance_residual", t.invariance_residual),
            ("reconstruction", t.reconstruction),
            ("s_route_agreement", t.s_route_agreement),
            ("hdot_plus_g", t.hdot_plus_g),
            ("tangent_agreement", t.tangent_agreement),
        ] {
            if v <= 0.0 {
                bail!("tolerance {name} must be positive");
            }
        }
        if self.grid < 1024 {
            bail!("grid must be at least 1024 samples");
        }
        Ok(())
    }

    pub fn variant_enum(&self) -> GVariant {
        match self.variant.as_str() {
            "flat" => GVariant::Flat,
            _ => GVariant::Transversal,
        }
    }

    pub fn direction_spec(&self) -> Result<DirectionSetSpec> {
        let mut spec = DirectionSetSpec {
            intervals: self.direction_set.intervals.clone(),
            isolated: self.direction_set.isolated.clone(),
            accumulations: Vec::new(),
        };
        for acc in &self.direction_set.accumulations {
            let side = match acc.side.as_str() {
                "left" => AccumulationSide::Left,
                "right" => AccumulationSide::Right,
                other => bail!("accumulation side must be \"left\" or \"right\", got {other:?}"),
            };
            spec.accumulations.push(Accumulation {
                target: acc.target,
                side,
                ratio: acc.ratio,
                count: acc.count,
                offset: acc.offset,
            });
        }
        Ok(spec)
    }
}

/// Configuration of the twist-example track.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistConfig {
    /// Node positions in [0, 1).
    pub nodes: Vec<f64>,
    /// Flags marking quartic-flat nodes; defaults to all false.
    #[serde(default)]
    pub degenerate: Vec<bool>,
    pub a: i64,
    pub b: i64,
    /// Sample count for the exported curve.
    #[serde(default = "default_twist_samples")]
    pub samples: usize,
    /// Integrator step.
    #[serde(default = "default_twist_step")]
    pub step: f64,
}

fn default_twist_samples() -> usize {
    1024
}
fn default_twist_step() -> f64 {
    billiard_core::twist::INTEGRATOR_STEP
}

impl TwistConfig {
    pub fn load(path: &Path) -> Result<TwistConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: TwistConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if config.a == 0 || config.b == 0 {
            bail!("a and b must be nonzero");
        }
        if !config.degenerate.is_empty() && config.degenerate.len() != config.nodes.len() {
            bail!("degenerate flags must match nodes length");
        }
        Ok(config)
    }
}
