//! Flat TOML config: every key optional, layered as defaults < file < flags.

use std::path::{Path, PathBuf};

use harvest_core::sweep::{Axis, SweepConfig};
use harvest_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ConfigKeys {
    /// equilateral | linear | scalene | toy-scan
    #[arg(long)]
    pub geometry: Option<String>,
    /// coupling λ
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gap_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gap_max: Option<f64>,
    #[arg(long)]
    pub gap_steps: Option<usize>,
    /// L/σ for equilateral and linear, displacement D/σ for scalene
    #[arg(long, allow_negative_numbers = true)]
    pub length_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub length_max: Option<f64>,
    #[arg(long)]
    pub length_steps: Option<usize>,
    /// L_AC/σ for the scalene geometry
    #[arg(long)]
    pub scalene_base: Option<f64>,
    /// closed-form | eigenvalue | both
    #[arg(long)]
    pub route: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// C₂/P₂ for toy-scan
    #[arg(long, allow_negative_numbers = true)]
    pub c2_ratio: Option<f64>,
}

impl ConfigKeys {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Keys set here win over `base`.
    pub fn over(self, base: Self) -> Self {
        Self {
            geometry: self.geometry.or(base.geometry),
            lambda: self.lambda.or(base.lambda),
            gap_min: self.gap_min.or(base.gap_min),
            gap_max: self.gap_max.or(base.gap_max),
            gap_steps: self.gap_steps.or(base.gap_steps),
            length_min: self.length_min.or(base.length_min),
            length_max: self.length_max.or(base.length_max),
            length_steps: self.length_steps.or(base.length_steps),
            scalene_base: self.scalene_base.or(base.scalene_base),
            route: self.route.or(base.route),
            output: self.output.or(base.output),
            threads: self.threads.or(base.threads),
            c2_ratio: self.c2_ratio.or(base.c2_ratio),
        }
    }

    pub fn resolve(&self, defaults: &SweepConfig) -> Result<SweepConfig> {
        let d = defaults;
        let cfg = SweepConfig {
            geometry: match &self.geometry {
                Some(s) => s.parse()?,
                None => d.geometry,
            },
            lambda: self.lambda.unwrap_or(d.lambda),
            gap: Axis::new(
                self.gap_min.unwrap_or(d.gap.min),
                self.gap_max.unwrap_or(d.gap.max),
                self.gap_steps.unwrap_or(d.gap.steps),
            ),
            length: Axis::new(
                self.length_min.unwrap_or(d.length.min),
                self.length_max.unwrap_or(d.length.max),
                self.length_steps.unwrap_or(d.length.steps),
            ),
            scalene_base: self.scalene_base.unwrap_or(d.scalene_base),
            route: match &self.route {
                Some(s) => s.parse()?,
                None => d.route,
            },
            output: self.output.clone().unwrap_or_else(|| d.output.clone()),
            threads: self.threads.or(d.threads),
            c2_ratio: self.c2_ratio.unwrap_or(d.c2_ratio),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Every key filled in, for `--print-config`.
    pub fn from_resolved(cfg: &SweepConfig) -> Self {
        Self {
            geometry: Some(cfg.geometry.to_string()),
            lambda: Some(cfg.lambda),
            gap_min: Some(cfg.gap.min),
            gap_max: Some(cfg.gap.max),
            gap_steps: Some(cfg.gap.steps),
            length_min: Some(cfg.length.min),
            length_max: Some(cfg.length.max),
            length_steps: Some(cfg.length.steps),
            scalene_base: Some(cfg.scalene_base),
            route: Some(cfg.route.to_string()),
            output: Some(cfg.output.clone()),
            threads: cfg.threads,
            c2_ratio: Some(cfg.c2_ratio),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat keys always serialise")
    }
}
