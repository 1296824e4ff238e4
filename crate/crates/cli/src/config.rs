use std::path::Path;

use metaplectica::symplectic::{OpticalSystem, RayVector};
use metaplectica::wavefield::{FringeDemoConfig, GaussianBeam, GridSpec, Method};
use serde::Deserialize;

/// Bad or unreadable configuration. Reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// One file serves every subcommand; each reads only its own sections.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub system: Option<OpticalSystem>,
    pub ray: Option<RayVector>,
    pub grid: Option<GridSpec>,
    pub beam: Option<GaussianBeam>,
    pub sweep: Option<Sweep>,
    pub method: Option<Method>,
    pub probe: Option<Probe>,
    pub algebra: Option<AlgebraConfig>,
    pub fringe: Option<FringeDemoConfig>,
    pub pauli: Option<PauliConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub z_start: f64,
    pub z_end: f64,
    pub samples: usize,
}

impl Sweep {
    pub fn points(&self) -> anyhow::Result<Vec<f64>> {
        if !(self.z_start.is_finite() && self.z_end.is_finite() && self.z_end >= self.z_start) {
            return Err(config_error(format!("sweep needs finite z_start <= z_end, got [{}, {}]", self.z_start, self.z_end)));
        }
        if self.samples < 2 {
            return Err(config_error(format!("sweep needs at least 2 samples, got {}", self.samples)));
        }
        let step = (self.z_end - self.z_start) / (self.samples - 1) as f64;
        Ok((0..self.samples)
            .map(|i| if i + 1 == self.samples { self.z_end } else { self.z_start + step * i as f64 })
            .collect())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Probe {
    /// Unit Gaussian `exp(−x²/2)`.
    #[default]
    Gaussian,
    /// `x·exp(−x²/2)`.
    Odd,
    /// Seeded combination of the first eight Hermite functions.
    Random,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlgebraConfig {
    pub expression: Option<String>,
    pub fock_n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliConfig {
    pub thetas: Vec<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_points_hit_both_ends() {
        let s = Sweep { z_start: -50.0, z_end: 50.0, samples: 201 };
        let p = s.points().unwrap();
        assert_eq!(p.len(), 201);
        assert_eq!((p[0], p[100], p[200]), (-50.0, 0.0, 50.0));
        assert!(Sweep { samples: 1, ..s }.points().is_err());
        assert!(Sweep { z_start: 1.0, z_end: 0.0, samples: 3 }.points().is_err());
    }

    #[test]
    fn unknown_sections_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sytem": {}}"#).is_err());
        let cfg: RunConfig = serde_json::from_str(r#"{"probe": "odd", "method": "quadrature"}"#).unwrap();
        assert_eq!(cfg.probe, Some(Probe::Odd));
        assert_eq!(cfg.method, Some(Method::Quadrature));
    }
}
