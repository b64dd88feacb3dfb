//! Run configuration: a flat `key = value` file, overridden by flags.
//!
//! ```text
//! # model
//! M = 1.0
//! omega_c = 1.0
//! lambda = 0.5
//! K1 = 0.8
//! tol.wigner = 1e-4
//! format = csv
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use gklandau::fock::ModelParams;
use gklandau::gkcs::GkCsLabel;
use gklandau::wigner::GridSpec;
use thiserror::Error;

use crate::Suite;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {value}")]
    Value { key: String, value: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Truncations {
    /// Fock dimension for ladders, BCH and displacement checks.
    pub dim: usize,
    /// Per-mode dimension for the four-mode helicity commutators.
    pub helicity_dim: usize,
    /// Dyads `n, l < wigner_dim` enter the round trip.
    pub wigner_dim: usize,
    /// `(N_b, N_d)` for the degeneracy check.
    pub spectrum: (usize, usize),
    /// Discrete truncation; `None` picks it from the tail bound.
    pub n_max: Option<usize>,
}

impl Default for Truncations {
    fn default() -> Self {
        Self {
            dim: 40,
            helicity_dim: 12,
            wigner_dim: 7,
            spectrum: (12, 4),
            n_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams<f64>,
    pub label: GkCsLabel<f64>,
    pub truncations: Truncations,
    pub grid_half: f64,
    pub grid_points: usize,
    /// Replaces every check tolerance when set.
    pub tol: Option<f64>,
    /// Replaces the tolerances of one suite.
    pub suite_tol: BTreeMap<String, f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::new(1.0, 1.0, 0.5, 1.0, 1.0).expect("valid defaults"),
            label: GkCsLabel {
                j: 2.0,
                gamma: 0.4,
                jp: 1.0,
                gammap: 1.1,
                l: 0,
                k1: 0.8,
                theta1: 0.0,
                beta: 1.0,
            },
            truncations: Truncations::default(),
            grid_half: 12.0,
            grid_points: 241,
            tol: None,
            suite_tol: BTreeMap::new(),
            format: Format::Json,
            out: None,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            cfg.set(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let p = &mut self.params;
        let l = &mut self.label;
        let t = &mut self.truncations;
        match key {
            "M" => p.mass = num(key, value)?,
            "omega_c" => p.omega_c = num(key, value)?,
            "lambda" => p.lambda = num(key, value)?,
            "hbar" => p.hbar = num(key, value)?,
            "beta" => {
                p.beta = num(key, value)?;
                l.beta = p.beta;
            }
            "J" => l.j = num(key, value)?,
            "gamma" => l.gamma = num(key, value)?,
            "Jp" => l.jp = num(key, value)?,
            "gammap" => l.gammap = num(key, value)?,
            "l" => l.l = num(key, value)?,
            "K1" => l.k1 = num(key, value)?,
            "theta1" => l.theta1 = num(key, value)?,
            "dim" => t.dim = num(key, value)?,
            "helicity_dim" => t.helicity_dim = num(key, value)?,
            "wigner_dim" => t.wigner_dim = num(key, value)?,
            "spectrum_nb" => t.spectrum.0 = num(key, value)?,
            "spectrum_nd" => t.spectrum.1 = num(key, value)?,
            "n_max" => t.n_max = Some(num(key, value)?),
            "grid_half" => self.grid_half = num(key, value)?,
            "grid_points" => self.grid_points = num(key, value)?,
            "tol" => self.tol = Some(num(key, value)?),
            "format" => {
                self.format = match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => {
                        return Err(ConfigError::Value {
                            key: key.into(),
                            value: value.into(),
                        })
                    }
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            _ => match key.strip_prefix("tol.") {
                Some(suite) if Suite::from_name(suite).is_some() => {
                    self.suite_tol.insert(suite.to_string(), num(key, value)?);
                }
                _ => return Err(ConfigError::UnknownKey(key.to_string())),
            },
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if let Err(e) = self.params.validate() {
            return bad(e.to_string());
        }
        if let Err(e) = self.label.validate() {
            return bad(e.to_string());
        }
        let t = &self.truncations;
        if t.dim < 2 || t.helicity_dim < 2 || t.spectrum.0 < 2 || t.spectrum.1 < 2 {
            return bad("dimensions must be at least 2".into());
        }
        if t.dim > 200 || t.helicity_dim > 24 || t.spectrum.0 * t.spectrum.1 > 2000 {
            return bad("dimension exceeds the module budget".into());
        }
        if t.wigner_dim == 0 || t.wigner_dim > 21 {
            return bad("wigner_dim must be in 1..=21".into());
        }
        if let Err(e) = self.grid() {
            return bad(e.to_string());
        }
        for v in self.tol.iter().chain(self.suite_tol.values()) {
            if *v <= 0.0 || !v.is_finite() {
                return bad("tolerances must be positive".into());
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> gklandau::Result<GridSpec<f64>> {
        GridSpec::square(self.grid_half, self.grid_points)
    }

    /// Tolerance for a check in `suite` whose default is `default`.
    pub fn tolerance(&self, suite: Suite, default: f64) -> f64 {
        self.suite_tol
            .get(suite.name())
            .copied()
            .or(self.tol)
            .unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = RunConfig::parse("# demo\nM = 2\nK1=2.5 # above one\ntol.gkcs = 1e-6\nformat = csv\n").unwrap();
        assert_eq!(cfg.params.mass, 2.0);
        assert_eq!(cfg.label.k1, 2.5);
        assert_eq!(cfg.tolerance(Suite::Gkcs, 1e-8), 1e-6);
        assert_eq!(cfg.tolerance(Suite::Wigner, 1e-4), 1e-4);
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(RunConfig::parse("nonsense"), Err(ConfigError::Syntax { line: 1 }));
        assert!(matches!(
            RunConfig::parse("colour = red"),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(matches!(RunConfig::parse("M = heavy"), Err(ConfigError::Value { .. })));
        assert!(matches!(RunConfig::parse("M = -1"), Err(ConfigError::Invalid(_))));
        assert!(matches!(RunConfig::parse("tol = 0"), Err(ConfigError::Invalid(_))));
        assert!(matches!(
            RunConfig::parse("tol.nowhere = 1"),
            Err(ConfigError::UnknownKey(_))
        ));
    }
}
