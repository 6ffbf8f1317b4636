//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use basilica_core::decimation::DecimationParams;
use basilica_core::forms::{CustomRule, MeasureKind, ResistanceScheme};
use clap::ValueEnum;
use serde::Deserialize;

/// A rejected configuration value, reported with the offending field.
#[derive(Debug)]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureArg {
    Bernoulli,
    Balanced,
    LocalResistance,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Bernoulli => MeasureKind::Bernoulli,
            MeasureArg::Balanced => MeasureKind::Balanced,
            MeasureArg::LocalResistance => MeasureKind::LocalResistance,
        }
    }
}

/// Contents of a `--config` file. Every field is optional; unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `dyadic`, `conformal`, or a path to a custom rule file.
    pub scheme: Option<String>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub level: Option<usize>,
    pub measure: Option<MeasureArg>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| invalid("config", format!("{}: {e}", path.display())))
    }

    /// Fields set in `flags` win.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        RunConfig {
            scheme: flags.scheme.or(self.scheme),
            p: flags.p.or(self.p),
            q: flags.q.or(self.q),
            level: flags.level.or(self.level),
            measure: flags.measure.or(self.measure),
            output: flags.output.or(self.output),
            format: flags.format.or(self.format),
            seed: flags.seed.or(self.seed),
        }
    }

    pub fn level(&self, default: usize) -> usize {
        self.level.unwrap_or(default)
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn measure(&self) -> MeasureKind {
        self.measure.unwrap_or(MeasureArg::Balanced).into()
    }

    /// Walk parameters; `p = q = 1/4` unless set.
    pub fn params(&self) -> Result<DecimationParams, ConfigError> {
        let p = self.p.unwrap_or(0.25);
        let q = self.q.unwrap_or(0.25);
        if !(p > 0.0 && p < 0.5) {
            return Err(invalid("p", format!("{p} is not in (0, 1/2)")));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(invalid("q", format!("{q} is not in (0, 1)")));
        }
        DecimationParams::new(p, q).map_err(|e| invalid("p", e.to_string()))
    }

    pub fn scheme(&self) -> Result<ResistanceScheme, ConfigError> {
        match self.scheme.as_deref().unwrap_or("conformal") {
            "dyadic" => Ok(ResistanceScheme::Dyadic),
            "conformal" => Ok(ResistanceScheme::conformal()),
            path => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| invalid("scheme", format!("{path}: {e}")))?;
                let rule = CustomRule::from_json(&text)
                    .map_err(|e| invalid("scheme", format!("{path}: {e}")))?;
                Ok(ResistanceScheme::Custom(rule))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err =
            serde_json::from_str::<RunConfig>(r#"{"level": 2, "colour": "red"}"#).unwrap_err();
        assert!(err.to_string().contains("colour"));
    }

    #[test]
    fn flags_override_file() {
        let file: RunConfig = serde_json::from_str(r#"{"level": 2, "p": 0.2}"#).unwrap();
        let flags = RunConfig {
            level: Some(4),
            ..RunConfig::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.level, Some(4));
        assert_eq!(merged.p, Some(0.2));
    }

    #[test]
    fn parameter_errors_name_the_field() {
        let c = RunConfig {
            p: Some(0.7),
            ..RunConfig::default()
        };
        assert_eq!(c.params().unwrap_err().field, "p");
        let c = RunConfig {
            scheme: Some("/nonexistent/rule.json".into()),
            ..RunConfig::default()
        };
        assert_eq!(c.scheme().unwrap_err().field, "scheme");
    }
}
