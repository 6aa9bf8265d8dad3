//! Run configuration: JSON file merged under command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kapitza_core::{IntegratorConfig, Resolution, Waveform, Window};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// `triangular`, `rect:<n>` or `cosine`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpec(pub Waveform);

impl FromStr for WaveSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let w = match s {
            "triangular" | "tri" => Waveform::Triangular,
            "cosine" | "cos" => Waveform::Cosine,
            _ => {
                let n = s.strip_prefix("rect:").ok_or_else(|| {
                    format!("unknown waveform `{s}` (triangular, rect:<n>, cosine)")
                })?;
                let n: u32 = n
                    .parse()
                    .map_err(|_| format!("bad harmonic count in `{s}`"))?;
                Waveform::RectangularApprox(n)
            }
        };
        w.validate().map_err(|e| e.to_string())?;
        Ok(WaveSpec(w))
    }
}

impl fmt::Display for WaveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Waveform::Triangular => f.write_str("triangular"),
            Waveform::RectangularApprox(n) => write!(f, "rect:{n}"),
            Waveform::Cosine => f.write_str("cosine"),
        }
    }
}

/// `NxM` grid size, `N` along α and `M` along β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionSpec(pub Resolution);

impl FromStr for ResolutionSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected NxM, got `{s}`"))?;
        let a: usize = a.parse().map_err(|_| format!("bad resolution `{s}`"))?;
        let b: usize = b.parse().map_err(|_| format!("bad resolution `{s}`"))?;
        if a < 2 || b < 2 {
            return Err("resolution needs at least 2 nodes per axis".into());
        }
        Ok(ResolutionSpec(Resolution::new(a, b)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WindowPreset {
    Global,
    Detail,
}

impl WindowPreset {
    pub fn window(self) -> Window {
        match self {
            WindowPreset::Global => Window::GLOBAL,
            WindowPreset::Detail => Window::DETAIL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, untagged)]
pub enum WindowSetting {
    Preset(WindowPreset),
    Explicit(WindowConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionConfig {
    pub n_alpha: usize,
    pub n_beta: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSettings {
    pub steps_per_period: Option<u32>,
    pub mollify_epsilon: Option<f64>,
}

/// Contents of a `--config` JSON file. Every key is optional; unknown keys
/// are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub waveform: Option<String>,
    pub window: Option<WindowSetting>,
    pub resolution: Option<ResolutionConfig>,
    pub tol: Option<f64>,
    pub integrator: Option<IntegratorSettings>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn waveform(&self) -> CliResult<Option<WaveSpec>> {
        self.waveform
            .as_deref()
            .map(|s| s.parse().map_err(CliError::Usage))
            .transpose()
    }

    pub fn window(&self) -> Option<Window> {
        self.window.map(|w| match w {
            WindowSetting::Preset(p) => p.window(),
            WindowSetting::Explicit(c) => {
                Window::new(c.alpha_min, c.alpha_max, c.beta_min, c.beta_max)
            }
        })
    }

    pub fn resolution(&self) -> Option<Resolution> {
        self.resolution
            .map(|r| Resolution::new(r.n_alpha, r.n_beta))
    }

    /// Integrator settings from the file on top of the defaults.
    pub fn integrator(&self) -> IntegratorConfig {
        let mut cfg = IntegratorConfig::default();
        if let Some(s) = self.integrator {
            if let Some(n) = s.steps_per_period {
                cfg.steps_per_period = n;
            }
            cfg.mollify_epsilon = s.mollify_epsilon;
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn waveform_spec() {
        assert_eq!(
            "rect:10".parse::<WaveSpec>().unwrap().0,
            Waveform::RectangularApprox(10)
        );
        assert_eq!(
            "triangular".parse::<WaveSpec>().unwrap().to_string(),
            "triangular"
        );
        assert!("rect:0".parse::<WaveSpec>().is_err());
        assert!("square".parse::<WaveSpec>().is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(RunConfig::parse(r#"{"waveform": "cosine", "colour": "red"}"#).is_err());
        assert!(RunConfig::parse(r#"{"integrator": {"steps": 10}}"#).is_err());
        let c = RunConfig::parse(
            r#"{"waveform": "rect:4", "window": "detail", "resolution": {"n_alpha": 8, "n_beta": 9},
                "integrator": {"steps_per_period": 1024}}"#,
        )
        .unwrap();
        assert_eq!(c.window(), Some(Window::DETAIL));
        assert_eq!(c.resolution(), Some(Resolution::new(8, 9)));
        assert_eq!(c.integrator().steps_per_period, 1024);
        let c = RunConfig::parse(
            r#"{"window": {"alpha_min": 0, "alpha_max": 1, "beta_min": -1, "beta_max": 1}}"#,
        )
        .unwrap();
        assert_eq!(c.window(), Some(Window::new(0.0, 1.0, -1.0, 1.0)));
    }
}
