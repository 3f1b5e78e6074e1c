//! Run configuration: defaults, plain-text `key=value` config files, and CLI
//! overrides. All algorithms are deterministic, so a config fully determines
//! the output bytes.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::profile::WarpingProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: Option<String>,
    pub params: Vec<(String, f64)>,
    /// Analysis window for t0 / inf-m estimation and hypothesis grids.
    pub t_max: f64,
    pub grid_n: usize,
    /// Absolute quadrature tolerance.
    pub tol: f64,
    /// Integrator step (arclength).
    pub step: f64,
    /// Integration horizon.
    pub s_max: f64,
    /// Fan size for the verification oracle.
    pub fan_n: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            profile: None,
            params: Vec::new(),
            t_max: 30.0,
            grid_n: 10_000,
            tol: 1e-10,
            step: 1e-3,
            s_max: 12.0,
            fan_n: 2000,
            format: OutputFormat::Json,
            out: None,
        }
    }
}

fn parse_positive_f64(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: '{value}' is not a number")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Config(format!("{key} must be positive, got {value}")));
    }
    Ok(v)
}

fn parse_positive_usize(key: &str, value: &str) -> Result<usize> {
    let v: usize = value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: '{value}' is not an integer")))?;
    if v == 0 {
        return Err(Error::Config(format!("{key} must be positive")));
    }
    Ok(v)
}

impl RunConfig {
    /// Apply one `key=value` assignment (config-file line or flag payload).
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "profile" => self.profile = Some(value.to_string()),
            k if k.starts_with("param.") => {
                let name = &k["param.".len()..];
                if name.is_empty() {
                    return Err(Error::Config("empty parameter name".into()));
                }
                let v: f64 = value
                    .parse()
                    .map_err(|_| Error::Config(format!("{k}: '{value}' is not a number")))?;
                self.params.push((name.to_string(), v));
            }
            "t_max" | "tmax" => self.t_max = parse_positive_f64(key, value)?,
            "grid_n" => self.grid_n = parse_positive_usize(key, value)?,
            "tol" => self.tol = parse_positive_f64(key, value)?,
            "step" => self.step = parse_positive_f64(key, value)?,
            "smax" | "s_max" => self.s_max = parse_positive_f64(key, value)?,
            "fan" => self.fan_n = parse_positive_usize(key, value)?,
            "format" => self.format = OutputFormat::parse(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Load `key=value` lines; '#' starts a comment.
    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "{}:{}: expected key=value, got '{line}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
            self.apply(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Instantiate the configured profile; unknown names are rejected here.
    pub fn build_profile(&self) -> Result<WarpingProfile> {
        let name = self
            .profile
            .as_deref()
            .ok_or_else(|| Error::Config("no profile selected (use --profile)".into()))?;
        WarpingProfile::by_name(name, &self.params)
    }
}

/// Parse a CLI `--param k=v` payload.
pub fn parse_param(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("--param expects k=v, got '{s}'")))?;
    let value: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("--param {k}: '{v}' is not a number")))?;
    Ok((k.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults_are_the_documented_ones() {
        let c = RunConfig::default();
        assert_eq!(c.tol, 1e-10);
        assert_eq!(c.step, 1e-3);
        assert_eq!(c.fan_n, 2000);
        assert_eq!(c.t_max, 30.0);
        assert_eq!(c.grid_n, 10_000);
    }

    #[test]
    fn key_value_round_trip() {
        let mut c = RunConfig::default();
        c.apply("profile", "gauss").unwrap();
        c.apply("param.a", "2.0").unwrap();
        c.apply("tol", "1e-8").unwrap();
        c.apply("format", "csv").unwrap();
        assert_eq!(c.profile.as_deref(), Some("gauss"));
        assert_eq!(c.params, vec![("a".to_string(), 2.0)]);
        assert_eq!(c.tol, 1e-8);
        assert_eq!(c.format, OutputFormat::Csv);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        assert!(c.apply("tol", "-1").is_err());
        assert!(c.apply("step", "zero").is_err());
        assert!(c.apply("mystery", "1").is_err());
        assert!(c.apply("fan", "0").is_err());
    }

    #[test]
    fn unknown_profile_rejected_at_build() {
        let mut c = RunConfig::default();
        c.apply("profile", "klein-bottle").unwrap();
        assert!(c.build_profile().is_err());
        let c = RunConfig::default();
        assert!(c.build_profile().is_err());
    }

    #[test]
    fn config_file_with_comments() {
        let dir = std::env::temp_dir();
        let path = dir.join("cutcyl_test_config.cfg");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "# a comment").unwrap();
        writeln!(f, "profile = sech").unwrap();
        writeln!(f, "smax = 20   # trailing comment").unwrap();
        writeln!(f).unwrap();
        drop(f);
        let mut c = RunConfig::default();
        c.load_file(&path).unwrap();
        assert_eq!(c.profile.as_deref(), Some("sech"));
        assert_eq!(c.s_max, 20.0);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn param_flag_parsing() {
        assert_eq!(parse_param("a=1.5").unwrap(), ("a".to_string(), 1.5));
        assert!(parse_param("a").is_err());
        assert!(parse_param("a=x").is_err());
    }
}
