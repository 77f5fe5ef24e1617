//! Defaults for the command line, layered as
//! flags > environment > config file > built-ins.
//!
//! The config file is plain `key=value`, one per line; blank lines and
//! lines starting with `#` are ignored. Recognised keys are `precision`,
//! `format`, `output_dir` and `prime`. The matching environment variables
//! are `HECKE_PRECISION`, `HECKE_FORMAT`, `HECKE_OUTPUT_DIR` and
//! `HECKE_PRIME`; `HECKE_CONFIG` names the file when `--config` is absent.

use std::path::{Path, PathBuf};

use super::args::Format;
use crate::padic::DEFAULT_PRECISION;

pub const CONFIG_ENV: &str = "HECKE_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub default_precision: u32,
    pub default_format: Format,
    pub output_dir: Option<PathBuf>,
    pub default_prime: Option<u64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            default_precision: DEFAULT_PRECISION,
            default_format: Format::Json,
            output_dir: None,
            default_prime: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{origin}: {message}")]
pub struct ConfigError {
    pub origin: String,
    pub message: String,
}

fn bad(origin: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        origin: origin.into(),
        message: message.into(),
    }
}

impl Config {
    fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "precision" => {
                self.default_precision = match value.parse::<u32>() {
                    Ok(k) if k >= 1 => k,
                    _ => {
                        return Err(bad(
                            origin,
                            format!("precision must be >= 1, got '{value}'"),
                        ))
                    }
                }
            }
            "format" => self.default_format = value.parse().map_err(|e: String| bad(origin, e))?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "prime" => {
                self.default_prime =
                    Some(value.parse().map_err(|_| {
                        bad(origin, format!("prime must be an integer, got '{value}'"))
                    })?)
            }
            other => return Err(bad(origin, format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies the lines of a config file on top of `self`.
    pub fn apply_file_contents(&mut self, text: &str, path: &Path) -> Result<(), ConfigError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let origin = format!("{}:{}", path.display(), lineno + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(&origin, "expected key=value"))?;
            self.set(key.trim(), value, &origin)?;
        }
        Ok(())
    }

    pub fn apply_env(&mut self, env: &dyn Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        for (var, key) in [
            ("HECKE_PRECISION", "precision"),
            ("HECKE_FORMAT", "format"),
            ("HECKE_OUTPUT_DIR", "output_dir"),
            ("HECKE_PRIME", "prime"),
        ] {
            if let Some(value) = env(var) {
                self.set(key, &value, var)?;
            }
        }
        Ok(())
    }

    /// Built-ins, then the config file (explicit path or `HECKE_CONFIG`),
    /// then the environment.
    pub fn load(
        explicit: Option<&Path>,
        env: &dyn Fn(&str) -> Option<String>,
    ) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        let path = explicit
            .map(Path::to_path_buf)
            .or_else(|| env(CONFIG_ENV).map(PathBuf::from));
        if let Some(path) = path {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| bad(path.display().to_string(), e.to_string()))?;
            cfg.apply_file_contents(&text, &path)?;
        }
        cfg.apply_env(env)?;
        Ok(cfg)
    }

    pub fn resolve_output(&self, out: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if out.is_relative() => dir.join(out),
            _ => out.to_path_buf(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn env_of(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let map: HashMap<String, String> = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        move |k| map.get(k).cloned()
    }

    #[test]
    fn file_then_env() {
        let mut cfg = Config::default();
        cfg.apply_file_contents(
            "# defaults\nprecision = 12\nformat=csv\n\nprime=5\noutput_dir=/tmp/x\n",
            Path::new("c.conf"),
        )
        .unwrap();
        assert_eq!(cfg.default_precision, 12);
        assert_eq!(cfg.default_format, Format::Csv);
        assert_eq!(cfg.default_prime, Some(5));
        cfg.apply_env(&env_of(&[
            ("HECKE_PRECISION", "40"),
            ("HECKE_FORMAT", "json"),
        ]))
        .unwrap();
        assert_eq!(cfg.default_precision, 40);
        assert_eq!(cfg.default_format, Format::Json);
        assert_eq!(
            cfg.resolve_output(Path::new("a.json")),
            Path::new("/tmp/x/a.json")
        );
        assert_eq!(
            cfg.resolve_output(Path::new("/abs.json")),
            Path::new("/abs.json")
        );
    }

    #[test]
    fn rejects_bad_lines() {
        let mut cfg = Config::default();
        let p = Path::new("c.conf");
        assert!(cfg.apply_file_contents("precision=0", p).is_err());
        assert!(cfg.apply_file_contents("format=xml", p).is_err());
        assert!(cfg.apply_file_contents("colour=red", p).is_err());
        let err = cfg.apply_file_contents("\nnonsense", p).unwrap_err();
        assert_eq!(err.origin, "c.conf:2");
    }
}
