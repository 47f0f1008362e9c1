//! Flat `key = value` configuration files.
//!
//! The recognized keys are the model parameters `sigma_bar`, `sigma_tilde`,
//! `mu` and the inner-interface height `rho1_star`. Lines are trimmed;
//! blank lines and `#` comments are skipped; keys may not repeat; unknown
//! keys and malformed values are rejected with the offending key named in
//! the error message.

use crate::error::{Error, Result};

/// Recognized configuration keys, in reporting order.
pub const KEYS: [&str; 4] = ["sigma_bar", "sigma_tilde", "mu", "rho1_star"];

/// Values read from one configuration file. Every field is optional at
/// this layer; completeness requirements belong to the caller.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FileConfig {
    pub sigma_bar: Option<f64>,
    pub sigma_tilde: Option<f64>,
    pub mu: Option<f64>,
    pub rho1_star: Option<f64>,
}

impl FileConfig {
    /// Parses the flat `key = value` format.
    pub fn parse(text: &str) -> Result<FileConfig> {
        let mut config = FileConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {lineno}: expected `key = value`, got `{line}`"
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let slot = match key {
                "sigma_bar" => &mut config.sigma_bar,
                "sigma_tilde" => &mut config.sigma_tilde,
                "mu" => &mut config.mu,
                "rho1_star" => &mut config.rho1_star,
                _ => return Err(Error::Config(format!("line {lineno}: unknown key `{key}`"))),
            };
            if slot.is_some() {
                return Err(Error::Config(format!(
                    "line {lineno}: duplicate key `{key}`"
                )));
            }
            let parsed: f64 = value.parse().map_err(|_| {
                Error::Config(format!(
                    "line {lineno}: key `{key}` has non-numeric value `{value}`"
                ))
            })?;
            if !parsed.is_finite() {
                return Err(Error::Config(format!(
                    "line {lineno}: key `{key}` must be finite, got `{value}`"
                )));
            }
            *slot = Some(parsed);
        }
        Ok(config)
    }

    /// Reads and parses a configuration file from disk.
    pub fn load(path: &std::path::Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        FileConfig::parse(&text)
    }

    /// Value stored under `key`, if any. `key` must be one of [`KEYS`].
    pub fn get(&self, key: &str) -> Option<f64> {
        match key {
            "sigma_bar" => self.sigma_bar,
            "sigma_tilde" => self.sigma_tilde,
            "mu" => self.mu,
            "rho1_star" => self.rho1_star,
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file_with_comments_and_blanks() {
        let text =
            "# model parameters\n\n sigma_bar = 2.0 \nsigma_tilde=1.0\nmu = 1\n\nrho1_star = 0.5\n";
        let config = FileConfig::parse(text).unwrap();
        assert_eq!(config.sigma_bar, Some(2.0));
        assert_eq!(config.sigma_tilde, Some(1.0));
        assert_eq!(config.mu, Some(1.0));
        assert_eq!(config.rho1_star, Some(0.5));
    }

    #[test]
    fn missing_keys_stay_none() {
        let config = FileConfig::parse("mu = 3.5\n").unwrap();
        assert_eq!(config.mu, Some(3.5));
        assert_eq!(config.sigma_bar, None);
        assert_eq!(config.get("sigma_bar"), None);
        assert_eq!(config.get("mu"), Some(3.5));
    }

    #[test]
    fn rejects_unknown_key() {
        let err = FileConfig::parse("sigma = 2.0\n").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("unknown key `sigma`"), "{message}");
    }

    #[test]
    fn rejects_duplicate_key() {
        let err = FileConfig::parse("mu = 1.0\nmu = 2.0\n").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("duplicate key `mu`"), "{message}");
        assert!(message.contains("line 2"), "{message}");
    }

    #[test]
    fn rejects_malformed_line_and_value() {
        let err = FileConfig::parse("sigma_bar 2.0\n").unwrap_err();
        assert!(err.to_string().contains("expected `key = value`"));
        let err = FileConfig::parse("sigma_bar = two\n").unwrap_err();
        assert!(err.to_string().contains("non-numeric value `two`"));
        let err = FileConfig::parse("sigma_bar = inf\n").unwrap_err();
        assert!(err.to_string().contains("must be finite"));
    }

    #[test]
    fn empty_input_is_an_empty_config() {
        assert_eq!(FileConfig::parse("").unwrap(), FileConfig::default());
        assert_eq!(
            FileConfig::parse("\n# only a comment\n").unwrap(),
            FileConfig::default()
        );
    }
}
