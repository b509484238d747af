//! Optional TOML defaults. Command-line flags win over anything here.

use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub threads: Option<usize>,
    pub delta: Option<String>,
    pub epsilon: Option<String>,
    pub samples: Option<u64>,
    pub cap: Option<usize>,
    pub seed: Option<u64>,
    pub rounds: Option<usize>,
    pub max_retries: Option<u32>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config, String> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_files() {
        let c: Config = toml::from_str("threads = 2\ndelta = \"1/128\"").unwrap();
        assert_eq!(c.threads, Some(2));
        assert_eq!(c.delta.as_deref(), Some("1/128"));
        assert!(c.epsilon.is_none());
        assert!(toml::from_str::<Config>("colour = 1").is_err());
    }
}
