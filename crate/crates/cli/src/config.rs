//! Campaign configuration from a JSON file, the environment, and flags.

use std::fs;
use std::path::Path;

use przk_bind_core::simulator::CampaignConfig;
use przk_bind_core::GroupId;

use crate::error::CliError;

/// Environment variable naming the default config file for `simulate`.
pub const CONFIG_ENV: &str = "PRZK_CONFIG";

/// Parses `low:high` or a single fixed value, in milliseconds.
pub fn parse_latency(s: &str) -> Result<[f64; 2], String> {
    let num = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| format!("latency: `{p}` is not a number"))
    };
    let range = match s.split_once(':') {
        Some((lo, hi)) => [num(lo)?, num(hi)?],
        None => {
            let v = num(s)?;
            [v, v]
        }
    };
    if !(range[0].is_finite() && range[1].is_finite() && 0.0 <= range[0] && range[0] <= range[1]) {
        return Err(format!("latency: need 0 <= low <= high, got `{s}`"));
    }
    Ok(range)
}

pub fn load(path: &Path) -> Result<CampaignConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Inline flags that replace fields of the loaded config.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub sessions: Option<u64>,
    pub adv_ratio: Option<f64>,
    pub latency_ms: Option<[f64; 2]>,
    pub seed: Option<u64>,
    pub group: Option<GroupId>,
}

impl Overrides {
    pub fn apply(&self, mut config: CampaignConfig) -> CampaignConfig {
        if let Some(v) = self.sessions {
            config.sessions = v;
        }
        if let Some(v) = self.adv_ratio {
            config.adv_ratio = v;
        }
        if let Some(v) = self.latency_ms {
            config.latency_range_ms = v;
        }
        if let Some(v) = self.seed {
            config.rng_seed = v;
        }
        if let Some(v) = self.group {
            config.group = v;
        }
        config
    }
}

/// Config file (if any) with flags applied on top, validated.
pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<CampaignConfig, CliError> {
    let base = match path {
        Some(p) => load(p)?,
        None => CampaignConfig::default(),
    };
    let config = overrides.apply(base);
    config
        .validate()
        .map_err(|e| CliError::usage(format!("invalid config: {e}")))?;
    Ok(config)
}
