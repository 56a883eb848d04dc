use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Provenance written next to every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    /// SHA-256 of the configuration rendered as JSON with sorted keys.
    pub config_digest: String,
    pub seed: Option<u64>,
    pub version: String,
    pub started: String,
    pub finished: String,
}

/// Digest that ignores the field order of the configuration.
pub fn config_digest<T: Serialize>(config: &T) -> String {
    // serde_json::Value keeps object keys in a sorted map
    let value = serde_json::to_value(config).expect("configuration serialises");
    let canonical = serde_json::to_string(&value).expect("value serialises");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn new<T: Serialize>(
        command_line: &[String],
        config: &T,
        seed: Option<u64>,
        started: String,
    ) -> Self {
        RunManifest {
            command_line: command_line.to_vec(),
            config_digest: config_digest(config),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started,
            finished: now(),
        }
    }
}
