use std::path::PathBuf;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub cache_dir: Option<PathBuf>,
    pub backend: Backend,
    pub tolerance: f64,
    pub parallelism: usize,
    pub format: OutputFormat,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.parallelism == 0 {
            return Err(CliError::Usage("parallelism must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: bool,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn from_flags(flags: impl IntoIterator<Item = bool>) -> Self {
        let (mut passed, mut failed) = (0, 0);
        for f in flags {
            if f {
                passed += 1;
            } else {
                failed += 1;
            }
        }
        Self {
            pass: failed == 0,
            passed,
            failed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub version: String,
    pub config: RunConfig,
    pub command: String,
    pub timestamp: String,
    pub seed: u64,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEnvelope {
    pub version: String,
    pub command: String,
    pub timestamp: String,
    pub error: ErrorBody,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ErrorEnvelope {
    pub fn new(command: &str, err: &CliError) -> Self {
        Self {
            version: VERSION.into(),
            command: command.into(),
            timestamp: timestamp(),
            error: ErrorBody {
                kind: err.kind().into(),
                message: err.to_string(),
                exit_code: err.exit_code(),
            },
            details: err.details(),
        }
    }
}

/// `SOURCE_DATE_EPOCH` when set, so reports can be reproduced byte for byte.
pub fn timestamp() -> String {
    let fixed = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|s| DateTime::<Utc>::from_timestamp(s, 0));
    fixed
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] parind_core::Error),
    #[error("{message}")]
    Verification { message: String, details: Value },
    #[error("{failed} selftest criteria failed")]
    Selftest { failed: usize, details: Value },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 invalid flags or values, 3 size cap, 4 relation mismatch, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use parind_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                E::NonPrime(_)
                | E::InvalidParameter(_)
                | E::NotRegular(_)
                | E::ZeroScalar
                | E::ZeroCharacterValue
                | E::ParameterMismatch => 2,
                E::TooLarge(_) | E::DegreeTooLarge(_) => 3,
                E::RelationMismatch { .. } => 4,
                _ => 1,
            },
            CliError::Verification { .. } => 4,
            CliError::Selftest { .. } | CliError::Io(_) | CliError::Json(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "invalid_input",
            3 => "cap_exceeded",
            4 => "relation_mismatch",
            _ => match self {
                CliError::Selftest { .. } => "selftest_failed",
                _ => "internal",
            },
        }
    }

    pub fn details(&self) -> Option<Value> {
        match self {
            CliError::Verification { details, .. } | CliError::Selftest { details, .. } => {
                Some(details.clone())
            }
            _ => None,
        }
    }
}

/// `key = value` lines for the table output format.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push(format!("{prefix} = {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut c = RunConfig {
            cache_dir: None,
            backend: Backend::Exact,
            tolerance: DEFAULT_TOL,
            parallelism: 1,
            format: OutputFormat::Json,
            seed: DEFAULT_SEED,
        };
        assert!(c.validate().is_ok());
        c.tolerance = 0.0;
        assert_eq!(c.validate().unwrap_err().exit_code(), 2);
        c.tolerance = 1e-9;
        c.parallelism = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn exit_codes() {
        let cap: CliError = parind_core::Error::TooLarge("x".into()).into();
        assert_eq!(cap.exit_code(), 3);
        let mis: CliError = parind_core::Error::RelationMismatch { measured: 2.0, expected: 3.0 }.into();
        assert_eq!(mis.exit_code(), 4);
        assert_eq!(CliError::Usage("bad".into()).exit_code(), 2);
    }

    #[test]
    fn flatten_nested() {
        let v = serde_json::json!({"a": {"b": [1, 2]}, "c": true});
        let mut out = Vec::new();
        flatten("", &v, &mut out);
        assert_eq!(out, vec!["a.b[0] = 1", "a.b[1] = 2", "c = true"]);
    }
}
