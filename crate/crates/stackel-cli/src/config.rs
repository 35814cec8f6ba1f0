use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use stackel_core::{tabulated, EntrySpec, Preset, StackelMatrix, Tolerances};

use crate::error::CliError;
use crate::output::{to_json, RunManifest};

pub const SCHEMA_VERSION: u32 = 1;

fn default_eps() -> f64 {
    0.5
}

/// One manifold as read from a config file. Exactly one of `preset`,
/// `rows` or `matrix` describes the Stäckel matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Box<[[EntrySpec; 3]; 3]>>,
    /// A full matrix dump, as written by `normalize`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<StackelMatrix>,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lambda: f64,
    #[serde(default = "default_eps")]
    pub eps0: f64,
    #[serde(default = "default_eps")]
    pub eps1: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Ignored on input; carried by files this tool writes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl ManifoldConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg: ManifoldConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.manifest = None;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!("unsupported schema {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        let sources = [self.preset.is_some(), self.rows.is_some(), self.matrix.is_some()];
        if sources.iter().filter(|&&b| b).count() != 1 {
            return Err(CliError::Config("exactly one of `preset`, `rows`, `matrix` is required".into()));
        }
        if !(self.lambda != 0.0 && self.lambda.is_finite()) {
            return Err(CliError::Config(format!("lambda must be finite and nonzero, got {}", self.lambda)));
        }
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(m) = &self.matrix {
            if (m.a, m.b, m.c) != (self.a, self.b, self.c) {
                return Err(CliError::Config("matrix domain differs from a, b, c".into()));
            }
        }
        self.tolerance_set(&BTreeMap::new())?;
        Ok(())
    }

    pub fn build(&self) -> Result<StackelMatrix, CliError> {
        Ok(match (&self.preset, &self.rows, &self.matrix) {
            (Some(p), _, _) => p.build(self.a, self.b, self.c)?,
            (_, Some(rows), _) => tabulated(rows, self.a, self.b, self.c)?,
            (_, _, Some(m)) => m.clone(),
            _ => unreachable!("validated"),
        })
    }

    /// Defaults, then the config's overrides, then `extra`.
    pub fn tolerance_set(&self, extra: &BTreeMap<String, f64>) -> Result<Tolerances, CliError> {
        let mut value = serde_json::to_value(Tolerances::default()).expect("tolerances serialize");
        let map = value.as_object_mut().expect("tolerances are a record");
        for (k, v) in self.tolerances.iter().chain(extra) {
            if !map.contains_key(k) {
                return Err(CliError::Usage(format!("unknown tolerance `{k}`")));
            }
            if !(*v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("tolerance `{k}` must be positive, got {v}")));
            }
            map.insert(k.clone(), serde_json::json!(v));
        }
        Ok(serde_json::from_value(value).expect("tolerances deserialize"))
    }

    /// SHA-256 of the canonical serialization (manifest excluded).
    pub fn hash(&self) -> String {
        let mut bare = self.clone();
        bare.manifest = None;
        format!("{:x}", Sha256::digest(to_json(&bare, false).as_bytes()))
    }
}

/// `key=value[,key=value...]`
pub fn parse_overrides(text: &str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("tolerance override `{part}` is not key=value")))?;
        let v: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("tolerance `{k}` is not a number")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}
