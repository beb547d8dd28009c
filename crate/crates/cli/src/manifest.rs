use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Running,
    Complete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Provenance record of one run. Written when the run starts and rewritten
/// when it completes; the wall-times are the only nondeterministic content.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub status: RunStatus,
    pub config: ExperimentConfig,
    /// Input path → SHA-256.
    pub inputs: BTreeMap<String, String>,
    /// Output path relative to the run directory → SHA-256.
    pub artifacts: BTreeMap<String, String>,
    pub timings: Vec<StageTiming>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl RunManifest {
    pub fn start(config: ExperimentConfig) -> Self {
        RunManifest {
            tool: "interdisc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            status: RunStatus::Running,
            config,
            inputs: BTreeMap::new(),
            artifacts: BTreeMap::new(),
            timings: Vec::new(),
        }
    }

    pub fn record_time(&mut self, stage: &str, seconds: f64) {
        match self.timings.iter_mut().find(|t| t.stage == stage) {
            Some(t) => t.seconds += seconds,
            None => self.timings.push(StageTiming {
                stage: stage.into(),
                seconds,
            }),
        }
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(dir.join(MANIFEST_FILE), text)?;
        Ok(())
    }

    pub fn read(dir: &Path) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(dir.join(MANIFEST_FILE))?)?)
    }
}
