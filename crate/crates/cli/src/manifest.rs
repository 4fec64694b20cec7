use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use pcd_core::io::{to_json_pretty, write_atomic};
use pcd_core::Result;

/// Record written next to the first output as `<output>.manifest.json`.
#[derive(Serialize)]
pub struct Manifest {
    pub subcommand: String,
    pub config: Value,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub started_unix: f64,
    pub finished_unix: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    pub outputs: Vec<PathBuf>,
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

impl Manifest {
    pub fn new(subcommand: &str, config: Value, wall_time_s: Option<f64>) -> Self {
        let t = now();
        let started = wall_time_s.map_or(t, |w| t - w);
        Self {
            subcommand: subcommand.to_string(),
            config,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            started_unix: started,
            finished_unix: t,
            wall_time_s,
            outputs: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn finish(mut self, outputs: &[PathBuf]) -> Result<()> {
        let Some(first) = outputs.first() else { return Ok(()) };
        self.outputs = outputs.to_vec();
        self.finished_unix = now();
        write_atomic(&manifest_path(first), to_json_pretty(&self)?.as_bytes())
    }
}
