//! Per-run manifest: what was run, with which parameters, and which files
//! it produced.

use std::time::Instant;

use anyhow::Result;
use magnon_core::ChainParams;
use serde::Serialize;
use serde_json::Value;

use crate::output::{OutputRecord, OutputSet};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct Derived {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
    pub period: f64,
    pub delta1: f64,
}

impl Derived {
    /// `None` for an undriven chain.
    pub fn of(params: &ChainParams) -> Option<Self> {
        params.derived().ok().map(|d| Self {
            m0: d.m0,
            m1: d.m1,
            m2: d.m2,
            period: d.period,
            delta1: d.delta1,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub software: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub config: Value,
    pub derived: Option<Derived>,
    pub outputs: Vec<OutputRecord>,
    pub timings: Vec<Timing>,
    pub total_seconds: f64,
    pub warnings: Vec<String>,
    /// Step-doubling change of the quasienergies, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<f64>,
}

/// Collects timings and warnings while a run writes its outputs.
#[derive(Debug)]
pub struct Run {
    pub outputs: OutputSet,
    pub derived: Option<Derived>,
    pub warnings: Vec<String>,
    pub convergence: Option<f64>,
    timings: Vec<Timing>,
    started: Instant,
}

impl Run {
    pub fn new(outputs: OutputSet) -> Self {
        Self {
            outputs,
            derived: None,
            warnings: Vec::new(),
            convergence: None,
            timings: Vec::new(),
            started: Instant::now(),
        }
    }

    /// Runs `f` and records its wall-clock time under `stage`.
    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.push(Timing {
            stage: stage.to_string(),
            seconds: t.elapsed().as_secs_f64(),
        });
        out
    }

    /// Writes `manifest.json` and returns it.
    pub fn finish(
        mut self,
        command: &str,
        preset: Option<String>,
        config: Value,
    ) -> Result<RunManifest> {
        let manifest = RunManifest {
            software: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            preset,
            config,
            derived: self.derived.take(),
            outputs: self.outputs.records().to_vec(),
            timings: std::mem::take(&mut self.timings),
            total_seconds: self.started.elapsed().as_secs_f64(),
            warnings: std::mem::take(&mut self.warnings),
            convergence: self.convergence,
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        let path = self.outputs.dir().join(MANIFEST_FILE);
        std::fs::write(&path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
        Ok(manifest)
    }
}
