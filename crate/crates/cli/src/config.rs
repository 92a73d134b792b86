//! Experiment configuration: a TOML document with fixed sections. Every
//! section is optional and falls back to its defaults; unknown keys are
//! rejected.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use magnon_core::ChainParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Spectrum,
    Dynamics,
    Floquet,
    Classify,
    Sweep,
    Preset,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Spectrum => "spectrum",
            Kind::Dynamics => "dynamics",
            Kind::Floquet => "floquet",
            Kind::Classify => "classify",
            Kind::Sweep => "sweep",
            Kind::Preset => "preset",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must agree with the subcommand when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub chain: ChainSection,
    #[serde(default)]
    pub dynamics: DynamicsSection,
    #[serde(default)]
    pub floquet: FloquetSection,
    #[serde(default)]
    pub classify: ClassifySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainSection {
    pub sites: usize,
    pub magnons: usize,
    pub j0: f64,
    pub j1: f64,
    pub delta: f64,
    /// Drive frequency; absent means no drive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Field gradient; absent means resonant with `omega` (or zero).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient: Option<f64>,
}

impl Default for ChainSection {
    fn default() -> Self {
        Self {
            sites: 21,
            magnons: 2,
            j0: 1.0,
            j1: 0.0,
            delta: 0.0,
            omega: None,
            gradient: None,
        }
    }
}

impl ChainSection {
    pub fn params(&self) -> Result<ChainParams> {
        let builder = ChainParams::builder(self.sites)
            .j0(self.j0)
            .j1(self.j1)
            .delta(self.delta);
        let builder = match (self.omega, self.gradient) {
            (Some(w), None) => builder.resonant(w),
            (Some(w), Some(b)) if b == w => builder.resonant(w),
            (Some(w), Some(b)) => builder.field(b, w),
            (None, Some(b)) => builder.field(b, 0.0),
            (None, None) => builder,
        };
        builder.build().context("invalid [chain] parameters")
    }

    pub fn is_driven(&self) -> bool {
        self.omega.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Static,
    Lab,
    Rotating,
    Stroboscopic,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsSection {
    /// `single:l`, `adjacent:l`, `pair:a,b` or `uniform`.
    pub initial: String,
    /// Length of the run in units of `2π/J0`.
    pub duration: f64,
    /// Number of sampling intervals; ignored by the stroboscopic method,
    /// which records every `stride` periods.
    pub samples: usize,
    pub stride: usize,
    pub method: Method,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        Self {
            initial: "single:1".into(),
            duration: 10.0,
            samples: 1000,
            stride: 1,
            method: Method::Static,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct FloquetSection {
    /// Midpoint steps per drive period.
    pub steps: usize,
    /// Repeat the propagator with doubled steps and report the change.
    pub convergence_check: bool,
}

impl Default for FloquetSection {
    fn default() -> Self {
        Self {
            steps: magnon_core::floquet::DEFAULT_STEPS,
            convergence_check: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifyMode {
    /// Interacting bands without drive, combination types with drive.
    Auto,
    Interacting,
    Noninteracting,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifySection {
    pub mode: ClassifyMode,
    /// Cap on the interacting band window half-width.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    /// IPR outlier factor over the median in the continuum window.
    pub ipr_factor: f64,
    /// Continuum window; defaults to `[-|J1|, |J1|]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
}

impl Default for ClassifySection {
    fn default() -> Self {
        Self {
            mode: ClassifyMode::Auto,
            half_width: None,
            ipr_factor: magnon_core::classify::DEFAULT_IPR_FACTOR,
            window: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Delta,
    J1,
    Omega,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::Delta => "delta",
            Axis::J1 => "j1",
            Axis::Omega => "omega",
        }
    }

    pub fn apply(&self, chain: &ChainSection, value: f64) -> ChainSection {
        let mut c = *chain;
        match self {
            Axis::Delta => c.delta = value,
            Axis::J1 => c.j1 = value,
            Axis::Omega => c.omega = Some(value),
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Static,
    Floquet,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Axis,
    #[serde(default = "default_sweep_mode")]
    pub mode: SweepMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// Explicit grid; exclusive with `start`/`stop`/`step`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

fn default_sweep_mode() -> SweepMode {
    SweepMode::Static
}

impl SweepSection {
    pub fn range(axis: Axis, mode: SweepMode, start: f64, stop: f64, step: f64) -> Self {
        Self {
            axis,
            mode,
            start: Some(start),
            stop: Some(stop),
            step: Some(step),
            values: None,
        }
    }

    /// Grid points in order; `start + k step` up to `stop` inclusive.
    pub fn grid(&self) -> Result<Vec<f64>> {
        let grid = match (&self.values, self.start, self.stop, self.step) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(h)) => {
                ensure!(
                    h > 0.0 && h.is_finite(),
                    "sweep step must be positive, got {h}"
                );
                ensure!(
                    a.is_finite() && b.is_finite(),
                    "sweep bounds must be finite"
                );
                ensure!(b >= a, "sweep stop {b} is below start {a}");
                let n = ((b - a) / h + 1e-9).floor() as usize + 1;
                (0..n).map(|k| a + k as f64 * h).collect()
            }
            _ => bail!("sweep needs either `values` or all of `start`, `stop`, `step`"),
        };
        ensure!(!grid.is_empty(), "sweep grid is empty");
        ensure!(
            grid.iter().all(|x| x.is_finite()),
            "sweep values must be finite"
        );
        Ok(grid)
    }
}

/// Parsed form of `dynamics.initial`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    Single(usize),
    Adjacent(usize),
    Pair(usize, usize),
    Uniform,
}

impl InitialState {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "uniform" {
            return Ok(Self::Uniform);
        }
        let (head, tail) = text
            .split_once(':')
            .with_context(|| format!("unrecognized initial state `{text}`"))?;
        let site = |s: &str| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("bad site `{s}` in initial state `{text}`"))
        };
        match head.trim() {
            "single" => Ok(Self::Single(site(tail)?)),
            "adjacent" => Ok(Self::Adjacent(site(tail)?)),
            "pair" => {
                let (a, b) = tail
                    .split_once(',')
                    .with_context(|| format!("pair needs two sites: `{text}`"))?;
                Ok(Self::Pair(site(a)?, site(b)?))
            }
            other => bail!("unknown initial state kind `{other}`"),
        }
    }

    /// Checks the state against the sector `(sites, magnons)`.
    pub fn check(&self, sites: usize, magnons: usize) -> Result<()> {
        let in_range = |l: usize| (1..=sites).contains(&l);
        match *self {
            Self::Single(l) => {
                ensure!(magnons == 1, "single:{l} needs magnons = 1");
                ensure!(in_range(l), "site {l} outside 1..={sites}");
            }
            Self::Adjacent(l) => {
                ensure!(magnons == 2, "adjacent:{l} needs magnons = 2");
                ensure!(
                    l >= 1 && l < sites,
                    "adjacent pair {l},{} outside the chain",
                    l + 1
                );
            }
            Self::Pair(a, b) => {
                ensure!(magnons == 2, "pair:{a},{b} needs magnons = 2");
                ensure!(a != b && in_range(a) && in_range(b), "invalid pair {a},{b}");
            }
            Self::Uniform => {}
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Checks every field the given experiment kind reads.
    pub fn validate(&self, kind: Kind) -> Result<()> {
        if let Some(k) = self.kind {
            ensure!(
                k == kind,
                "config kind `{}` does not match subcommand `{}`",
                k.as_str(),
                kind.as_str()
            );
        }
        let c = &self.chain;
        ensure!(c.sites >= 2, "chain.sites must be at least 2");
        ensure!(
            (1..=c.sites).contains(&c.magnons),
            "chain.magnons must lie in 1..={}",
            c.sites
        );
        let params = c.params()?;
        ensure!(self.floquet.steps >= 1, "floquet.steps must be at least 1");
        ensure!(
            self.classify.ipr_factor > 0.0 && self.classify.ipr_factor.is_finite(),
            "classify.ipr_factor must be positive"
        );
        if let Some(w) = self.classify.half_width {
            ensure!(w > 0.0, "classify.half_width must be positive");
        }
        if let Some([lo, hi]) = self.classify.window {
            ensure!(lo <= hi, "classify.window must be ordered");
        }
        match kind {
            Kind::Spectrum => {}
            Kind::Floquet => require_resonant(c, &params)?,
            Kind::Classify => {
                ensure!(c.magnons == 2, "classify needs magnons = 2");
                let driven = match self.classify.mode {
                    ClassifyMode::Auto => c.is_driven(),
                    ClassifyMode::Interacting => false,
                    ClassifyMode::Noninteracting => true,
                };
                if driven {
                    require_resonant(c, &params)?;
                    ensure!(c.j1 != 0.0, "noninteracting classification needs j1 != 0");
                }
            }
            Kind::Dynamics => {
                let d = &self.dynamics;
                InitialState::parse(&d.initial)?.check(c.sites, c.magnons)?;
                ensure!(
                    d.duration > 0.0 && d.duration.is_finite(),
                    "dynamics.duration must be positive"
                );
                ensure!(d.samples >= 1, "dynamics.samples must be at least 1");
                ensure!(d.stride >= 1, "dynamics.stride must be at least 1");
                ensure!(c.j0 != 0.0, "time unit 2π/J0 needs j0 != 0");
                match d.method {
                    Method::Static => {}
                    Method::Stroboscopic => require_resonant(c, &params)?,
                    Method::Lab | Method::Rotating => {
                        ensure!(c.is_driven(), "driven dynamics need chain.omega")
                    }
                }
            }
            Kind::Sweep => {
                let s = self
                    .sweep
                    .as_ref()
                    .context("sweep needs a [sweep] section")?;
                let grid = s.grid()?;
                for &v in &grid {
                    let point = s.axis.apply(c, v);
                    let p = point
                        .params()
                        .with_context(|| format!("sweep point {} = {v}", s.axis.as_str()))?;
                    if s.mode == SweepMode::Floquet {
                        require_resonant(&point, &p)?;
                    }
                }
            }
            Kind::Preset => {
                ensure!(self.preset.is_some(), "preset run needs a preset name");
            }
        }
        Ok(())
    }
}

fn require_resonant(c: &ChainSection, p: &ChainParams) -> Result<()> {
    ensure!(
        c.is_driven() && p.is_resonant(),
        "Floquet quantities need a resonant drive (chain.omega set, gradient absent or equal)"
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default()
            .validate(Kind::Spectrum)
            .unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::parse("[chain]\nsites = 5\nbogus = 1\n").is_err());
        assert!(ExperimentConfig::parse("colour = \"red\"\n").is_err());
        assert!(ExperimentConfig::parse("[extra]\n").is_err());
    }

    #[test]
    fn grid_is_inclusive() {
        let s = SweepSection::range(Axis::Delta, SweepMode::Static, 0.0, 20.0, 0.1);
        let g = s.grid().unwrap();
        assert_eq!(g.len(), 201);
        assert!((g[200] - 20.0).abs() < 1e-12);
        let one = SweepSection::range(Axis::J1, SweepMode::Floquet, 0.3, 0.3, 0.1);
        assert_eq!(one.grid().unwrap(), vec![0.3]);
    }

    #[test]
    fn grid_rejects_mixed_and_empty() {
        let mut s = SweepSection::range(Axis::Delta, SweepMode::Static, 0.0, 1.0, 0.5);
        s.values = Some(vec![1.0]);
        assert!(s.grid().is_err());
        let empty = SweepSection {
            values: Some(vec![]),
            start: None,
            stop: None,
            step: None,
            ..s
        };
        assert!(empty.grid().is_err());
    }

    #[test]
    fn initial_states_parse_and_check() {
        assert_eq!(
            InitialState::parse("pair:3, 7").unwrap(),
            InitialState::Pair(3, 7)
        );
        assert!(InitialState::parse("single:x").is_err());
        assert!(InitialState::Single(22).check(21, 1).is_err());
        assert!(InitialState::Adjacent(21).check(21, 2).is_err());
        assert!(InitialState::Adjacent(20).check(21, 2).is_ok());
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let cfg = ExperimentConfig::parse("kind = \"sweep\"\n").unwrap();
        assert!(cfg.validate(Kind::Spectrum).is_err());
    }

    #[test]
    fn floquet_requires_resonance() {
        let cfg = ExperimentConfig::parse("[chain]\nomega = 8.0\ngradient = 7.0\n").unwrap();
        assert!(cfg.validate(Kind::Floquet).is_err());
        let cfg = ExperimentConfig::parse("[chain]\nomega = 8.0\nj1 = 0.1\n").unwrap();
        cfg.validate(Kind::Floquet).unwrap();
    }
}
