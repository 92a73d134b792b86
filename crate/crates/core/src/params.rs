//! Physical parameters of the chain and the couplings derived from them.
//!
//! Energies are in units of the static exchange `J0` (with ħ = 1), times in
//! units of `1/J0`.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// How the field gradient `B` relates to the modulation frequency `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Field {
    /// `B = ω`; a single stored value so the resonance holds exactly.
    Resonant { omega: f64 },
    /// Independent gradient and frequency (static tilt, off-resonant drive,
    /// or no drive at all when `omega == 0`).
    Independent { gradient: f64, omega: f64 },
}

/// Parameters of a finite XXZ chain with a gradient field and a modulated
/// exchange `J(t) = [J0 + J1 cos(ωt)] / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    sites: usize,
    j0: f64,
    j1: f64,
    delta: f64,
    field: Field,
}

/// Couplings of the rotating-frame exchange and the first-order edge defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCouplings {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
    /// Drive period `T = 2π/ω`.
    pub period: f64,
    /// Floquet-Wannier-Zeeman edge defect `Δ₁ = (|M1|² + |M2|²/2)/ω`.
    pub delta1: f64,
}

/// Builder for [`ChainParams`]; all checks happen in [`build`](Self::build).
#[derive(Debug, Clone, Copy)]
pub struct ChainParamsBuilder {
    sites: usize,
    j0: f64,
    j1: f64,
    delta: f64,
    field: Field,
}

impl ChainParamsBuilder {
    pub fn j0(mut self, j0: f64) -> Self {
        self.j0 = j0;
        self
    }

    pub fn j1(mut self, j1: f64) -> Self {
        self.j1 = j1;
        self
    }

    pub fn delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// Resonant drive `ω = B`.
    pub fn resonant(mut self, omega: f64) -> Self {
        self.field = Field::Resonant { omega };
        self
    }

    /// Independent gradient `B` and frequency `ω` (`ω = 0`: no drive).
    pub fn field(mut self, gradient: f64, omega: f64) -> Self {
        self.field = Field::Independent { gradient, omega };
        self
    }

    pub fn build(self) -> Result<ChainParams> {
        if self.sites == 0 {
            return Err(invalid("chain length must be at least 1"));
        }
        finite("J0", self.j0)?;
        finite("J1", self.j1)?;
        finite("Delta", self.delta)?;
        match self.field {
            Field::Resonant { omega } => {
                finite("omega", omega)?;
                if omega <= 0.0 {
                    return Err(invalid("resonant drive requires omega > 0"));
                }
            }
            Field::Independent { gradient, omega } => {
                finite("B", gradient)?;
                finite("omega", omega)?;
                if omega < 0.0 {
                    return Err(invalid("omega must be non-negative"));
                }
                if self.j1 != 0.0 && omega == 0.0 {
                    return Err(invalid("a modulated exchange (J1 != 0) requires omega > 0"));
                }
            }
        }
        Ok(ChainParams {
            sites: self.sites,
            j0: self.j0,
            j1: self.j1,
            delta: self.delta,
            field: self.field,
        })
    }
}

impl ChainParams {
    /// Start from an undriven, untilted chain with `J0 = 1`, `J1 = Δ = 0`.
    pub fn builder(sites: usize) -> ChainParamsBuilder {
        ChainParamsBuilder {
            sites,
            j0: 1.0,
            j1: 0.0,
            delta: 0.0,
            field: Field::Independent {
                gradient: 0.0,
                omega: 0.0,
            },
        }
    }

    /// Undriven, untilted chain with `J0 = 1` and interaction `delta`.
    pub fn undriven(sites: usize, delta: f64) -> Result<Self> {
        Self::builder(sites).delta(delta).build()
    }

    /// Resonantly driven chain (`ω = B`) with `J0 = 1`.
    pub fn driven(sites: usize, delta: f64, j1: f64, omega: f64) -> Result<Self> {
        Self::builder(sites)
            .delta(delta)
            .j1(j1)
            .resonant(omega)
            .build()
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Field gradient `B` (energy per site).
    pub fn gradient(&self) -> f64 {
        match self.field {
            Field::Resonant { omega } => omega,
            Field::Independent { gradient, .. } => gradient,
        }
    }

    pub fn omega(&self) -> f64 {
        match self.field {
            Field::Resonant { omega } | Field::Independent { omega, .. } => omega,
        }
    }

    pub fn is_resonant(&self) -> bool {
        match self.field {
            Field::Resonant { .. } => true,
            Field::Independent { gradient, omega } => omega > 0.0 && gradient == omega,
        }
    }

    pub fn derived(&self) -> Result<DerivedCouplings> {
        derived_couplings(self)
    }
}

fn finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {value}")))
    }
}

/// `M0 = J1/4`, `M1 = J0/2`, `M2 = J1/4`, `T = 2π/ω` and
/// `Δ₁ = (|M1|² + |M2|²/2)/ω`.
pub fn derived_couplings(params: &ChainParams) -> Result<DerivedCouplings> {
    let omega = params.omega();
    if omega <= 0.0 {
        return Err(invalid("derived couplings require omega > 0"));
    }
    let m0 = params.j1 / 4.0;
    let m1 = params.j0 / 2.0;
    let m2 = params.j1 / 4.0;
    Ok(DerivedCouplings {
        m0,
        m1,
        m2,
        period: 2.0 * PI / omega,
        delta1: (m1 * m1 + m2 * m2 / 2.0) / omega,
    })
}
