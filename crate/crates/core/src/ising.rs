//! Transverse-field Ising battery `H = ½ Σ_j (σˣ_j σˣ_{j+1} + h σᶻ_j)`,
//! charged by the field step `h₀ → h₀ + h₁`.
//!
//! Each momentum pair is a two-level problem, so the stored energy has a
//! closed form and no matching-matrix machinery is needed.

use rayon::prelude::*;

use crate::error::{check_time, Error, Result};
use crate::numeric::NeumaierSum;
use crate::trace::{EnergySource, EnergyTrace, TraceOrigin};
use crate::xy::ModeIndex;

/// Below this the dispersion is treated as zero and the angle is undefined.
pub const EPS_UNDERFLOW: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingParams {
    pub h0: f64,
    pub h1: f64,
    pub n_sites: usize,
}

impl IsingParams {
    pub fn new(h0: f64, h1: f64, n_sites: usize) -> Result<Self> {
        if !h0.is_finite() || !h1.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "fields must be finite, got h0={h0}, h1={h1}"
            )));
        }
        if n_sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_sites must be >= 2, got {n_sites}"
            )));
        }
        Ok(Self { h0, h1, n_sites })
    }

    pub fn h_initial(&self) -> f64 {
        self.h0
    }

    pub fn h_final(&self) -> f64 {
        self.h0 + self.h1
    }

    pub fn modes(&self) -> impl ExactSizeIterator<Item = ModeIndex> + Clone {
        ModeIndex::all(self.n_sites)
    }
}

fn mode_k(n_sites: usize, q: f64) -> Result<f64> {
    Ok(ModeIndex::new(q, n_sites)?.k())
}

// 1 + h² − 2h cos k written as a sum of squares, which does not cancel near
// h = 1, k = 0 and keeps the angle pair normalized
fn dispersion_at(h: f64, k: f64) -> f64 {
    (h - k.cos()).hypot(k.sin())
}

/// `ε_q = √(1 + h² − 2h cos k)`.
pub fn ising_dispersion(h: f64, n_sites: usize, q: f64) -> Result<f64> {
    Ok(dispersion_at(h, mode_k(n_sites, q)?))
}

/// `(sin 2θ, cos 2θ)` of a Bogoliubov angle. The angle itself is never
/// formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair {
    pub sin2theta: f64,
    pub cos2theta: f64,
}

impl AnglePair {
    fn at(h: f64, k: f64) -> Result<Self> {
        let eps = dispersion_at(h, k);
        if eps < EPS_UNDERFLOW {
            return Err(Error::AngleUndefined { eps });
        }
        Ok(Self {
            sin2theta: k.sin() / eps,
            cos2theta: (h - k.cos()) / eps,
        })
    }

    /// `sin 2(θ_self − θ_other)`.
    pub fn sin2_difference(&self, other: &AnglePair) -> f64 {
        self.sin2theta * other.cos2theta - self.cos2theta * other.sin2theta
    }
}

pub fn bogoliubov_angle(h: f64, n_sites: usize, q: f64) -> Result<AnglePair> {
    AnglePair::at(h, mode_k(n_sites, q)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingModeData {
    pub mode: ModeIndex,
    /// Dispersion of the battery (`h₀`).
    pub eps: f64,
    /// Dispersion of the charger (`h₀ + h₁`).
    pub omega: f64,
    pub theta_i: Option<AnglePair>,
    pub theta_f: Option<AnglePair>,
    /// `h₁² sin²k / (2 ε ω²)`, the mode's time-averaged energy.
    weight: f64,
}

impl IsingModeData {
    pub fn new(params: &IsingParams, mode: ModeIndex) -> Self {
        let k = mode.k();
        let eps = dispersion_at(params.h_initial(), k);
        let omega = dispersion_at(params.h_final(), k);
        let sin_k = k.sin();
        // ε or ω vanish only where sin k = 0; the limit of the summand is 0
        let weight = if eps == 0.0 || omega == 0.0 {
            0.0
        } else {
            params.h1 * params.h1 * sin_k * sin_k / (2.0 * eps * omega * omega)
        };
        Self {
            mode,
            eps,
            omega,
            theta_i: AnglePair::at(params.h_initial(), k).ok(),
            theta_f: AnglePair::at(params.h_final(), k).ok(),
            weight,
        }
    }

    pub fn energy(&self, t: f64) -> f64 {
        self.weight * (1.0 - (2.0 * self.omega * t).cos())
    }

    pub fn asymptotic_energy(&self) -> f64 {
        self.weight
    }

    /// Quasiparticle occupation `⟨a_q† a_q⟩(t)`.
    pub fn occupation(&self, t: f64) -> f64 {
        if self.eps == 0.0 {
            return 0.0;
        }
        self.energy(t) / self.eps
    }
}

#[derive(Debug, Clone)]
pub struct IsingDynamics {
    params: IsingParams,
    modes: Vec<IsingModeData>,
}

impl IsingDynamics {
    pub fn new(params: &IsingParams) -> Self {
        let modes = params
            .modes()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|m| IsingModeData::new(params, m))
            .collect();
        Self {
            params: *params,
            modes,
        }
    }

    pub fn params(&self) -> &IsingParams {
        &self.params
    }

    pub fn modes(&self) -> &[IsingModeData] {
        &self.modes
    }
}

impl EnergySource for IsingDynamics {
    fn size(&self) -> usize {
        self.params.n_sites
    }

    fn energy_at(&self, t: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        for m in &self.modes {
            acc.add(m.energy(t));
        }
        acc.value()
    }

    fn asymptotic_energy(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for m in &self.modes {
            acc.add(m.weight);
        }
        acc.value()
    }

    /// Fastest frequency in the trace is `2 max ω`.
    fn time_step_bound(&self) -> f64 {
        let max_omega = self.modes.iter().map(|m| m.omega).fold(0.0, f64::max);
        std::f64::consts::PI / (10.0 * 2.0 * max_omega)
    }

    fn origin(&self) -> TraceOrigin {
        TraceOrigin::Ising {
            params: self.params,
        }
    }
}

pub fn ising_energy_stored(params: &IsingParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(IsingDynamics::new(params).energy_at(t))
}

pub fn ising_asymptotic_energy(params: &IsingParams) -> f64 {
    IsingDynamics::new(params).asymptotic_energy()
}

pub fn ising_energy_trace(params: &IsingParams, t_end: f64, dt: f64) -> Result<EnergyTrace> {
    EnergyTrace::sample(&IsingDynamics::new(params), 0.0, t_end, dt)
}
