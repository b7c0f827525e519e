//! Sampled energy traces and the interface the regime analysis consumes.

use rayon::prelude::*;

use crate::error::{check_time, Error, Result};
use crate::ising::IsingParams;
use crate::numeric::uniform_grid;
use crate::quench::{Evaluator, QuenchProtocol};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceOrigin {
    Xy {
        protocol: QuenchProtocol,
        evaluator: Evaluator,
    },
    Ising {
        params: IsingParams,
    },
    Oracle {
        n_sites: usize,
    },
}

/// Anything that can report the stored energy at arbitrary times.
pub trait EnergySource: Sync {
    /// Normalisation for per-unit quantities (dimers or spins).
    fn size(&self) -> usize;

    fn energy_at(&self, t: f64) -> f64;

    fn asymptotic_energy(&self) -> f64;

    /// Largest admissible sampling step.
    fn time_step_bound(&self) -> f64;

    fn origin(&self) -> TraceOrigin;

    /// Energies at `times`, computed in parallel over time points. Each value
    /// is produced by a single thread, so the result does not depend on the
    /// pool size.
    fn sample(&self, times: &[f64]) -> Vec<f64> {
        times.par_iter().map(|&t| self.energy_at(t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub dt: f64,
    pub origin: TraceOrigin,
}

impl EnergyTrace {
    /// Samples `source` on `{t_start + i dt} ∩ [t_start, t_end]`.
    pub fn sample<S: EnergySource + ?Sized>(
        source: &S,
        t_start: f64,
        t_end: f64,
        dt: f64,
    ) -> Result<Self> {
        check_time(t_start)?;
        check_time(t_end)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {dt}"
            )));
        }
        if t_end < t_start {
            return Err(Error::InvalidParameter(format!(
                "t_end {t_end} precedes t_start {t_start}"
            )));
        }
        let bound = source.time_step_bound();
        if dt > bound {
            return Err(Error::TimeStepTooCoarse { dt, bound });
        }
        let times = uniform_grid(t_start, t_end, dt);
        let values = source.sample(&times);
        Ok(Self {
            times,
            values,
            dt,
            origin: source.origin(),
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}
