//! Extraction of the three charging regimes from a stored-energy trace:
//! the first maximum `(τ_s, E^s)`, the constant part `E^∞` and the first
//! finite-size revival `(τ_r, E^r)`. Also parameter sweeps and size scaling.
//!
//! Only the pieces of the trace that matter are evaluated: `[0, 50]` for the
//! first maximum and the recurrence window. The plateau in between is
//! summarized exactly by the asymptotic energy.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ising::{IsingDynamics, IsingParams};
use crate::numeric::{linear_fit, parabolic_peak, LinearFit};
use crate::quench::{ChargingDynamics, Evaluator, QuenchProtocol};
use crate::trace::{EnergySource, EnergyTrace};

/// Peak values below this are indistinguishable from an uncharged battery.
pub const NO_CHARGE_TOL: f64 = 1e-12;

/// Revival window in units of the size: `[a·size, b·size]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowFactors {
    pub a: f64,
    pub b: f64,
}

impl WindowFactors {
    /// Calibrated on the 300-dimer chain, where the revival sits in [600, 800].
    pub const XY: WindowFactors = WindowFactors {
        a: 2.0,
        b: 8.0 / 3.0,
    };
    /// Calibrated on the 600-site Ising chain, revival in [280, 350].
    pub const ISING: WindowFactors = WindowFactors {
        a: 7.0 / 15.0,
        b: 7.0 / 12.0,
    };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "window factors need 0 < a < b, got a={a}, b={b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn window(&self, size: usize) -> RecurrenceWindow {
        RecurrenceWindow {
            t_min: self.a * size as f64,
            t_max: self.b * size as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceWindow {
    pub t_min: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeOptions {
    pub dt: f64,
    /// Initial span searched for the first maximum.
    pub short_span: f64,
    /// `None` selects the model's calibrated default.
    pub window: Option<WindowFactors>,
    pub evaluator: Evaluator,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        Self {
            dt: 0.02,
            short_span: 50.0,
            window: None,
            evaluator: Evaluator::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub size: usize,
    pub tau_s: f64,
    pub e_s: f64,
    pub e_inf: f64,
    pub tau_r: f64,
    pub e_r: f64,
    pub window_r: RecurrenceWindow,
    /// The revival maximum sits on a window edge.
    pub recurrence_on_edge: bool,
}

impl RegimeReport {
    fn per(&self, x: f64) -> f64 {
        x / self.size as f64
    }

    pub fn e_s_per(&self) -> f64 {
        self.per(self.e_s)
    }

    pub fn e_r_per(&self) -> f64 {
        self.per(self.e_r)
    }

    pub fn e_inf_per(&self) -> f64 {
        self.per(self.e_inf)
    }

    /// Average charging power `E^s / τ_s`.
    pub fn short_time_power(&self) -> f64 {
        self.e_s / self.tau_s
    }
}

fn check_charged(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.abs() <= NO_CHARGE_TOL) {
        Err(Error::NoCharging)
    } else {
        Ok(())
    }
}

/// First strict local maximum, refined by a parabola through the three
/// bracketing samples.
pub fn find_short_time_max(trace: &EnergyTrace) -> Result<(f64, f64)> {
    check_charged(&trace.values)?;
    let v = &trace.values;
    for i in 1..v.len().saturating_sub(1) {
        if v[i - 1] < v[i] && v[i] > v[i + 1] {
            return Ok(parabolic_peak(
                trace.times[i],
                trace.dt,
                v[i - 1],
                v[i],
                v[i + 1],
            ));
        }
    }
    Err(Error::NoLocalMaximum {
        t_start: trace.times.first().copied().unwrap_or(0.0),
        t_end: trace.times.last().copied().unwrap_or(0.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recurrence {
    pub tau_r: f64,
    pub e_r: f64,
    pub on_edge: bool,
}

/// Sampled maximum inside `window`, refined when it is interior.
pub fn find_recurrence(trace: &EnergyTrace, window: RecurrenceWindow) -> Result<Recurrence> {
    let slack = 1e-9 * trace.dt.max(1.0);
    let (first, last) = match (trace.times.first(), trace.times.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => {
            return Err(Error::WindowOutsideTrace {
                t_min: window.t_min,
                t_max: window.t_max,
            })
        }
    };
    if first > window.t_min + trace.dt + slack || last < window.t_max - trace.dt - slack {
        return Err(Error::WindowOutsideTrace {
            t_min: window.t_min,
            t_max: window.t_max,
        });
    }
    let inside: Vec<usize> = (0..trace.len())
        .filter(|&i| {
            trace.times[i] >= window.t_min - slack && trace.times[i] <= window.t_max + slack
        })
        .collect();
    let (lo, hi) = (inside[0], *inside.last().unwrap());
    let mut best = lo;
    for i in lo..=hi {
        if trace.values[i] > trace.values[best] {
            best = i;
        }
    }
    let on_edge = best == lo || best == hi;
    if on_edge {
        log::warn!(
            "recurrence maximum at t={} lies on the edge of [{}, {}]; the window is probably misplaced",
            trace.times[best],
            window.t_min,
            window.t_max
        );
        return Ok(Recurrence {
            tau_r: trace.times[best],
            e_r: trace.values[best],
            on_edge,
        });
    }
    let v = &trace.values;
    let (tau_r, e_r) = parabolic_peak(
        trace.times[best],
        trace.dt,
        v[best - 1],
        v[best],
        v[best + 1],
    );
    Ok(Recurrence {
        tau_r,
        e_r,
        on_edge,
    })
}

/// Regime report from an energy source, sampling only the short-time
/// segment and the revival window.
pub fn analyze<S: EnergySource + ?Sized>(
    source: &S,
    window: RecurrenceWindow,
    dt: f64,
    short_span: f64,
) -> Result<RegimeReport> {
    let mut span = short_span.min(window.t_min);
    let (tau_s, e_s) = loop {
        let segment = EnergyTrace::sample(source, 0.0, span, dt)?;
        match find_short_time_max(&segment) {
            Err(Error::NoLocalMaximum { .. }) if span < window.t_min => {
                span = (2.0 * span).min(window.t_min);
            }
            other => break other?,
        }
    };
    let segment = EnergyTrace::sample(source, window.t_min, window.t_max, dt)?;
    let rec = find_recurrence(&segment, window)?;
    Ok(RegimeReport {
        size: source.size(),
        tau_s,
        e_s,
        e_inf: source.asymptotic_energy(),
        tau_r: rec.tau_r,
        e_r: rec.e_r,
        window_r: window,
        recurrence_on_edge: rec.on_edge,
    })
}

pub fn analyze_xy(protocol: &QuenchProtocol, opts: &RegimeOptions) -> Result<RegimeReport> {
    let dynamics = ChargingDynamics::new(protocol)?.with_evaluator(opts.evaluator);
    let window = opts
        .window
        .unwrap_or(WindowFactors::XY)
        .window(protocol.n_dimers);
    analyze(&dynamics, window, opts.dt, opts.short_span)
}

pub fn analyze_ising(params: &IsingParams, opts: &RegimeOptions) -> Result<RegimeReport> {
    let dynamics = IsingDynamics::new(params);
    let window = opts
        .window
        .unwrap_or(WindowFactors::ISING)
        .window(params.n_sites);
    analyze(&dynamics, window, opts.dt, opts.short_span)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub e_s_per: f64,
    pub e_r_per: f64,
    pub e_inf_per: f64,
    pub tau_s: f64,
    pub tau_r: f64,
}

impl SweepRow {
    fn from_report(param: f64, r: &RegimeReport) -> Self {
        Self {
            param,
            e_s_per: r.e_s_per(),
            e_r_per: r.e_r_per(),
            e_inf_per: r.e_inf_per(),
            tau_s: r.tau_s,
            tau_r: r.tau_r,
        }
    }
}

fn sorted_grid(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(bad) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite grid value {bad}"
        )));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// Regime values per dimer along a `δ₀` grid; rows come back in ascending
/// `δ₀` whatever the execution order.
pub fn sweep_delta0(
    gamma: f64,
    delta1: f64,
    n_dimers: usize,
    delta0_grid: &[f64],
    opts: &RegimeOptions,
) -> Result<Vec<SweepRow>> {
    sorted_grid(delta0_grid)?
        .into_par_iter()
        .map(|d0| {
            let protocol = QuenchProtocol::new(gamma, d0, delta1, n_dimers)?;
            Ok(SweepRow::from_report(d0, &analyze_xy(&protocol, opts)?))
        })
        .collect()
}

/// Ising counterpart of [`sweep_delta0`], per spin, along an `h₀` grid.
pub fn sweep_h0(
    h1: f64,
    n_sites: usize,
    h0_grid: &[f64],
    opts: &RegimeOptions,
) -> Result<Vec<SweepRow>> {
    sorted_grid(h0_grid)?
        .into_par_iter()
        .map(|h0| {
            let params = IsingParams::new(h0, h1, n_sites)?;
            Ok(SweepRow::from_report(h0, &analyze_ising(&params, opts)?))
        })
        .collect()
}

/// `(k, n₂(t))` over the modes in ascending order.
pub fn occupation_snapshot(
    protocol: &QuenchProtocol,
    t: f64,
    evaluator: Evaluator,
) -> Result<Vec<(f64, f64)>> {
    crate::error::check_time(t)?;
    Ok(ChargingDynamics::new(protocol)?
        .with_evaluator(evaluator)
        .lower_band_occupations(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n_dimers: usize,
    pub e_s_per: f64,
    pub e_r_per: f64,
    pub e_inf_per: f64,
    pub tau_s: f64,
    pub tau_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// Least-squares line `τ_r = slope·𝒩 + intercept`.
    pub tau_r_fit: Option<LinearFit>,
}

pub fn scaling_study(
    gamma: f64,
    delta0: f64,
    delta1: f64,
    n_list: &[usize],
    opts: &RegimeOptions,
) -> Result<ScalingTable> {
    if n_list.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut sizes = n_list.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let rows = sizes
        .into_par_iter()
        .map(|n| {
            let r = analyze_xy(&QuenchProtocol::new(gamma, delta0, delta1, n)?, opts)?;
            Ok(ScalingRow {
                n_dimers: n,
                e_s_per: r.e_s_per(),
                e_r_per: r.e_r_per(),
                e_inf_per: r.e_inf_per(),
                tau_s: r.tau_s,
                tau_r: r.tau_r,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.n_dimers as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.tau_r).collect();
    Ok(ScalingTable {
        tau_r_fit: linear_fit(&xs, &ys),
        rows,
    })
}
