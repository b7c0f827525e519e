use std::collections::BTreeMap;
use std::fs;
use std::io::Write;

use serde::Serialize;

use qbattery_core::ising::{IsingDynamics, IsingParams};
use qbattery_core::numeric::uniform_grid;
use qbattery_core::oracle::{self, QuenchEvolution};
use qbattery_core::quench::{ChargingDynamics, QuenchProtocol};
use qbattery_core::regime::{self, RegimeOptions, RegimeReport, SweepRow};
use qbattery_core::trace::{EnergySource, EnergyTrace};
use qbattery_core::xy::classify_phase;

use crate::config::{Format, Model, RunConfig};
use crate::error::CliError;
use crate::output::{self, sci, sci_vec, to_json, Sci};

const TRACE_DT: f64 = 0.02;
const ORACLE_DT: f64 = 0.1;
const ORACLE_T_END: f64 = 50.0;

fn model_name(model: Model) -> &'static str {
    match model {
        Model::Xy => "xy",
        Model::Ising => "ising",
    }
}

fn parameters(cfg: &RunConfig) -> BTreeMap<&'static str, Sci> {
    let mut p = BTreeMap::new();
    match cfg.model {
        Model::Xy => {
            p.insert("gamma", Sci(cfg.gamma));
            p.insert("delta0", Sci(cfg.delta0));
            p.insert("delta1", Sci(cfg.delta1));
        }
        Model::Ising => {
            p.insert("h0", Sci(cfg.h0));
            p.insert("h1", Sci(cfg.h1));
        }
    }
    p
}

fn regime_options(cfg: &RunConfig) -> Result<RegimeOptions, CliError> {
    Ok(RegimeOptions {
        dt: cfg.dt.unwrap_or(TRACE_DT),
        short_span: cfg.short_span,
        window: cfg.window_factors()?,
        evaluator: cfg.evaluator,
    })
}

fn xy_protocol(cfg: &RunConfig) -> Result<QuenchProtocol, CliError> {
    Ok(QuenchProtocol::new(
        cfg.gamma,
        cfg.delta0,
        cfg.delta1,
        cfg.n_dimers,
    )?)
}

fn ising_params(cfg: &RunConfig) -> Result<IsingParams, CliError> {
    Ok(IsingParams::new(cfg.h0, cfg.h1, cfg.n_sites)?)
}

fn energy_source(cfg: &RunConfig) -> Result<Box<dyn EnergySource>, CliError> {
    Ok(match cfg.model {
        Model::Xy => {
            Box::new(ChargingDynamics::new(&xy_protocol(cfg)?)?.with_evaluator(cfg.evaluator))
        }
        Model::Ising => Box::new(IsingDynamics::new(&ising_params(cfg)?)),
    })
}

fn require_xy(cfg: &RunConfig, command: &str) -> Result<(), CliError> {
    match cfg.model {
        Model::Xy => Ok(()),
        Model::Ising => Err(CliError::Input(format!(
            "{command} is only available for the xy model"
        ))),
    }
}

#[derive(Serialize)]
struct ReportJson {
    model: &'static str,
    size: usize,
    evaluator: &'static str,
    parameters: BTreeMap<&'static str, Sci>,
    tau_s: Sci,
    e_s: Sci,
    e_inf: Sci,
    tau_r: Sci,
    e_r: Sci,
    e_s_per: Sci,
    e_r_per: Sci,
    e_inf_per: Sci,
    short_time_power: Sci,
    window_t_min: Sci,
    window_t_max: Sci,
    recurrence_on_edge: bool,
}

impl ReportJson {
    fn new(cfg: &RunConfig, r: &RegimeReport) -> Self {
        Self {
            model: model_name(cfg.model),
            size: r.size,
            evaluator: cfg.evaluator.name(),
            parameters: parameters(cfg),
            tau_s: Sci(r.tau_s),
            e_s: Sci(r.e_s),
            e_inf: Sci(r.e_inf),
            tau_r: Sci(r.tau_r),
            e_r: Sci(r.e_r),
            e_s_per: Sci(r.e_s_per()),
            e_r_per: Sci(r.e_r_per()),
            e_inf_per: Sci(r.e_inf_per()),
            short_time_power: Sci(r.short_time_power()),
            window_t_min: Sci(r.window_r.t_min),
            window_t_max: Sci(r.window_r.t_max),
            recurrence_on_edge: r.recurrence_on_edge,
        }
    }
}

#[derive(Serialize)]
struct TraceJson {
    t: Vec<Sci>,
    delta_e: Vec<Sci>,
    report: Option<ReportJson>,
}

/// Writes `report` next to the main output, or to stderr without `--out`.
fn emit_sidecar(cfg: &RunConfig, json: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => fs::write(output::sidecar(path), json)?,
        None => eprint!("{json}"),
    }
    Ok(())
}

pub fn trace(cfg: &RunConfig) -> Result<(), CliError> {
    let opts = regime_options(cfg)?;
    let source = energy_source(cfg)?;
    let window = opts
        .window
        .unwrap_or(match cfg.model {
            Model::Xy => regime::WindowFactors::XY,
            Model::Ising => regime::WindowFactors::ISING,
        })
        .window(cfg.size());
    let t_end = cfg.t_end.unwrap_or(window.t_max);
    let trace = EnergyTrace::sample(source.as_ref(), 0.0, t_end, opts.dt)?;
    let report = regime::analyze(source.as_ref(), window, opts.dt, opts.short_span);

    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<f64>> = trace
                .times
                .iter()
                .zip(&trace.values)
                .map(|(&t, &v)| vec![t, v])
                .collect();
            output::write_csv(&mut w, &["t", "delta_e"], &rows)?;
            if let Ok(r) = &report {
                emit_sidecar(cfg, &to_json(&ReportJson::new(cfg, r)))?;
            }
        }
        Format::Json => {
            let doc = TraceJson {
                t: sci_vec(&trace.times),
                delta_e: sci_vec(&trace.values),
                report: report.as_ref().ok().map(|r| ReportJson::new(cfg, r)),
            };
            w.write_all(to_json(&doc).as_bytes())?;
            w.flush()?;
        }
    }
    report.map(|_| ()).map_err(CliError::from)
}

fn sweep_grid(cfg: &RunConfig) -> Vec<f64> {
    if let Some(g) = &cfg.grid {
        return g.clone();
    }
    let (start, stop, step) = match cfg.model {
        Model::Xy => (0.005, 0.6, 0.005),
        Model::Ising => (0.4, 1.0, 0.005),
    };
    uniform_grid(
        cfg.grid_start.unwrap_or(start),
        cfg.grid_stop.unwrap_or(stop),
        cfg.grid_step.unwrap_or(step),
    )
}

#[derive(Serialize)]
struct SweepRowJson {
    param: Sci,
    e_s_per: Sci,
    e_r_per: Sci,
    e_inf_per: Sci,
    tau_s: Sci,
    tau_r: Sci,
}

#[derive(Serialize)]
struct SweepJson {
    model: &'static str,
    swept: &'static str,
    size: usize,
    parameters: BTreeMap<&'static str, Sci>,
    rows: Vec<SweepRowJson>,
}

pub fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let opts = regime_options(cfg)?;
    let grid = sweep_grid(cfg);
    let rows: Vec<SweepRow> = match cfg.model {
        Model::Xy => regime::sweep_delta0(cfg.gamma, cfg.delta1, cfg.n_dimers, &grid, &opts)?,
        Model::Ising => regime::sweep_h0(cfg.h1, cfg.n_sites, &grid, &opts)?,
    };
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Csv => {
            let table: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| vec![r.param, r.e_s_per, r.e_r_per, r.e_inf_per, r.tau_s, r.tau_r])
                .collect();
            output::write_csv(
                &mut w,
                &["param", "e_s_per", "e_r_per", "e_inf_per", "tau_s", "tau_r"],
                &table,
            )?;
        }
        Format::Json => {
            let mut params = parameters(cfg);
            params.remove(if cfg.model == Model::Xy {
                "delta0"
            } else {
                "h0"
            });
            let doc = SweepJson {
                model: model_name(cfg.model),
                swept: if cfg.model == Model::Xy {
                    "delta0"
                } else {
                    "h0"
                },
                size: cfg.size(),
                parameters: params,
                rows: rows
                    .iter()
                    .map(|r| SweepRowJson {
                        param: Sci(r.param),
                        e_s_per: Sci(r.e_s_per),
                        e_r_per: Sci(r.e_r_per),
                        e_inf_per: Sci(r.e_inf_per),
                        tau_s: Sci(r.tau_s),
                        tau_r: Sci(r.tau_r),
                    })
                    .collect(),
            };
            w.write_all(to_json(&doc).as_bytes())?;
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FitJson {
    slope: Sci,
    intercept: Sci,
    r_squared: Sci,
}

#[derive(Serialize)]
struct ScalingRowJson {
    n_dimers: usize,
    e_s_per: Sci,
    e_r_per: Sci,
    e_inf_per: Sci,
    tau_s: Sci,
    tau_r: Sci,
}

#[derive(Serialize)]
struct ScalingJson {
    parameters: BTreeMap<&'static str, Sci>,
    rows: Vec<ScalingRowJson>,
    tau_r_fit: Option<FitJson>,
}

pub fn scaling(cfg: &RunConfig) -> Result<(), CliError> {
    require_xy(cfg, "scaling")?;
    let opts = regime_options(cfg)?;
    let table = regime::scaling_study(cfg.gamma, cfg.delta0, cfg.delta1, &cfg.sizes, &opts)?;
    let fit = table.tau_r_fit.map(|f| FitJson {
        slope: Sci(f.slope),
        intercept: Sci(f.intercept),
        r_squared: Sci(f.r_squared),
    });
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<f64>> = table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n_dimers as f64,
                        r.e_s_per,
                        r.e_r_per,
                        r.e_inf_per,
                        r.tau_s,
                        r.tau_r,
                    ]
                })
                .collect();
            output::write_csv(
                &mut w,
                &[
                    "n_dimers",
                    "e_s_per",
                    "e_r_per",
                    "e_inf_per",
                    "tau_s",
                    "tau_r",
                ],
                &rows,
            )?;
            emit_sidecar(cfg, &to_json(&fit))?;
        }
        Format::Json => {
            let doc = ScalingJson {
                parameters: parameters(cfg),
                rows: table
                    .rows
                    .iter()
                    .map(|r| ScalingRowJson {
                        n_dimers: r.n_dimers,
                        e_s_per: Sci(r.e_s_per),
                        e_r_per: Sci(r.e_r_per),
                        e_inf_per: Sci(r.e_inf_per),
                        tau_s: Sci(r.tau_s),
                        tau_r: Sci(r.tau_r),
                    })
                    .collect(),
                tau_r_fit: fit,
            };
            w.write_all(to_json(&doc).as_bytes())?;
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PhaseJson {
    gamma: Sci,
    delta: Sci,
    region: Option<u8>,
    label: &'static str,
}

pub fn phase(cfg: &RunConfig) -> Result<(), CliError> {
    let delta = cfg.delta.unwrap_or(cfg.delta0);
    let p = classify_phase(cfg.gamma, delta)?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Csv => writeln!(w, "{p}")?,
        Format::Json => w.write_all(
            to_json(&PhaseJson {
                gamma: Sci(cfg.gamma),
                delta: Sci(delta),
                region: p.region(),
                label: p.label(),
            })
            .as_bytes(),
        )?,
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SnapshotJson {
    time: Sci,
    k: Vec<Sci>,
    n2: Vec<Sci>,
}

pub fn snapshot(cfg: &RunConfig) -> Result<(), CliError> {
    require_xy(cfg, "snapshot")?;
    let protocol = xy_protocol(cfg)?;
    let t = match cfg.time {
        Some(t) => t,
        None => regime::analyze_xy(&protocol, &regime_options(cfg)?)?.tau_r,
    };
    let snap = regime::occupation_snapshot(&protocol, t, cfg.evaluator)?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<f64>> = snap.iter().map(|&(k, n)| vec![k, n]).collect();
            output::write_csv(&mut w, &["k", "n2"], &rows)?;
        }
        Format::Json => {
            let doc = SnapshotJson {
                time: Sci(t),
                k: snap.iter().map(|p| Sci(p.0)).collect(),
                n2: snap.iter().map(|p| Sci(p.1)).collect(),
            };
            w.write_all(to_json(&doc).as_bytes())?;
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleJson {
    model: &'static str,
    sites: usize,
    max_abs_dev: Sci,
    tolerance: Sci,
    t: Vec<Sci>,
    engine: Vec<Sci>,
    oracle: Vec<Sci>,
}

pub fn oracle_check(cfg: &RunConfig) -> Result<(), CliError> {
    let times = uniform_grid(
        0.0,
        cfg.t_end.unwrap_or(ORACLE_T_END),
        cfg.dt.unwrap_or(ORACLE_DT),
    );
    if times.is_empty() {
        return Err(CliError::Input("empty time grid".into()));
    }
    let (engine, (battery, charger)): (Box<dyn EnergySource>, _) = match cfg.model {
        Model::Xy => {
            if !cfg.sites.is_multiple_of(2) {
                return Err(CliError::Input(format!(
                    "the dimerized chain needs an even number of sites, got {}",
                    cfg.sites
                )));
            }
            let p = QuenchProtocol::new(cfg.gamma, cfg.delta0, cfg.delta1, cfg.sites / 2)?;
            (
                Box::new(ChargingDynamics::new(&p)?.with_evaluator(cfg.evaluator)),
                oracle::xy_pair(&p)?,
            )
        }
        Model::Ising => {
            let p = IsingParams::new(cfg.h0, cfg.h1, cfg.sites)?;
            (Box::new(IsingDynamics::new(&p)), oracle::ising_pair(&p)?)
        }
    };
    let evolution = QuenchEvolution::new(&battery, &charger)?;
    if evolution.ground_state().is_degenerate() {
        log::warn!("degenerate battery ground state: the comparison depends on the state chosen");
    }
    let a = engine.sample(&times);
    let b = evolution.sample(&times);
    let dev = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let summary = format!(
        "max_abs_dev={} tolerance={} sites={}",
        sci(dev),
        sci(cfg.tolerance),
        cfg.sites
    );
    match (&cfg.out, cfg.format) {
        (None, Format::Csv) => println!("{summary}"),
        (out, Format::Csv) => {
            let rows: Vec<Vec<f64>> = (0..times.len())
                .map(|i| vec![times[i], a[i], b[i], (a[i] - b[i]).abs()])
                .collect();
            let mut w = output::open(out.as_deref())?;
            output::write_csv(&mut w, &["t", "engine", "oracle", "abs_dev"], &rows)?;
            println!("{summary}");
        }
        (out, Format::Json) => {
            let doc = OracleJson {
                model: model_name(cfg.model),
                sites: cfg.sites,
                max_abs_dev: Sci(dev),
                tolerance: Sci(cfg.tolerance),
                t: sci_vec(&times),
                engine: sci_vec(&a),
                oracle: sci_vec(&b),
            };
            let mut w = output::open(out.as_deref())?;
            w.write_all(to_json(&doc).as_bytes())?;
            w.flush()?;
            if out.is_some() {
                println!("{summary}");
            }
        }
    }
    if dev > cfg.tolerance {
        return Err(CliError::Mismatch(format!(
            "engine and oracle differ by {} (tolerance {})",
            sci(dev),
            sci(cfg.tolerance)
        )));
    }
    Ok(())
}
