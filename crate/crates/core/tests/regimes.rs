use std::f64::consts::PI;

use qbattery_core::ising::IsingParams;
use qbattery_core::numeric::{mean_and_std, uniform_grid};
use qbattery_core::quench::{ChargingDynamics, Evaluator, QuenchProtocol};
use qbattery_core::regime::{
    analyze_ising, analyze_xy, occupation_snapshot, scaling_study, sweep_delta0, RegimeOptions,
};
use qbattery_core::trace::EnergySource;

fn default_point() -> QuenchProtocol {
    QuenchProtocol::new(1.25, 0.3, 0.6, 300).unwrap()
}

fn sweep_point(delta0: f64) -> QuenchProtocol {
    QuenchProtocol::new(1.1, delta0, 0.8, 300).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn default_point_regimes() {
    let r = analyze_xy(&default_point(), &RegimeOptions::default()).unwrap();
    assert!(r.tau_s > 0.0 && r.tau_s <= 50.0);
    assert!((600.0..=800.0).contains(&r.tau_r));
    assert!(!r.recurrence_on_edge);
    assert!(rel(r.e_r, r.e_s) < 0.25);
    // values from an independent dense prototype
    assert!((r.tau_s - 3.2972).abs() < 1e-3);
    assert!(rel(r.e_s, 176.057) < 1e-4);
    assert!(rel(r.e_inf, 101.3053) < 1e-5);
    assert!((r.tau_r - 679.14).abs() < 0.02);
    assert!(rel(r.e_r, 141.54) < 1e-3);
}

#[test]
fn default_point_plateau_is_flat_and_matches_asymptote() {
    let d = ChargingDynamics::new(&default_point()).unwrap();
    let values = d.sample(&uniform_grid(100.0, 500.0, 0.02));
    let (mean, std) = mean_and_std(&values);
    assert!(std < 0.02 * mean);
    assert!(rel(d.asymptotic_energy(), mean) < 5e-3);
    // any later window before the revival
    let (mean, _) = mean_and_std(&d.sample(&uniform_grid(250.0, 450.0, 0.02)));
    assert!(rel(d.asymptotic_energy(), mean) < 5e-3);
}

#[test]
fn full_and_simplified_agree_at_reference_points() {
    let times = uniform_grid(0.0, 60.0, 0.02);
    let mut windows = times.clone();
    windows.extend(uniform_grid(600.0, 800.0, 0.1));
    for p in [
        default_point(),
        sweep_point(0.11),
        sweep_point(0.2),
        sweep_point(0.3),
        sweep_point(0.45),
    ] {
        let d = ChargingDynamics::new(&p).unwrap();
        for &t in &windows {
            let full = d.energy_with(t, Evaluator::Full);
            let simple = d.energy_with(t, Evaluator::Simplified);
            assert!(
                (full - simple).abs() <= 1e-9 * full.abs().max(1e-300),
                "{p:?} t={t}"
            );
        }
    }
}

#[test]
fn lower_band_carries_most_of_the_filling() {
    // the upper band is weakly but not negligibly populated (max ≈ 3e-3)
    let d = ChargingDynamics::new(&default_point()).unwrap();
    for t in [3.3, 50.0, 300.0, 679.0] {
        let n1 = d
            .modes()
            .iter()
            .map(|m| m.occupation(0, t, Evaluator::Full))
            .fold(0.0, f64::max);
        let n2 = d
            .modes()
            .iter()
            .map(|m| m.occupation(1, t, Evaluator::Full))
            .fold(0.0, f64::max);
        assert!(n1 <= 1e-2, "t={t}: {n1}");
        assert!(n2 > 10.0 * n1);
    }
}

#[test]
fn delta0_sweep_local_shape() {
    let opts = RegimeOptions::default();
    let rows = sweep_delta0(1.1, 0.8, 300, &[0.15, 0.195, 0.2, 0.205, 0.25], &opts).unwrap();
    let peak = rows[2];
    for r in rows.iter().filter(|r| r.param != 0.2) {
        assert!(
            peak.e_s_per > r.e_s_per && peak.e_r_per > r.e_r_per,
            "{r:?}"
        );
    }
    assert!(rel(peak.e_s_per, peak.e_r_per) < 0.02);
    assert!(rel(peak.e_s_per, 0.84073) < 1e-4);
}

#[test]
fn delta0_sweep_asymptote_plateau_then_decrease() {
    let opts = RegimeOptions::default();
    let plateau = uniform_grid(0.13, 0.28, 0.03);
    let rows = sweep_delta0(1.1, 0.8, 300, &plateau, &opts).unwrap();
    let vals: Vec<f64> = rows.iter().map(|r| r.e_inf_per).collect();
    let (lo, hi) = vals
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!((hi - lo) / hi < 0.10);
    let tail = sweep_delta0(1.1, 0.8, 300, &uniform_grid(0.32, 0.6, 0.04), &opts).unwrap();
    assert!(tail.windows(2).all(|w| w[1].e_inf_per < w[0].e_inf_per));
}

#[test]
fn snapshot_at_flat_band_charging_peaks_near_half_pi() {
    let p = sweep_point(0.2);
    let r = analyze_xy(&p, &RegimeOptions::default()).unwrap();
    let snap = occupation_snapshot(&p, r.tau_r, Evaluator::Full).unwrap();
    let (k, _) = snap
        .iter()
        .copied()
        .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    let k = if k > PI { 2.0 * PI - k } else { k };
    assert!((k - PI / 2.0).abs() < 0.2, "peak at k={k}");
}

#[test]
fn snapshot_at_critical_charging_fills_zone_edge() {
    let p = sweep_point(0.3);
    let r = analyze_xy(&p, &RegimeOptions::default()).unwrap();
    let snap = occupation_snapshot(&p, r.tau_r, Evaluator::Full).unwrap();
    let (k, n) = snap
        .iter()
        .copied()
        .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    assert!((k - PI).abs() < 0.05, "peak at k={k}");
    assert!(n > 0.99);
}

#[test]
fn time_scales_with_size() {
    let opts = RegimeOptions::default();
    let table = scaling_study(1.25, 0.3, 0.6, &[100, 200], &opts).unwrap();
    let (a, b) = (table.rows[0], table.rows[1]);
    // first maximum does not move, revival time doubles
    assert!((a.tau_s - b.tau_s).abs() < 1e-3);
    assert!((b.tau_r / a.tau_r - 2.0).abs() < 0.02);
    assert!(rel(a.e_inf_per, b.e_inf_per) < 1e-3);
    assert!(table.tau_r_fit.unwrap().slope > 0.0);
}

#[test]
fn asymptote_stable_across_delta0_for_each_delta1() {
    // for each charging amplitude, δ₀ is moved across the band where only
    // γδ = 1 is crossed; E^∞ barely moves while E^s does
    let gamma: f64 = 1.1;
    let opts = RegimeOptions::default();
    for delta1 in [0.5f64, 0.6, 0.7, 0.8, 0.9] {
        let lo = 1.0 / gamma - delta1 + 0.02;
        let hi = gamma - delta1 - 0.02;
        let grid: Vec<f64> = (0..5)
            .map(|i| lo.max(0.0) + (hi - lo.max(0.0)) * i as f64 / 4.0)
            .collect();
        let rows = sweep_delta0(gamma, delta1, 200, &grid, &opts).unwrap();
        let spread = |f: fn(&qbattery_core::SweepRow) -> f64| {
            let v: Vec<f64> = rows.iter().map(f).collect();
            let (lo, hi) = v
                .iter()
                .fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
            (hi - lo) / hi
        };
        let inf_spread = spread(|r| r.e_inf_per);
        assert!(inf_spread < 0.10, "delta1={delta1}: {inf_spread}");
        assert!(spread(|r| r.e_s_per) > inf_spread, "delta1={delta1}");
    }
}

#[test]
fn ising_revival_in_calibrated_window() {
    let p = IsingParams::new(0.8, 0.7, 600).unwrap();
    let r = analyze_ising(&p, &RegimeOptions::default()).unwrap();
    assert!((280.0..=350.0).contains(&r.tau_r));
    assert!(!r.recurrence_on_edge);
    assert!(r.tau_s < 50.0);
    assert!(r.e_s > r.e_inf && r.e_r > r.e_inf);
}
