//! Double-quench charging of the dimerized XY battery.
//!
//! The battery starts in the quasiparticle vacuum of `H_B(δ₀)`, evolves under
//! `H'_B(δ₀ + δ₁)` for the charging time and the stored energy is the rise of
//! `⟨H_B⟩`. Every mode evolves independently; the matching matrix
//! `M_q = V_q⁻¹ U_q` between the two eigenbases carries all of the dynamics.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_time, Error, Result};
use crate::numeric::NeumaierSum;
use crate::trace::{EnergySource, EnergyTrace, TraceOrigin};
use crate::xy::{mode_eigensystem, ChainParams, ModeIndex, ModeSpectrum};

/// Frequencies closer than this are treated as equal when splitting the
/// stored energy into its constant and oscillating parts.
pub const EQUAL_FREQUENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluator {
    /// Complete quadruple sum over band indices.
    #[default]
    Full,
    /// Only the terms with all four band indices equal.
    Simplified,
}

impl Evaluator {
    pub fn name(&self) -> &'static str {
        match self {
            Evaluator::Full => "full",
            Evaluator::Simplified => "simplified",
        }
    }
}

impl std::str::FromStr for Evaluator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Evaluator::Full),
            "simplified" => Ok(Evaluator::Simplified),
            other => Err(Error::InvalidParameter(format!(
                "unknown evaluator '{other}' (expected full|simplified)"
            ))),
        }
    }
}

/// Step protocol `δ(t) = δ₀ + δ₁ θ(t) θ(τ − t)` at fixed anisotropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchProtocol {
    pub gamma: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub n_dimers: usize,
}

impl QuenchProtocol {
    pub fn new(gamma: f64, delta0: f64, delta1: f64, n_dimers: usize) -> Result<Self> {
        if !(delta1.is_finite() && delta1 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta1 must be >= 0, got {delta1}"
            )));
        }
        let protocol = Self {
            gamma,
            delta0,
            delta1,
            n_dimers,
        };
        protocol.battery()?;
        Ok(protocol)
    }

    pub fn battery(&self) -> Result<ChainParams> {
        ChainParams::new(self.gamma, self.delta0, self.n_dimers)
    }

    pub fn charger(&self) -> Result<ChainParams> {
        ChainParams::new(self.gamma, self.delta0 + self.delta1, self.n_dimers)
    }

    pub fn is_null(&self) -> bool {
        self.delta1 == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingMatrix {
    pub mode: ModeIndex,
    pub m: Matrix4<Complex64>,
    pub omega_initial: (f64, f64),
    pub omega_charging: (f64, f64),
}

impl MatchingMatrix {
    /// `M = V† U` for unitary eigenvector matrices `U` (battery) and `V`
    /// (charger).
    pub fn from_spectra(initial: &ModeSpectrum, charging: &ModeSpectrum) -> Self {
        MatchingMatrix {
            mode: initial.mode,
            m: charging.eigvecs.adjoint() * initial.eigvecs,
            omega_initial: (initial.omega1, initial.omega2),
            omega_charging: (charging.omega1, charging.omega2),
        }
    }

    fn omega_charging(&self) -> [f64; 2] {
        [self.omega_charging.0, self.omega_charging.1]
    }
}

pub fn matching_matrix(protocol: &QuenchProtocol, mode: ModeIndex) -> Result<MatchingMatrix> {
    let initial = mode_eigensystem(&protocol.battery()?, mode)?;
    if protocol.is_null() {
        return Ok(MatchingMatrix {
            mode,
            m: Matrix4::identity(),
            omega_initial: (initial.omega1, initial.omega2),
            omega_charging: (initial.omega1, initial.omega2),
        });
    }
    let charging = mode_eigensystem(&protocol.charger()?, mode)?;
    Ok(MatchingMatrix::from_spectra(&initial, &charging))
}

/// Occupations `(n₁, n₂)` of the battery quasiparticles at time `t`, from the
/// quadruple band sum written out term by term.
pub fn occupations_from_matching(matching: &MatchingMatrix, t: f64) -> [f64; 2] {
    let m = &matching.m;
    let w = matching.omega_charging();
    let mut out = [0.0; 2];
    for (s1, n) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..2 {
            for s2 in 0..2 {
                let slow = ((w[s] - w[s2]) * t).cos();
                let fast = ((w[s] + w[s2]) * t).cos();
                for s3 in 0..2 {
                    let a = m[(s + 2, s1)]
                        * m[(s2 + 2, s1)].conj()
                        * m[(s + 2, s3 + 2)].conj()
                        * m[(s2 + 2, s3 + 2)];
                    let b = m[(s + 2, s1)]
                        * m[(s2, s1)].conj()
                        * m[(s + 2, s3 + 2)].conj()
                        * m[(s2, s3 + 2)];
                    acc += (a * slow + b * fast) * 2.0;
                }
            }
        }
        *n = acc.re;
    }
    out
}

pub fn occupations(protocol: &QuenchProtocol, mode: ModeIndex, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    let n = occupations_from_matching(&matching_matrix(protocol, mode)?, t);
    Ok((n[0], n[1]))
}

// Frequency slots of one mode: 0, ω'₁−ω'₂, 2ω'₁, 2ω'₂, ω'₁+ω'₂.
const SLOTS: usize = 5;

fn slow_slot(s: usize, s2: usize) -> usize {
    if s == s2 {
        0
    } else {
        1
    }
}

fn fast_slot(s: usize, s2: usize) -> usize {
    match (s, s2) {
        (0, 0) => 2,
        (1, 1) => 3,
        _ => 4,
    }
}

/// Time-independent data of one mode: the quadruple sum grouped by frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDynamics {
    pub mode: ModeIndex,
    pub omega: [f64; 2],
    pub omega_charging: [f64; 2],
    freqs: [f64; SLOTS],
    occ_full: [[f64; SLOTS]; 2],
    occ_simple: [[f64; SLOTS]; 2],
    energy_full: [f64; SLOTS],
    energy_simple: [f64; SLOTS],
}

impl ModeDynamics {
    pub fn from_matching(matching: &MatchingMatrix) -> Self {
        let m = &matching.m;
        let wc = matching.omega_charging();
        let omega = [matching.omega_initial.0, matching.omega_initial.1];
        let freqs = [0.0, wc[0] - wc[1], 2.0 * wc[0], 2.0 * wc[1], wc[0] + wc[1]];

        let mut occ_full = [[0.0; SLOTS]; 2];
        let mut occ_simple = [[0.0; SLOTS]; 2];
        for s1 in 0..2 {
            for s in 0..2 {
                for s2 in 0..2 {
                    for s3 in 0..2 {
                        let a = m[(s + 2, s1)]
                            * m[(s2 + 2, s1)].conj()
                            * m[(s + 2, s3 + 2)].conj()
                            * m[(s2 + 2, s3 + 2)];
                        let b = m[(s + 2, s1)]
                            * m[(s2, s1)].conj()
                            * m[(s + 2, s3 + 2)].conj()
                            * m[(s2, s3 + 2)];
                        occ_full[s1][slow_slot(s, s2)] += 2.0 * a.re;
                        occ_full[s1][fast_slot(s, s2)] += 2.0 * b.re;
                        if s == s1 && s2 == s1 && s3 == s1 {
                            occ_simple[s1][slow_slot(s, s2)] += 2.0 * a.re;
                            occ_simple[s1][fast_slot(s, s2)] += 2.0 * b.re;
                        }
                    }
                }
            }
        }
        let weigh = |occ: &[[f64; SLOTS]; 2]| {
            let mut e = [0.0; SLOTS];
            for (slot, e) in e.iter_mut().enumerate() {
                *e = omega[0] * occ[0][slot] + omega[1] * occ[1][slot];
            }
            e
        };
        ModeDynamics {
            mode: matching.mode,
            omega,
            omega_charging: wc,
            freqs,
            energy_full: weigh(&occ_full),
            energy_simple: weigh(&occ_simple),
            occ_full,
            occ_simple,
        }
    }

    #[inline]
    fn evaluate(&self, coeffs: &[f64; SLOTS], t: f64) -> f64 {
        let mut v = coeffs[0];
        for (&c, &w) in coeffs.iter().zip(&self.freqs).skip(1) {
            if c != 0.0 {
                v += c * (w * t).cos();
            }
        }
        v
    }

    /// Occupation of band `band` (0 for `a_q`, 1 for `b_q`).
    pub fn occupation(&self, band: usize, t: f64, evaluator: Evaluator) -> f64 {
        let coeffs = match evaluator {
            Evaluator::Full => &self.occ_full[band],
            Evaluator::Simplified => &self.occ_simple[band],
        };
        self.evaluate(coeffs, t)
    }

    /// Contribution `Σ_s ω_s n_s(t)` of this mode to the stored energy.
    pub fn energy(&self, t: f64, evaluator: Evaluator) -> f64 {
        match evaluator {
            Evaluator::Full => self.evaluate(&self.energy_full, t),
            Evaluator::Simplified => self.evaluate(&self.energy_simple, t),
        }
    }

    /// Time-independent part of [`Self::energy`] for the full sum.
    pub fn constant_energy(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        acc.add(self.energy_full[0]);
        for slot in 1..SLOTS {
            if self.freqs[slot].abs() <= EQUAL_FREQUENCY_TOL {
                acc.add(self.energy_full[slot]);
            }
        }
        acc.value()
    }
}

/// All per-mode data of a protocol, computed once and reused for any number
/// of time points.
#[derive(Debug, Clone)]
pub struct ChargingDynamics {
    protocol: QuenchProtocol,
    evaluator: Evaluator,
    modes: Vec<ModeDynamics>,
}

impl ChargingDynamics {
    pub fn new(protocol: &QuenchProtocol) -> Result<Self> {
        let modes = ModeIndex::all(protocol.n_dimers)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|mode| matching_matrix(protocol, mode).map(|m| ModeDynamics::from_matching(&m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            protocol: *protocol,
            evaluator: Evaluator::Full,
            modes,
        })
    }

    /// Builds the dynamics from externally supplied eigensystems, one pair per
    /// mode in ascending order.
    pub fn from_spectra(
        protocol: &QuenchProtocol,
        spectra: &[(ModeSpectrum, ModeSpectrum)],
    ) -> Self {
        let modes = spectra
            .iter()
            .map(|(u, v)| ModeDynamics::from_matching(&MatchingMatrix::from_spectra(u, v)))
            .collect();
        Self {
            protocol: *protocol,
            evaluator: Evaluator::Full,
            modes,
        }
    }

    pub fn with_evaluator(mut self, evaluator: Evaluator) -> Self {
        self.evaluator = evaluator;
        self
    }

    pub fn protocol(&self) -> &QuenchProtocol {
        &self.protocol
    }

    pub fn evaluator(&self) -> Evaluator {
        self.evaluator
    }

    pub fn modes(&self) -> &[ModeDynamics] {
        &self.modes
    }

    pub fn energy_with(&self, t: f64, evaluator: Evaluator) -> f64 {
        let mut acc = NeumaierSum::new();
        for m in &self.modes {
            acc.add(m.energy(t, evaluator));
        }
        acc.value()
    }

    /// Energy still stored at time `t` when charging stops at `tau`: after the
    /// second quench `H_B` drives the state and conserves `⟨H_B⟩`.
    pub fn energy_with_release(&self, tau: f64, t: f64) -> f64 {
        self.energy_with(t.min(tau), self.evaluator)
    }

    /// Largest `ω'₁ + ω'₂` over the modes.
    pub fn max_frequency_sum(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| m.omega_charging[0] + m.omega_charging[1])
            .fold(0.0, f64::max)
    }

    /// `(k, n₂)` for every mode in ascending order.
    pub fn lower_band_occupations(&self, t: f64) -> Vec<(f64, f64)> {
        self.modes
            .iter()
            .map(|m| (m.mode.k(), m.occupation(1, t, self.evaluator)))
            .collect()
    }
}

impl EnergySource for ChargingDynamics {
    fn size(&self) -> usize {
        self.protocol.n_dimers
    }

    fn energy_at(&self, t: f64) -> f64 {
        self.energy_with(t, self.evaluator)
    }

    fn asymptotic_energy(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for m in &self.modes {
            acc.add(m.constant_energy());
        }
        acc.value()
    }

    fn time_step_bound(&self) -> f64 {
        std::f64::consts::PI / (10.0 * self.max_frequency_sum())
    }

    fn origin(&self) -> TraceOrigin {
        TraceOrigin::Xy {
            protocol: self.protocol,
            evaluator: self.evaluator,
        }
    }
}

pub fn energy_stored(protocol: &QuenchProtocol, t: f64, evaluator: Evaluator) -> Result<f64> {
    check_time(t)?;
    Ok(ChargingDynamics::new(protocol)?.energy_with(t, evaluator))
}

pub fn energy_trace(
    protocol: &QuenchProtocol,
    t_end: f64,
    dt: f64,
    evaluator: Evaluator,
) -> Result<EnergyTrace> {
    let dynamics = ChargingDynamics::new(protocol)?.with_evaluator(evaluator);
    EnergyTrace::sample(&dynamics, 0.0, t_end, dt)
}

/// Infinite-time average of the stored energy.
pub fn asymptotic_energy(protocol: &QuenchProtocol) -> Result<f64> {
    Ok(ChargingDynamics::new(protocol)?.asymptotic_energy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn default_point(n: usize) -> QuenchProtocol {
        QuenchProtocol::new(1.25, 0.3, 0.6, n).unwrap()
    }

    fn mode(q: f64, n: usize) -> ModeIndex {
        ModeIndex::new(q, n).unwrap()
    }

    /// exp(A) by scaling and squaring of a Taylor series; test-only oracle.
    fn expm(a: &Matrix4<Complex64>) -> Matrix4<Complex64> {
        let norm = a.norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = a / Complex64::from(2f64.powi(squarings as i32));
        let mut term = Matrix4::identity();
        let mut sum = Matrix4::identity();
        for k in 1..30 {
            term = term * scaled / Complex64::from(k as f64);
            sum += term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    /// Occupations from the Heisenberg picture: a(t) = U† e^{-iH't} U a, and
    /// in the vacuum only the creation components (3, 4) contribute.
    fn occupations_by_propagation(protocol: &QuenchProtocol, m: ModeIndex, t: f64) -> [f64; 2] {
        let u = mode_eigensystem(&protocol.battery().unwrap(), m)
            .unwrap()
            .eigvecs;
        let h = crate::xy::bloch_hamiltonian(&protocol.charger().unwrap(), m)
            .unwrap()
            .entries;
        let prop = expm(&(h * Complex64::new(0.0, -t)));
        let g = u.adjoint() * prop * u;
        [
            g[(0, 2)].norm_sqr() + g[(0, 3)].norm_sqr(),
            g[(1, 2)].norm_sqr() + g[(1, 3)].norm_sqr(),
        ]
    }

    #[test]
    fn protocol_validation() {
        assert!(QuenchProtocol::new(1.0, 0.3, -0.1, 4).is_err());
        assert!(QuenchProtocol::new(0.0, 0.3, 0.1, 4).is_err());
        assert!(QuenchProtocol::new(1.0, -0.3, 0.1, 4).is_err());
        let p = default_point(4);
        assert_eq!(p.battery().unwrap().delta(), 0.3);
        assert!((p.charger().unwrap().delta() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn null_quench_matching_is_identity() {
        let p = QuenchProtocol::new(1.25, 0.3, 0.0, 5).unwrap();
        for m in ModeIndex::all(5) {
            assert_eq!(matching_matrix(&p, m).unwrap().m, Matrix4::identity());
            assert_eq!(occupations(&p, m, 3.7).unwrap(), (0.0, 0.0));
        }
    }

    #[test]
    fn matching_is_unitary() {
        for p in [
            default_point(4),
            default_point(9),
            QuenchProtocol::new(1.1, 0.11, 0.8, 7).unwrap(),
        ] {
            for m in ModeIndex::all(p.n_dimers) {
                let mm = matching_matrix(&p, m).unwrap().m;
                assert!((mm.adjoint() * mm - Matrix4::identity()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn matching_moduli_reference() {
        // |M_ij|² from an independent eigendecomposition of both Bloch matrices
        let m = matching_matrix(&default_point(4), mode(0.5, 4)).unwrap().m;
        #[rustfmt::skip]
        let expected = [
            [9.996001856886747e-01, 0.0, 3.998143113250801e-04, 0.0],
            [0.0, 4.25458118842259e-01, 0.0, 5.745418811577405e-01],
            [3.998143113250803e-04, 0.0, 9.996001856886752e-01, 0.0],
            [0.0, 5.745418811577407e-01, 0.0, 4.25458118842259e-01],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (m[(i, j)].norm_sqr() - expected[i][j]).abs() < 1e-12,
                    "({i},{j})"
                );
            }
        }
    }

    #[test]
    fn occupations_reference_values() {
        let p = default_point(4);
        let (n1, n2) = occupations(&p, mode(0.5, 4), 1.0).unwrap();
        assert!((n1 - 0.0012898435722172917).abs() < 1e-12);
        assert!((n2 - 0.11730845351715065).abs() < 1e-12);
        let prop = occupations_by_propagation(&p, mode(0.5, 4), 1.0);
        assert!((n1 - prop[0]).abs() < 1e-12 && (n2 - prop[1]).abs() < 1e-12);
    }

    #[test]
    fn occupations_vanish_at_start() {
        let p = default_point(6);
        for m in ModeIndex::all(6) {
            let (n1, n2) = occupations(&p, m, 0.0).unwrap();
            assert!(n1.abs() < 1e-10 && n2.abs() < 1e-10);
        }
        assert!(occupations(&p, mode(0.5, 6), -1.0).is_err());
    }

    #[test]
    fn grouped_coefficients_match_literal_sum() {
        let p = QuenchProtocol::new(0.7, 1.4, 0.9, 5).unwrap();
        for m in ModeIndex::all(5) {
            let mm = matching_matrix(&p, m).unwrap();
            let dynamics = ModeDynamics::from_matching(&mm);
            for t in [0.0, 0.37, 2.5, 41.0] {
                let literal = occupations_from_matching(&mm, t);
                for (band, &lit) in literal.iter().enumerate() {
                    let grouped = dynamics.occupation(band, t, Evaluator::Full);
                    assert!((grouped - lit).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn stored_energy_starts_at_zero() {
        for p in [default_point(3), default_point(40)] {
            let e = energy_stored(&p, 0.0, Evaluator::Full).unwrap();
            assert!(e.abs() < 1e-10 * p.n_dimers as f64);
        }
    }

    #[test]
    fn null_quench_trace_is_zero() {
        let p = QuenchProtocol::new(1.25, 0.3, 0.0, 10).unwrap();
        let tr = energy_trace(&p, 5.0, 0.01, Evaluator::Full).unwrap();
        assert!(tr.values.iter().all(|&v| v == 0.0));
        assert_eq!(asymptotic_energy(&p).unwrap(), 0.0);
    }

    #[test]
    fn coarse_time_step_is_rejected() {
        let p = default_point(10);
        let bound = ChargingDynamics::new(&p).unwrap().time_step_bound();
        match energy_trace(&p, 5.0, 2.0 * bound, Evaluator::Full) {
            Err(Error::TimeStepTooCoarse { bound: b, .. }) => assert_eq!(b, bound),
            other => panic!("expected TimeStepTooCoarse, got {other:?}"),
        }
    }

    #[test]
    fn trace_matches_pointwise_evaluation() {
        let p = default_point(2);
        let tr = energy_trace(&p, 3.0, 0.01, Evaluator::Full).unwrap();
        assert_eq!(tr.times.len(), 301);
        for (t, v) in tr.times.iter().zip(&tr.values) {
            assert_eq!(*v, energy_stored(&p, *t, Evaluator::Full).unwrap());
        }
    }

    #[test]
    fn release_freezes_energy() {
        let d = ChargingDynamics::new(&default_point(8)).unwrap();
        let at_tau = d.energy_at(4.2);
        assert_eq!(d.energy_with_release(4.2, 100.0), at_tau);
        assert_eq!(d.energy_with_release(4.2, 1.0), d.energy_at(1.0));
    }

    #[test]
    fn asymptotic_matches_long_time_average() {
        let p = default_point(60);
        let d = ChargingDynamics::new(&p).unwrap();
        // average over a window short of the first revival (~2.26 𝒩)
        let times = crate::numeric::uniform_grid(20.0, 120.0, 0.01);
        let mean = crate::numeric::mean_and_std(&d.sample(&times)).0;
        let e_inf = d.asymptotic_energy();
        assert!(((mean - e_inf) / e_inf).abs() < 5e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn gauge_invariance(
            gamma in 0.2f64..2.0, delta0 in 0.0f64..1.5, delta1 in 0.05f64..1.0,
            n in 2usize..7, t in 0.0f64..30.0,
            phases in proptest::array::uniform8(0.0f64..std::f64::consts::TAU),
        ) {
            let p = QuenchProtocol::new(gamma, delta0, delta1, n).unwrap();
            let spectra: Vec<_> = ModeIndex::all(n).map(|m| {
                let u = mode_eigensystem(&p.battery().unwrap(), m).unwrap();
                let v = mode_eigensystem(&p.charger().unwrap(), m).unwrap();
                (u, v)
            }).collect();
            let reference = ChargingDynamics::from_spectra(&p, &spectra);
            let rotated: Vec<_> = spectra.iter().map(|(u, v)| (
                u.rephased([phases[0], phases[1], phases[2], phases[3]]),
                v.rephased([phases[4], phases[5], phases[6], phases[7]]),
            )).collect();
            let rotated = ChargingDynamics::from_spectra(&p, &rotated);
            prop_assert!((reference.energy_at(t) - rotated.energy_at(t)).abs() <= 1e-10);
            prop_assert!((reference.asymptotic_energy() - rotated.asymptotic_energy()).abs() <= 1e-10);
            for (a, b) in reference.modes().iter().zip(rotated.modes()) {
                for band in 0..2 {
                    prop_assert!((a.occupation(band, t, Evaluator::Full)
                        - b.occupation(band, t, Evaluator::Full)).abs() <= 1e-10);
                }
            }
        }

        #[test]
        fn occupations_bounded_and_match_propagation(
            gamma in 0.2f64..2.0, delta0 in 0.0f64..1.5, delta1 in 0.0f64..1.0,
            n in 2usize..8, t in 0.0f64..50.0,
        ) {
            let p = QuenchProtocol::new(gamma, delta0, delta1, n).unwrap();
            for m in ModeIndex::all(n) {
                let (n1, n2) = occupations(&p, m, t).unwrap();
                for x in [n1, n2] {
                    prop_assert!((-1e-10..=1.0 + 1e-10).contains(&x));
                }
                let prop = occupations_by_propagation(&p, m, t);
                prop_assert!((n1 - prop[0]).abs() < 1e-9 && (n2 - prop[1]).abs() < 1e-9);
            }
        }

        #[test]
        fn energy_within_bounds(
            gamma in 0.2f64..2.0, delta0 in 0.0f64..1.5, delta1 in 0.0f64..1.0,
            n in 2usize..12, t in 0.0f64..80.0,
        ) {
            let p = QuenchProtocol::new(gamma, delta0, delta1, n).unwrap();
            let e = energy_stored(&p, t, Evaluator::Full).unwrap();
            // spectrum of H_B is symmetric about zero
            let bound = -2.0 * crate::xy::ground_energy(&p.battery().unwrap()) + 1e-9;
            prop_assert!(e >= -1e-10 * n as f64);
            prop_assert!(e <= bound);
        }
    }
}
