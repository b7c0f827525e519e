//! Momentum-space description of the dimerized XY chain.
//!
//! After the Jordan–Wigner mapping every half-integer momentum `q` of the
//! even-parity sector carries a 4×4 Bloch matrix acting on
//! `(A_q, B_q, A†_{𝒩−q}, B†_{𝒩−q})`. Its spectrum is `{±ω₁, ±ω₂}` and its
//! eigenvectors define the quasiparticles used by the quench dynamics.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues closer than this are treated as one degenerate eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Half-width of the band around the critical lines `γ²δ² = 1`, `δ² = γ²`.
pub const CRITICAL_TOL: f64 = 1e-12;

const EIGEN_MAX_SWEEPS: usize = 1000;

/// One instance of the dimerized XY Hamiltonian. Energies are in units of
/// the exchange `J`, which is fixed to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    gamma: f64,
    delta: f64,
    n_dimers: usize,
}

impl ChainParams {
    pub const ENERGY_SCALE: f64 = 1.0;

    pub fn new(gamma: f64, delta: f64, n_dimers: usize) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be > 0, got {gamma}"
            )));
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must be >= 0, got {delta}"
            )));
        }
        if n_dimers < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 dimers, got {n_dimers}"
            )));
        }
        Ok(Self {
            gamma,
            delta,
            n_dimers,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n_dimers(&self) -> usize {
        self.n_dimers
    }

    pub fn n_sites(&self) -> usize {
        2 * self.n_dimers
    }

    pub fn energy_scale(&self) -> f64 {
        Self::ENERGY_SCALE
    }

    pub fn modes(&self) -> impl ExactSizeIterator<Item = ModeIndex> + Clone {
        ModeIndex::all(self.n_dimers)
    }
}

/// Half-integer momentum label `q ∈ {1/2, 3/2, …, n − 1/2}` of a chain with
/// `n` unit cells (dimers for the XY chain, sites for the Ising chain).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    twice_q: usize,
    n_cells: usize,
}

impl ModeIndex {
    pub fn new(q: f64, n_cells: usize) -> Result<Self> {
        let twice = 2.0 * q;
        let out_of_range = Error::ModeOutOfRange { q, n: n_cells };
        if !twice.is_finite() || twice.fract() != 0.0 || twice < 1.0 {
            return Err(out_of_range);
        }
        Self::from_twice_q(twice as usize, n_cells).map_err(|_| out_of_range)
    }

    /// Builds the mode from the odd integer `2q`.
    pub fn from_twice_q(twice_q: usize, n_cells: usize) -> Result<Self> {
        if twice_q % 2 == 1 && twice_q < 2 * n_cells {
            Ok(Self { twice_q, n_cells })
        } else {
            Err(Error::ModeOutOfRange {
                q: twice_q as f64 / 2.0,
                n: n_cells,
            })
        }
    }

    /// All modes in ascending order.
    pub fn all(n_cells: usize) -> impl ExactSizeIterator<Item = ModeIndex> + Clone {
        (0..n_cells).map(move |i| ModeIndex {
            twice_q: 2 * i + 1,
            n_cells,
        })
    }

    pub fn q(&self) -> f64 {
        self.twice_q as f64 / 2.0
    }

    pub fn twice_q(&self) -> usize {
        self.twice_q
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Position in the ascending enumeration of all modes.
    pub fn ordinal(&self) -> usize {
        self.twice_q / 2
    }

    /// `k = 2πq/n`, always inside `(0, 2π)`.
    pub fn k(&self) -> f64 {
        PI * self.twice_q as f64 / self.n_cells as f64
    }

    /// The partner mode `n − q` paired with this one by the Bogoliubov terms.
    pub fn partner(&self) -> ModeIndex {
        ModeIndex {
            twice_q: 2 * self.n_cells - self.twice_q,
            n_cells: self.n_cells,
        }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice_q)
    }
}

fn check_mode(params: &ChainParams, mode: ModeIndex) -> Result<()> {
    if mode.n_cells == params.n_dimers {
        Ok(())
    } else {
        Err(Error::ModeOutOfRange {
            q: mode.q(),
            n: params.n_dimers,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochMatrix {
    pub entries: Matrix4<Complex64>,
    pub zq: Complex64,
    pub wq: Complex64,
}

/// Per-mode Bloch matrix in the basis `(A_q, B_q, A†_{𝒩−q}, B†_{𝒩−q})`.
///
/// ```text
///        ⎛  0    Z    0    W ⎞
///   H =  ⎜  Z*   0   −W*   0 ⎟      Z = −[(1+δ) + (1−δ) e^{−ik}]
///        ⎜  0   −W    0   −Z ⎟      W = −γ[(1+δ) − (1−δ) e^{−ik}]
///        ⎝  W*   0   −Z*   0 ⎠
/// ```
///
/// The (4,1) entry is `+W*` so the matrix is Hermitian; its eigenvalues are
/// then exactly the band energies of [`dispersion`].
pub fn bloch_hamiltonian(params: &ChainParams, mode: ModeIndex) -> Result<BlochMatrix> {
    check_mode(params, mode)?;
    let d = params.delta;
    let phase = Complex64::from_polar(1.0, -mode.k());
    let zq = -(Complex64::from(1.0 + d) + phase * (1.0 - d));
    let wq = -(Complex64::from(1.0 + d) - phase * (1.0 - d)) * params.gamma;
    let zero = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let entries = Matrix4::new(
        zero,      zq,         zero,       wq,
        zq.conj(), zero,       -wq.conj(), zero,
        zero,      -wq,        zero,       -zq,
        wq.conj(), zero,       -zq.conj(), zero,
    );
    Ok(BlochMatrix { entries, zq, wq })
}

/// Which sign of `±` in the closed-form dispersion a band came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

fn branch_values(params: &ChainParams, mode: ModeIndex) -> (f64, f64) {
    let half_k = 0.5 * mode.k();
    let (s, c) = half_k.sin_cos();
    let (g, d) = (params.gamma, params.delta);
    let band = |sign: f64| {
        2.0 * ((1.0 + sign * g * d).powi(2) * c * c + (d + sign * g).powi(2) * s * s).sqrt()
    };
    (band(1.0), band(-1.0))
}

/// Band energies `ω_{1,q} ≥ ω_{2,q} ≥ 0`.
pub fn dispersion(params: &ChainParams, mode: ModeIndex) -> Result<(f64, f64)> {
    check_mode(params, mode)?;
    let (plus, minus) = branch_values(params, mode);
    Ok(if plus >= minus {
        (plus, minus)
    } else {
        (minus, plus)
    })
}

/// Records how the eigenvector matrix was made unique.
///
/// Columns are ordered `(+ω₁, +ω₂, −ω₁, −ω₂)`. Each degenerate eigenspace is
/// spanned by Gram–Schmidt on the projections of `e₁…e₄` (in that order),
/// then every column is rephased so its largest-modulus entry (lowest row on
/// ties) is real and positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaugeTag {
    pub branch1: Branch,
    pub branch2: Branch,
    pub pivot_rows: [usize; 4],
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    pub mode: ModeIndex,
    pub omega1: f64,
    pub omega2: f64,
    pub eigvecs: Matrix4<Complex64>,
    pub gauge: GaugeTag,
}

impl ModeSpectrum {
    /// Eigenvalues in column order `(ω₁, ω₂, −ω₁, −ω₂)`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        [self.omega1, self.omega2, -self.omega1, -self.omega2]
    }

    /// Same eigensystem with column `j` multiplied by `e^{iφ_j}`. Physical
    /// quantities must not notice.
    pub fn rephased(&self, phases: [f64; 4]) -> ModeSpectrum {
        let mut out = self.clone();
        for (j, phi) in phases.iter().enumerate() {
            let u = Complex64::from_polar(1.0, *phi);
            for i in 0..4 {
                out.eigvecs[(i, j)] *= u;
            }
        }
        out
    }
}

fn canonical_subspace_basis(vectors: &[Vector4<Complex64>]) -> Vec<Vector4<Complex64>> {
    let mut basis: Vec<Vector4<Complex64>> = Vec::with_capacity(vectors.len());
    for j in 0..4 {
        // projection of e_j onto span(vectors)
        let mut w = Vector4::zeros();
        for v in vectors {
            w += v * v[j].conj();
        }
        for b in &basis {
            let overlap = b.dotc(&w);
            w -= b * overlap;
        }
        let norm = w.norm();
        if norm > 1e-6 {
            basis.push(w / Complex64::from(norm));
        }
        if basis.len() == vectors.len() {
            break;
        }
    }
    basis
}

fn fix_column_phase(col: &mut Vector4<Complex64>) -> usize {
    let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = col
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    let p = col[pivot];
    let r = p.norm();
    if r > 0.0 {
        let rotation = p.conj() / r;
        for z in col.iter_mut() {
            *z *= rotation;
        }
        col[pivot] = Complex64::new(r, 0.0);
    }
    pivot
}

/// Gauge-fixed eigensystem of the Bloch matrix.
pub fn mode_eigensystem(params: &ChainParams, mode: ModeIndex) -> Result<ModeSpectrum> {
    let bloch = bloch_hamiltonian(params, mode)?;
    let eig = bloch
        .entries
        .try_symmetric_eigen(f64::EPSILON, EIGEN_MAX_SWEEPS)
        .ok_or(Error::EigenSolverFailed { dim: 4 })?;

    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors: Vec<Vector4<Complex64>> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();

    let mut degenerate = false;
    let mut start = 0;
    while start < 4 {
        let mut end = start + 1;
        while end < 4 && values[end] - values[end - 1] <= DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            degenerate = true;
            let basis = canonical_subspace_basis(&vectors[start..end]);
            if basis.len() != end - start {
                return Err(Error::EigenSolverFailed { dim: 4 });
            }
            vectors.splice(start..end, basis);
        }
        start = end;
    }

    // ascending (−ω₁, −ω₂, +ω₂, +ω₁) → (+ω₁, +ω₂, −ω₁, −ω₂)
    let layout = [3usize, 2, 0, 1];
    let mut eigvecs = Matrix4::zeros();
    let mut pivot_rows = [0usize; 4];
    for (col, &src) in layout.iter().enumerate() {
        let mut v = vectors[src];
        pivot_rows[col] = fix_column_phase(&mut v);
        eigvecs.set_column(col, &v);
    }

    let omega1 = 0.5 * (values[3] - values[0]);
    let omega2 = 0.5 * (values[2] - values[1]);
    let (plus, minus) = branch_values(params, mode);
    let (branch1, branch2) = if plus >= minus {
        (Branch::Plus, Branch::Minus)
    } else {
        (Branch::Minus, Branch::Plus)
    };

    Ok(ModeSpectrum {
        mode,
        omega1: omega1.max(0.0),
        omega2: omega2.max(0.0),
        eigvecs,
        gauge: GaugeTag {
            branch1,
            branch2,
            pivot_rows,
            degenerate,
        },
    })
}

/// Ground phases of the dimerized XY chain for `γ, δ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Region 1: ferromagnet along x.
    FerromagnetX,
    /// Region 2: spin-1 antiferromagnet along x.
    Spin1AntiferroX,
    /// Region 3: dimers with spins aligned along z.
    DimerAlignedZ,
    /// Region 4: dimers with spins anti-aligned along z.
    DimerAntialignedZ,
    /// On the line `γ²δ² = 1`.
    CriticalGammaDelta,
    /// On the line `δ² = γ²`.
    CriticalDeltaGamma,
}

impl Phase {
    pub fn region(&self) -> Option<u8> {
        match self {
            Phase::FerromagnetX => Some(1),
            Phase::Spin1AntiferroX => Some(2),
            Phase::DimerAlignedZ => Some(3),
            Phase::DimerAntialignedZ => Some(4),
            Phase::CriticalGammaDelta | Phase::CriticalDeltaGamma => None,
        }
    }

    pub fn is_critical(&self) -> bool {
        self.region().is_none()
    }

    pub fn label(&self) -> &'static str {
        match self {
            Phase::FerromagnetX => "ferromagnet-x",
            Phase::Spin1AntiferroX => "spin1-antiferro-x",
            Phase::DimerAlignedZ => "dimer-aligned-z",
            Phase::DimerAntialignedZ => "dimer-antialigned-z",
            Phase::CriticalGammaDelta => "critical-gamma-delta",
            Phase::CriticalDeltaGamma => "critical-delta-gamma",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.region() {
            Some(r) => write!(f, "region={r} {}", self.label()),
            None => write!(f, "region={}", self.label()),
        }
    }
}

/// Phase of the `(γ, δ)` point. At the multicritical point `γ = δ = 1` both
/// critical conditions hold and `CriticalGammaDelta` is reported.
pub fn classify_phase(gamma: f64, delta: f64) -> Result<Phase> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be > 0, got {gamma}"
        )));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must be >= 0, got {delta}"
        )));
    }
    let gd = gamma * delta;
    if (gd * gd - 1.0).abs() <= CRITICAL_TOL {
        return Ok(Phase::CriticalGammaDelta);
    }
    if (delta * delta - gamma * gamma).abs() <= CRITICAL_TOL {
        return Ok(Phase::CriticalDeltaGamma);
    }
    Ok(match (gd < 1.0, delta < gamma) {
        (true, true) => Phase::FerromagnetX,
        (true, false) => Phase::DimerAntialignedZ,
        (false, false) => Phase::Spin1AntiferroX,
        (false, true) => Phase::DimerAlignedZ,
    })
}

/// `−½ Σ_q (ω₁ + ω₂)`: energy of the quasiparticle vacuum.
pub fn ground_energy(params: &ChainParams) -> f64 {
    let sum = crate::numeric::compensated_sum(params.modes().map(|m| {
        let (w1, w2) = branch_values(params, m);
        w1 + w2
    }));
    -0.5 * sum
}

/// Smallest band energy over all modes, the finite-size gap.
pub fn min_gap(params: &ChainParams) -> f64 {
    params
        .modes()
        .map(|m| {
            let (a, b) = branch_values(params, m);
            a.min(b)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: f64, d: f64, n: usize) -> ChainParams {
        ChainParams::new(g, d, n).unwrap()
    }

    fn mode(q: f64, n: usize) -> ModeIndex {
        ModeIndex::new(q, n).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn params_validation() {
        assert!(ChainParams::new(0.0, 0.3, 4).is_err());
        assert!(ChainParams::new(-1.0, 0.3, 4).is_err());
        assert!(ChainParams::new(1.0, -0.1, 4).is_err());
        assert!(ChainParams::new(1.0, 0.3, 1).is_err());
        assert_eq!(params(1.0, 0.3, 4).energy_scale(), 1.0);
    }

    #[test]
    fn mode_set_is_half_integers() {
        let qs: Vec<f64> = ModeIndex::all(3).map(|m| m.q()).collect();
        assert_eq!(qs, vec![0.5, 1.5, 2.5]);
        assert!(ModeIndex::new(1.0, 3).is_err());
        assert!(ModeIndex::new(3.5, 3).is_err());
        assert!(ModeIndex::new(-0.5, 3).is_err());
        let m = mode(0.5, 3);
        assert_eq!(m.partner().q(), 2.5);
        assert!(m.k() > 0.0 && m.k() < 2.0 * PI);
    }

    #[test]
    fn bloch_rejects_foreign_mode() {
        assert!(bloch_hamiltonian(&params(1.0, 0.5, 4), mode(0.5, 3)).is_err());
    }

    #[test]
    fn fully_dimerized_bloch_entries() {
        for q in [0.5, 1.5, 2.5] {
            let b = bloch_hamiltonian(&params(1.0, 1.0, 3), mode(q, 3)).unwrap();
            assert!(close(b.zq, Complex64::new(-2.0, 0.0), 1e-15));
            assert!(close(b.wq, Complex64::new(-2.0, 0.0), 1e-15));
        }
    }

    #[test]
    fn undimerized_z_vanishes_at_zone_edge() {
        // q = 𝒩/2 = 3/2 for 𝒩 = 3, so k = π
        let b = bloch_hamiltonian(&params(0.7, 0.0, 3), mode(1.5, 3)).unwrap();
        assert!(b.zq.norm() < 1e-15);
    }

    #[test]
    fn bloch_z_w_reference_values() {
        // evaluated independently: Z = -[(1.3) + 0.7 e^{-iπ/4}], W = -1.25[(1.3) - 0.7 e^{-iπ/4}]
        let b = bloch_hamiltonian(&params(1.25, 0.3, 4), mode(0.5, 4)).unwrap();
        assert!(close(
            b.zq,
            Complex64::new(-1.7949747468305834, 0.4949747468305832),
            1e-14
        ));
        assert!(close(
            b.wq,
            Complex64::new(-1.006281566461771, -0.618718433538229),
            1e-14
        ));
    }

    #[test]
    fn bloch_is_hermitian_and_traceless() {
        for (g, d) in [(1.25, 0.3), (0.4, 2.0), (3.0, 0.0)] {
            let p = params(g, d, 5);
            for m in p.modes() {
                let h = bloch_hamiltonian(&p, m).unwrap().entries;
                assert!((h - h.adjoint()).norm() <= 1e-14);
                assert_eq!(h.trace(), Complex64::new(0.0, 0.0));
                for i in 0..4 {
                    assert_eq!(h[(i, i)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn dispersion_examples() {
        let (w1, w2) = dispersion(&params(1.0, 1.0, 4), mode(1.5, 4)).unwrap();
        assert!((w1 - 4.0).abs() < 1e-14 && w2.abs() < 1e-14);

        // πq/𝒩 = π/2 at q = 3/2, 𝒩 = 3
        let (w1, w2) = dispersion(&params(1.25, 0.3, 3), mode(1.5, 3)).unwrap();
        assert!((w1 - 3.1).abs() < 1e-14);
        assert!((w2 - 1.9).abs() < 1e-14);

        // on γδ = 1 the lower band closes as πq/𝒩 → 0
        let p = params(1.1, 1.0 / 1.1, 2000);
        let (_, w2) = dispersion(&p, mode(0.5, 2000)).unwrap();
        assert!(w2 < 1e-3);
    }

    #[test]
    fn dispersion_is_symmetric_under_partner() {
        let p = params(1.25, 0.3, 7);
        for m in p.modes() {
            let a = dispersion(&p, m).unwrap();
            let b = dispersion(&p, m.partner()).unwrap();
            assert!((a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
        }
    }

    /// Roots of the characteristic polynomial, computed without any
    /// eigensolver: the spectrum is ±-symmetric, so det(λ - H) = λ⁴ + c₂λ² + c₀
    /// with c₂ = -tr(H²)/2 and c₀ = det H.
    fn charpoly_omegas(h: &Matrix4<Complex64>) -> (f64, f64) {
        let h2 = h * h;
        let c2 = -0.5 * h2.trace().re;
        let c0 = h.determinant().re;
        let disc = (c2 * c2 - 4.0 * c0).max(0.0).sqrt();
        let hi = 0.5 * (-c2 + disc);
        // product of the two roots is c₀; avoids the cancellation in -c₂ - disc
        let lo = if hi > 0.0 { c0 / hi } else { 0.0 };
        (hi.max(0.0).sqrt(), lo.max(0.0).sqrt())
    }

    #[test]
    fn eigenvalues_match_characteristic_polynomial() {
        let p = params(1.25, 0.3, 4);
        let m = mode(1.5, 4);
        let h = bloch_hamiltonian(&p, m).unwrap().entries;
        let (r1, r2) = charpoly_omegas(&h);
        let spec = mode_eigensystem(&p, m).unwrap();
        assert!((spec.omega1 - r1).abs() < 1e-12);
        assert!((spec.omega2 - r2).abs() < 1e-12);
        let (d1, d2) = dispersion(&p, m).unwrap();
        assert!((spec.omega1 - d1).abs() < 1e-12);
        assert!((spec.omega2 - d2).abs() < 1e-12);
    }

    fn check_eigensystem(p: &ChainParams) {
        for m in p.modes() {
            let spec = mode_eigensystem(p, m).unwrap();
            let u = spec.eigvecs;
            let id = u.adjoint() * u;
            assert!(
                (id - Matrix4::identity()).norm() < 1e-12,
                "unitarity at {m}"
            );
            let h = bloch_hamiltonian(p, m).unwrap().entries;
            let diag = u.adjoint() * h * u;
            let ev = spec.eigenvalues();
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { ev[i] } else { 0.0 };
                    assert!((diag[(i, j)] - Complex64::from(want)).norm() < 1e-12);
                }
            }
            let (d1, d2) = dispersion(p, m).unwrap();
            assert!((spec.omega1 - d1).abs() < 1e-12 && (spec.omega2 - d2).abs() < 1e-12);
            assert!(spec.omega1 >= spec.omega2 && spec.omega2 >= 0.0);
            for j in 0..4 {
                let pivot = spec.gauge.pivot_rows[j];
                let z = u[(pivot, j)];
                assert_eq!(z.im, 0.0);
                assert!(z.re > 0.0);
                let max = (0..4).map(|i| u[(i, j)].norm()).fold(0.0, f64::max);
                assert!(z.re >= max * (1.0 - 1e-12));
            }
            let rebuilt =
                u * Matrix4::from_diagonal(&Vector4::from(ev.map(Complex64::from))) * u.adjoint();
            assert!((rebuilt - h).norm() < 1e-12);
        }
    }

    #[test]
    fn eigensystem_invariants() {
        check_eigensystem(&params(1.25, 0.3, 4));
        check_eigensystem(&params(1.1, 0.8, 9));
        check_eigensystem(&params(0.25, 0.5, 6));
        check_eigensystem(&params(2.0, 3.0, 5));
    }

    #[test]
    fn flat_band_degenerate_case_is_orthonormal() {
        let p = params(1.0, 1.0, 4);
        check_eigensystem(&p);
        let spec = mode_eigensystem(&p, mode(0.5, 4)).unwrap();
        assert!((spec.omega1 - 4.0).abs() < 1e-12);
        assert!(spec.omega2.abs() < 1e-12);
        assert!(spec.gauge.degenerate);
        // deterministic
        assert_eq!(spec, mode_eigensystem(&p, mode(0.5, 4)).unwrap());
    }

    #[test]
    fn branch_bookkeeping() {
        let spec = mode_eigensystem(&params(1.25, 0.3, 4), mode(0.5, 4)).unwrap();
        assert_eq!(spec.gauge.branch1, Branch::Plus);
        assert_eq!(spec.gauge.branch2, Branch::Minus);
    }

    #[test]
    fn phase_examples() {
        assert_eq!(classify_phase(1.0, 0.5).unwrap(), Phase::FerromagnetX);
        assert_eq!(classify_phase(0.25, 0.5).unwrap(), Phase::DimerAntialignedZ);
        assert_eq!(
            classify_phase(1.1, 1.0 / 1.1).unwrap(),
            Phase::CriticalGammaDelta
        );
        assert_eq!(classify_phase(1.0, 3.0).unwrap(), Phase::Spin1AntiferroX);
        assert_eq!(classify_phase(5.0, 0.5).unwrap(), Phase::DimerAlignedZ);
        assert_eq!(classify_phase(0.7, 0.7).unwrap(), Phase::CriticalDeltaGamma);
        assert_eq!(classify_phase(1.0, 1.0).unwrap(), Phase::CriticalGammaDelta);
        assert!(classify_phase(0.0, 0.5).is_err());
        assert!(classify_phase(-1.0, 0.5).is_err());
        assert_eq!(
            classify_phase(1.0, 0.5).unwrap().to_string(),
            "region=1 ferromagnet-x"
        );
    }

    #[test]
    fn ground_energy_examples() {
        assert!((ground_energy(&params(1.0, 1.0, 2)) + 4.0).abs() < 1e-14);
        // -(1/2) Σ over q = 1/2, 3/2 of the band energies, evaluated independently
        assert!((ground_energy(&params(1.25, 0.3, 2)) + 4.538412569978075).abs() < 1e-13);
        assert!(ground_energy(&params(0.3, 2.0, 5)) < 0.0);
    }

    #[test]
    fn gap_closes_only_on_critical_lines() {
        let n = 2000;
        let bound = 10.0 / n as f64;
        for (g, d) in [(1.1, 1.0 / 1.1), (0.8, 0.8), (2.0, 0.5)] {
            assert!(classify_phase(g, d).unwrap().is_critical());
            assert!(min_gap(&params(g, d, n)) < bound, "({g},{d})");
        }
        for (g, d) in [(1.0, 0.5), (0.25, 0.5), (1.0, 3.0), (5.0, 0.5)] {
            assert!(!classify_phase(g, d).unwrap().is_critical());
            assert!(min_gap(&params(g, d, n)) > 0.1, "({g},{d})");
        }
    }
}
