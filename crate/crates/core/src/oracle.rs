//! Brute-force reference: dense spin Hamiltonians in the full `2^N` space,
//! even-parity ground states and exact evolution by spectral decomposition.
//!
//! Nothing here uses fermions or momenta, so agreement with the closed forms
//! checks the whole Jordan–Wigner bookkeeping including the boundary term.
//!
//! Basis convention: bit `N−1−j` of a basis index is site `j` (site 0 is the
//! most significant bit, as in a left-to-right Kronecker product), and a set
//! bit means spin down.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ising::IsingParams;
use crate::numeric::NeumaierSum;
use crate::quench::QuenchProtocol;
use crate::trace::{EnergySource, EnergyTrace, TraceOrigin};

pub const MAX_SITES: usize = 12;
pub const MIN_SITES: usize = 2;

/// Gaps below this count as degeneracies.
pub const DEGENERACY_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinModel {
    /// `−Σ_j [1 − (−1)^j δ] [(1+γ)/2 σˣσˣ + (1−γ)/2 σʸσʸ]`
    DimerizedXy { gamma: f64, delta: f64 },
    /// `½ Σ_j [σˣσˣ + h σᶻ]`
    TransverseIsing { h: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinHamiltonian {
    pub n_sites: usize,
    pub kind: SpinModel,
    pub matrix: DMatrix<f64>,
}

#[inline]
fn bit(n_sites: usize, site: usize) -> usize {
    1 << (n_sites - 1 - site)
}

#[inline]
fn z_sign(state: usize, n_sites: usize, site: usize) -> f64 {
    if state & bit(n_sites, site) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn build_hamiltonian(kind: SpinModel, n_sites: usize) -> Result<SpinHamiltonian> {
    if !(MIN_SITES..=MAX_SITES).contains(&n_sites) {
        return Err(Error::SizeOutOfRange {
            n_sites,
            reason: "exact diagonalization supports 2 to 12 sites",
        });
    }
    let dim = 1usize << n_sites;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    match kind {
        SpinModel::DimerizedXy { gamma, delta } => {
            if !n_sites.is_multiple_of(2) {
                return Err(Error::SizeOutOfRange {
                    n_sites,
                    reason: "the dimerized chain needs an even number of sites",
                });
            }
            let cx = 0.5 * (1.0 + gamma);
            let cy = 0.5 * (1.0 - gamma);
            for j in 1..=n_sites {
                let strength = if j % 2 == 0 { 1.0 - delta } else { 1.0 + delta };
                let (a, b) = (j - 1, j % n_sites);
                let flip = bit(n_sites, a) | bit(n_sites, b);
                for s in 0..dim {
                    // σʸσʸ: −1 on aligned pairs, +1 on anti-aligned ones
                    let yy = -z_sign(s, n_sites, a) * z_sign(s, n_sites, b);
                    h[(s ^ flip, s)] -= strength * (cx + cy * yy);
                }
            }
        }
        SpinModel::TransverseIsing { h: field } => {
            for j in 0..n_sites {
                let flip = bit(n_sites, j) | bit(n_sites, (j + 1) % n_sites);
                for s in 0..dim {
                    h[(s ^ flip, s)] += 0.5;
                    h[(s, s)] += 0.5 * field * z_sign(s, n_sites, j);
                }
            }
        }
    }
    Ok(SpinHamiltonian {
        n_sites,
        kind,
        matrix: h,
    })
}

/// Eigenvalue of `Π = ⊗ σᶻ` on a basis state.
pub fn parity(state: usize) -> f64 {
    if state.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn sector(n_sites: usize, even: bool) -> Vec<usize> {
    (0..1usize << n_sites)
        .filter(|&s| (parity(s) > 0.0) == even)
        .collect()
}

fn block(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Eigenpairs sorted by ascending eigenvalue.
fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let dim = m.nrows();
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

impl SpinHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// `max |[H, Π]_{ij}|`; Π is diagonal so the commutator entry is
    /// `H_ij (π_j − π_i)`.
    pub fn parity_commutator_norm(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                let c = self.matrix[(i, j)] * (parity(j) - parity(i));
                worst = worst.max(c.abs());
            }
        }
        worst
    }

    /// All eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn expectation(&self, psi: &DVector<Complex64>) -> f64 {
        let mut acc = NeumaierSum::new();
        for j in 0..self.dim() {
            if psi[j] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut col = Complex64::new(0.0, 0.0);
            for i in 0..self.dim() {
                col += psi[i].conj() * self.matrix[(i, j)];
            }
            acc.add((col * psi[j]).re);
        }
        acc.value()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Real, normalized, supported on the even sector only.
    pub vector: DVector<f64>,
    /// Gap to the next even-sector level.
    pub even_gap: f64,
    /// Odd-sector ground energy minus the even one.
    pub sector_gap: f64,
}

impl GroundState {
    /// The even-sector ground state is not unique, so a quench from it is
    /// ill-defined.
    pub fn is_degenerate(&self) -> bool {
        self.even_gap < DEGENERACY_GAP
    }

    pub fn sectors_nearly_degenerate(&self) -> bool {
        self.sector_gap.abs() < DEGENERACY_GAP
    }
}

pub fn even_sector_ground_state(h: &SpinHamiltonian) -> Result<GroundState> {
    let even = sector(h.n_sites, true);
    let odd = sector(h.n_sites, false);
    let (values, vectors) = sorted_eigen(block(&h.matrix, &even));
    let mut odd_values: Vec<f64> = block(&h.matrix, &odd)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    odd_values.sort_by(f64::total_cmp);

    let mut vector = DVector::zeros(h.dim());
    for (r, &s) in even.iter().enumerate() {
        vector[s] = vectors[(r, 0)];
    }
    // fix the overall sign: largest-modulus component positive
    let pivot = vector.iamax();
    if vector[pivot] < 0.0 {
        vector.neg_mut();
    }
    let even_gap = values.get(1).map_or(f64::INFINITY, |v| v - values[0]);
    let ground = GroundState {
        energy: values[0],
        vector,
        even_gap,
        sector_gap: odd_values[0] - values[0],
    };
    if ground.is_degenerate() {
        log::warn!(
            "even-sector ground state is degenerate (gap {:.3e})",
            ground.even_gap
        );
    }
    if ground.sectors_nearly_degenerate() {
        log::warn!(
            "even and odd sectors are nearly degenerate (gap {:.3e})",
            ground.sector_gap
        );
    }
    Ok(ground)
}

/// Exact evolution of the battery ground state under a charger Hamiltonian.
///
/// Both Hamiltonians conserve parity, so only the even block of the charger
/// is diagonalized.
#[derive(Debug, Clone)]
pub struct QuenchEvolution {
    n_sites: usize,
    ground: GroundState,
    even: Vec<usize>,
    levels: Vec<f64>,
    eigvecs: DMatrix<f64>,
    /// Overlaps of the initial state with the charger eigenvectors.
    weights: DVector<f64>,
    /// Battery Hamiltonian in the charger eigenbasis (even block).
    battery_in_charger_basis: DMatrix<f64>,
}

impl QuenchEvolution {
    pub fn new(battery: &SpinHamiltonian, charger: &SpinHamiltonian) -> Result<Self> {
        if battery.n_sites != charger.n_sites {
            return Err(Error::InvalidParameter(format!(
                "battery has {} sites but charger has {}",
                battery.n_sites, charger.n_sites
            )));
        }
        let ground = even_sector_ground_state(battery)?;
        let even = sector(battery.n_sites, true);
        let (levels, eigvecs) = sorted_eigen(block(&charger.matrix, &even));
        let psi0 = DVector::from_iterator(even.len(), even.iter().map(|&s| ground.vector[s]));
        let weights = eigvecs.tr_mul(&psi0);
        let hb = block(&battery.matrix, &even);
        let battery_in_charger_basis = eigvecs.tr_mul(&(hb * &eigvecs));
        Ok(Self {
            n_sites: battery.n_sites,
            ground,
            even,
            levels,
            eigvecs,
            weights,
            battery_in_charger_basis,
        })
    }

    pub fn ground_state(&self) -> &GroundState {
        &self.ground
    }

    /// Full `2^N` state at time `t`.
    pub fn state_at(&self, t: f64) -> DVector<Complex64> {
        let dim = self.even.len();
        let mut out = DVector::from_element(1 << self.n_sites, Complex64::new(0.0, 0.0));
        for r in 0..dim {
            let mut amp = Complex64::new(0.0, 0.0);
            for n in 0..dim {
                amp += Complex64::from_polar(self.weights[n], -self.levels[n] * t)
                    * self.eigvecs[(r, n)];
            }
            out[self.even[r]] = amp;
        }
        out
    }

    /// `⟨Ψ(t)|H_B|Ψ(t)⟩ − E_gs`.
    pub fn energy_at(&self, t: f64) -> f64 {
        let dim = self.levels.len();
        let u = DVector::from_fn(dim, |n, _| self.weights[n] * (self.levels[n] * t).cos());
        let v = DVector::from_fn(dim, |n, _| self.weights[n] * (self.levels[n] * t).sin());
        let k = &self.battery_in_charger_basis;
        let e = u.dot(&(k * &u)) + v.dot(&(k * &v));
        e - self.ground.energy
    }
}

impl EnergySource for QuenchEvolution {
    fn size(&self) -> usize {
        self.n_sites
    }

    fn energy_at(&self, t: f64) -> f64 {
        QuenchEvolution::energy_at(self, t)
    }

    /// Diagonal-ensemble value, with cross terms inside degenerate charger
    /// levels kept.
    fn asymptotic_energy(&self) -> f64 {
        let k = &self.battery_in_charger_basis;
        let mut acc = NeumaierSum::new();
        for n in 0..self.levels.len() {
            for m in n..self.levels.len() {
                if self.levels[m] - self.levels[n] > DEGENERACY_GAP {
                    break;
                }
                let factor = if m == n { 1.0 } else { 2.0 };
                acc.add(factor * self.weights[n] * self.weights[m] * k[(n, m)]);
            }
        }
        acc.value() - self.ground.energy
    }

    /// Spectral evolution is exact at any step.
    fn time_step_bound(&self) -> f64 {
        f64::INFINITY
    }

    fn origin(&self) -> TraceOrigin {
        TraceOrigin::Oracle {
            n_sites: self.n_sites,
        }
    }
}

pub fn oracle_energy_trace(
    battery: &SpinHamiltonian,
    charger: &SpinHamiltonian,
    times: &[f64],
) -> Result<EnergyTrace> {
    let evolution = QuenchEvolution::new(battery, charger)?;
    let dt = if times.len() > 1 {
        times[1] - times[0]
    } else {
        0.0
    };
    Ok(EnergyTrace {
        times: times.to_vec(),
        values: evolution.sample(times),
        dt,
        origin: evolution.origin(),
    })
}

/// Battery and charger of an XY double quench on `2𝒩` spins.
pub fn xy_pair(protocol: &QuenchProtocol) -> Result<(SpinHamiltonian, SpinHamiltonian)> {
    let n = 2 * protocol.n_dimers;
    let battery = build_hamiltonian(
        SpinModel::DimerizedXy {
            gamma: protocol.gamma,
            delta: protocol.delta0,
        },
        n,
    )?;
    let charger = build_hamiltonian(
        SpinModel::DimerizedXy {
            gamma: protocol.gamma,
            delta: protocol.delta0 + protocol.delta1,
        },
        n,
    )?;
    Ok((battery, charger))
}

pub fn ising_pair(params: &IsingParams) -> Result<(SpinHamiltonian, SpinHamiltonian)> {
    let battery = build_hamiltonian(
        SpinModel::TransverseIsing {
            h: params.h_initial(),
        },
        params.n_sites,
    )?;
    let charger = build_hamiltonian(
        SpinModel::TransverseIsing {
            h: params.h_final(),
        },
        params.n_sites,
    )?;
    Ok((battery, charger))
}
