//! Stored energy of integrable spin-chain quantum batteries charged by a
//! double quench.
//!
//! The dimerized XY chain is solved mode by mode in momentum space
//! ([`xy`], [`quench`]); the transverse-field Ising chain has a closed form
//! ([`ising`]). [`regime`] extracts the short-time, asymptotic and revival
//! regimes from the resulting traces, and [`oracle`] is an independent
//! exact-diagonalization check for small chains.

pub mod error;
pub mod ising;
pub mod numeric;
pub mod oracle;
pub mod quench;
pub mod regime;
pub mod trace;
pub mod xy;

pub use error::{Error, Result};
pub use ising::{IsingDynamics, IsingParams};
pub use quench::{ChargingDynamics, Evaluator, QuenchProtocol};
pub use regime::{RegimeOptions, RegimeReport, SweepRow};
pub use trace::{EnergySource, EnergyTrace, TraceOrigin};
pub use xy::{classify_phase, ChainParams, ModeIndex, Phase};
