//! Interference phases for charged particles in electromagnetic potentials,
//! computed at three levels: the single-particle potential phase, the
//! full-system Lagrangian phase over configuration space, and exact evolution
//! of the joint particle/apparatus wavefunction.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`). The `*64`
//! aliases at the crate root pin the double-precision instantiation used by
//! the CLI and the acceptance suite.

pub mod constants;
pub mod cylinders;
pub mod error;
pub mod phase;
pub mod quadrature;
pub mod ring;
pub mod scalar;
pub mod solenoid;
pub mod solver;

pub use constants::PhysicalConstants;
pub use error::{PhaseError, Result};
pub use phase::{
    electromagnetic_phase, energy_integral_difference, lagrangian_phase, potential_phase,
    ConfigPath, FluxLine, Interpolation, LineRule, PotentialPulse, SpacetimePath,
    VectorPotentialField, ZeroField,
};
pub use rustfft::num_complex::Complex;
pub use scalar::Real;

pub type Constants64 = PhysicalConstants<f64>;
pub type Pulse64 = PotentialPulse<f64>;
pub type ConfigPath64 = ConfigPath<f64>;
pub type SpacetimePath64 = SpacetimePath<f64>;
pub type JointWavefunction64 = solver::JointWavefunction<f64>;
pub type Hamiltonian64 = solver::HamiltonianSpec<f64>;
pub type WkbApparatus64 = solver::WkbApparatus<f64>;
pub type CylinderScenario64 = cylinders::CylinderScenario<f64>;
pub type RingParams64 = ring::RingParams<f64>;
pub type ConductanceModel64 = ring::ConductanceModel<f64>;
pub type SolenoidGeometry64 = solenoid::DipoleSolenoidGeometry<f64>;
