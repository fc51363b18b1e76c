//! Joint particle/apparatus wavefunction on a periodic 2-D grid, its exact
//! split-step evolution, and the factorized semiclassical companion.

pub mod checkpoint;
pub mod evolve;
pub mod fft;
pub mod grid;
pub mod hamiltonian;
pub mod observables;
pub mod overlap;
pub mod wkb;

pub use evolve::{
    evolve_joint, AbsorbingBoundary, JointEvolution, ParticleSplitStep, SolverWarning, SplitStep,
    TAIL_WARNING_FRACTION,
};
pub use grid::{gaussian_packet, Axis, JointWavefunction, ParticleWavefunction};
pub use hamiltonian::{ExternalPulse, HamiltonianSpec};
pub use observables::{observables, spectral_tail_fraction, Observables};
pub use overlap::{conditional_apparatus_overlap, schmidt_number};
pub use wkb::{
    evolve_factorized, factorized_product, first_order_interaction_phase, phase_discrepancy,
    WkbApparatus,
};
