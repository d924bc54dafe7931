//! Hamiltonians and Fock-basis machinery in the one- and two-particle sectors.

mod basis;
mod doublon;
mod hamiltonian;

pub use basis::{apply_annihilation, apply_creation, creation_matrix, Sector, TwoParticleBasis};
pub use doublon::{build_sw_doublon, compare_sw_doublon, DoublonComparison, DoublonEffectiveModel, SW_BOUND_CONSTANT};
pub use hamiltonian::{build_effective, build_h1, build_h2, SectorHamiltonian};
