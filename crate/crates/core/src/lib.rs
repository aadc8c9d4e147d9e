//! Two identical bosons walking on a periodic Bose-Hubbard ring.
//!
//! The crate builds `H_N(J, ±V)` on the symmetrized two-particle basis,
//! diagonalizes it, evolves localized initial states and measures what
//! distinguishes attractive from repulsive on-site interaction: two-site
//! correlation maps, entanglement of particles, eigenstate projections and
//! the `Δ(V)` figure of merit. [`report`] wires everything into named
//! analyses that emit CSV/JSON artifacts.

pub mod bands;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod lattice;
pub mod projection;
pub mod report;
pub mod spectrum;
pub mod state;
pub mod symmetry;
pub mod symmetry_checks;

pub use error::{Error, Result};
pub use hamiltonian::{build_hamiltonian, HamiltonianMatrix};
pub use lattice::{LatticeConfig, SymmetrizedBasis};
pub use spectrum::{diagonalize, spectrum_deviation, SpectralDecomposition};
pub use state::TwoParticleState;
