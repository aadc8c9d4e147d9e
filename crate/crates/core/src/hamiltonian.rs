//! `H = −J Σ_i (c†_{i+1} c_i + h.c.) + (V/2) Σ_i n_i (n_i − 1)` on the
//! symmetrized two-boson basis.
//!
//! The interaction term is written with a positive sign so that the doublon
//! miniband sits near `+V` for repulsive `V > 0`.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::lattice::{LatticeConfig, SymmetrizedBasis};

#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub config: LatticeConfig,
    pub basis: SymmetrizedBasis,
    pub elements: DMatrix<f64>,
}

impl HamiltonianMatrix {
    pub fn new(config: LatticeConfig) -> Result<Self> {
        config.validate()?;
        let basis = SymmetrizedBasis::new(config.sites)?;
        let elements = assemble(&config, &basis);
        Ok(Self { config, basis, elements })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Matrix element between one-based pairs.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> Option<f64> {
        let r = self.basis.index(bra.0, bra.1)?;
        let c = self.basis.index(ket.0, ket.1)?;
        Some(self.elements[(r, c)])
    }

    pub fn trace(&self) -> f64 {
        self.elements.trace()
    }
}

/// Convenience wrapper around [`HamiltonianMatrix::new`].
pub fn build_hamiltonian(config: LatticeConfig) -> Result<HamiltonianMatrix> {
    HamiltonianMatrix::new(config)
}

fn assemble(config: &LatticeConfig, basis: &SymmetrizedBasis) -> DMatrix<f64> {
    let n = config.sites;
    let dim = basis.dim();
    let mut h = DMatrix::zeros(dim, dim);
    for (col, &(i, j)) in basis.pairs0().iter().enumerate() {
        if i == j {
            // (V/2) n (n - 1) with n = 2
            h[(col, col)] += config.interaction;
        }
        let occupied: &[(usize, f64)] = if i == j { &[(i, 2.0)][..] } else { &[(i, 1.0), (j, 1.0)][..] };
        for &(source, n_source) in occupied {
            let other = if i == j { source } else if source == i { j } else { i };
            for target in [(source + 1) % n, (source + n - 1) % n] {
                // occupation of the target after the hopping particle has left
                let n_target = if i == j || target != other { 0.0 } else { 1.0 };
                let row = basis.index0(other, target);
                h[(row, col)] -= config.hopping * (n_source * (n_target + 1.0)).sqrt();
            }
        }
    }
    h
}
