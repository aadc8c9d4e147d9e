//! Full real-symmetric eigendecomposition of `H` with a reproducible
//! eigenvector gauge.
//!
//! Gauge: inside each degenerate energy cluster the eigenbasis is rebuilt by
//! Gram-Schmidt on the cluster projector's columns taken in basis order, and
//! every eigenvector is then signed so its largest-magnitude component
//! (lowest index on ties) is positive.

use std::ops::Range;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianMatrix;
use crate::lattice::{LatticeConfig, SymmetrizedBasis};
use crate::state::TwoParticleState;

/// Relative gap below which two eigenvalues are treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

const PIVOT_THRESHOLD: f64 = 1e-3;
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub config: LatticeConfig,
    pub basis: SymmetrizedBasis,
    /// Ascending energies.
    pub eigenvalues: Vec<f64>,
    /// Real orthonormal eigenvectors stored as columns.
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> DVector<f64> {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn eigenstate(&self, k: usize) -> TwoParticleState {
        let amplitudes = self.eigenvector(k).map(|x| Complex64::new(x, 0.0));
        TwoParticleState::from_parts_unchecked(self.basis.clone(), amplitudes)
    }

    /// Energies divided by `J`.
    pub fn energies_in_hopping_units(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|w| w / self.config.hopping).collect()
    }

    /// Index ranges of degenerate clusters at [`DEGENERACY_TOLERANCE`].
    pub fn clusters(&self) -> Vec<Range<usize>> {
        energy_clusters(&self.eigenvalues, DEGENERACY_TOLERANCE)
    }

    /// Largest `‖H Φ_k − ω_k Φ_k‖` over all eigenpairs.
    pub fn max_residual(&self, h: &HamiltonianMatrix) -> f64 {
        (0..self.dim())
            .map(|k| {
                let v = self.eigenvectors.column(k);
                (&h.elements * v - v * self.eigenvalues[k]).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `‖QᵀQ − I‖_max`.
    pub fn orthogonality_error(&self) -> f64 {
        let q = &self.eigenvectors;
        let gram = q.transpose() * q - DMatrix::identity(self.dim(), self.dim());
        gram.amax()
    }
}

/// Groups ascending `values` into runs whose consecutive gaps are at most
/// `relative_tolerance · max|value|`.
pub fn energy_clusters(values: &[f64], relative_tolerance: f64) -> Vec<Range<usize>> {
    let scale = values.iter().fold(0.0_f64, |m, w| m.max(w.abs())).max(f64::MIN_POSITIVE);
    let tol = relative_tolerance * scale;
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            if k > start {
                clusters.push(start..k);
            }
            start = k;
        }
    }
    clusters
}

pub fn diagonalize(h: &HamiltonianMatrix) -> Result<SpectralDecomposition> {
    let dim = h.dim();
    let asym = (&h.elements - h.elements.transpose()).amax();
    if asym > 0.0 {
        return Err(Error::DegenerateInput(format!("Hamiltonian is not symmetric (max asymmetry {asym:e})")));
    }
    let eps = f64::EPSILON;
    let max_iterations = 1000 * dim.max(1);
    let eigen = SymmetricEigen::try_new(h.elements.clone(), eps, max_iterations)
        .ok_or(Error::NumericalFailure { dim, iterations: max_iterations, eps })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eigen.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (dest, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dest, &eigen.eigenvectors.column(src));
    }

    for range in energy_clusters(&eigenvalues, DEGENERACY_TOLERANCE) {
        canonicalize_cluster(&mut eigenvectors, range);
    }
    Ok(SpectralDecomposition { config: h.config, basis: h.basis.clone(), eigenvalues, eigenvectors })
}

/// Diagonalizes `H_N(J, V)` directly from its parameters.
pub fn diagonalize_config(config: LatticeConfig) -> Result<SpectralDecomposition> {
    diagonalize(&HamiltonianMatrix::new(config)?)
}

fn canonicalize_cluster(q: &mut DMatrix<f64>, range: Range<usize>) {
    let m = range.len();
    let block = q.columns(range.start, m).into_owned();
    if m > 1 {
        let projector = &block * block.transpose();
        let mut found: Vec<DVector<f64>> = Vec::with_capacity(m);
        for b in 0..projector.ncols() {
            if found.len() == m {
                break;
            }
            let mut v = projector.column(b).into_owned();
            for u in &found {
                let overlap = u.dot(&v);
                v.axpy(-overlap, u, 1.0);
            }
            let norm = v.norm();
            if norm > PIVOT_THRESHOLD {
                found.push(v / norm);
            }
        }
        if found.len() == m {
            for (offset, v) in found.iter().enumerate() {
                q.set_column(range.start + offset, v);
            }
        }
    }
    for k in range {
        let sign = gauge_sign(q.column(k).iter().copied());
        if sign < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
}

/// Index of the largest-magnitude entry, lowest index on near-ties.
pub(crate) fn pivot_index<I: Iterator<Item = f64> + Clone>(magnitudes: I) -> usize {
    let max = magnitudes.clone().fold(0.0, f64::max);
    magnitudes.into_iter().position(|x| x >= max - TIE_TOLERANCE).unwrap_or(0)
}

fn gauge_sign<I: Iterator<Item = f64> + Clone>(values: I) -> f64 {
    let k = pivot_index(values.clone().map(f64::abs));
    if values.into_iter().nth(k).unwrap_or(0.0) < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `D_V(N) = sqrt(Σ_i (ω_i⁺ + ω_i⁻)²)` with `ω⁺` ascending from `H(V)` and
/// `ω⁻` descending from `H(−V)`. Energy units.
pub fn spectrum_deviation(sites: usize, hopping: f64, interaction: f64) -> Result<f64> {
    let config = LatticeConfig::new(sites, hopping, interaction)?;
    let plus = diagonalize_config(config)?;
    let minus = diagonalize_config(config.mirrored())?;
    Ok(deviation_between(&plus.eigenvalues, &minus.eigenvalues))
}

pub(crate) fn deviation_between(ascending_plus: &[f64], ascending_minus: &[f64]) -> f64 {
    ascending_plus
        .iter()
        .zip(ascending_minus.iter().rev())
        .map(|(a, b)| (a + b).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decomp(n: usize, v: f64) -> (HamiltonianMatrix, SpectralDecomposition) {
        let h = HamiltonianMatrix::new(LatticeConfig::new(n, 1.0, v).unwrap()).unwrap();
        let d = diagonalize(&h).unwrap();
        (h, d)
    }

    #[test]
    fn residual_and_orthogonality() {
        for (n, v) in [(4, 8.0), (5, -3.0), (10, 2.0)] {
            let (h, d) = decomp(n, v);
            assert!(d.max_residual(&h) < 1e-9);
            assert!(d.orthogonality_error() < 1e-10);
            assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let sum: f64 = d.eigenvalues.iter().sum();
            assert!((sum - n as f64 * v).abs() < 1e-9);
        }
    }

    #[test]
    fn free_even_ring_is_particle_hole_symmetric() {
        let (_, d) = decomp(4, 0.0);
        let w = &d.eigenvalues;
        for k in 0..w.len() {
            assert!((w[k] + w[w.len() - 1 - k]).abs() < 1e-12);
        }
    }

    #[test]
    fn gauge_is_reproducible() {
        let (_, a) = decomp(6, 3.0);
        let (_, b) = decomp(6, 3.0);
        assert_eq!(a.eigenvectors, b.eigenvectors);
        for k in 0..a.dim() {
            let col: Vec<f64> = a.eigenvector(k).iter().copied().collect();
            let p = pivot_index(col.iter().map(|x| x.abs()));
            assert!(col[p] > 0.0);
        }
    }

    #[test]
    fn clusters_chain_on_small_gaps() {
        let c = energy_clusters(&[-1.0, -1.0 + 1e-12, 0.5, 2.0, 2.0], 1e-8);
        assert_eq!(c, vec![0..2, 2..3, 3..5]);
    }

    #[test]
    fn deviation_without_interaction_measures_free_asymmetry() {
        for n in 3..10 {
            let d = spectrum_deviation(n, 1.0, 0.0).unwrap();
            if n % 2 == 0 {
                assert!(d < 1e-10);
            } else {
                // free two-boson levels on an odd ring are not symmetric about zero
                assert!(d > 1e-3);
            }
        }
    }
}
