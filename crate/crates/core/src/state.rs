use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::SymmetrizedBasis;

pub const NORM_TOLERANCE: f64 = 1e-12;

/// Pure two-boson state: complex amplitudes over the symmetrized basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    basis: SymmetrizedBasis,
    amplitudes: DVector<Complex64>,
}

impl TwoParticleState {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(basis: SymmetrizedBasis, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DegenerateInput(format!(
                "expected {} amplitudes, got {}",
                basis.dim(),
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::DegenerateInput(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { basis, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(basis: SymmetrizedBasis, mut amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateState);
        }
        amplitudes.unscale_mut(norm);
        Self::new(basis, amplitudes)
    }

    /// `|i,j⟩_s` with one-based sites in either order.
    pub fn number_state(basis: SymmetrizedBasis, i: usize, j: usize) -> Result<Self> {
        let k = basis.index_unordered(i, j)?;
        let mut amplitudes = DVector::zeros(basis.dim());
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    pub(crate) fn from_parts_unchecked(basis: SymmetrizedBasis, amplitudes: DVector<Complex64>) -> Self {
        Self { basis, amplitudes }
    }

    pub fn basis(&self) -> &SymmetrizedBasis {
        &self.basis
    }

    pub fn sites(&self) -> usize {
        self.basis.sites()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    /// Amplitude on the one-based pair, in either order.
    pub fn amplitude(&self, i: usize, j: usize) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.index_unordered(i, j)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &TwoParticleState) -> Result<Complex64> {
        self.basis.check_same(&other.basis)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Largest componentwise modulus of `self − other`.
    pub fn max_deviation(&self, other: &TwoParticleState) -> Result<f64> {
        self.basis.check_same(&other.basis)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True when all amplitudes are real after removing one global phase.
    pub fn is_real_up_to_phase(&self, tol: f64) -> bool {
        let Some(pivot) = self.amplitudes.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
            return true;
        };
        if pivot.norm() == 0.0 {
            return true;
        }
        let phase = pivot.conj() / pivot.norm();
        self.amplitudes.iter().all(|a| (a * phase).im.abs() <= tol)
    }
}
