//! Translation `T_l`, boost `B` and time reversal `Θ` acting on two-boson states.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SymmetrizedBasis;
use crate::state::TwoParticleState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryKind {
    /// Rigid shift by `l` sites (any sign, taken mod N).
    Translation(isize),
    /// `c_j → e^{−iπj} c_j`; only single-valued on even rings.
    Boost,
    /// Complex conjugation in the site basis.
    TimeReversal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryOperator {
    pub kind: SymmetryKind,
    pub sites: usize,
}

impl SymmetryOperator {
    pub fn translation(sites: usize, shift: isize) -> Self {
        Self { kind: SymmetryKind::Translation(shift), sites }
    }

    pub fn boost(sites: usize) -> Result<Self> {
        require_even(sites)?;
        Ok(Self { kind: SymmetryKind::Boost, sites })
    }

    pub fn time_reversal(sites: usize) -> Self {
        Self { kind: SymmetryKind::TimeReversal, sites }
    }
}

pub(crate) fn require_even(sites: usize) -> Result<()> {
    if sites % 2 == 1 {
        return Err(Error::SymmetryUndefined(format!(
            "the boost phase e^(-i pi j) is not single-valued on an odd ring of {sites} sites"
        )));
    }
    Ok(())
}

/// `table[k]` is the index that basis entry `k` lands on under `T_shift`.
pub fn translation_table(basis: &SymmetrizedBasis, shift: isize) -> Vec<usize> {
    let n = basis.sites() as isize;
    let l = shift.rem_euclid(n) as usize;
    let n = basis.sites();
    basis
        .pairs0()
        .iter()
        .map(|&(i, j)| basis.index0((i + l) % n, (j + l) % n))
        .collect()
}

/// Diagonal of `B` on the basis: `(−1)^{i+j}`.
pub fn boost_signs(basis: &SymmetrizedBasis) -> Result<Vec<f64>> {
    require_even(basis.sites())?;
    // one-based parity equals zero-based parity since both shift by 2
    Ok(basis
        .pairs0()
        .iter()
        .map(|&(i, j)| if (i + j) % 2 == 0 { 1.0 } else { -1.0 })
        .collect())
}

pub(crate) fn translate_vector(table: &[usize], v: &DVector<Complex64>) -> DVector<Complex64> {
    let mut out = DVector::zeros(v.len());
    for (k, &dest) in table.iter().enumerate() {
        out[dest] = v[k];
    }
    out
}

pub fn apply_symmetry(op: SymmetryOperator, state: &TwoParticleState) -> Result<TwoParticleState> {
    if op.sites != state.sites() {
        return Err(Error::BasisMismatch { expected: op.sites, actual: state.sites() });
    }
    let basis = state.basis();
    let amplitudes = match op.kind {
        SymmetryKind::Translation(l) => translate_vector(&translation_table(basis, l), state.amplitudes()),
        SymmetryKind::Boost => {
            let signs = boost_signs(basis)?;
            state.amplitudes().zip_map(&DVector::from_vec(signs), |a, s| a * s)
        }
        SymmetryKind::TimeReversal => state.amplitudes().map(|a| a.conj()),
    };
    Ok(TwoParticleState::from_parts_unchecked(basis.clone(), amplitudes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn basis(n: usize) -> SymmetrizedBasis {
        SymmetrizedBasis::new(n).unwrap()
    }

    #[test]
    fn translation_moves_pairs() {
        let s = TwoParticleState::number_state(basis(30), 15, 17).unwrap();
        let t = apply_symmetry(SymmetryOperator::translation(30, 1), &s).unwrap();
        assert_eq!(t, TwoParticleState::number_state(basis(30), 16, 18).unwrap());
        // wraps and re-sorts
        let s = TwoParticleState::number_state(basis(6), 2, 6).unwrap();
        let t = apply_symmetry(SymmetryOperator::translation(6, 1), &s).unwrap();
        assert_eq!(t, TwoParticleState::number_state(basis(6), 1, 3).unwrap());
        let back = apply_symmetry(SymmetryOperator::translation(6, -1), &t).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn boost_parities() {
        let b = SymmetryOperator::boost(4).unwrap();
        let s12 = TwoParticleState::number_state(basis(4), 1, 2).unwrap();
        let s13 = TwoParticleState::number_state(basis(4), 1, 3).unwrap();
        assert_eq!(apply_symmetry(b, &s12).unwrap().amplitude(1, 2).unwrap().re, -1.0);
        assert_eq!(apply_symmetry(b, &s13).unwrap().amplitude(1, 3).unwrap().re, 1.0);
        assert!(matches!(SymmetryOperator::boost(5), Err(Error::SymmetryUndefined(_))));
    }

    #[test]
    fn time_reversal_conjugates() {
        let b = basis(4);
        let mut raw = DVector::zeros(b.dim());
        raw[b.index(1, 3).unwrap()] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        raw[b.index(2, 4).unwrap()] = Complex64::new(0.0, FRAC_1_SQRT_2);
        let s = TwoParticleState::normalized(b, raw).unwrap();
        let t = apply_symmetry(SymmetryOperator::time_reversal(4), &s).unwrap();
        assert_eq!(t.amplitude(2, 4).unwrap(), Complex64::new(0.0, -FRAC_1_SQRT_2));
        assert_eq!(t.amplitude(1, 3).unwrap(), Complex64::new(FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn wrong_ring_size() {
        let s = TwoParticleState::number_state(basis(4), 1, 2).unwrap();
        assert!(apply_symmetry(SymmetryOperator::translation(5, 1), &s).is_err());
    }
}
