//! Numerical checks of the boost relation `B H(V) B = −H(−V)` and of when
//! flipping the interaction sign leaves expectation values unchanged.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{correlation_map, normalize_correlations, prepare_state, site_density, SpectralPropagator, StateSpec};
use crate::entanglement::{entanglement_of_particles, Bipartition};
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianMatrix;
use crate::lattice::{LatticeConfig, SymmetrizedBasis};
use crate::spectrum::diagonalize_config;
use crate::state::TwoParticleState;
use crate::symmetry::{apply_symmetry, boost_signs, require_even, SymmetryOperator};

pub const BOOST_RELATION_TOLERANCE: f64 = 1e-10;
pub const BOOST_EIGEN_TOLERANCE: f64 = 1e-10;
pub const INVARIANCE_TOLERANCE: f64 = 1e-8;
const HERMITICITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ObservableKind {
    /// Diagonal in the number basis.
    Diagonal(Vec<f64>),
    Dense(DMatrix<Complex64>),
}

/// Hermitian operator on the two-boson space.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableMatrix {
    pub label: String,
    pub kind: ObservableKind,
}

impl ObservableMatrix {
    pub fn dense(label: impl Into<String>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dev = (&matrix - matrix.adjoint()).camax();
        if dev > HERMITICITY_TOLERANCE {
            return Err(Error::DegenerateInput(format!("observable is not Hermitian (deviation {dev:e})")));
        }
        Ok(Self { label: label.into(), kind: ObservableKind::Dense(matrix) })
    }

    /// `n_i` for one-based `site`.
    pub fn density(basis: &SymmetrizedBasis, site: usize) -> Self {
        let s = site - 1;
        let diag = basis.pairs0().iter().map(|&(i, j)| (i == s) as u8 as f64 + (j == s) as u8 as f64).collect();
        Self { label: format!("n_{site}"), kind: ObservableKind::Diagonal(diag) }
    }

    /// `c_i† c_j† c_j c_i` for one-based sites.
    pub fn correlation(basis: &SymmetrizedBasis, i: usize, j: usize) -> Self {
        let (a, b) = (i.min(j) - 1, i.max(j) - 1);
        let diag = basis
            .pairs0()
            .iter()
            .map(|&p| if p == (a, b) { if a == b { 2.0 } else { 1.0 } } else { 0.0 })
            .collect();
        Self { label: format!("gamma_{i}_{j}"), kind: ObservableKind::Diagonal(diag) }
    }

    /// Every `n_i` and every `Γ_ij` with `i ≤ j`.
    pub fn standard_set(basis: &SymmetrizedBasis) -> Vec<Self> {
        let n = basis.sites();
        let mut out: Vec<Self> = (1..=n).map(|s| Self::density(basis, s)).collect();
        for i in 1..=n {
            for j in i..=n {
                out.push(Self::correlation(basis, i, j));
            }
        }
        out
    }

    pub fn expectation(&self, state: &DVector<Complex64>) -> f64 {
        match &self.kind {
            ObservableKind::Diagonal(d) => d.iter().zip(state.iter()).map(|(o, a)| o * a.norm_sqr()).sum(),
            ObservableKind::Dense(m) => state.dotc(&(m * state)).re,
        }
    }

    /// `B O B` given the boost diagonal.
    pub fn boosted(&self, signs: &[f64]) -> Self {
        match &self.kind {
            ObservableKind::Diagonal(_) => self.clone(),
            ObservableKind::Dense(m) => Self {
                label: self.label.clone(),
                kind: ObservableKind::Dense(DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)] * signs[r] * signs[c])),
            },
        }
    }

    pub fn is_boost_invariant(&self, signs: &[f64]) -> bool {
        match &self.kind {
            ObservableKind::Diagonal(_) => true,
            ObservableKind::Dense(m) => {
                (0..m.nrows()).all(|r| (0..m.ncols()).all(|c| signs[r] == signs[c] || m[(r, c)].norm() <= HERMITICITY_TOLERANCE))
            }
        }
    }

    /// `Θ O Θ† = O`, i.e. real matrix elements in the site basis.
    pub fn is_time_reversal_even(&self) -> bool {
        match &self.kind {
            ObservableKind::Diagonal(_) => true,
            ObservableKind::Dense(m) => m.iter().all(|x| x.im.abs() <= HERMITICITY_TOLERANCE),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoostReport {
    pub sites: usize,
    pub hopping: f64,
    pub interaction: f64,
    /// `‖B H(V) B + H(−V)‖_max`.
    pub max_deviation: f64,
    pub passed: bool,
}

pub fn check_boost_relation(sites: usize, hopping: f64, interaction: f64) -> Result<BoostReport> {
    require_even(sites)?;
    let config = LatticeConfig::new(sites, hopping, interaction)?;
    let plus = HamiltonianMatrix::new(config)?;
    let minus = HamiltonianMatrix::new(config.mirrored())?;
    let signs = boost_signs(&plus.basis)?;
    let dim = plus.dim();
    let conjugated = DMatrix::from_fn(dim, dim, |r, c| signs[r] * plus.elements[(r, c)] * signs[c]);
    let max_deviation = (conjugated + &minus.elements).amax();
    Ok(BoostReport { sites, hopping, interaction, max_deviation, passed: max_deviation < BOOST_RELATION_TOLERANCE })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauDeviation {
    pub tau: f64,
    /// `max_O |⟨O(τ)⟩₊ − ⟨O(τ)⟩₋|`.
    pub sign_deviation: f64,
    /// `max_O |⟨O(τ)⟩₊ − ⟨BOB(−τ)⟩₋|` evaluated on `B|ψ⟩`.
    pub half_relation_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    /// `Some(±1)` when `B|ψ⟩ = ±|ψ⟩`.
    pub boost_eigenvalue: Option<i8>,
    pub time_reversal_invariant: bool,
    pub observables_boost_invariant: bool,
    pub observables_time_reversal_even: bool,
    /// Hypotheses for `⟨O(τ)⟩₊ = ⟨O(τ)⟩₋` all hold.
    pub invariance_implied: bool,
    pub per_tau: Vec<TauDeviation>,
    pub max_sign_deviation: f64,
    pub max_half_relation_deviation: f64,
    pub passed: bool,
}

pub fn boost_eigenvalue(state: &TwoParticleState) -> Result<Option<i8>> {
    let boosted = apply_symmetry(SymmetryOperator::boost(state.sites())?, state)?;
    let a = state.amplitudes();
    let b = boosted.amplitudes();
    if (b - a).norm() < BOOST_EIGEN_TOLERANCE {
        Ok(Some(1))
    } else if (b + a).norm() < BOOST_EIGEN_TOLERANCE {
        Ok(Some(-1))
    } else {
        Ok(None)
    }
}

pub fn check_invariance_theorem(
    spec: &StateSpec,
    observables: &[ObservableMatrix],
    config: LatticeConfig,
    taus: &[f64],
) -> Result<InvarianceReport> {
    require_even(config.sites)?;
    let state = prepare_state(spec)?;
    if state.sites() != config.sites {
        return Err(Error::BasisMismatch { expected: config.sites, actual: state.sites() });
    }
    let signs = boost_signs(state.basis())?;
    let boosted = apply_symmetry(SymmetryOperator::boost(config.sites)?, &state)?;
    let boost_eigenvalue = boost_eigenvalue(&state)?;
    let time_reversal_invariant = state.is_real_up_to_phase(BOOST_EIGEN_TOLERANCE);
    let observables_boost_invariant = observables.iter().all(|o| o.is_boost_invariant(&signs));
    let observables_time_reversal_even = observables.iter().all(ObservableMatrix::is_time_reversal_even);
    let invariance_implied = boost_eigenvalue.is_some()
        && time_reversal_invariant
        && observables_boost_invariant
        && observables_time_reversal_even;
    let mirrored_observables: Vec<ObservableMatrix> = observables.iter().map(|o| o.boosted(&signs)).collect();

    let plus = diagonalize_config(config)?;
    let minus = diagonalize_config(config.mirrored())?;
    let u_plus = SpectralPropagator::new(&plus, &state)?;
    let u_minus = SpectralPropagator::new(&minus, &state)?;
    let u_minus_boosted = SpectralPropagator::new(&minus, &boosted)?;

    let per_tau: Vec<TauDeviation> = taus
        .iter()
        .map(|&tau| {
            let p = u_plus.at(tau);
            let m = u_minus.at(tau);
            let back = u_minus_boosted.at(-tau);
            let mut sign_deviation = 0.0_f64;
            let mut half_relation_deviation = 0.0_f64;
            for (o, bob) in observables.iter().zip(&mirrored_observables) {
                let e = o.expectation(p.amplitudes());
                sign_deviation = sign_deviation.max((e - o.expectation(m.amplitudes())).abs());
                half_relation_deviation = half_relation_deviation.max((e - bob.expectation(back.amplitudes())).abs());
            }
            TauDeviation { tau, sign_deviation, half_relation_deviation }
        })
        .collect();
    let max_sign_deviation = per_tau.iter().map(|t| t.sign_deviation).fold(0.0, f64::max);
    let max_half_relation_deviation = per_tau.iter().map(|t| t.half_relation_deviation).fold(0.0, f64::max);
    let passed = max_half_relation_deviation < INVARIANCE_TOLERANCE
        && (!invariance_implied || max_sign_deviation < INVARIANCE_TOLERANCE);
    Ok(InvarianceReport {
        boost_eigenvalue,
        time_reversal_invariant,
        observables_boost_invariant,
        observables_time_reversal_even,
        invariance_implied,
        per_tau,
        max_sign_deviation,
        max_half_relation_deviation,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MirrorDeviation {
    pub tau: f64,
    /// `max_ij |Γ̃⁺_ij − Γ̃⁻_{σ(j)σ(i)}|`.
    pub map_deviation: f64,
    /// `|E_P⁺ − E_P⁻|`.
    pub entanglement_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MirrorReport {
    /// Initial center of mass (one-based site units); `σ` reflects through it.
    pub center: f64,
    pub partition: String,
    pub per_tau: Vec<MirrorDeviation>,
    pub max_map_deviation: f64,
    pub max_entanglement_deviation: f64,
    pub passed: bool,
}

/// Center of mass `Σ_i i·n_i / 2` in one-based units.
pub fn center_of_mass(state: &TwoParticleState) -> f64 {
    let n = site_density(state);
    n.values.iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).sum::<f64>() / 2.0
}

/// Compares the `+V` correlation map with the `−V` map reflected through the
/// initial center of mass and transposed, and `E_P` between signs.
pub fn check_mirror(spec: &StateSpec, config: LatticeConfig, taus: &[f64], part: &Bipartition) -> Result<MirrorReport> {
    let state = prepare_state(spec)?;
    if state.sites() != config.sites {
        return Err(Error::BasisMismatch { expected: config.sites, actual: state.sites() });
    }
    let n = config.sites;
    let center = center_of_mass(&state);
    let twice = (2.0 * center).round() as isize;
    // one-based σ(s) = 2c − s, written zero-based and wrapped
    let sigma = move |s0: usize| (twice - s0 as isize - 2).rem_euclid(n as isize) as usize;

    let plus = diagonalize_config(config)?;
    let minus = diagonalize_config(config.mirrored())?;
    let u_plus = SpectralPropagator::new(&plus, &state)?;
    let u_minus = SpectralPropagator::new(&minus, &state)?;
    let per_tau = taus
        .iter()
        .map(|&tau| {
            let p = u_plus.at(tau);
            let m = u_minus.at(tau);
            let gp = normalize_correlations(&correlation_map(&p))?;
            let gm = normalize_correlations(&correlation_map(&m))?.reindexed(sigma);
            let map_deviation = gp.max_abs_difference(&gm.transposed());
            let ep = entanglement_of_particles(&p, part)?.entanglement;
            let em = entanglement_of_particles(&m, part)?.entanglement;
            Ok(MirrorDeviation { tau, map_deviation, entanglement_deviation: (ep - em).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_map_deviation = per_tau.iter().map(|t| t.map_deviation).fold(0.0, f64::max);
    let max_entanglement_deviation = per_tau.iter().map(|t| t.entanglement_deviation).fold(0.0, f64::max);
    Ok(MirrorReport {
        center,
        partition: part.to_string(),
        per_tau,
        max_map_deviation,
        max_entanglement_deviation,
        passed: max_map_deviation < INVARIANCE_TOLERANCE && max_entanglement_deviation < INVARIANCE_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Preset;

    #[test]
    fn boost_relation_holds_on_even_rings() {
        let r = check_boost_relation(4, 1.0, 8.0).unwrap();
        assert!(r.max_deviation < 1e-12 && r.passed);
        assert!(check_boost_relation(30, 1.0, 2.0).unwrap().passed);
        assert!(matches!(check_boost_relation(5, 1.0, 8.0), Err(Error::SymmetryUndefined(_))));
    }

    #[test]
    fn observable_classification() {
        let basis = SymmetrizedBasis::new(4).unwrap();
        let signs = boost_signs(&basis).unwrap();
        let n1 = ObservableMatrix::density(&basis, 1);
        assert!(n1.is_boost_invariant(&signs) && n1.is_time_reversal_even());
        let h = HamiltonianMatrix::new(LatticeConfig::new(4, 1.0, 1.0).unwrap()).unwrap();
        let hop = ObservableMatrix::dense("H", h.elements.map(|x| Complex64::new(x, 0.0))).unwrap();
        assert!(!hop.is_boost_invariant(&signs));
        let mut skew = DMatrix::zeros(10, 10);
        skew[(0, 1)] = Complex64::new(0.0, 1.0);
        skew[(1, 0)] = Complex64::new(0.0, -1.0);
        let current = ObservableMatrix::dense("J", skew.clone()).unwrap();
        assert!(!current.is_time_reversal_even());
        skew[(1, 0)] = Complex64::new(0.0, 1.0);
        assert!(ObservableMatrix::dense("bad", skew).is_err());
        assert_eq!(ObservableMatrix::standard_set(&basis).len(), 4 + 10);
    }

    #[test]
    fn center_of_mass_of_presets() {
        let psi4 = prepare_state(&Preset::Psi4.spec(30)).unwrap();
        assert!((center_of_mass(&psi4) - 15.5).abs() < 1e-12);
    }
}
