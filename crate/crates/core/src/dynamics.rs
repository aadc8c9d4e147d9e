//! Initial states, spectral time evolution, densities and two-site correlations.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianMatrix;
use crate::lattice::SymmetrizedBasis;
use crate::spectrum::SpectralDecomposition;
use crate::state::TwoParticleState;

/// Seam densities above this trigger the boundary-interference warning.
pub const BOUNDARY_GUARD_THRESHOLD: f64 = 1e-3;
/// Sites on each side of the `N → 1` seam watched by the guard.
pub const BOUNDARY_GUARD_WIDTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateTerm {
    pub i: usize,
    pub j: usize,
    pub amplitude: Complex64,
}

/// Unnormalized superposition of number states `Σ c |i,j⟩_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub sites: usize,
    pub terms: Vec<StateTerm>,
}

impl StateSpec {
    pub fn new(sites: usize, terms: Vec<StateTerm>) -> Self {
        Self { sites, terms }
    }

    pub fn number(sites: usize, i: usize, j: usize) -> Self {
        Self::from_pairs(sites, &[(i, j)])
    }

    /// Equal-weight superposition of the given pairs.
    pub fn from_pairs(sites: usize, pairs: &[(usize, usize)]) -> Self {
        let terms = pairs
            .iter()
            .map(|&(i, j)| StateTerm { i, j, amplitude: Complex64::new(1.0, 0.0) })
            .collect();
        Self { sites, terms }
    }

    /// Parses `"i,j[,amp];i,j[,amp];..."` where `amp` is a complex literal
    /// such as `1`, `-0.5`, `1i` or `0.3+0.4i`.
    pub fn parse_terms(sites: usize, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let fields: Vec<&str> = chunk.split(',').map(str::trim).collect();
            let bad = || Error::Config(format!("cannot parse state term '{chunk}'"));
            if fields.len() < 2 || fields.len() > 3 {
                return Err(bad());
            }
            let i = fields[0].parse().map_err(|_| bad())?;
            let j = fields[1].parse().map_err(|_| bad())?;
            let amplitude = match fields.get(2) {
                Some(a) => Complex64::from_str(a).map_err(|_| bad())?,
                None => Complex64::new(1.0, 0.0),
            };
            terms.push(StateTerm { i, j, amplitude });
        }
        if terms.is_empty() {
            return Err(Error::Config("state has no terms".into()));
        }
        Ok(Self { sites, terms })
    }
}

/// Named initial states for the 30-site ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    Psi1,
    Psi2,
    Psi3,
    Psi4,
    Psi5,
    Psi6,
}

impl Preset {
    pub const ALL: [Preset; 6] = [Preset::Psi1, Preset::Psi2, Preset::Psi3, Preset::Psi4, Preset::Psi5, Preset::Psi6];

    pub fn pairs(&self) -> &'static [(usize, usize)] {
        match self {
            Preset::Psi1 => &[(15, 17)],
            Preset::Psi2 => &[(14, 16)],
            Preset::Psi3 => &[(14, 17)],
            Preset::Psi4 => &[(14, 16), (15, 17)],
            Preset::Psi5 => &[(14, 16), (14, 17)],
            Preset::Psi6 => &[(14, 14), (14, 17)],
        }
    }

    pub fn spec(&self, sites: usize) -> StateSpec {
        StateSpec::from_pairs(sites, self.pairs())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Psi1 => "psi1",
            Preset::Psi2 => "psi2",
            Preset::Psi3 => "psi3",
            Preset::Psi4 => "psi4",
            Preset::Psi5 => "psi5",
            Preset::Psi6 => "psi6",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let digit = lower
            .strip_prefix("psi")
            .or_else(|| lower.strip_prefix("ψ"))
            .ok_or_else(|| Error::Config(format!("unknown preset '{s}'")))?;
        match digit {
            "1" => Ok(Preset::Psi1),
            "2" => Ok(Preset::Psi2),
            "3" => Ok(Preset::Psi3),
            "4" => Ok(Preset::Psi4),
            "5" => Ok(Preset::Psi5),
            "6" => Ok(Preset::Psi6),
            _ => Err(Error::Config(format!("unknown preset '{s}'"))),
        }
    }
}

/// Places the term amplitudes on the basis and normalizes.
pub fn prepare_state(spec: &StateSpec) -> Result<TwoParticleState> {
    let basis = SymmetrizedBasis::new(spec.sites)?;
    if spec.terms.is_empty() {
        return Err(Error::DegenerateState);
    }
    let mut amplitudes = DVector::zeros(basis.dim());
    for term in &spec.terms {
        amplitudes[basis.index_unordered(term.i, term.j)?] += term.amplitude;
    }
    TwoParticleState::normalized(basis, amplitudes)
}

/// Evolves one initial state under a fixed spectral decomposition.
/// The eigenbasis coefficients are computed once and reused for every `τ`.
#[derive(Debug, Clone)]
pub struct SpectralPropagator<'a> {
    decomp: &'a SpectralDecomposition,
    coefficients: DVector<Complex64>,
}

impl<'a> SpectralPropagator<'a> {
    pub fn new(decomp: &'a SpectralDecomposition, initial: &TwoParticleState) -> Result<Self> {
        decomp.basis.check_same(initial.basis())?;
        let q = &decomp.eigenvectors;
        let coefficients = DVector::from_fn(q.ncols(), |k, _| {
            q.column(k).iter().zip(initial.amplitudes().iter()).map(|(x, a)| a * *x).sum::<Complex64>()
        });
        Ok(Self { decomp, coefficients })
    }

    /// `a(τ) = Q diag(e^{−iω_k τ/J}) Qᵀ a(0)`.
    pub fn at(&self, tau: f64) -> TwoParticleState {
        let j = self.decomp.config.hopping.abs();
        let phased = DVector::from_fn(self.coefficients.len(), |k, _| {
            self.coefficients[k] * Complex64::from_polar(1.0, -self.decomp.eigenvalues[k] * tau / j)
        });
        let q = &self.decomp.eigenvectors;
        let dim = q.nrows();
        let mut amplitudes = DVector::<Complex64>::zeros(dim);
        for (k, c) in phased.iter().enumerate() {
            for (a, x) in amplitudes.iter_mut().zip(q.column(k).iter()) {
                *a += c * *x;
            }
        }
        TwoParticleState::from_parts_unchecked(self.decomp.basis.clone(), amplitudes)
    }
}

pub fn evolve(state: &TwoParticleState, decomp: &SpectralDecomposition, tau: f64) -> Result<TwoParticleState> {
    Ok(SpectralPropagator::new(decomp, state)?.at(tau))
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy(state: &TwoParticleState, h: &HamiltonianMatrix) -> Result<f64> {
    h.basis.check_same(state.basis())?;
    let a = state.amplitudes();
    let ha = h.elements.map(|x| Complex64::new(x, 0.0)) * a;
    Ok(a.dotc(&ha).re)
}

/// Evenly spaced `τ` grid over `[0, tau_max]` with `steps` points.
pub fn time_grid(tau_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..steps).map(|k| tau_max * k as f64 / (steps - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    pub tau: f64,
    /// Particles per site, index 0 is site 1.
    pub values: Vec<f64>,
}

impl DensityProfile {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest density on the sites next to the `N → 1` seam.
    pub fn seam_density(&self) -> f64 {
        let n = self.values.len();
        let w = BOUNDARY_GUARD_WIDTH.min(n / 2);
        (0..w).chain(n - w..n).map(|i| self.values[i]).fold(0.0, f64::max)
    }
}

/// `n_i = Σ_j |a_(i,j)|² (1 + δ_ij)`.
pub fn site_density(state: &TwoParticleState) -> DensityProfile {
    let basis = state.basis();
    let mut values = vec![0.0; basis.sites()];
    for (k, &(i, j)) in basis.pairs0().iter().enumerate() {
        let p = state.amplitudes()[k].norm_sqr();
        values[i] += p;
        values[j] += p;
    }
    DensityProfile { tau: 0.0, values }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMap {
    pub tau: f64,
    /// `Γ_ij`, symmetric `N×N`, index 0 is site 1.
    pub gamma: DMatrix<f64>,
}

impl CorrelationMap {
    pub fn total(&self) -> f64 {
        self.gamma.sum()
    }

    pub fn max(&self) -> f64 {
        self.gamma.max()
    }

    pub fn max_abs_difference(&self, other: &CorrelationMap) -> f64 {
        (&self.gamma - &other.gamma).amax()
    }

    pub fn transposed(&self) -> CorrelationMap {
        CorrelationMap { tau: self.tau, gamma: self.gamma.transpose() }
    }

    /// Reflects both site indices through `site → σ(site)` (zero-based map).
    pub fn reindexed(&self, sigma: impl Fn(usize) -> usize) -> CorrelationMap {
        let n = self.gamma.nrows();
        CorrelationMap { tau: self.tau, gamma: DMatrix::from_fn(n, n, |i, j| self.gamma[(sigma(i), sigma(j))]) }
    }
}

/// `Γ_ij = ⟨c_i† c_j† c_j c_i⟩`: `|a_(i,j)|²` off the diagonal, `2|a_(i,i)|²` on it.
pub fn correlation_map(state: &TwoParticleState) -> CorrelationMap {
    let basis = state.basis();
    let n = basis.sites();
    let mut gamma = DMatrix::zeros(n, n);
    for (k, &(i, j)) in basis.pairs0().iter().enumerate() {
        let p = state.amplitudes()[k].norm_sqr();
        if i == j {
            gamma[(i, i)] = 2.0 * p;
        } else {
            gamma[(i, j)] = p;
            gamma[(j, i)] = p;
        }
    }
    CorrelationMap { tau: 0.0, gamma }
}

/// `Γ̃ = Γ / max Γ`.
pub fn normalize_correlations(map: &CorrelationMap) -> Result<CorrelationMap> {
    let max = map.max();
    if max.is_nan() || max <= 0.0 {
        return Err(Error::DegenerateInput("correlation map is identically zero".into()));
    }
    Ok(CorrelationMap { tau: map.tau, gamma: &map.gamma / max })
}
