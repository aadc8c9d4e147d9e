//! Projections of number states and superpositions onto the eigenstates of
//! `H₊ = H(J, V)` and `H₋ = H(J, −V)`, degenerate-energy profiles `P±(ω)`,
//! and the discrimination figure of merit `Δ(V)`.
//!
//! On even rings the two spectra mirror each other, `ω⁻ = −ω⁺`. Clusters are
//! paired in that order, and each `H₊` eigenvector `Φ⁺` is matched to the
//! `H₋` eigenvector obtained by projecting `BΦ⁺` onto the mirrored cluster of
//! the independently diagonalized `H₋`.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{prepare_state, StateSpec};
use crate::error::{Error, Result};
use crate::lattice::{LatticeConfig, SymmetrizedBasis};
use crate::spectrum::{diagonalize_config, energy_clusters, SpectralDecomposition, DEGENERACY_TOLERANCE};
use crate::state::TwoParticleState;
use crate::symmetry::boost_signs;

const REALNESS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// `C_i = ⟨Φ_i|ψ⟩` for every eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenProjection {
    pub coefficients: DVector<Complex64>,
    /// False when the input had a complex relative phase.
    pub is_real: bool,
}

impl EigenProjection {
    pub fn real_parts(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.re).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.coefficients.norm_squared()
    }
}

pub fn eigenprojections(state: &TwoParticleState, decomp: &SpectralDecomposition) -> Result<EigenProjection> {
    decomp.basis.check_same(state.basis())?;
    Ok(project_onto(&decomp.eigenvectors, state.amplitudes()))
}

fn project_onto(vectors: &DMatrix<f64>, amplitudes: &DVector<Complex64>) -> EigenProjection {
    let coefficients = DVector::from_fn(vectors.ncols(), |k, _| {
        vectors.column(k).iter().zip(amplitudes.iter()).map(|(x, a)| a * *x).sum::<Complex64>()
    });
    let is_real = coefficients.iter().all(|c| c.im.abs() <= REALNESS_TOLERANCE);
    EigenProjection { coefficients, is_real }
}

/// `Σ_i C_i Φ_i`.
pub fn reconstruct(projection: &EigenProjection, decomp: &SpectralDecomposition) -> DVector<Complex64> {
    let q = &decomp.eigenvectors;
    let mut out = DVector::<Complex64>::zeros(q.nrows());
    for (k, c) in projection.coefficients.iter().enumerate() {
        for (o, x) in out.iter_mut().zip(q.column(k).iter()) {
            *o += c * *x;
        }
    }
    out
}

/// Pairs `H₊` clusters with `H₋` clusters in mirrored order.
fn mirrored_clusters(
    plus: &SpectralDecomposition,
    minus: &SpectralDecomposition,
) -> Result<Vec<(Range<usize>, Range<usize>)>> {
    if plus.basis.sites() % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "mirror pairing of H(V) and H(-V) is undefined on an odd ring of {} sites",
            plus.basis.sites()
        )));
    }
    let cp = plus.clusters();
    let mut cm = minus.clusters();
    cm.reverse();
    let scale = plus.eigenvalues.iter().fold(1.0_f64, |m, w| m.max(w.abs()));
    let consistent = cp.len() == cm.len()
        && cp.iter().zip(&cm).all(|(a, b)| {
            a.len() == b.len() && (plus.eigenvalues[a.start] + minus.eigenvalues[b.start]).abs() <= 1e-8 * scale
        });
    if !consistent {
        return Err(Error::DegenerateInput("spectra of H(V) and H(-V) do not mirror each other".into()));
    }
    Ok(cp.into_iter().zip(cm).collect())
}

/// `H₋` eigenvectors aligned column-by-column with the `H₊` eigenvectors.
#[derive(Debug, Clone)]
pub struct MirrorPairing {
    pub partners: DMatrix<f64>,
    /// `H₋` energy of each partner column.
    pub energies: Vec<f64>,
    /// Largest `1 − ‖Π⁻ BΦ⁺‖` over all columns.
    pub max_defect: f64,
}

pub fn mirror_pairing(plus: &SpectralDecomposition, minus: &SpectralDecomposition) -> Result<MirrorPairing> {
    plus.basis.check_same(&minus.basis)?;
    let signs = DVector::from_vec(boost_signs(&plus.basis)?);
    let dim = plus.dim();
    let mut partners = DMatrix::zeros(dim, dim);
    let mut energies = vec![0.0; dim];
    let mut max_defect = 0.0_f64;
    for (rp, rm) in mirrored_clusters(plus, minus)? {
        let block = minus.eigenvectors.columns(rm.start, rm.len());
        for k in rp.clone() {
            let boosted = plus.eigenvectors.column(k).component_mul(&signs);
            let overlaps = block.transpose() * &boosted;
            let projected = block * overlaps;
            let norm = projected.norm();
            max_defect = max_defect.max((1.0 - norm).abs());
            partners.set_column(k, &(projected / norm));
            energies[k] = minus.eigenvalues[rm.start];
        }
    }
    Ok(MirrorPairing { partners, energies, max_defect })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    /// One-based number state `|j,k⟩_s`.
    pub pair: (usize, usize),
    pub eigen_index: usize,
    pub energy_plus: f64,
    pub energy_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    pub rows: Vec<CoefficientRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignRelation {
    /// Every non-negligible `C⁻` has the sign of its `C⁺`.
    Match,
    /// Every non-negligible `C⁻` has the opposite sign.
    Flip,
    Mixed,
}

impl CoefficientTable {
    pub fn rows_for(&self, pair: (usize, usize)) -> impl Iterator<Item = &CoefficientRow> {
        self.rows.iter().filter(move |r| r.pair == pair)
    }

    pub fn sign_relation(&self, pair: (usize, usize), tol: f64) -> SignRelation {
        let mut same = false;
        let mut opposite = false;
        for r in self.rows_for(pair).filter(|r| r.c_plus.abs() > tol && r.c_minus.abs() > tol) {
            if r.c_plus.signum() == r.c_minus.signum() {
                same = true;
            } else {
                opposite = true;
            }
        }
        match (same, opposite) {
            (true, false) => SignRelation::Match,
            (false, true) => SignRelation::Flip,
            _ => SignRelation::Mixed,
        }
    }

    /// Sum of squared coefficients of `pair` on each side.
    pub fn parseval(&self, pair: (usize, usize)) -> (f64, f64) {
        self.rows_for(pair).fold((0.0, 0.0), |(p, m), r| (p + r.c_plus * r.c_plus, m + r.c_minus * r.c_minus))
    }
}

/// `C±_{j,k,i}` of the given number states on a mirrored eigenbasis pair.
pub fn coefficient_table(
    pairs: &[(usize, usize)],
    plus: &SpectralDecomposition,
    minus: &SpectralDecomposition,
) -> Result<CoefficientTable> {
    let pairing = mirror_pairing(plus, minus)?;
    let basis = &plus.basis;
    let mut rows = Vec::with_capacity(pairs.len() * plus.dim());
    for &(a, b) in pairs {
        let idx = basis.index_unordered(a, b)?;
        let pair = (a.min(b), a.max(b));
        for k in 0..plus.dim() {
            rows.push(CoefficientRow {
                pair,
                eigen_index: k,
                energy_plus: plus.eigenvalues[k],
                energy_minus: pairing.energies[k],
                c_plus: plus.eigenvectors[(idx, k)],
                c_minus: pairing.partners[(idx, k)],
            });
        }
    }
    Ok(CoefficientTable { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileEntry {
    /// Cluster representative (lowest member).
    pub energy: f64,
    pub weight: f64,
    pub multiplicity: usize,
}

/// `P(ω) = Σ_{ω_i = ω} |⟨Φ_i|ψ⟩|²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionProfile {
    pub sign: Sign,
    pub entries: Vec<ProfileEntry>,
}

impl ProjectionProfile {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    /// Weight on levels within `radius` of `center`.
    pub fn weight_near(&self, center: f64, radius: f64) -> f64 {
        self.entries.iter().filter(|e| (e.energy - center).abs() <= radius).map(|e| e.weight).sum()
    }
}

pub fn projection_profile(
    projection: &EigenProjection,
    decomp: &SpectralDecomposition,
    relative_tolerance: f64,
    sign: Sign,
) -> ProjectionProfile {
    let entries = energy_clusters(&decomp.eigenvalues, relative_tolerance)
        .into_iter()
        .map(|r| ProfileEntry {
            energy: decomp.eigenvalues[r.start],
            weight: r.clone().map(|k| projection.coefficients[k].norm_sqr()).sum(),
            multiplicity: r.len(),
        })
        .collect();
    ProjectionProfile { sign, entries }
}

/// `Δ(V) = Σ_ω |P⁺(ω) − P⁻(−ω)|²` for one state on one even ring.
pub fn delta_for_state(state: &TwoParticleState, plus: &SpectralDecomposition, minus: &SpectralDecomposition) -> Result<f64> {
    let cluster_pairs = mirrored_clusters(plus, minus)?;
    let cp = eigenprojections(state, plus)?;
    let cm = eigenprojections(state, minus)?;
    Ok(cluster_pairs
        .into_iter()
        .map(|(rp, rm)| {
            let p: f64 = rp.map(|k| cp.coefficients[k].norm_sqr()).sum();
            let m: f64 = rm.map(|k| cm.coefficients[k].norm_sqr()).sum();
            (p - m).powi(2)
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaPoint {
    pub interaction: f64,
    pub delta: f64,
}

/// `Δ(V)` over a grid of non-negative `V`; `H±` are rebuilt at each point.
pub fn delta_of_v(spec: &StateSpec, sites: usize, hopping: f64, grid: &[f64]) -> Result<Vec<DeltaPoint>> {
    if sites % 2 == 1 {
        return Err(Error::Unsupported(format!("delta(V) needs an even ring, got {sites} sites")));
    }
    if spec.sites != sites {
        return Err(Error::BasisMismatch { expected: sites, actual: spec.sites });
    }
    let state = prepare_state(spec)?;
    grid.iter()
        .map(|&v| {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::Config(format!("delta(V) grid values must be non-negative, got {v}")));
            }
            let config = LatticeConfig::new(sites, hopping, v)?;
            let plus = diagonalize_config(config)?;
            let minus = diagonalize_config(config.mirrored())?;
            Ok(DeltaPoint { interaction: v, delta: delta_for_state(&state, &plus, &minus)? })
        })
        .collect()
}

/// Number states `|1,k⟩_s` for `k = 1..=⌊N/2⌋+1`, one per translation class
/// of pair distance.
pub fn representative_pairs(basis: &SymmetrizedBasis) -> Vec<(usize, usize)> {
    (1..=basis.sites() / 2 + 1).map(|k| (1, k)).collect()
}

/// Default profile tolerance, the same relative gap used for eigen clustering.
pub fn default_cluster_tolerance() -> f64 {
    DEGENERACY_TOLERANCE
}
