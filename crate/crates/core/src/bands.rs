//! Quasimomentum labels, miniband classification and radial wavefunctions.

use std::f64::consts::{PI, TAU};

use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeConfig, SymmetrizedBasis};
use crate::spectrum::{pivot_index, SpectralDecomposition};
use crate::symmetry::translation_table;

/// `|V|/J` at and above which the miniband is the `N` levels nearest `V`.
pub const MINIBAND_THRESHOLD: f64 = 4.0;

const SHARPNESS_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Band {
    Miniband,
    MainSubband,
}

impl Band {
    pub fn as_str(&self) -> &'static str {
        match self {
            Band::Miniband => "miniband",
            Band::MainSubband => "main-subband",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPoint {
    /// `ν ∈ {1..N}`, `K = 2πν/N`.
    pub nu: usize,
    pub momentum: f64,
    pub energy: f64,
    pub band: Band,
    /// Index of the source eigenvalue in the decomposition.
    pub eigen_index: usize,
}

#[derive(Debug, Clone)]
pub struct BandStructure {
    pub config: LatticeConfig,
    pub basis: SymmetrizedBasis,
    pub points: Vec<BandPoint>,
    /// Eigenstates of both `H` and `T_1`, aligned with `points`.
    pub states: Vec<DVector<Complex64>>,
    pub warnings: Vec<String>,
}

impl BandStructure {
    pub fn count(&self, band: Band) -> usize {
        self.points.iter().filter(|p| p.band == band).count()
    }

    /// Largest `‖T_1 Φ − e^{−iK} Φ‖` over the labeled states.
    pub fn max_translation_residual(&self) -> f64 {
        let table = translation_table(&self.basis, 1);
        self.points
            .iter()
            .zip(&self.states)
            .map(|(p, v)| {
                let shifted = crate::symmetry::translate_vector(&table, v);
                let phase = Complex64::from_polar(1.0, -p.momentum);
                (shifted - v * phase).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn nu_to_momentum(nu: usize, sites: usize) -> f64 {
    TAU * nu as f64 / sites as f64
}

fn sector_label(sector: usize, sites: usize) -> usize {
    if sector == 0 {
        sites
    } else {
        sector
    }
}

pub fn assign_quasimomenta(decomp: &SpectralDecomposition) -> BandStructure {
    assign_quasimomenta_with(decomp, MINIBAND_THRESHOLD)
}

/// Simultaneously diagonalizes `H` and `T_1` inside every degenerate cluster.
pub fn assign_quasimomenta_with(decomp: &SpectralDecomposition, threshold: f64) -> BandStructure {
    let basis = &decomp.basis;
    let n = basis.sites();
    let tables: Vec<Vec<usize>> = (0..n as isize).map(|l| translation_table(basis, l)).collect();
    let miniband_flags = nearest_levels(decomp);

    let mut points = Vec::with_capacity(decomp.dim());
    let mut states = Vec::with_capacity(decomp.dim());
    let mut warnings = Vec::new();

    for range in decomp.clusters() {
        let m = range.len();
        let block = decomp.eigenvectors.columns(range.start, m).into_owned();
        // overlaps[l][(a, b)] = ⟨q_a | T_l q_b⟩
        let overlaps: Vec<DMatrix<f64>> = tables
            .iter()
            .map(|table| {
                DMatrix::from_fn(m, m, |a, b| {
                    table.iter().enumerate().map(|(k, &dest)| block[(dest, a)] * block[(k, b)]).sum()
                })
            })
            .collect();

        let mut found: Vec<(usize, f64, DVector<Complex64>)> = Vec::new();
        for sector in 0..n {
            let k = nu_to_momentum(sector, n);
            let mut g = DMatrix::<Complex64>::zeros(m, m);
            for (l, s) in overlaps.iter().enumerate() {
                let phase = Complex64::from_polar(1.0 / n as f64, k * l as f64);
                g += s.map(|x| phase * x);
            }
            let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(g);
            for (idx, &weight) in eig.eigenvalues.iter().enumerate() {
                if weight > 0.5 {
                    let coeffs = eig.eigenvectors.column(idx);
                    let v = block.map(|x| Complex64::new(x, 0.0)) * coeffs;
                    found.push((sector, weight, fix_phase(v)));
                }
            }
        }

        if found.len() != m {
            let msg = format!(
                "cluster at energy {:.6} has {} states but {} sharp translation sectors",
                decomp.eigenvalues[range.start],
                m,
                found.len()
            );
            warn!("{msg}");
            warnings.push(msg);
            found.sort_by(|a, b| b.1.total_cmp(&a.1));
            found.truncate(m);
            for offset in found.len()..m {
                let v = block.column(offset).map(|x| Complex64::new(x, 0.0));
                let sector = dominant_sector(&tables[1 % n], &v, n);
                found.push((sector, 0.0, v));
            }
        }
        found.sort_by_key(|f| sector_label(f.0, n));

        let high_coupling = decomp.config.relative_interaction().abs() >= threshold;
        for (offset, (sector, _, v)) in found.into_iter().enumerate() {
            let eigen_index = range.start + offset;
            let band = if high_coupling {
                if miniband_flags[eigen_index] { Band::Miniband } else { Band::MainSubband }
            } else if doublon_weight(basis, &v) > 0.5 {
                Band::Miniband
            } else {
                Band::MainSubband
            };
            let nu = sector_label(sector, n);
            points.push(BandPoint {
                nu,
                momentum: nu_to_momentum(nu, n),
                energy: decomp.eigenvalues[eigen_index],
                band,
                eigen_index,
            });
            states.push(v);
        }
    }

    BandStructure { config: decomp.config, basis: basis.clone(), points, states, warnings }
}

/// Flags the `N` eigenvalues nearest `V`.
fn nearest_levels(decomp: &SpectralDecomposition) -> Vec<bool> {
    let v = decomp.config.interaction;
    let mut order: Vec<usize> = (0..decomp.dim()).collect();
    order.sort_by(|&a, &b| {
        (decomp.eigenvalues[a] - v).abs().total_cmp(&(decomp.eigenvalues[b] - v).abs()).then(a.cmp(&b))
    });
    let mut flags = vec![false; decomp.dim()];
    for &k in order.iter().take(decomp.basis.sites()) {
        flags[k] = true;
    }
    flags
}

/// `Σ_i |⟨i,i|Φ⟩|²`.
pub fn doublon_weight(basis: &SymmetrizedBasis, v: &DVector<Complex64>) -> f64 {
    (0..basis.sites()).map(|i| v[basis.index0(i, i)].norm_sqr()).sum()
}

fn dominant_sector(t1: &[usize], v: &DVector<Complex64>, n: usize) -> usize {
    let shifted = crate::symmetry::translate_vector(t1, v);
    let lambda = v.dotc(&shifted);
    momentum_sector(lambda, n)
}

/// Sector `ν mod N` of a `T_1` eigenvalue `e^{−iK}`.
fn momentum_sector(lambda: Complex64, n: usize) -> usize {
    let k = (-lambda.arg()).rem_euclid(TAU);
    ((k * n as f64 / TAU).round() as usize) % n
}

fn fix_phase(mut v: DVector<Complex64>) -> DVector<Complex64> {
    let norm = v.norm();
    if norm > 0.0 {
        v.unscale_mut(norm);
    }
    let k = pivot_index(v.iter().map(|a| a.norm()));
    let pivot = v[k];
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|a| *a *= phase);
    }
    v
}

/// `φ(r)` for `r = 0..⌊N/2⌋` in the pair ansatz `Φ(R, r) = e^{iKR} φ(r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub nu: usize,
    pub momentum: f64,
    pub values: Vec<Complex64>,
    /// Multiplicity of each `r` on the ring (1 for `r = 0` and `r = N/2`, else 2).
    pub weights: Vec<f64>,
}

impl RadialProfile {
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(p, w)| w * p.norm_sqr()).sum()
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|p| p.norm()).collect()
    }
}

/// Radial profile of the `state`-th entry of a band structure.
pub fn radial_wavefunction(bands: &BandStructure, state: usize) -> Result<RadialProfile> {
    let point = bands
        .points
        .get(state)
        .ok_or_else(|| Error::DegenerateInput(format!("no band state {state}")))?;
    Ok(radial_profile(&bands.basis, &bands.states[state], point.nu))
}

/// Radial profile of a real eigenvector; only works when it already carries
/// a sharp quasimomentum (`K = 0` or `π` for a real vector).
pub fn radial_wavefunction_of_eigenvector(decomp: &SpectralDecomposition, index: usize) -> Result<RadialProfile> {
    if index >= decomp.dim() {
        return Err(Error::DegenerateInput(format!("no eigenvector {index}")));
    }
    let n = decomp.basis.sites();
    let v = decomp.eigenvector(index).map(|x| Complex64::new(x, 0.0));
    let shifted = crate::symmetry::translate_vector(&translation_table(&decomp.basis, 1), &v);
    let lambda = v.dotc(&shifted);
    if (shifted - &v * lambda).norm() > SHARPNESS_TOLERANCE {
        return Err(Error::NoSharpMomentum(index));
    }
    let nu = sector_label(momentum_sector(lambda, n), n);
    Ok(radial_profile(&decomp.basis, &v, nu))
}

fn radial_profile(basis: &SymmetrizedBasis, v: &DVector<Complex64>, nu: usize) -> RadialProfile {
    let n = basis.sites();
    let k = nu_to_momentum(nu, n);
    // e^{−iKr/2} depends on the zone choice of K; (−π, π] keeps K = 0 nodeless
    let centered = centered_momentum(k);
    let scale = (n as f64).sqrt();
    let mut values = Vec::with_capacity(n / 2 + 1);
    let mut weights = Vec::with_capacity(n / 2 + 1);
    for r in 0..=n / 2 {
        let amplitude = v[basis.index0(0, r)];
        let multiplicity = if r == 0 { 1.0 } else { 2.0_f64 };
        let phase = Complex64::from_polar(1.0, -centered * r as f64 / 2.0);
        values.push(amplitude * phase * scale / multiplicity.sqrt());
        weights.push(if r == 0 || 2 * r == n { 1.0 } else { 2.0 });
    }
    let mut profile = RadialProfile { nu, momentum: k, values, weights };
    let norm = profile.norm_sqr().sqrt();
    let p = pivot_index(profile.values.iter().map(|x| x.norm()));
    let pivot = profile.values[p];
    if norm > 0.0 && pivot.norm() > 0.0 {
        let phase = pivot.conj() / (pivot.norm() * norm);
        profile.values.iter_mut().for_each(|x| *x *= phase);
    }
    profile
}

/// Folds `K` into `(−π, π]`.
pub fn centered_momentum(k: f64) -> f64 {
    let folded = k.rem_euclid(TAU);
    if folded > PI {
        folded - TAU
    } else {
        folded
    }
}
