//! Entanglement of particles across a site bipartition: sector projection,
//! reduced density matrix of the one-particle-per-side sector, and the
//! normalized linear entropy.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::TwoParticleState;

/// Reduced-density eigenvalues down to this floor count as zero.
pub const PSD_FLOOR: f64 = -1e-10;
const TRACE_TOLERANCE: f64 = 1e-10;

/// Split of the ring into sites `A` and their complement `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    in_a: Vec<bool>,
}

impl Bipartition {
    /// `A = {1..⌊N/2⌋}`, `B` the rest.
    pub fn halves(sites: usize) -> Result<Self> {
        Self::from_sites(sites, &(1..=sites / 2).collect::<Vec<_>>())
    }

    /// `A` given as one-based sites.
    pub fn from_sites(sites: usize, a: &[usize]) -> Result<Self> {
        let mut in_a = vec![false; sites];
        for &s in a {
            if s == 0 || s > sites {
                return Err(Error::Config(format!("partition site {s} outside 1..={sites}")));
            }
            in_a[s - 1] = true;
        }
        let size = in_a.iter().filter(|x| **x).count();
        if size == 0 || size == sites {
            return Err(Error::Config("both sides of a bipartition must be non-empty".into()));
        }
        Ok(Self { in_a })
    }

    /// Parses `A` from ranges and singletons, e.g. `"1..15"` or `"1,2,7..9"`.
    pub fn parse(sites: usize, text: &str) -> Result<Self> {
        let mut a = Vec::new();
        for chunk in text.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let bad = || Error::Config(format!("cannot parse partition '{chunk}'"));
            if let Some((lo, hi)) = chunk.split_once("..") {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                a.extend(lo..=hi);
            } else {
                a.push(chunk.parse().map_err(|_| bad())?);
            }
        }
        Self::from_sites(sites, &a)
    }

    pub fn sites(&self) -> usize {
        self.in_a.len()
    }

    pub(crate) fn contains0(&self, site: usize) -> bool {
        self.in_a[site]
    }

    /// One-based sites of `A`.
    pub fn a_sites(&self) -> Vec<usize> {
        (0..self.sites()).filter(|&s| self.in_a[s]).map(|s| s + 1).collect()
    }

    pub fn b_sites(&self) -> Vec<usize> {
        (0..self.sites()).filter(|&s| !self.in_a[s]).map(|s| s + 1).collect()
    }

    pub fn a_size(&self) -> usize {
        self.in_a.iter().filter(|x| **x).count()
    }

    /// Same partition shifted by `shift` sites around the ring.
    pub fn translated(&self, shift: isize) -> Self {
        let n = self.sites() as isize;
        let mut in_a = vec![false; self.sites()];
        for s in 0..self.sites() {
            if self.in_a[s] {
                in_a[((s as isize + shift).rem_euclid(n)) as usize] = true;
            }
        }
        Self { in_a }
    }
}

impl fmt::Display for Bipartition {
    /// Compact range list of `A`, e.g. `1..15` or `1..3,7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.a_sites();
        let mut parts = Vec::new();
        let mut k = 0;
        while k < a.len() {
            let start = a[k];
            while k + 1 < a.len() && a[k + 1] == a[k] + 1 {
                k += 1;
            }
            parts.push(if a[k] == start { start.to_string() } else { format!("{start}..{}", a[k]) });
            k += 1;
        }
        f.write_str(&parts.join(","))
    }
}

/// `Π_{k,2−k} |ψ⟩` and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorProjection {
    /// Particles in `A`.
    pub k: usize,
    pub probability: f64,
    /// Projected, unnormalized amplitudes on the full basis.
    pub amplitudes: DVector<Complex64>,
}

/// Sectors `k = 0, 1, 2`; pair `(i, j)` falls in sector `|{i, j} ∩ A|`
/// counted with multiplicity.
pub fn project_sectors(state: &TwoParticleState, part: &Bipartition) -> Result<Vec<SectorProjection>> {
    if part.sites() != state.sites() {
        return Err(Error::BasisMismatch { expected: state.sites(), actual: part.sites() });
    }
    let basis = state.basis();
    let mut sectors: Vec<SectorProjection> = (0..3)
        .map(|k| SectorProjection { k, probability: 0.0, amplitudes: DVector::zeros(basis.dim()) })
        .collect();
    for (idx, &(i, j)) in basis.pairs0().iter().enumerate() {
        let k = part.contains0(i) as usize + part.contains0(j) as usize;
        let a = state.amplitudes()[idx];
        sectors[k].amplitudes[idx] = a;
        sectors[k].probability += a.norm_sqr();
    }
    Ok(sectors)
}

/// `ρ_A` of the renormalized one-particle-per-side sector.
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    /// One-based sites labelling rows and columns.
    pub sites: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
    /// Eigenvalues clipped at zero, ascending.
    pub spectrum: Vec<f64>,
}

impl ReducedDensity {
    pub fn purity(&self) -> f64 {
        self.spectrum.iter().map(|p| p * p).sum()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// `ρ_A[a, a'] = Σ_b ψ(a, b) ψ*(a', b)` over the renormalized `k = 1` sector.
pub fn reduced_density(sector: &SectorProjection, part: &Bipartition) -> Result<ReducedDensity> {
    if sector.k != 1 {
        return Err(Error::Unsupported(format!("reduced density needs the k = 1 sector, got k = {}", sector.k)));
    }
    if sector.probability.is_nan() || sector.probability <= 0.0 {
        return Err(Error::EmptySector);
    }
    let n = part.sites();
    let a_sites = part.a_sites();
    let b_sites = part.b_sites();
    let mut a_pos = vec![usize::MAX; n];
    let mut b_pos = vec![usize::MAX; n];
    a_sites.iter().enumerate().for_each(|(p, &s)| a_pos[s - 1] = p);
    b_sites.iter().enumerate().for_each(|(p, &s)| b_pos[s - 1] = p);

    let basis = crate::lattice::SymmetrizedBasis::new(n)?;
    if basis.dim() != sector.amplitudes.len() {
        return Err(Error::BasisMismatch { expected: n, actual: sector.amplitudes.len() });
    }
    let scale = sector.probability.sqrt();
    let mut psi = DMatrix::<Complex64>::zeros(a_sites.len(), b_sites.len());
    for (idx, &(i, j)) in basis.pairs0().iter().enumerate() {
        let (a, b) = match (part.contains0(i), part.contains0(j)) {
            (true, false) => (i, j),
            (false, true) => (j, i),
            _ => continue,
        };
        psi[(a_pos[a], b_pos[b])] = sector.amplitudes[idx] / scale;
    }
    let matrix = &psi * psi.adjoint();

    let trace = matrix.trace().re;
    if (trace - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::DegenerateInput(format!("reduced density has trace {trace}")));
    }
    let eigen = SymmetricEigen::new(matrix.clone());
    let mut spectrum: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    spectrum.sort_by(f64::total_cmp);
    if let Some(&lowest) = spectrum.first() {
        if lowest < PSD_FLOOR {
            return Err(Error::DegenerateInput(format!("reduced density eigenvalue {lowest:e} below floor")));
        }
    }
    spectrum.iter_mut().for_each(|p| *p = p.max(0.0));
    Ok(ReducedDensity { sites: a_sites, matrix, spectrum })
}

/// `d/(d−1) · (1 − Tr ρ²)`; zero for a single-site register.
pub fn normalized_linear_entropy(purity: f64, register_size: usize) -> f64 {
    if register_size < 2 {
        return 0.0;
    }
    let d = register_size as f64;
    d / (d - 1.0) * (1.0 - purity)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementRecord {
    pub tau: f64,
    pub entanglement: f64,
    pub p11: f64,
    pub partition: String,
}

/// `E_P = P_{1,1} · E(ρ_{1,1})` with the normalized linear entropy for `E`.
pub fn entanglement_of_particles(state: &TwoParticleState, part: &Bipartition) -> Result<EntanglementRecord> {
    let sectors = project_sectors(state, part)?;
    let sector = &sectors[1];
    let partition = part.to_string();
    if sector.probability.is_nan() || sector.probability <= 0.0 {
        return Ok(EntanglementRecord { tau: 0.0, entanglement: 0.0, p11: 0.0, partition });
    }
    let rho = reduced_density(sector, part)?;
    let entropy = normalized_linear_entropy(rho.purity(), part.a_size());
    Ok(EntanglementRecord { tau: 0.0, entanglement: sector.probability * entropy, p11: sector.probability, partition })
}
