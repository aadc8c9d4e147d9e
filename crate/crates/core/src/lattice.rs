//! Ring geometry and the symmetrized two-boson basis.
//!
//! Site labels are one-based at every public boundary (`|15,17⟩_s` is
//! `(15, 17)`); everything stored internally is zero-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest ring accepted. On two sites the periodic bond would be counted twice.
pub const MIN_SITES: usize = 3;

/// Parameters of `H_N(J, V)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub sites: usize,
    pub hopping: f64,
    pub interaction: f64,
}

impl LatticeConfig {
    pub fn new(sites: usize, hopping: f64, interaction: f64) -> Result<Self> {
        let config = Self { sites, hopping, interaction };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < MIN_SITES {
            return Err(Error::InvalidLattice(format!(
                "need at least {MIN_SITES} sites, got {}",
                self.sites
            )));
        }
        if !self.hopping.is_finite() || self.hopping <= 0.0 {
            return Err(Error::InvalidLattice(format!(
                "hopping must be positive and finite, got {}",
                self.hopping
            )));
        }
        if !self.interaction.is_finite() {
            return Err(Error::InvalidLattice("interaction must be finite".into()));
        }
        Ok(())
    }

    /// Relative interaction strength `v = V/J`.
    pub fn relative_interaction(&self) -> f64 {
        self.interaction / self.hopping
    }

    /// Same lattice with the interaction sign flipped.
    pub fn mirrored(&self) -> Self {
        Self { interaction: -self.interaction, ..*self }
    }
}

/// Ordered basis `{|i,j⟩_s : 1 ≤ i ≤ j ≤ N}` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizedBasis {
    sites: usize,
    pairs: Vec<(usize, usize)>,
}

impl SymmetrizedBasis {
    pub fn new(sites: usize) -> Result<Self> {
        if sites < MIN_SITES {
            return Err(Error::InvalidLattice(format!(
                "need at least {MIN_SITES} sites, got {sites}"
            )));
        }
        let pairs = (0..sites)
            .flat_map(|i| (i..sites).map(move |j| (i, j)))
            .collect();
        Ok(Self { sites, pairs })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// `N(N+1)/2`.
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    /// One-based pair stored at `index`.
    pub fn pair(&self, index: usize) -> (usize, usize) {
        let (i, j) = self.pairs[index];
        (i + 1, j + 1)
    }

    /// Index of the one-based pair `(i, j)`; `None` unless `1 ≤ i ≤ j ≤ N`.
    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        if i == 0 || i > j || j > self.sites {
            return None;
        }
        Some(self.index0(i - 1, j - 1))
    }

    /// Like [`index`](Self::index) but accepts the two sites in either order.
    pub fn index_unordered(&self, a: usize, b: usize) -> Result<usize> {
        let (i, j) = if a <= b { (a, b) } else { (b, a) };
        self.index(i, j)
            .ok_or(Error::InvalidPair { i: a, j: b, n: self.sites })
    }

    pub(crate) fn pairs0(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Zero-based sites, either order.
    pub(crate) fn index0(&self, a: usize, b: usize) -> usize {
        let (i, j) = if a <= b { (a, b) } else { (b, a) };
        // rows 0..i hold N + (N-1) + ... + (N-i+1) entries
        i * self.sites - i * i.saturating_sub(1) / 2 + (j - i)
    }

    pub(crate) fn check_same(&self, other: &SymmetrizedBasis) -> Result<()> {
        if self.sites != other.sites {
            return Err(Error::BasisMismatch { expected: self.sites, actual: other.sites });
        }
        Ok(())
    }
}
