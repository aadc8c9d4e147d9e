//! Independent reference implementations used as test oracles. None of them
//! call into the library's numerics; they only read its basis ordering.

#![allow(dead_code)]

use std::collections::HashMap;

use bosewalk_core::{SymmetrizedBasis, TwoParticleState};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Bose-Hubbard `H` built in the full `3^N` truncated Fock space from
/// Kronecker products of single-site ladder operators, then restricted to the
/// two-particle configurations in symmetrized-basis order.
pub fn fock_hamiltonian(sites: usize, hopping: f64, interaction: f64) -> DMatrix<f64> {
    let local = 3;
    // b|n⟩ = √n |n−1⟩ on {|0⟩, |1⟩, |2⟩}
    let mut b = DMatrix::zeros(local, local);
    b[(0, 1)] = 1.0;
    b[(1, 2)] = 2f64.sqrt();
    let bd = b.transpose();
    let num = &bd * &b;
    let id = DMatrix::<f64>::identity(local, local);
    let embed = |ops: &[(usize, &DMatrix<f64>)]| {
        let mut out = DMatrix::<f64>::identity(1, 1);
        for s in 0..sites {
            let op = ops.iter().find(|(site, _)| *site == s).map(|(_, m)| *m).unwrap_or(&id);
            out = out.kronecker(op);
        }
        out
    };
    let full = local.pow(sites as u32);
    let mut h = DMatrix::zeros(full, full);
    for i in 0..sites {
        let next = (i + 1) % sites;
        let hop = embed(&[(next, &bd), (i, &b)]);
        h -= hopping * (&hop + hop.transpose());
        let n_i = embed(&[(i, &num)]);
        let n_minus_one = &n_i - DMatrix::identity(full, full);
        h += 0.5 * interaction * (&n_i * n_minus_one);
    }
    let configs: Vec<usize> = fock_configs(sites);
    DMatrix::from_fn(configs.len(), configs.len(), |r, c| h[(configs[r], configs[c])])
}

/// Row-major (site 0 most significant) index of each two-particle Fock
/// configuration, in the order of the symmetrized basis.
fn fock_configs(sites: usize) -> Vec<usize> {
    let basis = SymmetrizedBasis::new(sites).unwrap();
    (0..basis.dim())
        .map(|k| {
            let (i, j) = basis.pair(k);
            let mut occ = vec![0usize; sites];
            occ[i - 1] += 1;
            occ[j - 1] += 1;
            occ.iter().fold(0, |acc, &n| acc * 3 + n)
        })
        .collect()
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted.
pub fn jacobi_eigenvalues(matrix: &DMatrix<f64>) -> Vec<f64> {
    let n = matrix.nrows();
    let mut a = matrix.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q))).map(|(p, q)| a[(p, q)].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|k| a[(k, k)]).collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `exp(−iHτ) v` by a Taylor series applied in `s` short steps with
/// `‖H‖₁ τ / s ≤ 1/2`.
pub fn series_propagate(h: &DMatrix<f64>, v: &DVector<Complex64>, tau: f64) -> DVector<Complex64> {
    let norm1 = (0..h.ncols()).map(|c| h.column(c).abs().sum()).fold(0.0, f64::max);
    let steps = ((norm1 * tau.abs()) / 0.5).ceil().max(1.0) as usize;
    let dt = tau / steps as f64;
    let hc = h.map(|x| Complex64::new(x, 0.0));
    let factor = Complex64::new(0.0, -dt);
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut sum = out.clone();
        for k in 1..60 {
            term = (&hc * term) * (factor / k as f64);
            sum += &term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        out = sum;
    }
    out
}

/// Result of tracing out the `B` modes of a two-boson state.
pub struct ModeTrace {
    /// `P_{k, 2−k}` for `k` particles in `A`.
    pub sectors: [f64; 3],
    /// Purity of the normalized one-particle block of `ρ_A`.
    pub purity: f64,
    /// Normalized one-particle block of `ρ_A`, indexed by the sites of `A`.
    pub rho11: DMatrix<Complex64>,
}

/// Builds the state as a matrix `M[α, β]` over Fock configurations of the `A`
/// and `B` mode registers (at most two particles each), forms
/// `ρ_A = M M†` and reads off the particle-number blocks.
pub fn mode_partial_trace(state: &TwoParticleState, a_sites: &[usize]) -> ModeTrace {
    let n = state.sites();
    let b_sites: Vec<usize> = (1..=n).filter(|s| !a_sites.contains(s)).collect();
    let register = |sites: &[usize]| {
        let mut configs: Vec<Vec<usize>> = vec![vec![]];
        for (x, &s) in sites.iter().enumerate() {
            configs.push(vec![s]);
            for &t in &sites[x..] {
                configs.push(vec![s, t]);
            }
        }
        configs
    };
    let ra = register(a_sites);
    let rb = register(&b_sites);
    let index_b: HashMap<Vec<usize>, usize> = rb.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
    let mut m = DMatrix::<Complex64>::zeros(ra.len(), rb.len());
    let basis = state.basis();
    for k in 0..basis.dim() {
        let (i, j) = basis.pair(k);
        let (ca, cb): (Vec<usize>, Vec<usize>) = [i, j].iter().partition(|s| a_sites.contains(s));
        let row = ra.iter().position(|c| *c == ca).unwrap();
        let col = index_b[&cb];
        m[(row, col)] = state.amplitudes()[k];
    }
    let rho = &m * m.adjoint();
    let mut sectors = [0.0; 3];
    for (r, c) in ra.iter().enumerate() {
        sectors[c.len()] += rho[(r, r)].re;
    }
    let ones: Vec<usize> = ra.iter().enumerate().filter(|(_, c)| c.len() == 1).map(|(r, _)| r).collect();
    let block = DMatrix::from_fn(ones.len(), ones.len(), |x, y| rho[(ones[x], ones[y])]);
    let rho11 = if sectors[1] > 0.0 { block / Complex64::new(sectors[1], 0.0) } else { block };
    let purity = (&rho11 * &rho11).trace().re;
    ModeTrace { sectors, purity, rho11 }
}

/// `E_P` from the mode-register oracle.
pub fn oracle_entanglement(state: &TwoParticleState, a_sites: &[usize]) -> f64 {
    let t = mode_partial_trace(state, a_sites);
    let d = a_sites.len() as f64;
    if t.sectors[1] <= 0.0 || d < 2.0 {
        return 0.0;
    }
    t.sectors[1] * d / (d - 1.0) * (1.0 - t.purity)
}

/// `Γ_ij` from amplitudes via first-quantized wavefunction `ψ(x₁, x₂)`.
pub fn oracle_correlations(state: &TwoParticleState) -> DMatrix<f64> {
    let n = state.sites();
    let basis = state.basis();
    // symmetric first-quantized wavefunction normalized over ordered pairs
    let mut psi = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..basis.dim() {
        let (i, j) = basis.pair(k);
        let a = state.amplitudes()[k];
        if i == j {
            psi[(i - 1, i - 1)] = a;
        } else {
            let v = a / 2f64.sqrt();
            psi[(i - 1, j - 1)] = v;
            psi[(j - 1, i - 1)] = v;
        }
    }
    // Γ_ij = 2 |ψ(i, j)|²
    psi.map(|z| 2.0 * z.norm_sqr())
}

pub fn normalized(map: &DMatrix<f64>) -> DMatrix<f64> {
    map / map.max()
}

pub fn complex(v: &DVector<f64>) -> DVector<Complex64> {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Isometry from the symmetrized basis into the `N²` first-quantized space.
pub fn symmetric_embedding(sites: usize) -> DMatrix<f64> {
    let basis = SymmetrizedBasis::new(sites).unwrap();
    let mut s = DMatrix::zeros(sites * sites, basis.dim());
    for k in 0..basis.dim() {
        let (i, j) = basis.pair(k);
        let (x, y) = (i - 1, j - 1);
        if x == y {
            s[(x * sites + x, k)] = 1.0;
        } else {
            let w = 0.5f64.sqrt();
            s[(x * sites + y, k)] = w;
            s[(y * sites + x, k)] = w;
        }
    }
    s
}

/// `h⊗1 + 1⊗h + V δ(x₁, x₂)` on ordered pairs, compressed onto the
/// symmetric subspace. Usable far beyond the reach of the `3^N` oracle.
pub fn first_quantized_hamiltonian(sites: usize, hopping: f64, interaction: f64) -> DMatrix<f64> {
    let mut h1 = DMatrix::zeros(sites, sites);
    for i in 0..sites {
        let next = (i + 1) % sites;
        h1[(next, i)] -= hopping;
        h1[(i, next)] -= hopping;
    }
    let id = DMatrix::<f64>::identity(sites, sites);
    let mut h = h1.kronecker(&id) + id.kronecker(&h1);
    for x in 0..sites {
        h[(x * sites + x, x * sites + x)] += interaction;
    }
    let s = symmetric_embedding(sites);
    s.transpose() * h * s
}
