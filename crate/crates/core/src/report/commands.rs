use log::{info, warn};
use serde::Serialize;

use super::config::{OutputFormat, RunConfig};
use super::output::{json_artifact, num, CsvTable};
use super::{Artifact, Command};
use crate::bands::assign_quasimomenta;
use crate::dynamics::{
    correlation_map, normalize_correlations, prepare_state, site_density, time_grid, Preset, SpectralPropagator,
    BOUNDARY_GUARD_THRESHOLD,
};
use crate::entanglement::entanglement_of_particles;
use crate::error::Result;
use crate::lattice::{LatticeConfig, SymmetrizedBasis};
use crate::projection::{coefficient_table, delta_of_v, SignRelation};
use crate::spectrum::{diagonalize_config, spectrum_deviation};
use crate::symmetry::require_even;
use crate::symmetry_checks::{
    check_boost_relation, check_invariance_theorem, check_mirror, BoostReport, InvarianceReport, MirrorReport,
    ObservableMatrix,
};

const DEFAULT_SITES: usize = 30;
const DEFAULT_INTERACTION: f64 = 8.0;
const DEFAULT_DELTA_GRID: [f64; 6] = [2.0, 4.0, 8.0, 12.0, 16.0, 20.0];
const SIGN_TOLERANCE: f64 = 1e-10;

fn signed_configs(sites: usize, hopping: f64, v: f64) -> Result<[(&'static str, LatticeConfig); 2]> {
    let plus = LatticeConfig::new(sites, hopping, v)?;
    Ok([("plus", plus), ("minus", plus.mirrored())])
}

#[derive(Serialize)]
struct SpectrumRow {
    v: f64,
    sign: &'static str,
    nu: usize,
    k: f64,
    omega: f64,
    band: &'static str,
}

pub struct SpectrumCommand;

impl Command for SpectrumCommand {
    fn name(&self) -> &'static str {
        "spectrum"
    }

    fn about(&self) -> &'static str {
        "band structure omega(K) with miniband tags for +V and -V"
    }

    fn validate(&self, config: &RunConfig) -> Result<()> {
        config.validate_common()?;
        config.single_sites(DEFAULT_SITES).map(drop)
    }

    fn run(&self, config: &RunConfig) -> Result<Vec<Artifact>> {
        let sites = config.single_sites(DEFAULT_SITES)?;
        let j = config.hopping;
        let mut rows = Vec::new();
        for v in config.interactions_or(&[DEFAULT_INTERACTION]) {
            for (sign, lattice) in signed_configs(sites, j, v)? {
                let bands = assign_quasimomenta(&diagonalize_config(lattice)?);
                info!("spectrum N={sites} V={}: {} miniband states", lattice.interaction / j, bands.count(crate::bands::Band::Miniband));
                rows.extend(bands.points.iter().map(|p| SpectrumRow {
                    v: lattice.interaction / j,
                    sign,
                    nu: p.nu,
                    k: p.momentum,
                    omega: p.energy / j,
                    band: p.band.as_str(),
                }));
            }
        }
        match config.format {
            OutputFormat::Csv => {
                let mut t = CsvTable::new(&["V", "sign", "nu", "K", "omega", "band"])?;
                for r in &rows {
                    t.row([num(r.v), r.sign.into(), r.nu.to_string(), num(r.k), num(r.omega), r.band.into()])?;
                }
                Ok(vec![t.finish("spectrum.csv")?])
            }
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Data<'a> {
                    sites: usize,
                    rows: &'a [SpectrumRow],
                }
                Ok(vec![json_artifact("spectrum.json", self.name(), &Data { sites, rows: &rows })?])
            }
        }
    }
}

#[derive(Serialize)]
struct DeviationRow {
    sites: usize,
    v: f64,
    deviation: f64,
}

pub struct DeviationCommand;

impl Command for DeviationCommand {
    fn name(&self) -> &'static str {
        "deviation"
    }

    fn about(&self) -> &'static str {
        "spectral mirror deviation D_V for each N"
    }

    fn run(&self, config: &RunConfig) -> Result<Vec<Artifact>> {
        let j = config.hopping;
        let mut rows = Vec::new();
        for v in config.interactions_or(&[DEFAULT_INTERACTION]) {
            for sites in config.sites_or(3..=DEFAULT_SITES) {
                rows.push(DeviationRow { sites, v: v / j, deviation: spectrum_deviation(sites, j, v)? / j });
            }
        }
        match config.format {
            OutputFormat::Csv => {
                let mut t = CsvTable::new(&["N", "V", "D_V"])?;
                for r in &rows {
                    t.row([r.sites.to_string(), num(r.v), num(r.deviation)])?;
                }
                Ok(vec![t.finish("deviation.csv")?])
            }
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Data<'a> {
                    rows: &'a [DeviationRow],
                }
                Ok(vec![json_artifact("deviation.json", self.name(), &Data { rows: &rows })?])
            }
        }
    }
}

#[derive(Serialize)]
struct Snapshot {
    v: f64,
    sign: &'static str,
    tau: f64,
    density: Vec<f64>,
    /// Row-major `Γ̃`, index 0 is site 1.
    correlations: Vec<Vec<f64>>,
    entanglement: f64,
    p11: f64,
}

#[derive(Serialize)]
struct DifferenceRow {
    v: f64,
    tau: f64,
    max_correlation_difference: f64,
    entanglement_difference: f64,
}

pub struct EvolveCommand;

impl EvolveCommand {
    fn series(config: &RunConfig) -> Result<(usize, String, Vec<Snapshot>, Vec<DifferenceRow>)> {
        let sites = config.single_sites(DEFAULT_SITES)?;
        let j = config.hopping;
        let spec = config.state_spec(sites, Preset::Psi1)?;
        let state = prepare_state(&spec)?;
        let part = config.bipartition(sites)?;
        let taus = time_grid(config.tau_max, config.tau_steps);
        let mut snapshots = Vec::new();
        let mut differences = Vec::new();
        for v in config.interactions_or(&[DEFAULT_INTERACTION]) {
            let mut per_sign = Vec::with_capacity(2);
            for (sign, lattice) in signed_configs(sites, j, v)? {
                let decomp = diagonalize_config(lattice)?;
                let propagator = SpectralPropagator::new(&decomp, &state)?;
                let mut warned = false;
                let mut series = Vec::with_capacity(taus.len());
                for &tau in &taus {
                    let psi = propagator.at(tau);
                    let density = site_density(&psi);
                    if !warned && density.seam_density() > BOUNDARY_GUARD_THRESHOLD {
                        warn!(
                            "V={} {sign}: density {:.3e} reaches the ring seam at tau={tau}; periodic wrap-around now affects the walk",
                            lattice.interaction / j,
                            density.seam_density()
                        );
                        warned = true;
                    }
                    let gamma = normalize_correlations(&correlation_map(&psi))?;
                    let ep = entanglement_of_particles(&psi, &part)?;
                    series.push((gamma, Snapshot {
                        v: lattice.interaction / j,
                        sign,
                        tau,
                        density: density.values,
                        correlations: Vec::new(),
                        entanglement: ep.entanglement,
                        p11: ep.p11,
                    }));
                }
                per_sign.push(series);
            }
            let minus = per_sign.pop().expect("two signs");
            let plus = per_sign.pop().expect("two signs");
            for (k, &tau) in taus.iter().enumerate() {
                differences.push(DifferenceRow {
                    v: v / j,
                    tau,
                    max_correlation_difference: plus[k].0.max_abs_difference(&minus[k].0),
                    entanglement_difference: (plus[k].1.entanglement - minus[k].1.entanglement).abs(),
                });
            }
            for (gamma, mut snap) in plus.into_iter().chain(minus) {
                snap.correlations = gamma.gamma.row_iter().map(|r| r.iter().copied().collect()).collect();
                snapshots.push(snap);
            }
        }
        Ok((sites, part.to_string(), snapshots, differences))
    }
}

impl Command for EvolveCommand {
    fn name(&self) -> &'static str {
        "evolve"
    }

    fn about(&self) -> &'static str {
        "time series of correlations, densities and entanglement for both signs of V"
    }

    fn validate(&self, config: &RunConfig) -> Result<()> {
        config.validate_common()?;
        let sites = config.single_sites(DEFAULT_SITES)?;
        config.state_spec(sites, Preset::Psi1)?;
        config.bipartition(sites).map(drop)
    }

    fn run(&self, config: &RunConfig) -> Result<Vec<Artifact>> {
        let (sites, partition, snapshots, differences) = Self::series(config)?;
        match config.format {
            OutputFormat::Csv => {
                let mut corr = CsvTable::new(&["V", "sign", "tau", "i", "j", "value"])?;
                let mut dens = CsvTable::new(&["V", "sign", "tau", "site", "value"])?;
                let mut ent = CsvTable::new(&["V", "sign", "tau", "E_P", "P11"])?;
                for s in &snapshots {
                    let (v, tau) = (num(s.v), num(s.tau));
                    for (i, row) in s.correlations.iter().enumerate() {
                        for (j, &x) in row.iter().enumerate() {
                            corr.row([v.as_str(), s.sign, &tau, &(i + 1).to_string(), &(j + 1).to_string(), &num(x)])?;
                        }
                    }
                    for (i, &x) in s.density.iter().enumerate() {
                        dens.row([v.as_str(), s.sign, &tau, &(i + 1).to_string(), &num(x)])?;
                    }
                    ent.row([v.as_str(), s.sign, &tau, &num(s.entanglement), &num(s.p11)])?;
                }
                let mut diff = CsvTable::new(&["V", "tau", "max_dGamma", "dE_P"])?;
                for d in &differences {
                    diff.row([num(d.v), num(d.tau), num(d.max_correlation_difference), num(d.entanglement_difference)])?;
                }
                Ok(vec![
                    corr.finish("correlations.csv")?,
                    dens.finish("density.csv")?,
                    ent.finish("entanglement.csv")?,
                    diff.finish("difference.csv")?,
                ])
            }
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Data<'a> {
                    sites: usize,
                    state: String,
                    partition: String,
                    snapshots: &'a [Snapshot],
                    differences: &'a [DifferenceRow],
                }
                let data = Data {
                    sites,
                    state: config.state_label(Preset::Psi1),
                    partition,
                    snapshots: &snapshots,
                    differences: &differences,
                };
                Ok(vec![json_artifact("evolve.json", self.name(), &data)?])
            }
        }
    }
}

#[derive(Serialize)]
struct ProjectionRow {
    v: f64,
    i: usize,
    j: usize,
    eigen_index: usize,
    omega_plus: f64,
    omega_minus: f64,
    c_plus: f64,
    c_minus: f64,
}

#[derive(Serialize)]
struct SignSummary {
    v: f64,
    i: usize,
    j: usize,
    relation: SignRelation,
    weight_plus: f64,
    weight_minus: f64,
}

pub struct ProjectionsCommand;

impl ProjectionsCommand {
    fn pairs(config: &RunConfig, sites: usize) -> Result<Vec<(usize, usize)>> {
        if config.state.is_some() {
            Ok(config.state_spec(sites, Preset::Psi1)?.terms.iter().map(|t| (t.i.min(t.j), t.i.max(t.j))).collect())
        } else {
            Ok((1..=sites).map(|k| (1, k)).collect())
        }
    }
}

impl Command for ProjectionsCommand {
    fn name(&self) -> &'static str {
        "projections"
    }

    fn about(&self) -> &'static str {
        "eigenbasis coefficients of number states under the mirror pairing of H+ and H-"
    }

    fn validate(&self, config: &RunConfig) -> Result<()> {
        config.validate_common()?;
        let sites = config.single_sites(4)?;
        require_even(sites)?;
        let basis = SymmetrizedBasis::new(sites)?;
        for (a, b) in Self::pairs(config, sites)? {
            basis.index_unordered(a, b)?;
        }
        Ok(())
    }

    fn run(&self, config: &RunConfig) -> Result<Vec<Artifact>> {
        let sites = config.single_sites(4)?;
        let j = config.hopping;
        let pairs = Self::pairs(config, sites)?;
        let mut rows = Vec::new();
        let mut summary = Vec::new();
        for v in config.interactions_or(&[DEFAULT_INTERACTION]) {
            let [(_, p), (_, m)] = signed_configs(sites, j, v)?;
            let table = coefficient_table(&pairs, &diagonalize_config(p)?, &diagonalize_config(m)?)?;
            for r in &table.rows {
                rows.push(ProjectionRow {
                    v: v / j,
                    i: r.pair.0,
                    j: r.pair.1,
                    eigen_index: r.eigen_index + 1,
                    omega_plus: r.energy_plus / j,
                    omega_minus: r.energy_minus / j,
                    c_plus: r.c_plus,
                    c_minus: r.c_minus,
                });
            }
            let mut seen = Vec::new();
            for &(a, b) in &pairs {
                if seen.contains(&(a, b)) {
                    continue;
                }
                seen.push((a, b));
                let (wp, wm) = table.parseval((a, b));
                summary.push(SignSummary {
                    v: v / j,
                    i: a,
                    j: b,
                    relation: table.sign_relation((a, b), SIGN_TOLERANCE),
                    weight_plus: wp,
                    weight_minus: wm,
                });
            }
        }
        match config.format {
            OutputFormat::Csv => {
                let mut t = CsvTable::new(&["V", "i", "j", "eigen_index", "omega_plus", "omega_minus", "C_plus", "C_minus"])?;
                for r in &rows {
                    t.row([
                        num(r.v),
                        r.i.to_string(),
                        r.j.to_string(),
                        r.eigen_index.to_string(),
                        num(r.omega_plus),
                        num(r.omega_minus),
                        num(r.c_plus),
                        num(r.c_minus),
                    ])?;
                }
                let mut s = CsvTable::new(&["V", "i", "j", "relation", "weight_plus", "weight_minus"])?;
                for r in &summary {
                    let relation = match r.relation {
                        SignRelation::Match => "match",
                        SignRelation::Flip => "flip",
                        SignRelation::Mixed => "mixed",
                    };
                    s.row([num(r.v), r.i.to_string(), r.j.to_string(), relation.into(), num(r.weight_plus), num(r.weight_minus)])?;
                }
                Ok(vec![t.finish("projections.csv")?, s.finish("sign_relations.csv")?])
            }
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Data<'a> {
                    sites: usize,
                    rows: &'a [ProjectionRow],
                    sign_relations: &'a [SignSummary],
                }
                let data = Data { sites, rows: &rows, sign_relations: &summary };
                Ok(vec![json_artifact("projections.json", self.name(), &data)?])
            }
        }
    }
}

pub struct DeltaCommand;

impl Command for DeltaCommand {
    fn name(&self) -> &'static str {
        "delta"
    }

    fn about(&self) -> &'static str {
        "figure of merit Delta(V) over a grid of interaction strengths"
    }

    fn validate(&self, config: &RunConfig) -> Result<()> {
        config.validate_common()?;
        let sites = config.single_sites(DEFAULT_SITES)?;
        require_even(sites)?;
        config.state_spec(sites, Preset::Psi6).map(drop)
    }

    fn run(&self, config: &RunConfig) -> Result<Vec<Artifact>> {
        let sites = config.single_sites(DEFAULT_SITES)?;
        let j = config.hopping;
        let spec = config.state_spec(sites, Preset::Psi6)?;
        let grid: Vec<f64> = config.interactions_or(&DEFAULT_DELTA_GRID).iter().map(|v| v.abs()).collect();
        let points = delta_of_v(&spec, sites, j, &grid)?;
        match config.format {
            OutputFormat::Csv => {
                let mut t = CsvTable::new(&["V", "delta"])?;
                for p in &points {
                    t.row([num(p.interaction / j), num(p.delta)])?;
                }
                Ok(vec![t.finish("delta.csv")?])
            }
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Row {
                    v: f64,
                    delta: f64,
                }
                #[derive(Serialize)]
                struct Data {
                    sites: usize,
                    state: String,
                    rows: Vec<Row>,
                }
                let rows = points.iter().map(|p| Row { v: p.interaction / j, delta: p.delta }).collect();
                let data = Data { sites, state: config.state_label(Preset::Psi6), rows };
                Ok(vec![json_artifact("delta.json", self.name(), &data)?])
            }
        }
    }
}

#[derive(Serialize)]
struct SymmetryEntry {
    v: f64,
    boost: BoostReport,
    invariance: InvarianceReport,
    mirror: MirrorReport,
}

pub struct SymmetryCommand;

impl Command for SymmetryCommand {
    fn name(&self) -> &'static str {
        "symmetry"
    }

    fn about(&self) -> &'static str {
        "boost relation, invariance theorem and correlation mirror checks"
    }

    fn validate(&self, config: &RunConfig) -> Result<()> {
        config.validate_common()?;
        let sites = config.single_sites(DEFAULT_SITES)?;
        require_even(sites)?;
        config.state_spec(sites, Preset::Psi4)?;
        config.bipartition(sites).map(drop)
    }

    fn run(&self, config: &RunConfig) -> Result<Vec<Artifact>> {
        let sites = config.single_sites(DEFAULT_SITES)?;
        let j = config.hopping;
        let spec = config.state_spec(sites, Preset::Psi4)?;
        let part = config.bipartition(sites)?;
        let taus = time_grid(config.tau_max, config.tau_steps);
        let basis = SymmetrizedBasis::new(sites)?;
        let observables = ObservableMatrix::standard_set(&basis);
        let mut entries = Vec::new();
        for v in config.interactions_or(&[DEFAULT_INTERACTION]) {
            let lattice = LatticeConfig::new(sites, j, v)?;
            let entry = SymmetryEntry {
                v: v / j,
                boost: check_boost_relation(sites, j, v)?,
                invariance: check_invariance_theorem(&spec, &observables, lattice, &taus)?,
                mirror: check_mirror(&spec, lattice, &taus, &part)?,
            };
            if !entry.invariance.invariance_implied {
                info!("V={}: state or observables break a hypothesis of the invariance theorem", v / j);
            }
            entries.push(entry);
        }
        match config.format {
            OutputFormat::Csv => {
                let mut per_tau = CsvTable::new(&[
                    "V",
                    "tau",
                    "sign_deviation",
                    "half_relation_deviation",
                    "mirror_map_deviation",
                    "mirror_E_P_deviation",
                ])?;
                let mut summary = CsvTable::new(&["V", "check", "value", "passed"])?;
                for e in &entries {
                    for (t, m) in e.invariance.per_tau.iter().zip(&e.mirror.per_tau) {
                        per_tau.row([
                            num(e.v),
                            num(t.tau),
                            num(t.sign_deviation),
                            num(t.half_relation_deviation),
                            num(m.map_deviation),
                            num(m.entanglement_deviation),
                        ])?;
                    }
                    let v = num(e.v);
                    let inv = &e.invariance;
                    let checks = [
                        ("boost_relation", e.boost.max_deviation, e.boost.passed),
                        ("half_relation", inv.max_half_relation_deviation, inv.passed),
                        ("sign_invariance", inv.max_sign_deviation, inv.invariance_implied && inv.passed),
                        ("mirror_map", e.mirror.max_map_deviation, e.mirror.passed),
                        ("mirror_E_P", e.mirror.max_entanglement_deviation, e.mirror.passed),
                    ];
                    for (name, value, passed) in checks {
                        summary.row([v.as_str(), name, &num(value), if passed { "true" } else { "false" }])?;
                    }
                }
                Ok(vec![per_tau.finish("symmetry.csv")?, summary.finish("symmetry_summary.csv")?])
            }
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Data<'a> {
                    sites: usize,
                    state: String,
                    entries: &'a [SymmetryEntry],
                }
                let data = Data { sites, state: config.state_label(Preset::Psi4), entries: &entries };
                Ok(vec![json_artifact("symmetry.json", self.name(), &data)?])
            }
        }
    }
}
