//! One function per experiment, each producing a [`Table`].

use rayon::prelude::*;

use phased_dicke::dynamics::{evolve, steady_state};
use phased_dicke::liouvillian::build_liouvillian;
use phased_dicke::observables::{gamma12_correlation, populations_collective, CollectivePopulations};
use phased_dicke::operators::{collective_states, concurrence, DensityMatrix};
use phased_dicke::spectrum::{single_atom_normalization, SpectrumSolver};
use phased_dicke::{Error, SystemConfig64};

use crate::config::{Experiment, InitialState, RunConfig};
use crate::error::CliError;
use crate::output::{col, Column, Table};

const PI_RAD: &str = "pi rad";
const LAMBDA: &str = "lambda";
const GAMMA: &str = "gamma";
const NONE: &str = "1";
const PHI: Column = col("phi", "rad");
const ZETA: Column = col("zeta_over_pi", PI_RAD);

pub fn execute(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let rows = match cfg.experiment {
        Experiment::Couplings => couplings(cfg)?,
        Experiment::Steady => steady(cfg)?,
        Experiment::Evolve => trajectory(cfg)?,
        Experiment::Spectrum => spectrum(cfg)?,
        Experiment::ScanPopulation => scan_population(cfg)?,
        Experiment::ScanCoherence => scan_coherence(cfg)?,
        Experiment::ScanCorrelation => scan_correlation(cfg)?,
    };
    Ok(Table {
        experiment: cfg.experiment.name(),
        columns: columns(cfg.experiment),
        rows,
    })
}

pub fn columns(experiment: Experiment) -> Vec<Column> {
    let populations = [
        col("rho_gg", NONE),
        col("rho_ss", NONE),
        col("rho_aa", NONE),
        col("rho_ee", NONE),
    ];
    let coherence = [col("re_rho_as", NONE), col("im_rho_as", NONE)];
    match experiment {
        Experiment::Couplings => vec![
            col("r12_over_lambda", LAMBDA),
            ZETA,
            col("gamma12", GAMMA),
            col("omega12", GAMMA),
            PHI,
        ],
        Experiment::Steady => {
            let mut v = vec![ZETA, col("rabi_g", GAMMA), PHI];
            v.extend(populations);
            v.extend(coherence);
            v.push(col("gamma_12_corr", NONE));
            v.push(col("concurrence", NONE));
            v
        }
        Experiment::Evolve => {
            let mut v = vec![ZETA, col("t", "1/gamma")];
            v.extend(populations);
            v.extend(coherence);
            v
        }
        Experiment::Spectrum => vec![ZETA, col("detuning", GAMMA), col("s_normalized", "1/gamma")],
        Experiment::ScanPopulation => {
            let mut v = vec![ZETA, col("rabi_g", GAMMA)];
            v.extend(populations);
            v
        }
        Experiment::ScanCoherence => {
            let mut v = vec![ZETA, col("rabi_g", GAMMA)];
            v.extend(coherence);
            v.push(col("abs_rho_as", NONE));
            v
        }
        Experiment::ScanCorrelation => vec![
            col("r12_over_lambda", LAMBDA),
            ZETA,
            col("gamma_12_corr", NONE),
            col("concurrence", NONE),
        ],
    }
}

fn system_at(cfg: &RunConfig, zeta_over_pi: f64) -> Result<SystemConfig64, CliError> {
    let mut spec = cfg.system;
    spec.zeta_over_pi = zeta_over_pi;
    spec.to_system()
}

fn pairs(outer: &[f64], inner: &[f64]) -> Vec<(f64, f64)> {
    outer
        .iter()
        .flat_map(|&a| inner.iter().map(move |&b| (a, b)))
        .collect()
}

fn pop_row(p: &CollectivePopulations<f64>) -> [f64; 6] {
    [p.rho_gg, p.rho_ss, p.rho_aa, p.rho_ee, p.rho_as.re, p.rho_as.im]
}

/// Steady state and its phase at one point.
fn solve(system: &SystemConfig64) -> Result<(DensityMatrix<f64>, f64), CliError> {
    let l = build_liouvillian(system).map_err(|e| CliError::from_core("liouvillian", e))?;
    let rho = steady_state(&l).map_err(|e| CliError::from_core("dynamics", e))?;
    Ok((rho, l.couplings().phi))
}

fn correlation_or_nan(rho: &DensityMatrix<f64>) -> Result<f64, CliError> {
    match gamma12_correlation(rho) {
        Ok(v) => Ok(v),
        Err(Error::UndefinedCorrelation(_)) => Ok(f64::NAN),
        Err(e) => Err(CliError::from_core("observables", e)),
    }
}

fn couplings(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    pairs(&cfg.separations().values(), &cfg.zetas().values())
        .into_iter()
        .map(|(r, z)| {
            let mut spec = cfg.system;
            spec.r12_over_lambda = r;
            spec.zeta_over_pi = z;
            let k = spec
                .to_system()?
                .couplings()
                .map_err(|e| CliError::from_core("geometry", e))?;
            Ok(vec![r, z, k.gamma12, k.omega12, k.phi])
        })
        .collect()
}

fn steady(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    cfg.zetas()
        .values()
        .par_iter()
        .map(|&z| {
            let system = system_at(cfg, z)?;
            let (rho, phi) = solve(&system)?;
            let mut row = vec![z, system.rabi_g, phi];
            row.extend(pop_row(&populations_collective(&rho, phi)));
            row.push(correlation_or_nan(&rho)?);
            row.push(concurrence(rho.matrix()).map_err(|e| CliError::from_core("operators", e))?);
            Ok(row)
        })
        .collect()
}

fn initial(state: InitialState, phi: f64) -> DensityMatrix<f64> {
    let basis = collective_states(phi);
    match state {
        InitialState::Ground => DensityMatrix::ground(),
        InitialState::Symmetric => basis.symmetric.projector(),
        InitialState::Antisymmetric => basis.antisymmetric.projector(),
        InitialState::Excited => basis.excited.projector(),
        InitialState::MaximallyMixed => DensityMatrix::maximally_mixed(),
    }
}

fn trajectory(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    let times = cfg.times().values();
    let blocks: Vec<Vec<Vec<f64>>> = cfg
        .zetas()
        .values()
        .par_iter()
        .map(|&z| {
            let system = system_at(cfg, z)?;
            let l = build_liouvillian(&system).map_err(|e| CliError::from_core("liouvillian", e))?;
            let phi = l.couplings().phi;
            let traj = evolve(&l, &initial(cfg.initial_state, phi), &times)
                .map_err(|e| CliError::from_core("dynamics", e))?;
            Ok(traj
                .iter()
                .map(|(t, rho)| {
                    let mut row = vec![z, t];
                    row.extend(pop_row(&populations_collective(rho, phi)));
                    row
                })
                .collect())
        })
        .collect::<Result<_, CliError>>()?;
    Ok(blocks.concat())
}

fn spectrum(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    let detunings = cfg.detunings().values();
    let n = single_atom_normalization(cfg.system.rabi_g).map_err(|e| CliError::from_core("spectrum", e))?;
    let mut rows = Vec::new();
    for z in cfg.zetas().values() {
        let system = system_at(cfg, z)?;
        let l = build_liouvillian(&system).map_err(|e| CliError::from_core("liouvillian", e))?;
        let rho = steady_state(&l).map_err(|e| CliError::from_core("dynamics", e))?;
        let solver = SpectrumSolver::new(&l, &rho).map_err(|e| CliError::from_core("spectrum", e))?;
        let values: Vec<f64> = detunings
            .par_iter()
            .map(|&d| solver.at(d).map_err(|e| CliError::from_core("spectrum", e)))
            .collect::<Result<_, _>>()?;
        rows.extend(detunings.iter().zip(values).map(|(&d, s)| vec![z, d, s / n]));
    }
    Ok(rows)
}

fn rabi_points(cfg: &RunConfig) -> Result<Vec<(f64, f64, CollectivePopulations<f64>)>, CliError> {
    pairs(&cfg.zetas().values(), &cfg.rabi_values().values())
        .par_iter()
        .map(|&(z, g)| {
            let mut system = system_at(cfg, z)?;
            system.rabi_g = g;
            let (rho, phi) = solve(&system)?;
            Ok((z, g, populations_collective(&rho, phi)))
        })
        .collect()
}

fn scan_population(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    Ok(rabi_points(cfg)?
        .into_iter()
        .map(|(z, g, p)| vec![z, g, p.rho_gg, p.rho_ss, p.rho_aa, p.rho_ee])
        .collect())
}

fn scan_coherence(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    Ok(rabi_points(cfg)?
        .into_iter()
        .map(|(z, g, p)| vec![z, g, p.rho_as.re, p.rho_as.im, p.rho_as.norm()])
        .collect())
}

fn scan_correlation(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    pairs(&cfg.separations().values(), &cfg.zetas().values())
        .par_iter()
        .map(|&(r, z)| {
            let mut system = system_at(cfg, z)?;
            system.geometry.r12_over_lambda = r;
            let (rho, _) = solve(&system)?;
            let c = concurrence(rho.matrix()).map_err(|e| CliError::from_core("operators", e))?;
            Ok(vec![r, z, correlation_or_nan(&rho)?, c])
        })
        .collect()
}
