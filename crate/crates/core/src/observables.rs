//! Collective-basis populations, short-time laws, the vacuum-mediated
//! `|s> <-> |a>` coupling and the steady-state correlation `Gamma_12`.

use nalgebra::ComplexField;

use crate::dynamics::{expectation, steady_state, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::{CouplingCoefficients, GeometryConfig};
use crate::liouvillian::{build_liouvillian, sandwich, Liouvillian, Superoperator, SystemConfig};
use crate::operators::{collective_states, concurrence, lower, raise, to_collective_basis, Atom, Collective, DensityMatrix};
use crate::scalar::{c, Real, C};

/// Populations and the `(a, s)` coherence in the phase-dependent basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectivePopulations<T> {
    pub rho_gg: T,
    pub rho_ss: T,
    pub rho_aa: T,
    pub rho_ee: T,
    /// `<a| rho |s>`
    pub rho_as: C<T>,
}

impl<T: Real> CollectivePopulations<T> {
    pub fn total(&self) -> T {
        self.rho_gg + self.rho_ss + self.rho_aa + self.rho_ee
    }
}

pub fn populations_collective<T: Real>(rho: &DensityMatrix<T>, phi: T) -> CollectivePopulations<T> {
    let m = to_collective_basis(rho.matrix(), phi);
    let d = |k: Collective| m[(k.index(), k.index())].re;
    CollectivePopulations {
        rho_gg: d(Collective::Ground),
        rho_ss: d(Collective::Symmetric),
        rho_aa: d(Collective::Antisymmetric),
        rho_ee: d(Collective::Excited),
        rho_as: m[(Collective::Antisymmetric.index(), Collective::Symmetric.index())],
    }
}

pub fn populations_along<T: Real>(trajectory: &Trajectory<T>, phi: T) -> Vec<CollectivePopulations<T>> {
    trajectory.states.iter().map(|rho| populations_collective(rho, phi)).collect()
}

/// `1 - 2 t (1 + gamma12 cos phi)`
pub fn short_time_rho_ss<T: Real>(t: T, gamma12: T, phi: T) -> T {
    T::one() - T::lit(2.0) * t * (T::one() + gamma12 * phi.cos())
}

/// `sin^2 phi (gamma12^2 + Omega12^2) t^2`; the overall constant is not
/// fixed, so only ratios and exponents of this are meaningful.
pub fn short_time_rho_aa_law<T: Real>(t: T, coeffs: &CouplingCoefficients<T>) -> T {
    let s = coeffs.phi.sin();
    s * s * (coeffs.gamma12 * coeffs.gamma12 + coeffs.omega12 * coeffs.omega12) * t * t
}

/// `sin phi (gamma12 + i Omega12)`
pub fn vacuum_coupling_coefficient<T: Real>(coeffs: &CouplingCoefficients<T>) -> C<T> {
    c(coeffs.gamma12, coeffs.omega12) * coeffs.phi.sin()
}

/// Entries of the generator in the collective basis that feed `d rho_ss / dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaCoupling<T> {
    /// Coefficient of `rho_as`.
    pub from_rho_as: C<T>,
    /// Coefficient of `rho_sa`.
    pub from_rho_sa: C<T>,
    /// Coefficient of `rho_ss`.
    pub ss_decay: C<T>,
}

/// Reads the `rho_ss` row of `L` expressed in the collective basis at `phi`.
pub fn extract_sa_coupling<T: Real>(l: &Liouvillian<T>, phi: T) -> Result<SaCoupling<T>> {
    let u = collective_states(phi).unitary();
    let w = sandwich(&u.adjoint(), &u);
    let residual = (w * w.adjoint() - Superoperator::<T>::identity())
        .iter()
        .fold(T::zero(), |a, z| a.max(z.modulus()));
    if residual > T::tol(1e-10) {
        return Err(Error::Numerical(format!(
            "collective basis change is not unitary (residual {residual:e})"
        )));
    }
    let lc = w * l.matrix() * w.adjoint();
    let s = Collective::Symmetric.index();
    let a = Collective::Antisymmetric.index();
    let idx = |r: usize, col: usize| r + 4 * col;
    let row = idx(s, s);
    Ok(SaCoupling {
        from_rho_as: lc[(row, idx(a, s))],
        from_rho_sa: lc[(row, idx(s, a))],
        ss_decay: lc[(row, row)],
    })
}

/// `Re[<S+_1 S-_2> / (<S+_1><S-_2>)] - 1`
pub fn gamma12_correlation<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let p1 = raise::<T>(Atom::One);
    let m2 = lower::<T>(Atom::Two);
    let denom = expectation(rho, &p1) * expectation(rho, &m2);
    if denom.modulus() <= T::lit(1e-12) {
        return Err(Error::UndefinedCorrelation(format!(
            "<S+_1><S-_2> = {denom} is too small"
        )));
    }
    Ok((expectation(rho, &(p1 * m2)) / denom).re - T::one())
}

/// Steady-state populations at one parameter point.
pub fn steady_populations<T: Real>(config: &SystemConfig<T>) -> Result<CollectivePopulations<T>> {
    let l = build_liouvillian(config)?;
    let rho = steady_state(&l)?;
    Ok(populations_collective(&rho, l.couplings().phi))
}

/// `Gamma_12` and concurrence of one steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPoint<T> {
    pub gamma12_correlation: T,
    pub concurrence: T,
}

pub fn steady_correlation<T: Real>(config: &SystemConfig<T>) -> Result<CorrelationPoint<T>> {
    let l = build_liouvillian(config)?;
    let rho = steady_state(&l)?;
    Ok(CorrelationPoint {
        gamma12_correlation: gamma12_correlation(&rho)?,
        concurrence: concurrence(rho.matrix())?,
    })
}

/// Steady-state populations along a list of Rabi frequencies.
pub fn scan_rabi<T: Real>(
    geometry: GeometryConfig<T>,
    detuning: T,
    rabi: &[T],
) -> Result<Vec<CollectivePopulations<T>>> {
    rabi.iter()
        .map(|&g| {
            steady_populations(&SystemConfig {
                geometry,
                rabi_g: g,
                detuning,
            })
        })
        .collect()
}

/// Steady-state correlations along a list of separations.
pub fn scan_separation<T: Real>(
    template: SystemConfig<T>,
    separations: &[T],
) -> Result<Vec<CorrelationPoint<T>>> {
    separations
        .iter()
        .map(|&r| {
            let mut cfg = template;
            cfg.geometry.r12_over_lambda = r;
            steady_correlation(&cfg)
        })
        .collect()
}
