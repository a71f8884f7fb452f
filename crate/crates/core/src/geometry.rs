//! Atomic geometry: laser phase difference and the cooperative coupling
//! coefficients of the two-atom master equation.
//!
//! Distances are measured in wavelengths (`r12_over_lambda`), so that
//! `k0 * r12 = 2 pi * r12_over_lambda`. Rates come out in units of the
//! single-atom damping `gamma`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// How the dipole orientation enters the coupling coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DipoleModel {
    /// Coefficients averaged over all dipole orientations.
    #[default]
    IsotropicAverage,
    /// Dipole at a fixed angle `theta` to the inter-atomic axis.
    FixedOrientation,
}

/// Geometry of the atom pair relative to the driving laser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig<T> {
    /// Separation `r12 / lambda`.
    pub r12_over_lambda: T,
    /// Angle between the laser wave vector and the inter-atomic axis, radians.
    pub zeta: T,
    /// Angle between the dipole moment and the inter-atomic axis, radians.
    /// Only used by [`DipoleModel::FixedOrientation`].
    pub theta: T,
    pub model: DipoleModel,
}

impl<T: Real> GeometryConfig<T> {
    /// Isotropically averaged geometry, the default used for every figure.
    pub fn isotropic(r12_over_lambda: T, zeta: T) -> Result<Self> {
        let cfg = Self {
            r12_over_lambda,
            zeta,
            theta: T::FRAC_PI_2(),
            model: DipoleModel::IsotropicAverage,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn fixed(r12_over_lambda: T, zeta: T, theta: T) -> Result<Self> {
        let cfg = Self {
            r12_over_lambda,
            zeta,
            theta,
            model: DipoleModel::FixedOrientation,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_separation(self.r12_over_lambda)?;
        check_angle("zeta", self.zeta)?;
        check_angle("theta", self.theta)?;
        Ok(())
    }

    /// Laser phase difference and coupling coefficients for this geometry.
    pub fn couplings(&self) -> Result<CouplingCoefficients<T>> {
        self.validate()?;
        let pair = match self.model {
            DipoleModel::IsotropicAverage => coupling_isotropic(self.r12_over_lambda)?,
            DipoleModel::FixedOrientation => coupling_fixed(self.r12_over_lambda, self.theta)?,
        };
        Ok(pair.with_phase(laser_phase(self.r12_over_lambda, self.zeta)?))
    }
}

/// Cross-damping and dipole-dipole shift of the pair, in units of `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCoupling<T> {
    pub gamma12: T,
    pub omega12: T,
}

impl<T: Real> PairCoupling<T> {
    pub fn with_phase(self, phi: T) -> CouplingCoefficients<T> {
        CouplingCoefficients {
            gamma12: self.gamma12,
            omega12: self.omega12,
            phi,
        }
    }
}

/// Everything the master equation needs to know about the geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingCoefficients<T> {
    /// Collective decay rate `gamma_12 / gamma`.
    pub gamma12: T,
    /// Dipole-dipole shift `Omega_12 / gamma`.
    pub omega12: T,
    /// Laser phase difference `k . (r1 - r2)`, radians.
    pub phi: T,
}

impl<T: Real> CouplingCoefficients<T> {
    /// Uncoupled atoms: no cross damping, no dipole-dipole shift, equal phase.
    pub fn independent() -> Self {
        Self {
            gamma12: T::zero(),
            omega12: T::zero(),
            phi: T::zero(),
        }
    }

    /// The damping matrix `[[1, g12], [g12, 1]]` is positive semidefinite iff
    /// `|g12| <= 1`; the dissipator is then completely positive.
    pub fn check_dissipator_psd(&self) -> Result<()> {
        if !self.gamma12.is_finite() || !self.omega12.is_finite() || !self.phi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite coupling coefficients {self:?}"
            )));
        }
        if self.gamma12.abs() > T::one() + T::tol(1e-12) {
            return Err(Error::InvalidArgument(format!(
                "collective decay |gamma12| = {} exceeds the single-atom rate; \
                 damping matrix is not positive semidefinite",
                self.gamma12.abs()
            )));
        }
        Ok(())
    }
}

fn check_separation<T: Real>(r: T) -> Result<()> {
    if !(r.is_finite() && r > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "separation r12/lambda must be positive and finite, got {r}"
        )));
    }
    Ok(())
}

fn check_angle<T: Real>(name: &str, a: T) -> Result<()> {
    if !(a.is_finite() && a >= T::zero() && a <= T::PI()) {
        return Err(Error::InvalidArgument(format!(
            "{name} must lie in [0, pi], got {a}"
        )));
    }
    Ok(())
}

/// `k0 * r12` for a separation given in wavelengths.
fn k0r<T: Real>(r12_over_lambda: T) -> T {
    T::TAU() * r12_over_lambda
}

/// Phase difference of the drive between the two atoms,
/// `phi = 2 pi (r12/lambda) cos(zeta)`.
pub fn laser_phase<T: Real>(r12_over_lambda: T, zeta: T) -> Result<T> {
    check_separation(r12_over_lambda)?;
    if !zeta.is_finite() {
        return Err(Error::InvalidArgument(format!("zeta must be finite, got {zeta}")));
    }
    // cos(pi/2) is not exactly zero in floating point.
    if zeta == T::FRAC_PI_2() {
        return Ok(T::zero());
    }
    Ok(k0r(r12_over_lambda) * zeta.cos())
}

/// Orientation-averaged coefficients:
/// `gamma12 = sin(x)/x`, `omega12 = -cos(x)/x` with `x = k0 r12`.
pub fn coupling_isotropic<T: Real>(r12_over_lambda: T) -> Result<PairCoupling<T>> {
    check_separation(r12_over_lambda)?;
    let x = k0r(r12_over_lambda);
    Ok(PairCoupling {
        gamma12: x.sin() / x,
        omega12: -x.cos() / x,
    })
}

/// Coefficients for a dipole at angle `theta` to the inter-atomic axis.
///
/// No regularization is applied: `omega12` diverges as `(k0 r)^-3` for
/// `theta` away from the magic angle.
pub fn coupling_fixed<T: Real>(r12_over_lambda: T, theta: T) -> Result<PairCoupling<T>> {
    check_separation(r12_over_lambda)?;
    check_angle("theta", theta)?;
    let x = k0r(r12_over_lambda);
    let (s, c) = (x.sin(), x.cos());
    let x2 = x * x;
    let x3 = x2 * x;
    let cos2 = theta.cos().powi(2);
    let one = T::one();
    let three = T::lit(3.0);

    let omega12 = T::lit(1.5)
        * ((one - three * cos2) * (s / x2 + c / x3) - (one - cos2) * (c / x));
    let gamma12 = s / x
        + T::lit(0.5) * (three * cos2 - one) * ((three / x2 - one) * s / x - three * c / x2);
    Ok(PairCoupling { gamma12, omega12 })
}
