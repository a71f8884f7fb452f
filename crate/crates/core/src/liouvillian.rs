//! Rotating-frame generator of the driven two-atom master equation.
//!
//! `L[rho] = -i[H, rho] - sum_jk g_jk (S+_j S-_k rho - 2 S-_k rho S+_j + rho S+_j S-_k)`
//! with `g_11 = g_22 = 1`, `g_12 = g_21 = gamma12`. In this convention a lone
//! excited atom decays at rate `2 gamma`.
//!
//! Density matrices are vectorized by column stacking: entry `(r, c)` of `rho`
//! sits at index `r + 4 c`.

use nalgebra::{ComplexField, SMatrix, SVector, Schur};

use crate::error::{Error, Result};
use crate::geometry::{CouplingCoefficients, GeometryConfig};
use crate::operators::{lower, raise, spin_operator, Atom, Operator, SpinKind};
use crate::scalar::{c, cis, re, Real, C};

pub type Superoperator<T> = SMatrix<C<T>, 16, 16>;
pub type SuperVector<T> = SVector<C<T>, 16>;

/// Physical parameters of one simulation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig<T> {
    pub geometry: GeometryConfig<T>,
    /// Rabi frequency `G` in units of `gamma`.
    pub rabi_g: T,
    /// Laser minus atomic frequency, in units of `gamma`.
    pub detuning: T,
}

impl<T: Real> SystemConfig<T> {
    /// Resonant drive with isotropically averaged couplings.
    pub fn new(r12_over_lambda: T, zeta: T, rabi_g: T) -> Result<Self> {
        let cfg = Self {
            geometry: GeometryConfig::isotropic(r12_over_lambda, zeta)?,
            rabi_g,
            detuning: T::zero(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if !(self.rabi_g.is_finite() && self.rabi_g >= T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "Rabi frequency must be non-negative, got {}",
                self.rabi_g
            )));
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidArgument("detuning must be finite".into()));
        }
        Ok(())
    }

    pub fn couplings(&self) -> Result<CouplingCoefficients<T>> {
        self.geometry.couplings()
    }
}

pub fn vectorize<T: Real>(m: &Operator<T>) -> SuperVector<T> {
    SuperVector::from_column_slice(m.as_slice())
}

pub fn unvectorize<T: Real>(v: &SuperVector<T>) -> Operator<T> {
    Operator::from_column_slice(v.as_slice())
}

/// Superoperator of `rho -> a rho b`.
pub fn sandwich<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Superoperator<T> {
    Superoperator::from_fn(|row, col| {
        let (i, j) = (row % 4, row / 4);
        let (k, l) = (col % 4, col / 4);
        a[(i, k)] * b[(l, j)]
    })
}

/// Row vector `t` with `t . vec(rho) = Tr rho`.
pub fn trace_functional<T: Real>() -> SuperVector<T> {
    vectorize(&Operator::identity())
}

/// Drive phases `(alpha_1, alpha_2)` entering `-G (e^{i alpha_j} S+_j + h.c.)`.
///
/// The physical choice is `(0, -phi)`, i.e. `phi = k.(r1 - r2)`.
pub fn drive_phases<T: Real>(phi: T) -> (T, T) {
    (T::zero(), -phi)
}

/// `H = -detuning (Sz_1 + Sz_2) + Omega12 (S+_1 S-_2 + S+_2 S-_1)
///      - G (e^{i a1} S+_1 + e^{i a2} S+_2 + h.c.)`
pub fn hamiltonian_with_phases<T: Real>(
    couplings: &CouplingCoefficients<T>,
    rabi_g: T,
    detuning: T,
    phases: (T, T),
) -> Operator<T> {
    let (p1, m1) = (raise::<T>(Atom::One), lower::<T>(Atom::One));
    let (p2, m2) = (raise::<T>(Atom::Two), lower::<T>(Atom::Two));
    let sz = spin_operator::<T>(Atom::One, SpinKind::Z) + spin_operator::<T>(Atom::Two, SpinKind::Z);
    let exchange = p1 * m2 + p2 * m1;
    let drive_up = p1 * cis(phases.0) + p2 * cis(phases.1);
    let drive = drive_up + drive_up.adjoint();
    sz * re(-detuning) + exchange * re(couplings.omega12) - drive * re(rabi_g)
}

/// Rotating-frame Hamiltonian (hbar = 1, energies in units of `gamma`).
pub fn build_hamiltonian<T: Real>(config: &SystemConfig<T>) -> Result<Operator<T>> {
    config.validate()?;
    let k = config.couplings()?;
    Ok(hamiltonian_with_phases(
        &k,
        config.rabi_g,
        config.detuning,
        drive_phases(k.phi),
    ))
}

/// The 16x16 generator together with the coefficients it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian<T: Real> {
    matrix: Superoperator<T>,
    couplings: CouplingCoefficients<T>,
    rabi_g: T,
    detuning: T,
}

impl<T: Real> Liouvillian<T> {
    /// Generator for explicit coefficients (geometry already resolved).
    pub fn from_couplings(couplings: CouplingCoefficients<T>, rabi_g: T, detuning: T) -> Result<Self> {
        Self::with_drive_phases(couplings, rabi_g, detuning, drive_phases(couplings.phi))
    }

    /// Generator with arbitrary drive phases at the two atoms. Only the
    /// difference of the phases is physical.
    pub fn with_drive_phases(
        couplings: CouplingCoefficients<T>,
        rabi_g: T,
        detuning: T,
        phases: (T, T),
    ) -> Result<Self> {
        couplings.check_dissipator_psd()?;
        if !(rabi_g.is_finite() && rabi_g >= T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "Rabi frequency must be non-negative, got {rabi_g}"
            )));
        }
        let h = hamiltonian_with_phases(&couplings, rabi_g, detuning, phases);
        let id = Operator::<T>::identity();
        let i = c(T::zero(), T::one());

        let mut l = (sandwich(&h, &id) - sandwich(&id, &h)) * (-i);

        let lowering = [lower::<T>(Atom::One), lower::<T>(Atom::Two)];
        let raising = [raise::<T>(Atom::One), raise::<T>(Atom::Two)];
        let two = re(T::lit(2.0));
        for j in 0..2 {
            for k in 0..2 {
                let rate = if j == k { T::one() } else { couplings.gamma12 };
                if rate == T::zero() {
                    continue;
                }
                let pm = raising[j] * lowering[k];
                let term = sandwich(&pm, &id) - sandwich(&lowering[k], &raising[j]) * two
                    + sandwich(&id, &pm);
                l -= term * re(rate);
            }
        }
        Ok(Self {
            matrix: l,
            couplings,
            rabi_g,
            detuning,
        })
    }

    pub fn matrix(&self) -> &Superoperator<T> {
        &self.matrix
    }

    pub fn couplings(&self) -> &CouplingCoefficients<T> {
        &self.couplings
    }

    pub fn rabi_g(&self) -> T {
        self.rabi_g
    }

    pub fn detuning(&self) -> T {
        self.detuning
    }

    /// `d rho / dt` at `rho`.
    pub fn apply(&self, rho: &Operator<T>) -> Operator<T> {
        unvectorize(&(self.matrix * vectorize(rho)))
    }

    /// Largest entry of `Tr o L`, which vanishes for a trace-preserving generator.
    pub fn trace_residual(&self) -> T {
        let t = trace_functional::<T>().transpose() * self.matrix;
        t.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
    }

    /// All 16 eigenvalues (complex Schur form).
    pub fn eigenvalues(&self) -> Result<Vec<C<T>>> {
        let schur = |m: Superoperator<T>| {
            Schur::try_new(m, T::default_epsilon(), 10_000).and_then(|s| s.eigenvalues())
        };
        schur(self.matrix)
            .or_else(|| {
                let f = dft::<T>();
                schur(f * self.matrix * f.adjoint())
            })
            .map(|v| v.iter().copied().collect())
            .ok_or_else(|| Error::Numerical("Schur decomposition of the generator failed".into()))
    }
}

/// Unitary 16-point discrete Fourier matrix.
fn dft<T: Real>() -> Superoperator<T> {
    let scale = re(T::one() / T::lit(4.0));
    Superoperator::from_fn(|j, k| {
        cis(T::TAU() * T::from_usize(j * k).unwrap() / T::lit(16.0)) * scale
    })
}

pub fn build_liouvillian<T: Real>(config: &SystemConfig<T>) -> Result<Liouvillian<T>> {
    config.validate()?;
    Liouvillian::from_couplings(config.couplings()?, config.rabi_g, config.detuning)
}
