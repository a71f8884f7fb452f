//! Closed-form results for a single resonantly driven two-level atom in the
//! same units as the two-atom model (`H = -G (sigma+ + sigma-)`, excited state
//! decaying at `2 gamma`, `gamma = 1`).
//!
//! These are written directly from the optical Bloch equations
//!
//! ```text
//! d<s->/dt = -<s->  - i G <sz>
//! d<s+>/dt = -<s+>  + i G <sz>
//! d<sz>/dt = -2 i G <s-> + 2 i G <s+> - 2 (<sz> + 1)
//! ```
//!
//! and share no code with the 16x16 machinery, which makes them usable as
//! oracles for it.

use nalgebra::ComplexField;

use crate::scalar::{c, re, Real, C};

/// Steady state of the driven atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSteadyState<T> {
    /// Excited-state population `G^2 / (1 + 2 G^2)`.
    pub rho_ee: T,
    /// `<sigma->`, equal to `i G / (1 + 2 G^2)`.
    pub coherence: C<T>,
}

pub fn steady_state<T: Real>(rabi_g: T) -> BlochSteadyState<T> {
    let g2 = rabi_g * rabi_g;
    let denom = T::one() + T::lit(2.0) * g2;
    BlochSteadyState {
        rho_ee: g2 / denom,
        coherence: c(T::zero(), rabi_g / denom),
    }
}

impl<T: Real> BlochSteadyState<T> {
    /// `<sigma+ sigma-> - <sigma+><sigma->`
    pub fn fluctuation(&self) -> T {
        self.rho_ee - self.coherence.norm_sqr()
    }

    fn inversion(&self) -> T {
        T::lit(2.0) * self.rho_ee - T::one()
    }

    /// Initial values of `(p, q, w)` for the regression of `<X(tau) sigma->`,
    /// fluctuation part only, with `p = s- + s+`, `q = s- - s+`.
    fn regression_start(&self) -> (C<T>, C<T>, C<T>) {
        let s = self.coherence;
        let w = re(self.inversion());
        let ds = -(s * s);
        let dsbar = re(self.rho_ee) - s.conj() * s;
        let dw = -s - w * s;
        (ds + dsbar, ds - dsbar, dw)
    }
}

/// `<sigma+(tau) sigma-(0)> - |<sigma->|^2` in the steady state.
pub fn fluctuation_correlation<T: Real>(rabi_g: T, tau: T) -> C<T> {
    let ss = steady_state(rabi_g);
    let (p0, q0, w0) = ss.regression_start();
    let p = p0 * re((-tau).exp());

    // (q, w) obey d/dt [q, w] = A [q, w] with A = [[-1, -2iG], [-2iG, -2]];
    // exp(A t) = e^{-3t/2} (cosh(k t) + sinh(k t)/k (A + 3/2)), k^2 = 1/4 - 4 G^2.
    let i = c(T::zero(), T::one());
    let half = re(T::lit(0.5));
    let kappa = re(T::lit(0.25) - T::lit(4.0) * rabi_g * rabi_g).sqrt();
    let kt = kappa * re(tau);
    let cosh = kt.cosh();
    let sinhc = if kappa.modulus() < T::lit(1e-12) {
        re(tau)
    } else {
        kt.sinh() / kappa
    };
    let off = -i * re(T::lit(2.0) * rabi_g);
    let q = cosh * q0 + sinhc * (half * q0 + off * w0);
    let q = q * re((-T::lit(1.5) * tau).exp());
    (p - q) * half
}

/// Half-sided Laplace transform `int_0^inf e^{-z tau} (fluctuation correlation) d tau`.
pub fn fluctuation_transform<T: Real>(rabi_g: T, z: C<T>) -> C<T> {
    let ss = steady_state(rabi_g);
    let (p0, q0, w0) = ss.regression_start();
    let one = re(T::one());
    let two = re(T::lit(2.0));
    let i = c(T::zero(), T::one());
    let p = p0 / (z + one);
    let det = (z + one) * (z + two) + re(T::lit(4.0) * rabi_g * rabi_g);
    let q = ((z + two) * q0 - i * re(T::lit(2.0) * rabi_g) * w0) / det;
    (p - q) * re(T::lit(0.5))
}

/// Incoherent single-atom spectrum `Re` of the transform at `z = i detuning`.
pub fn incoherent_spectrum<T: Real>(rabi_g: T, detuning: T) -> T {
    fluctuation_transform(rabi_g, c(T::zero(), detuning)).re
}

/// Single-atom Mollow spectrum divided by its total fluctuation power, the
/// same normalization applied to two-atom spectra.
pub fn normalized_mollow<T: Real>(rabi_g: T, detuning: T) -> T {
    incoherent_spectrum(rabi_g, detuning) / steady_state(rabi_g).fluctuation()
}
