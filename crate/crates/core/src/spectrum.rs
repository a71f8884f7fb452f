//! Incoherent steady-state emission spectrum from the regression theorem.
//!
//! `S(D) = Re sum_ij g_ij int_0^inf e^{-i D tau}
//!         (<S+_i(tau) S-_j(0)> - <S+_i><S-_j>) d tau`,
//! with `g_11 = g_22 = 1` and `g_12 = g_21 = gamma12`. The primary method
//! solves one 16x16 linear system per detuning; [`quadrature_spectrum`]
//! integrates the sampled correlator instead and serves as a cross-check.

use nalgebra::{ComplexField, SMatrix, LU};

use crate::bloch;
use crate::dynamics::{check_grid, steady_state, Stepper};
use crate::error::{Error, Result};
use crate::liouvillian::{build_liouvillian, trace_functional, vectorize, Liouvillian, SystemConfig, Superoperator, SuperVector};
use crate::operators::{lower, raise, Atom, DensityMatrix, Operator};
use crate::scalar::{c, cis, re, Real, C};

/// A spectrum sampled on a detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    /// `(omega - omega_0) / gamma`
    pub detunings: Vec<T>,
    /// Spectrum divided by `normalization`.
    pub values: Vec<T>,
    pub normalization: T,
}

impl<T: Real> SpectrumResult<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices of interior points strictly above the left neighbour and not
    /// below the right one.
    pub fn local_maxima(&self) -> Vec<usize> {
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .filter(|&k| v[k] > v[k - 1] && v[k] >= v[k + 1])
            .collect()
    }

    /// Detunings of the local maxima, in grid order.
    pub fn peak_detunings(&self) -> Vec<T> {
        self.local_maxima().into_iter().map(|k| self.detunings[k]).collect()
    }

    pub fn max_value(&self) -> Option<T> {
        self.values.iter().copied().reduce(|a, b| a.max(b))
    }

    pub fn min_value(&self) -> Option<T> {
        self.values.iter().copied().reduce(|a, b| a.min(b))
    }

    /// Rescales so that `values * normalization` is unchanged.
    pub fn normalized_by(self, n: T) -> Self {
        let k = self.normalization / n;
        Self {
            values: self.values.into_iter().map(|v| v * k).collect(),
            detunings: self.detunings,
            normalization: n,
        }
    }
}

/// Row functional `f` with `f . vec(X) = Tr[a X]`.
fn trace_against<T: Real>(a: &Operator<T>) -> SuperVector<T> {
    vectorize(&a.transpose())
}

fn damping<T: Real>(l: &Liouvillian<T>, i: usize, j: usize) -> T {
    if i == j {
        T::one()
    } else {
        l.couplings().gamma12
    }
}

fn check_stationary<T: Real>(l: &Liouvillian<T>, rho: &DensityMatrix<T>) -> Result<()> {
    let residual = l.apply(rho.matrix()).iter().fold(T::zero(), |a, z| a.max(z.modulus()));
    if residual > T::tol(1e-8) {
        return Err(Error::InvalidState(format!(
            "state is not stationary under the generator: |L[rho]| = {residual:e}"
        )));
    }
    Ok(())
}

/// `C_ij(tau) = Tr[S+_i exp(L tau)[S-_j rho_ss]]` at every delay.
pub fn two_time_correlation<T: Real>(
    l: &Liouvillian<T>,
    rho_ss: &DensityMatrix<T>,
    i: Atom,
    j: Atom,
    taus: &[T],
) -> Result<Vec<C<T>>> {
    check_stationary(l, rho_ss)?;
    check_grid("delay", taus)?;
    let probe = trace_against(&raise::<T>(i));
    let mut v = vectorize(&(lower::<T>(j) * rho_ss.matrix()));
    let mut stepper = Stepper::new(l);
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        v = stepper.advance_to(&v, tau);
        out.push(probe.dot(&v));
    }
    Ok(out)
}

/// `sum_ij g_ij (<S+_i S-_j> - <S+_i><S-_j>)`, the total incoherent power;
/// `(1/pi) int S(D) dD` equals it.
pub fn fluctuation_weight<T: Real>(l: &Liouvillian<T>, rho: &DensityMatrix<T>) -> T {
    let m = rho.matrix();
    let mut acc = C::<T>::new(T::zero(), T::zero());
    for (a, i) in Atom::BOTH.into_iter().enumerate() {
        for (b, j) in Atom::BOTH.into_iter().enumerate() {
            let sp = raise::<T>(i);
            let sm = lower::<T>(j);
            let corr = (sp * sm * m).trace() - (sp * m).trace() * (sm * m).trace();
            acc += corr * re(damping(l, a, b));
        }
    }
    acc.re
}

/// Per-detuning resolvent evaluation sharing one generator and steady state.
///
/// The projector onto the stationary state is subtracted from `L`, which
/// leaves the action on traceless operators unchanged and makes `iD - L'`
/// invertible at `D = 0`.
#[derive(Debug, Clone)]
pub struct SpectrumSolver<T: Real> {
    shifted: Superoperator<T>,
    sources: SMatrix<C<T>, 16, 2>,
    probes: [SuperVector<T>; 2],
}

impl<T: Real> SpectrumSolver<T> {
    pub fn new(l: &Liouvillian<T>, rho_ss: &DensityMatrix<T>) -> Result<Self> {
        check_stationary(l, rho_ss)?;
        let m = rho_ss.matrix();
        let shifted = l.matrix() - vectorize(m) * trace_functional::<T>().transpose();
        let mut sources = SMatrix::<C<T>, 16, 2>::zeros();
        let mut probes = [SuperVector::<T>::zeros(); 2];
        for (b, j) in Atom::BOTH.into_iter().enumerate() {
            let sm = lower::<T>(j);
            let mean = (sm * m).trace();
            let x = sm * m - m * mean;
            sources.set_column(b, &vectorize(&x));
            let mut weighted = Operator::<T>::zeros();
            for (a, i) in Atom::BOTH.into_iter().enumerate() {
                weighted += raise::<T>(i) * re(damping(l, a, b));
            }
            probes[b] = trace_against(&weighted);
        }
        Ok(Self {
            shifted,
            sources,
            probes,
        })
    }

    /// Unnormalized `S(D)`.
    pub fn at(&self, detuning: T) -> Result<T> {
        let z = c(T::zero(), detuning);
        let a = Superoperator::<T>::identity() * z - self.shifted;
        let singular = || Error::SingularResolvent {
            detuning: detuning.as_f64(),
        };
        let y = LU::new(a).solve(&self.sources).ok_or_else(singular)?;
        let mut s = C::<T>::new(T::zero(), T::zero());
        for b in 0..2 {
            s += self.probes[b].dot(&y.column(b));
        }
        if !s.re.is_finite() {
            return Err(singular());
        }
        Ok(s.re)
    }
}

/// Unnormalized spectrum for an explicit generator and steady state.
pub fn incoherent_spectrum_for<T: Real>(
    l: &Liouvillian<T>,
    rho_ss: &DensityMatrix<T>,
    detunings: &[T],
) -> Result<SpectrumResult<T>> {
    let solver = SpectrumSolver::new(l, rho_ss)?;
    let values = detunings.iter().map(|&d| solver.at(d)).collect::<Result<Vec<_>>>()?;
    Ok(SpectrumResult {
        detunings: detunings.to_vec(),
        values,
        normalization: T::one(),
    })
}

/// Unnormalized spectrum (`normalization` is 1).
pub fn incoherent_spectrum<T: Real>(config: &SystemConfig<T>, detunings: &[T]) -> Result<SpectrumResult<T>> {
    let l = build_liouvillian(config)?;
    let rho = steady_state(&l)?;
    incoherent_spectrum_for(&l, &rho, detunings)
}

/// Spectrum divided by [`single_atom_normalization`] at the same drive.
pub fn normalized_spectrum<T: Real>(config: &SystemConfig<T>, detunings: &[T]) -> Result<SpectrumResult<T>> {
    let n = single_atom_normalization(config.rabi_g)?;
    let raw = incoherent_spectrum(config, detunings)?;
    Ok(raw.normalized_by(n))
}

/// `N = 2 (rho_ee - |rho_eg|^2)` for one atom driven at `rabi_g`.
pub fn single_atom_normalization<T: Real>(rabi_g: T) -> Result<T> {
    if !(rabi_g.is_finite() && rabi_g > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "spectrum normalization needs a positive Rabi frequency, got {rabi_g}"
        )));
    }
    Ok(T::lit(2.0) * bloch::steady_state(rabi_g).fluctuation())
}

/// Settings of the time-domain cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions<T> {
    /// Delay step; the window is rounded up to an even number of steps.
    pub step: T,
    /// Fixed window. When `None` it is derived from the spectral gap of `L`.
    pub tau_max: Option<T>,
    /// Largest admissible `|f(tau_max)| / max |f|` of the fluctuation correlator.
    pub decay_tolerance: T,
}

impl<T: Real> Default for QuadratureOptions<T> {
    fn default() -> Self {
        Self {
            step: T::lit(0.01),
            tau_max: None,
            decay_tolerance: T::lit(1e-8),
        }
    }
}

/// Slowest nonzero relaxation rate of `L`.
pub fn spectral_gap<T: Real>(l: &Liouvillian<T>) -> Result<T> {
    let mut ev = l.eigenvalues()?;
    ev.sort_by(|a, b| a.modulus().partial_cmp(&b.modulus()).unwrap_or(std::cmp::Ordering::Equal));
    let gap = ev[1..].iter().map(|z| -z.re).reduce(|a, b| a.min(b)).unwrap_or(T::zero());
    if !(gap > T::zero()) {
        return Err(Error::Numerical(format!("generator has no positive relaxation gap ({gap})")));
    }
    Ok(gap)
}

/// Spectrum from composite Simpson quadrature of the sampled correlator
/// `sum_ij g_ij (C_ij(tau) - <S+_i><S-_j>)`.
pub fn quadrature_spectrum<T: Real>(
    config: &SystemConfig<T>,
    detunings: &[T],
    options: QuadratureOptions<T>,
) -> Result<SpectrumResult<T>> {
    let l = build_liouvillian(config)?;
    let rho = steady_state(&l)?;
    quadrature_spectrum_for(&l, &rho, detunings, options)
}

pub fn quadrature_spectrum_for<T: Real>(
    l: &Liouvillian<T>,
    rho_ss: &DensityMatrix<T>,
    detunings: &[T],
    options: QuadratureOptions<T>,
) -> Result<SpectrumResult<T>> {
    let h = options.step;
    if !(h.is_finite() && h > T::zero()) {
        return Err(Error::InvalidArgument(format!("delay step must be positive, got {h}")));
    }
    let tau_max = match options.tau_max {
        Some(t) => t,
        None => {
            let ln = (T::one() / options.decay_tolerance).ln();
            (T::lit(1.5) * ln / spectral_gap(l)?).min(T::lit(1.0e4))
        }
    };
    if !(tau_max.is_finite() && tau_max > h) {
        return Err(Error::InvalidArgument(format!("window must exceed one step, got {tau_max}")));
    }
    let mut n = (tau_max / h).ceil().to_usize().unwrap_or(2);
    n += n % 2;
    let taus: Vec<T> = (0..=n).map(|k| T::from_usize(k).unwrap() * h).collect();

    let m = rho_ss.matrix();
    let mut f = vec![C::<T>::new(T::zero(), T::zero()); n + 1];
    for (a, i) in Atom::BOTH.into_iter().enumerate() {
        for (b, j) in Atom::BOTH.into_iter().enumerate() {
            let w = damping(l, a, b);
            if w == T::zero() {
                continue;
            }
            let limit = (raise::<T>(i) * m).trace() * (lower::<T>(j) * m).trace();
            let corr = two_time_correlation(l, rho_ss, i, j, &taus)?;
            for (acc, cij) in f.iter_mut().zip(corr) {
                *acc += (cij - limit) * re(w);
            }
        }
    }

    let peak = f.iter().fold(T::zero(), |a, z| a.max(z.modulus()));
    if peak > T::zero() {
        let residual = f[n].modulus() / peak;
        if residual > options.decay_tolerance {
            return Err(Error::InsufficientWindow {
                tau_max: taus[n].as_f64(),
                residual: residual.as_f64(),
            });
        }
    }

    let third = h / T::lit(3.0);
    let weights: Vec<T> = (0..=n)
        .map(|k| {
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            T::lit(w) * third
        })
        .collect();
    let values = detunings
        .iter()
        .map(|&d| {
            let mut acc = C::<T>::new(T::zero(), T::zero());
            for k in 0..=n {
                acc += f[k] * cis(-d * taus[k]) * re(weights[k]);
            }
            acc.re
        })
        .collect();
    Ok(SpectrumResult {
        detunings: detunings.to_vec(),
        values,
        normalization: T::one(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CouplingCoefficients;
    use crate::liouvillian::drive_phases;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    fn simpson(y: &[f64], h: f64) -> f64 {
        let n = y.len() - 1;
        assert!(n % 2 == 0);
        let inner: f64 = (1..n).map(|k| if k % 2 == 1 { 4.0 * y[k] } else { 2.0 * y[k] }).sum();
        (y[0] + y[n] + inner) * h / 3.0
    }

    fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
        let den: f64 = b.iter().map(|y| y * y).sum();
        (num / den).sqrt()
    }

    fn single_atom(g: f64) -> (Liouvillian<f64>, DensityMatrix<f64>) {
        let l = Liouvillian::from_couplings(CouplingCoefficients::independent(), g, 0.0).unwrap();
        let rho = steady_state(&l).unwrap();
        (l, rho)
    }

    fn matrix() -> Vec<SystemConfig<f64>> {
        let mut out = Vec::new();
        for zeta in [0.0, FRAC_PI_4, FRAC_PI_2, PI] {
            for g in [0.1, 1.0] {
                out.push(SystemConfig::new(0.125, zeta, g).unwrap());
            }
        }
        out.push(SystemConfig::new(1.0 / 6.0, 0.3, 0.5).unwrap());
        out.push(SystemConfig::new(50.0, 0.0, 3.0).unwrap());
        out
    }

    #[test]
    fn correlation_limits() {
        let cfg = SystemConfig::new(0.125, 0.4, 0.7).unwrap();
        let l = build_liouvillian(&cfg).unwrap();
        let rho = steady_state(&l).unwrap();
        let m = rho.matrix();
        for i in Atom::BOTH {
            for j in Atom::BOTH {
                let c = two_time_correlation(&l, &rho, i, j, &[0.0, 100.0]).unwrap();
                let at0 = (raise::<f64>(i) * lower::<f64>(j) * m).trace();
                let lim = (raise::<f64>(i) * m).trace() * (lower::<f64>(j) * m).trace();
                assert!((c[0] - at0).norm() < 1e-14);
                assert!((c[1] - lim).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn single_atom_correlation_matches_bloch() {
        let g = 0.1;
        let (l, rho) = single_atom(g);
        let taus = grid(0.0, 20.0, 401);
        let s = (lower::<f64>(Atom::One) * rho.matrix()).trace();
        let c = two_time_correlation(&l, &rho, Atom::One, Atom::One, &taus).unwrap();
        for (t, cij) in taus.iter().zip(c) {
            let exact = bloch::fluctuation_correlation(g, *t);
            assert!((cij - s.norm_sqr() - exact).norm() < 1e-8, "tau={t}");
        }
    }

    #[test]
    fn rejects_non_stationary_state() {
        let cfg = SystemConfig::new(0.125, 0.0, 0.3).unwrap();
        let l = build_liouvillian(&cfg).unwrap();
        let ground = DensityMatrix::ground();
        assert!(matches!(
            two_time_correlation(&l, &ground, Atom::One, Atom::Two, &[0.0, 1.0]),
            Err(Error::InvalidState(_))
        ));
        assert!(SpectrumSolver::new(&l, &ground).is_err());
    }

    #[test]
    fn sum_rule() {
        let d = grid(-40.0, 40.0, 8001);
        for cfg in matrix() {
            let l = build_liouvillian(&cfg).unwrap();
            let rho = steady_state(&l).unwrap();
            let s = incoherent_spectrum_for(&l, &rho, &d).unwrap();
            let total = simpson(&s.values, 0.01) / PI;
            let w = fluctuation_weight(&l, &rho);
            assert!(((total - w) / w).abs() < 1e-2, "{cfg:?}: {total} vs {w}");
        }
    }

    #[test]
    fn quadrature_oracle_agrees_with_resolvent() {
        for cfg in matrix() {
            let d = if cfg.rabi_g > 1.0 { grid(-12.0, 12.0, 481) } else { grid(-6.0, 6.0, 241) };
            let a = incoherent_spectrum(&cfg, &d).unwrap();
            let b = quadrature_spectrum(&cfg, &d, QuadratureOptions::default()).unwrap();
            let e = rel_l2(&b.values, &a.values);
            assert!(e <= 1e-2, "{cfg:?}: {e}");
        }
    }

    #[test]
    fn quadrature_reports_short_window() {
        let cfg = SystemConfig::new(0.125, 0.0, 0.1).unwrap();
        let opts = QuadratureOptions {
            tau_max: Some(5.0),
            ..QuadratureOptions::default()
        };
        assert!(matches!(
            quadrature_spectrum(&cfg, &[0.0], opts),
            Err(Error::InsufficientWindow { .. })
        ));
    }

    #[test]
    fn nonnegative_across_matrix() {
        let d = grid(-12.0, 12.0, 2401);
        for cfg in matrix() {
            let s = incoherent_spectrum(&cfg, &d).unwrap();
            let max = s.max_value().unwrap();
            assert!(s.min_value().unwrap() >= -1e-8 * max, "{cfg:?}");
        }
    }

    #[test]
    fn gauge_invariant() {
        let d = grid(-6.0, 6.0, 241);
        let coeffs = SystemConfig::new(0.125, 0.7, 0.4).unwrap().couplings().unwrap();
        let (a1, a2) = drive_phases(coeffs.phi);
        let reference = {
            let l = Liouvillian::from_couplings(coeffs, 0.4, 0.0).unwrap();
            incoherent_spectrum_for(&l, &steady_state(&l).unwrap(), &d).unwrap()
        };
        let max = reference.max_value().unwrap();
        for shift in [0.3, 1.9, -2.5] {
            let l = Liouvillian::with_drive_phases(coeffs, 0.4, 0.0, (a1 + shift, a2 + shift)).unwrap();
            let s = incoherent_spectrum_for(&l, &steady_state(&l).unwrap(), &d).unwrap();
            for (x, y) in s.values.iter().zip(&reference.values) {
                assert!((x - y).abs() <= 1e-10 * max);
            }
        }
    }

    #[test]
    fn phase_reflection_and_periodicity() {
        let d = grid(-6.0, 6.0, 241);
        let base = SystemConfig::new(0.125, 0.0, 0.3).unwrap().couplings().unwrap();
        let spectrum = |phi: f64, omega12: f64| {
            let coeffs = CouplingCoefficients { phi, omega12, ..base };
            let l = Liouvillian::from_couplings(coeffs, 0.3, 0.0).unwrap();
            incoherent_spectrum_for(&l, &steady_state(&l).unwrap(), &d).unwrap().values
        };
        let w = base.omega12;
        let n = d.len();
        for phi in [0.4, 1.3, 2.8] {
            let s = spectrum(phi, w);
            let max = s.iter().copied().fold(0.0, f64::max);
            let exchanged = spectrum(-phi, w);
            let shifted = spectrum(phi + 2.0 * PI, w);
            let conjugated = spectrum(-phi, -w);
            for k in 0..n {
                assert!((s[k] - exchanged[k]).abs() <= 1e-10 * max);
                assert!((s[k] - shifted[k]).abs() <= 1e-10 * max);
                assert!((s[k] - conjugated[n - 1 - k]).abs() <= 1e-10 * max);
            }
        }
    }

    #[test]
    fn far_apart_atoms_give_mollow_triplet() {
        let g = 3.0;
        let d = grid(-12.0, 12.0, 2401);
        let cfg = SystemConfig::new(50.0, 0.0, g).unwrap();
        let s = normalized_spectrum(&cfg, &d).unwrap();
        for (x, v) in d.iter().zip(&s.values) {
            let exact = bloch::normalized_mollow(g, *x);
            assert!(((v - exact) / exact).abs() < 0.05, "D={x}: {v} vs {exact}");
        }
        let peaks = s.peak_detunings();
        assert_eq!(peaks.len(), 3, "{peaks:?}");
        assert!(peaks[1].abs() < 0.011);
        assert!((peaks[0] + peaks[2]).abs() < 0.011);
        assert!(peaks[2] > 5.0 && peaks[2] < 2.0 * g);
    }

    #[test]
    fn weak_single_atom_peaks_at_resonance() {
        let d = grid(-6.0, 6.0, 1201);
        let (l, rho) = single_atom(0.1);
        let a = incoherent_spectrum_for(&l, &rho, &d).unwrap();
        let b = quadrature_spectrum_for(&l, &rho, &d, QuadratureOptions::default()).unwrap();
        for s in [a, b] {
            let peaks = s.peak_detunings();
            assert_eq!(peaks.len(), 1);
            assert!(peaks[0].abs() < 0.011);
        }
    }

    #[test]
    fn weak_drive_doublet_sits_at_the_dipole_shift() {
        let d = grid(-6.0, 6.0, 1201);
        let cfg = SystemConfig::new(0.125, FRAC_PI_2, 0.1).unwrap();
        let omega = cfg.couplings().unwrap().omega12.abs();
        let s = incoherent_spectrum(&cfg, &d).unwrap();
        let mut peaks = s.local_maxima();
        peaks.sort_by(|&a, &b| s.values[b].partial_cmp(&s.values[a]).unwrap());
        let mut top: Vec<f64> = peaks[..2].iter().map(|&k| d[k]).collect();
        top.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((top[0] + omega).abs() <= 0.02, "{top:?} vs {omega}");
        assert!((top[1] - omega).abs() <= 0.02, "{top:?} vs {omega}");
    }

    #[test]
    fn normalization_values() {
        let n = single_atom_normalization(0.1f64).unwrap();
        assert!((n - 3.84e-4).abs() < 1e-6);
        assert!((single_atom_normalization(1.0e4f64).unwrap() - 1.0).abs() < 1e-6);
        assert!(single_atom_normalization(0.0f64).is_err());
        assert!(single_atom_normalization(-1.0f64).is_err());
        for g in [0.1, 1.0, 3.0] {
            let (_, rho) = single_atom(g);
            let m = rho.matrix();
            let sp = raise::<f64>(Atom::One);
            let sm = lower::<f64>(Atom::One);
            let machine = 2.0 * ((sp * sm * m).trace() - (sp * m).trace() * (sm * m).trace()).re;
            assert!((machine - single_atom_normalization(g).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn spectral_gap_of_free_decay() {
        let l = Liouvillian::<f64>::from_couplings(CouplingCoefficients::independent(), 0.0, 0.0).unwrap();
        assert!((spectral_gap(&l).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_precision_spectrum() {
        let cfg = SystemConfig::<f32>::new(50.0, 0.0, 3.0).unwrap();
        let s = normalized_spectrum(&cfg, &[0.0f32, 6.0]).unwrap();
        for (x, v) in s.detunings.iter().zip(&s.values) {
            let exact = bloch::normalized_mollow(3.0f64, *x as f64);
            assert!(((*v as f64 - exact) / exact).abs() < 0.05);
        }
    }
}
