//! Time evolution and steady states.

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::liouvillian::{unvectorize, vectorize, Liouvillian, Superoperator, SuperVector};
use crate::operators::{DensityMatrix, Operator};
use crate::scalar::{re, Real, C};

/// States sampled on a time grid (times in units of `1/gamma`).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<DensityMatrix<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, &DensityMatrix<T>)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// `exp(L t)` as a dense 16x16 matrix.
pub fn propagator<T: Real>(l: &Liouvillian<T>, t: T) -> Superoperator<T> {
    (l.matrix() * re(t)).exp()
}

/// Carries a super-vector along increasing times, reusing `exp(L dt)` while
/// the spacing stays the same to within `1e-9` relative.
pub(crate) struct Stepper<'a, T: Real> {
    l: &'a Liouvillian<T>,
    now: T,
    last: Option<(T, Superoperator<T>)>,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub(crate) fn new(l: &'a Liouvillian<T>) -> Self {
        Self {
            l,
            now: T::zero(),
            last: None,
        }
    }

    pub(crate) fn advance_to(&mut self, v: &SuperVector<T>, t: T) -> SuperVector<T> {
        let dt = t - self.now;
        if dt == T::zero() {
            return *v;
        }
        let reuse = matches!(&self.last, Some((h, _)) if (*h - dt).abs() <= T::tol(1e-9) * dt.abs());
        if !reuse {
            self.last = Some((dt, propagator(self.l, dt)));
        }
        let (h, p) = self.last.as_ref().expect("propagator cached above");
        self.now += *h;
        p * v
    }
}

pub(crate) fn check_grid<T: Real>(name: &str, grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument(format!("{name} grid is empty")));
    }
    if !grid.iter().all(|t| t.is_finite()) {
        return Err(Error::InvalidArgument(format!("{name} grid has non-finite entries")));
    }
    if grid[0] < T::zero() {
        return Err(Error::InvalidArgument(format!("{name} grid starts before zero")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!("{name} grid is not strictly increasing")));
    }
    Ok(())
}

/// `rho(t) = exp(L t)[rho0]` at every grid time.
pub fn evolve<T: Real>(l: &Liouvillian<T>, rho0: &DensityMatrix<T>, times: &[T]) -> Result<Trajectory<T>> {
    check_grid("time", times)?;
    let mut stepper = Stepper::new(l);
    let mut v = vectorize(rho0.matrix());
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        v = stepper.advance_to(&v, t);
        let m = unvectorize(&v);
        let state = DensityMatrix::new(m).map_err(|e| {
            Error::Numerical(format!("propagation lost physicality at t = {t}: {e}"))
        })?;
        states.push(state);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

/// Unique stationary state, from the smallest right singular vector of `L`.
pub fn steady_state<T: Real>(l: &Liouvillian<T>) -> Result<DensityMatrix<T>> {
    let svd = l.matrix().svd(false, true);
    let s = &svd.singular_values;
    let largest = s[0];
    let cutoff = largest * T::lit(1.0e-8);
    if s[14] <= cutoff {
        let dimension = s.iter().filter(|&&x| x <= cutoff).count();
        return Err(Error::NonUniqueSteadyState { dimension });
    }
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD did not return right singular vectors".into()))?;
    let null: SuperVector<T> = v_t.row(15).adjoint();
    let mut rho = unvectorize(&null);
    let tr = rho.trace();
    if tr.modulus() <= T::default_epsilon() {
        return Err(Error::Numerical("kernel vector of the generator is traceless".into()));
    }
    rho /= tr;
    rho = (rho + rho.adjoint()) * re(T::lit(0.5));
    DensityMatrix::new(rho)
        .map_err(|e| Error::Numerical(format!("steady state is not physical: {e}")))
}

/// `Tr[op rho]`
pub fn expectation<T: Real>(rho: &DensityMatrix<T>, op: &Operator<T>) -> C<T> {
    (op * rho.matrix()).trace()
}
