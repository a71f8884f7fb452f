//! Two-atom Hilbert space.
//!
//! Every 4-component vector and 4x4 matrix in the crate uses the product basis
//! in the fixed order `|e,e>, |e,g>, |g,e>, |g,g>` (atom 1 is the left tensor
//! factor). The collective basis is ordered `|g>, |s>, |a>, |e>`.

use nalgebra::{ComplexField, SMatrix, SVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{cis, re, Real, C};

/// General operator on the two-atom space.
pub type Operator<T> = SMatrix<C<T>, 4, 4>;
/// Raw amplitudes in the product basis.
pub type Ket<T> = SVector<C<T>, 4>;

pub const EE: usize = 0;
pub const EG: usize = 1;
pub const GE: usize = 2;
pub const GG: usize = 3;

/// Index of a state in the collective basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Collective {
    Ground = 0,
    Symmetric = 1,
    Antisymmetric = 2,
    Excited = 3,
}

impl Collective {
    pub const fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    One,
    Two,
}

impl Atom {
    pub const BOTH: [Atom; 2] = [Atom::One, Atom::Two];
}

impl TryFrom<usize> for Atom {
    type Error = Error;

    fn try_from(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Atom::One),
            2 => Ok(Atom::Two),
            _ => Err(Error::InvalidArgument(format!(
                "atom index must be 1 or 2, got {index}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinKind {
    Raise,
    Lower,
    /// `sigma_z / 2`
    Z,
}

/// Single-atom operator (basis `|e>, |g>`) lifted onto one tensor factor.
pub fn spin_operator<T: Real>(atom: Atom, kind: SpinKind) -> Operator<T> {
    let one = re(T::one());
    let half = re(T::lit(0.5));
    let mut single = SMatrix::<C<T>, 2, 2>::zeros();
    match kind {
        SpinKind::Raise => single[(0, 1)] = one,
        SpinKind::Lower => single[(1, 0)] = one,
        SpinKind::Z => {
            single[(0, 0)] = half;
            single[(1, 1)] = -half;
        }
    }
    let id = SMatrix::<C<T>, 2, 2>::identity();
    let (left, right) = match atom {
        Atom::One => (single, id),
        Atom::Two => (id, single),
    };
    let mut out = Operator::zeros();
    for i1 in 0..2 {
        for j1 in 0..2 {
            for i2 in 0..2 {
                for j2 in 0..2 {
                    out[(2 * i1 + i2, 2 * j1 + j2)] = left[(i1, j1)] * right[(i2, j2)];
                }
            }
        }
    }
    out
}

/// [`spin_operator`] addressed by a 1-based atom index.
pub fn spin_operator_at<T: Real>(atom_index: usize, kind: SpinKind) -> Result<Operator<T>> {
    Ok(spin_operator(Atom::try_from(atom_index)?, kind))
}

pub fn raise<T: Real>(atom: Atom) -> Operator<T> {
    spin_operator(atom, SpinKind::Raise)
}

pub fn lower<T: Real>(atom: Atom) -> Operator<T> {
    spin_operator(atom, SpinKind::Lower)
}

/// Pure state of the atom pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector<T: Real>(Ket<T>);

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Ket<T>) -> Self {
        Self(amplitudes)
    }

    /// Product basis vector `index` (see the `EE`..`GG` constants).
    pub fn basis(index: usize) -> Self {
        let mut k = Ket::zeros();
        k[index] = re(T::one());
        Self(k)
    }

    pub fn amplitudes(&self) -> &Ket<T> {
        &self.0
    }

    pub fn norm(&self) -> T {
        self.0.norm()
    }

    pub fn inner(&self, other: &Self) -> C<T> {
        self.0.dotc(&other.0)
    }

    pub fn projector(&self) -> DensityMatrix<T> {
        DensityMatrix(self.0 * self.0.adjoint())
    }
}

/// Physical density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<T: Real>(Operator<T>);

impl<T: Real> DensityMatrix<T> {
    /// Validates the physical invariants within double-precision tolerances
    /// (Hermiticity and trace 1e-10, eigenvalues above -1e-8).
    pub fn new(matrix: Operator<T>) -> Result<Self> {
        let herm = hermiticity_error(&matrix);
        if !(herm <= T::tol(1e-10)) {
            return Err(Error::InvalidState(format!(
                "density matrix is not Hermitian (max deviation {herm:e})"
            )));
        }
        let tr = matrix.trace();
        let tr_err = (tr - re(T::one())).modulus();
        if !(tr_err <= T::tol(1e-10)) {
            return Err(Error::InvalidState(format!(
                "density matrix trace is {tr}, not 1"
            )));
        }
        let min = min_eigenvalue(&matrix);
        if !(min >= -T::tol(1e-8)) {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(Self(matrix))
    }

    pub fn ground() -> Self {
        StateVector::basis(GG).projector()
    }

    pub fn maximally_mixed() -> Self {
        Self(Operator::identity() * re(T::lit(0.25)))
    }

    pub fn matrix(&self) -> &Operator<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Operator<T> {
        self.0
    }

    pub fn eigenvalues(&self) -> [T; 4] {
        let ev = hermitian_eigenvalues(&self.0);
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn min_eigenvalue(&self) -> T {
        min_eigenvalue(&self.0)
    }

    /// Largest entry of `rho - 1/2 (rho + rho^dagger)`, in modulus.
    pub fn hermiticity_error(&self) -> T {
        hermiticity_error(&self.0)
    }

    pub fn trace_error(&self) -> T {
        (self.0.trace() - re(T::one())).modulus()
    }
}

pub fn hermiticity_error<T: Real>(m: &Operator<T>) -> T {
    (m - m.adjoint()).iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

fn hermitian_part<T: Real>(m: &Operator<T>) -> Operator<T> {
    (m + m.adjoint()) * re(T::lit(0.5))
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub(crate) fn hermitian_eigenvalues<T: Real>(m: &Operator<T>) -> Vec<T> {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut ev: Vec<T> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

fn min_eigenvalue<T: Real>(m: &Operator<T>) -> T {
    hermitian_eigenvalues(m)
        .first()
        .copied()
        .unwrap_or_else(T::zero)
}

/// The phase-dependent collective states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveStates<T: Real> {
    pub ground: StateVector<T>,
    pub symmetric: StateVector<T>,
    pub antisymmetric: StateVector<T>,
    pub excited: StateVector<T>,
}

impl<T: Real> CollectiveStates<T> {
    /// Unitary whose columns are `|g>, |s>, |a>, |e>`.
    pub fn unitary(&self) -> Operator<T> {
        Operator::from_columns(&[
            *self.ground.amplitudes(),
            *self.symmetric.amplitudes(),
            *self.antisymmetric.amplitudes(),
            *self.excited.amplitudes(),
        ])
    }

    pub fn get(&self, which: Collective) -> &StateVector<T> {
        match which {
            Collective::Ground => &self.ground,
            Collective::Symmetric => &self.symmetric,
            Collective::Antisymmetric => &self.antisymmetric,
            Collective::Excited => &self.excited,
        }
    }
}

/// Collective states for the phase difference `phi = k.(r1 - r2)`.
///
/// With the drive phase at atom 1 taken as zero, atom 2 sees `-phi`:
/// `|s> = (|e,g> + e^{-i phi}|g,e>)/sqrt 2`,
/// `|a> = (|e,g> - e^{-i phi}|g,e>)/sqrt 2`,
/// `|e> = e^{-i phi}|e,e>` (so drive matrix elements `<e|H|s>` are real).
pub fn collective_states<T: Real>(phi: T) -> CollectiveStates<T> {
    let h = re(T::FRAC_1_SQRT_2());
    let w = cis(-phi);
    let mut s = Ket::zeros();
    s[EG] = h;
    s[GE] = h * w;
    let mut a = Ket::zeros();
    a[EG] = h;
    a[GE] = -h * w;
    let mut e = Ket::zeros();
    e[EE] = w;
    CollectiveStates {
        ground: StateVector::basis(GG),
        symmetric: StateVector::new(s),
        antisymmetric: StateVector::new(a),
        excited: StateVector::new(e),
    }
}

/// `U^dagger rho U`, rows and columns ordered `g, s, a, e`.
pub fn to_collective_basis<T: Real>(rho: &Operator<T>, phi: T) -> Operator<T> {
    let u = collective_states(phi).unitary();
    u.adjoint() * rho * u
}

/// `sigma_y (x) sigma_y` in the product basis.
fn spin_flip<T: Real>() -> Operator<T> {
    let mut m = Operator::zeros();
    let one = re(T::one());
    m[(EE, GG)] = -one;
    m[(GG, EE)] = -one;
    m[(EG, GE)] = one;
    m[(GE, EG)] = one;
    m
}

/// Wootters concurrence.
///
/// The decreasing square roots of the spectrum of `rho (sy sy) rho* (sy sy)`
/// are obtained as square roots of the eigenvalues of the Hermitian
/// `sqrt(rho) (sy sy) rho* (sy sy) sqrt(rho)`, which has the same spectrum.
pub fn concurrence<T: Real>(rho: &Operator<T>) -> Result<T> {
    let rho = DensityMatrix::new(*rho)?;
    let eig = SymmetricEigen::new(hermitian_part(rho.matrix()));
    let sqrt_vals = eig.eigenvalues.map(|v| v.max(T::zero()).sqrt());
    let sqrt_rho = eig.eigenvectors
        * Operator::from_diagonal(&sqrt_vals.map(re))
        * eig.eigenvectors.adjoint();
    let flip = spin_flip::<T>();
    let tilde = flip * rho.matrix().conjugate() * flip;
    let m = sqrt_rho * tilde * sqrt_rho;
    let vals = hermitian_eigenvalues(&m);
    let floor = vals.iter().fold(T::zero(), |a, &v| a.max(v.abs())) * T::default_epsilon() * T::lit(64.0);
    let mut lambdas: Vec<T> = vals
        .into_iter()
        .map(|v| if v > floor { v.sqrt() } else { T::zero() })
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()))
}
