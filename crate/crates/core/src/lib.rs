//! Two driven two-level atoms coupled through the vacuum field.
//!
//! The atoms are driven by one plane wave whose phase differs between them
//! by `phi = k.(r1 - r2)`. Everything is expressed in units of the single-atom
//! rate `gamma`, in the frame rotating at the laser frequency.
//!
//! The physics is generic over [`scalar::Real`]; the `*64` and `*32` aliases
//! below name the concrete instantiations.

pub mod bloch;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod liouvillian;
pub mod observables;
pub mod operators;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};

pub type GeometryConfig64 = geometry::GeometryConfig<f64>;
pub type CouplingCoefficients64 = geometry::CouplingCoefficients<f64>;
pub type SystemConfig64 = liouvillian::SystemConfig<f64>;
pub type Liouvillian64 = liouvillian::Liouvillian<f64>;
pub type DensityMatrix64 = operators::DensityMatrix<f64>;
pub type Trajectory64 = dynamics::Trajectory<f64>;
pub type SpectrumResult64 = spectrum::SpectrumResult<f64>;
pub type CollectivePopulations64 = observables::CollectivePopulations<f64>;

pub type GeometryConfig32 = geometry::GeometryConfig<f32>;
pub type CouplingCoefficients32 = geometry::CouplingCoefficients<f32>;
pub type SystemConfig32 = liouvillian::SystemConfig<f32>;
pub type Liouvillian32 = liouvillian::Liouvillian<f32>;
pub type DensityMatrix32 = operators::DensityMatrix<f32>;
pub type Trajectory32 = dynamics::Trajectory<f32>;
pub type SpectrumResult32 = spectrum::SpectrumResult<f32>;
pub type CollectivePopulations32 = observables::CollectivePopulations<f32>;
