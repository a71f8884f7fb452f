//! Scalar abstraction shared by every module.
//!
//! All physics is written against [`Real`], so the same code runs in `f64`
//! (the default, and the precision the tolerances are calibrated for) and in
//! `f32`.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::{Complex, RealField};
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable throughout the crate.
pub trait Real:
    RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp
{
    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    /// A tolerance that is `x` in double precision but never tighter than
    /// what the type can resolve.
    fn tol(x: f64) -> Self {
        let floor = Self::default_epsilon() * Self::lit(1.0e4);
        let requested = Self::lit(x);
        if requested > floor {
            requested
        } else {
            floor
        }
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp
{
}

/// Complex number over `T`.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{i x}`
#[inline]
pub(crate) fn cis<T: Real>(x: T) -> C<T> {
    Complex::new(x.cos(), x.sin())
}
