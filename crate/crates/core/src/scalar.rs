//! Scalar abstraction shared by the channel model, the linear algebra and the
//! exponential-order calculus.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; exact for `f64`.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Real")
    }

    /// Lossy conversion to `f64`; exact for `f64`.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    /// Convergence tolerance used by the iterative solvers: `1e-12` relative,
    /// or a small multiple of machine epsilon when the type cannot resolve that.
    fn solver_tolerance() -> Self {
        Self::of(1e-12).max(Self::epsilon() * Self::of(16.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
