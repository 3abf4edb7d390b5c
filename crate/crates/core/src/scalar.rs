//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::RealField;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f64` for production runs, `f32` where a
/// cheaper evaluation is acceptable.
///
/// Linear algebra goes through [`nalgebra::RealField`]; literals and
/// conversions go through `num-traits`.
pub trait Real: RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// Machine epsilon of the type.
    fn machine_eps() -> Self;

    /// `x` for `f64`, loosened to a multiple of the type's own epsilon for
    /// narrower types.
    #[inline]
    fn tol(x: f64) -> Self {
        let floor = Self::machine_eps() * Self::lit(1e4);
        let t = Self::lit(x);
        if Self::machine_eps() < Self::lit(1e-15) || t > floor {
            t
        } else {
            floor
        }
    }
}

impl Real for f64 {
    fn machine_eps() -> Self {
        f64::EPSILON
    }
}

impl Real for f32 {
    fn machine_eps() -> Self {
        f32::EPSILON
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_is_exact_for_f64_and_floored_for_f32() {
        assert_eq!(<f64 as Real>::tol(1e-12), 1e-12);
        assert!(<f32 as Real>::tol(1e-12) > 1e-4);
        assert_eq!(<f32 as Real>::tol(0.5), 0.5);
    }
}
