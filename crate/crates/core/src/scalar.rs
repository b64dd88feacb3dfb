//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt;

use nalgebra::RealField;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Complex number over the crate's real scalar.
pub type C<T> = num_complex::Complex<T>;

/// Real floating-point scalar: `f32` or `f64`.
///
/// Elementary functions (`sqrt`, `exp`, `ln`, ...) come from [`RealField`];
/// constants and conversions come from `num-traits`.
pub trait Real: RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Send + Sync + fmt::LowerExp {
    const EPSILON: Self;
    const INFINITY: Self;
    const MIN_POSITIVE: Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count or index.
    #[inline]
    fn nat(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Rounds to single precision. Used by algorithms that need a short
    /// mantissa whose square is exact.
    #[inline]
    fn truncate_single(self) -> Self {
        Self::lit(self.as_f64() as f32 as f64)
    }

    #[inline]
    fn finite(self) -> bool {
        self.as_f64().is_finite()
    }
}

macro_rules! impl_real {
    ($t:ident) => {
        impl Real for $t {
            const EPSILON: Self = $t::EPSILON;
            const INFINITY: Self = $t::INFINITY;
            const MIN_POSITIVE: Self = $t::MIN_POSITIVE;
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Builds a complex number from its parts.
#[inline]
pub fn c<T: Real>(re: T, im: T) -> C<T> {
    C::new(re, im)
}

/// `e^{i phi}`.
#[inline]
pub fn cis<T: Real>(phi: T) -> C<T> {
    C::new(phi.cos(), phi.sin())
}

#[inline]
pub fn cabs<T: Real>(z: C<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}
