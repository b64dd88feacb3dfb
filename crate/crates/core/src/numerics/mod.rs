//! Quadrature rules and special functions.

mod adaptive;
mod quadrature;
mod special;

pub use adaptive::{gaussian_half_line, Bound, Estimate, Integrator, Tolerance};
pub use quadrature::{QuadratureRule, RuleKind};
#[allow(unused_imports)]
pub(crate) use special::erfc_unchecked;
pub use special::{erf, erfc, ln_factorial, sqrt_power_over_factorial};
