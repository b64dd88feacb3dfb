//! Landau-level Hamiltonians, their Wigner-transform representation and
//! Gazeau-Klauder coherent states, with numerical checks of the identities
//! that relate them.
//!
//! Everything is generic over [`Real`]; the aliases below fix the scalar.

#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop
)]

pub mod displacement;
pub mod error;
pub mod fock;
pub mod gkcs;
pub mod hamiltonians;
pub mod numerics;
pub mod scalar;
pub mod wigner;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Complex64 = C<f64>;
pub type Complex32 = C<f32>;
pub type ModelParams64 = fock::ModelParams<f64>;
pub type ModelParams32 = fock::ModelParams<f32>;
pub type OperatorMatrix64 = fock::OperatorMatrix<f64>;
pub type OperatorMatrix32 = fock::OperatorMatrix<f32>;
pub type QuadratureRule64 = numerics::QuadratureRule<f64>;
pub type QuadratureRule32 = numerics::QuadratureRule<f32>;
pub type GridSpec64 = wigner::GridSpec<f64>;
pub type PhaseSpaceGrid64 = wigner::PhaseSpaceGrid<f64>;
pub type GkCsLabel64 = gkcs::GkCsLabel<f64>;
pub type GkCsLabel32 = gkcs::GkCsLabel<f32>;
pub type CompositeCs64 = gkcs::CompositeCs<f64>;
