//! Truncated Fock spaces, ladder and quadrature operators, helicity modes.

mod expm;
mod ladder;
mod operator;

pub use expm::matrix_exponential;
pub use ladder::{
    helicity_ops, ladder, quadratures, CommutatorDefect, HelicityOp, HelicityOps, Ladder, QuadratureMode,
};
pub use operator::{commutator, kron, OperatorMatrix};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Physical constants shared by every formula. `lambda_bar` is derived on
/// demand and never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    pub mass: T,
    pub omega_c: T,
    pub lambda: T,
    pub hbar: T,
    pub beta: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(mass: T, omega_c: T, lambda: T, hbar: T, beta: T) -> Result<Self> {
        let p = Self {
            mass,
            omega_c,
            lambda,
            hbar,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.finite() {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must be positive and finite")))
            }
        };
        positive("mass", self.mass)?;
        positive("omega_c", self.omega_c)?;
        positive("hbar", self.hbar)?;
        positive("beta", self.beta)?;
        if !self.lambda.finite() {
            return Err(Error::param("lambda must be finite"));
        }
        Ok(())
    }

    /// `lambda * sqrt(omega_c / M)`.
    pub fn lambda_bar(&self) -> T {
        self.lambda * (self.omega_c / self.mass).sqrt()
    }

    /// `sqrt(2 M hbar omega_c)`, the ladder scale for which
    /// `[b, b^dagger] = 2 M hbar omega_c`.
    pub fn ladder_scale(&self) -> T {
        (T::lit(2.0) * self.mass * self.hbar * self.omega_c).sqrt()
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }
}

impl<T: Real> Default for ModelParams<T> {
    fn default() -> Self {
        Self {
            mass: T::one(),
            omega_c: T::one(),
            lambda: T::zero(),
            hbar: T::one(),
            beta: T::one(),
        }
    }
}

/// Levels `0..dim` of one oscillator mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::param(format!("Fock dimension {dim} below 2")));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Tensor product of Fock spaces; basis index is mixed-radix with the first
/// factor most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductSpace {
    factors: Vec<FockSpace>,
}

impl ProductSpace {
    pub fn new(factors: Vec<FockSpace>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::param("product space needs at least one factor"));
        }
        Ok(Self { factors })
    }

    pub fn two_mode(n1: usize, n2: usize) -> Result<Self> {
        Self::new(vec![FockSpace::new(n1)?, FockSpace::new(n2)?])
    }

    pub fn factors(&self) -> &[FockSpace] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(FockSpace::dim).product()
    }

    pub fn index(&self, levels: &[usize]) -> usize {
        debug_assert_eq!(levels.len(), self.factors.len());
        levels
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&n, f)| acc * f.dim() + n)
    }

    pub fn levels(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.dim();
            index /= f.dim();
        }
        out
    }

    /// Basis indices whose levels are all below the top kept level of their
    /// mode; truncation corrupts exactly the complement.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.levels(i).iter().zip(&self.factors).all(|(&n, f)| n + 1 < f.dim()))
            .collect()
    }

    pub fn product(&self, other: &ProductSpace) -> ProductSpace {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        ProductSpace { factors }
    }
}

impl From<FockSpace> for ProductSpace {
    fn from(f: FockSpace) -> Self {
        Self { factors: vec![f] }
    }
}
