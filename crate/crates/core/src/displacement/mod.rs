//! Unitary displacement operators on unit-scale ladders, the two-mode coherent
//! state they generate, and exact grid shifts for the continuous factor.

mod shift;
mod unitary_cs;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fock::{ladder, matrix_exponential, FockSpace, OperatorMatrix, ProductSpace};
use crate::gkcs::{poisson_tail_bound, required_n_max};
use crate::numerics::sqrt_power_over_factorial;
use crate::scalar::{cabs, cis, Real, C};

pub use shift::infinitesimal_displacement;
pub use unitary_cs::{CsWeights, UnitaryOperatorCs};

/// Largest Poisson tail above the top level accepted by [`displacement_u`].
pub const TAIL_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `U1(z) = e^{z b'^dagger - conj(z) b'}`.
    B,
    /// `U2(z') = e^{conj(z') frak_b'^dagger - z' frak_b'}`.
    FrakB,
}

/// Displacement label with its phase-space form `z = (q - ip) / sqrt 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementParams<T> {
    pub z: C<T>,
    pub mode: Mode,
}

impl<T: Real> DisplacementParams<T> {
    pub fn from_qp(q: T, p: T, mode: Mode) -> Self {
        Self {
            z: C::new(q, -p) * T::FRAC_1_SQRT_2(),
            mode,
        }
    }

    pub fn qp(&self) -> (T, T) {
        let s = T::lit(2.0).sqrt();
        (self.z.re * s, -self.z.im * s)
    }

    /// Coefficient of the raising operator in the exponent.
    pub fn raising_coefficient(&self) -> C<T> {
        match self.mode {
            Mode::B => self.z,
            Mode::FrakB => self.z.conj(),
        }
    }

    pub fn operator(&self, space: FockSpace) -> Result<OperatorMatrix<T>> {
        displacement_u(self.raising_coefficient(), space)
    }
}

fn generator<T: Real>(w: C<T>, space: FockSpace) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>, OperatorMatrix<T>)> {
    let (lower, raise) = ladder(space, T::one())?;
    let gen = (&raise.scale(w)) - (&lower.scale(w.conj()));
    Ok((gen, lower, raise))
}

/// `e^{w R - conj(w) L}` with `[L, R] = 1`; errors when the coherent-state
/// weight above the top level exceeds [`TAIL_LIMIT`].
pub fn displacement_u<T: Real>(w: C<T>, space: FockSpace) -> Result<OperatorMatrix<T>> {
    if !w.re.finite() || !w.im.finite() {
        return Err(Error::param("displacement must be finite"));
    }
    let mean = w.norm_sqr();
    let limit = T::lit(TAIL_LIMIT);
    if !(poisson_tail_bound(mean, space.dim() - 1) < limit) {
        return Err(Error::Truncation {
            what: format!("displacement |z|^2 = {:e} in dimension {}", mean.as_f64(), space.dim()),
            suggested: required_n_max(mean, limit) + 1,
        });
    }
    matrix_exponential(&generator(w, space)?.0)
}

/// `sum_k A^k / k!` for nilpotent `A`.
fn nilpotent_exp<T: Real>(a: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let n = a.nrows();
    let mut out = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..n {
        term = (&term * a) / C::new(T::nat(k), T::zero());
        out += &term;
    }
    out
}

/// Levels kept by [`bch_check`]: `floor(5 dim / 8)`, so 25 at `dim = 40`.
pub fn bch_block(dim: usize) -> usize {
    (5 * dim / 8).max(1)
}

/// Max deviation between `e^{zR - conj(z)L}` and
/// `e^{-|z|^2/2} e^{zR} e^{-conj(z)L}` on levels `n, m <= bch_block(dim)`.
/// The factored side uses the exact nilpotent series.
pub fn bch_check<T: Real>(z: C<T>, space: FockSpace) -> Result<T> {
    let (gen, lower, raise) = generator(z, space)?;
    let lhs = matrix_exponential(&gen)?;
    let er = nilpotent_exp(&(raise.entries() * z));
    let el = nilpotent_exp(&(lower.entries() * (-z.conj())));
    let rhs = (er * el) * C::new((-z.norm_sqr() * T::lit(0.5)).exp(), T::zero());
    let cut = bch_block(space.dim()).min(space.dim() - 1);
    let mut worst = T::zero();
    for i in 0..=cut {
        for j in 0..=cut {
            worst = worst.max(cabs(lhs.entries()[(i, j)] - rhs[(i, j)]));
        }
    }
    Ok(worst)
}

/// `e^{i(pQ' - qP')}` with `Q' = (L + R)/sqrt 2`, `P' = i(R - L)/sqrt 2`.
pub fn weyl_heisenberg_u<T: Real>(q: T, p: T, space: FockSpace) -> Result<OperatorMatrix<T>> {
    let (lower, raise) = ladder(space, T::one())?;
    let h = T::FRAC_1_SQRT_2();
    let qop = (&lower + &raise).scale_real(h);
    let pop = (&raise - &lower).scale(C::new(T::zero(), h));
    let gen = (&qop.scale_real(p) - &pop.scale_real(q)).scale(C::new(T::zero(), T::one()));
    matrix_exponential(&gen)
}

/// `e^{-(|z|^2 + |z'|^2)/2} z^n conj(z')^l / sqrt(n! l!)`.
pub fn two_mode_amplitude<T: Real>(z: C<T>, zp: C<T>, n: usize, l: usize) -> C<T> {
    let pow = |w: C<T>, k: usize| -> C<T> {
        let r = cabs(w);
        if r == T::zero() {
            return if k == 0 {
                C::new(T::one(), T::zero())
            } else {
                C::new(T::zero(), T::zero())
            };
        }
        cis(T::nat(k) * w.im.atan2(w.re)) * sqrt_power_over_factorial(r * r, k)
    };
    pow(z, n) * pow(zp.conj(), l) * (-(z.norm_sqr() + zp.norm_sqr()) * T::lit(0.5)).exp()
}

/// `U1(z) U2(z') |Psi_00>` on a two-mode space, index `n * dim2 + l`.
pub fn two_mode_cs<T: Real>(z: C<T>, zp: C<T>, space: &ProductSpace) -> Result<DVector<C<T>>> {
    let [a, b] = space.factors() else {
        return Err(Error::param("two-mode space expected"));
    };
    let u1 = DisplacementParams { z, mode: Mode::B }.operator(*a)?;
    let u2 = DisplacementParams {
        z: zp,
        mode: Mode::FrakB,
    }
    .operator(*b)?;
    let v1 = u1.entries().column(0).into_owned();
    let v2 = u2.entries().column(0).into_owned();
    Ok(v1.kronecker(&v2))
}

/// `z = sqrt(J) e^{-i gamma}`, `z' = sqrt(J') e^{-i gamma'}`.
pub fn gk_relabel<T: Real>(j: T, gamma: T, jp: T, gammap: T) -> Result<(C<T>, C<T>)> {
    if !(j >= T::zero()) || !(jp >= T::zero()) || !j.finite() || !jp.finite() {
        return Err(Error::param("J and J' must be nonnegative and finite"));
    }
    Ok((cis(-gamma) * j.sqrt(), cis(-gammap) * jp.sqrt()))
}

/// Max of `U(z1) U(z2) - e^{i Im(z1 conj z2)} U(z1 + z2)` on levels
/// `n, m <= dim / 2`; the product sums over truncated intermediate levels, so
/// it needs a wider margin than [`bch_check`].
pub fn weyl_relation_defect<T: Real>(z1: C<T>, z2: C<T>, space: FockSpace) -> Result<T> {
    let a = displacement_u(z1, space)?;
    let b = displacement_u(z2, space)?;
    let c = displacement_u(z1 + z2, space)?;
    let phase = cis((z1 * z2.conj()).im);
    let d = &(&a * &b) - &c.scale(phase);
    let cut = space.dim() / 2;
    let mut worst = T::zero();
    for i in 0..=cut {
        for j in 0..=cut {
            worst = worst.max(cabs(d.entries()[(i, j)]));
        }
    }
    Ok(worst)
}
