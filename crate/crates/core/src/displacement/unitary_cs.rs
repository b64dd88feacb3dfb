use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::numerics::{sqrt_power_over_factorial, Bound, Integrator, QuadratureRule, Tolerance};
use crate::scalar::{cabs, cis, Real, C};

use super::{DisplacementParams, Mode};

/// Caller-supplied pieces of the unitary-operator state: the weights `f(K, theta)`
/// and `g(z, conj z')` and the density `rho(eps)` of the continuous factor.
pub struct CsWeights<'a, T> {
    pub f: DiscreteWeight<'a, T>,
    pub g: ContinuousWeight<'a, T>,
    pub rho: Box<dyn Fn(T) -> T + Sync + 'a>,
}

pub type DiscreteWeight<'a, T> = Box<dyn Fn(T, T) -> C<T> + Sync + 'a>;
pub type ContinuousWeight<'a, T> = Box<dyn Fn(C<T>, C<T>) -> C<T> + Sync + 'a>;

impl<'a, T: Real> CsWeights<'a, T> {
    /// `f = g = 1/sqrt 2` and `rho(eps) = e^{width eps^2}`.
    pub fn gaussian(width: T) -> Self {
        let h = C::new(T::FRAC_1_SQRT_2(), T::zero());
        Self {
            f: Box::new(move |_, _| h),
            g: Box::new(move |_, _| h),
            rho: Box::new(move |e| (width * e * e).exp()),
        }
    }
}

/// `f |z, conj z'; l> (+) e^{-i phase} g |K, theta>` as a pair of
/// coefficient vectors: the first mode of `U1(z)|Psi_{0l}>` and the continuous
/// amplitudes on a rule in `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperatorCs<T> {
    pub discrete: DVector<C<T>>,
    pub rule: QuadratureRule<T>,
    pub continuous: Vec<C<T>>,
    pub f: C<T>,
    pub g: C<T>,
    /// `e^{-|z'|^2} |z'|^{2l} / l!`, the weight of the `l` sector.
    pub sector_weight: T,
}

impl<T: Real> UnitaryOperatorCs<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        z: C<T>,
        zp: C<T>,
        l: usize,
        k: T,
        theta: T,
        phase: T,
        weights: &CsWeights<'_, T>,
        space: FockSpace,
    ) -> Result<Self> {
        if !(k > T::zero()) || !k.finite() {
            return Err(Error::param("K must be positive and finite"));
        }
        let f = (weights.f)(k, theta);
        let g = (weights.g)(z, zp.conj());
        let r = cabs(zp);
        let prefactor = cis(-T::nat(l) * zp.im.atan2(zp.re))
            * (sqrt_power_over_factorial(r * r, l) * (-(r * r) * T::lit(0.5)).exp());
        let u = DisplacementParams { z, mode: Mode::B }.operator(space)?;
        let discrete = u.entries().column(0).into_owned() * (f * prefactor);

        let ln_k = k.ln();
        // K^eps / rho(eps), zero once rho overflows
        let amp = |e: T| {
            let r = (weights.rho)(e);
            if r.finite() {
                (e * ln_k * T::lit(0.5)).exp() / r.sqrt()
            } else {
                T::zero()
            }
        };
        let density = |e: T| amp(e) * amp(e);
        let integ = Integrator::new(Tolerance {
            abs: T::zero(),
            rel: T::lit(1e-12).max(T::lit(64.0) * T::EPSILON),
        });
        let (rule, est) = integ.adaptive_rule(density, &[T::zero()], Bound::Infinite { scale: T::one() })?;
        let n_rho = est.value;
        if !(n_rho > T::zero()) || !n_rho.finite() {
            return Err(Error::numeric("continuous normalization is not positive and finite"));
        }
        let front = cis(-phase) * g / n_rho.sqrt();
        let continuous = rule.nodes().iter().map(|&e| front * cis(e * theta) * amp(e)).collect();
        let sector_weight = prefactor.norm_sqr();
        let cs = Self {
            discrete,
            rule,
            continuous,
            f,
            g,
            sector_weight,
        };
        let defect = cs.normalization_defect();
        if defect > T::lit(1e-8) {
            return Err(Error::numeric(format!(
                "norm differs from |f|^2 w_l + |g|^2 by {:e}",
                defect.as_f64()
            )));
        }
        Ok(cs)
    }

    pub fn norm_sqr(&self) -> T {
        let d = self.discrete.iter().fold(T::zero(), |a, c| a + c.norm_sqr());
        let c = self
            .rule
            .weights()
            .iter()
            .zip(&self.continuous)
            .fold(T::zero(), |a, (w, c)| a + *w * c.norm_sqr());
        d + c
    }

    /// `|f|^2 w_l + |g|^2`, the norm the direct sum must carry.
    pub fn expected_norm_sqr(&self) -> T {
        self.f.norm_sqr() * self.sector_weight + self.g.norm_sqr()
    }

    pub fn normalization_defect(&self) -> T {
        (self.norm_sqr() - self.expected_norm_sqr()).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_instance_is_consistent() {
        let w = CsWeights::gaussian(1.0);
        let s = UnitaryOperatorCs::build(
            C::new(0.6, -0.2),
            C::new(0.3, 0.4),
            2,
            1.5,
            0.3,
            0.7,
            &w,
            FockSpace::new(30).unwrap(),
        )
        .unwrap();
        assert!(s.normalization_defect() < 1e-10);
        let wl = (-0.25f64).exp() * 0.25f64.powi(2) / 2.0;
        assert!((s.sector_weight - wl).abs() < 1e-14);
        assert!((s.expected_norm_sqr() - (wl + 1.0) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn custom_weights() {
        let w = CsWeights {
            f: Box::new(|k: f64, _| C::new(k.sqrt(), 0.0)),
            g: Box::new(|_, _| C::new(0.0, 0.5)),
            rho: Box::new(|e: f64| (0.5 * e * e + e).exp()),
        };
        let s = UnitaryOperatorCs::build(
            C::new(0.0, 0.0),
            C::new(1.0, 0.0),
            0,
            2.0,
            0.0,
            0.0,
            &w,
            FockSpace::new(10).unwrap(),
        )
        .unwrap();
        assert!((s.discrete[0].re - 2f64.sqrt() * (-0.5f64).exp()).abs() < 1e-14);
        assert!(s.normalization_defect() < 1e-10);
    }
}
