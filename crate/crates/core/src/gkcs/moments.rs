use crate::error::{Error, Result};
use crate::numerics::{erf, erfc, Bound, Integrator, QuadratureRule, Tolerance};
use crate::scalar::Real;

/// Relative agreement required before two normalization values are flagged
/// as matching.
pub const NORM_AGREEMENT: f64 = 1e-8;

fn check_k_beta<T: Real>(k1: T, beta: T) -> Result<()> {
    if !(k1 > T::zero()) || !k1.finite() {
        return Err(Error::param("K1 must be positive and finite"));
    }
    if !(beta > T::zero()) || !beta.finite() {
        return Err(Error::param("beta must be positive and finite"));
    }
    Ok(())
}

fn oracle_tol<T: Real>() -> Tolerance<T> {
    Tolerance {
        abs: T::zero(),
        rel: T::lit(1e-13).max(T::lit(64.0) * T::EPSILON),
    }
}

/// Scaled moments `int_0^inf E^k e^{2E ln K - beta E^2 - shift} dE` for
/// `k = 0, 1` by plain adaptive quadrature, with `shift` the maximum of the
/// exponent on the half line.
fn weighted_moments<T: Real>(ln_k: T, beta: T) -> Result<([T; 2], T)> {
    let peak = (ln_k / beta).max(T::zero());
    let shift = if ln_k > T::zero() {
        ln_k * ln_k / beta
    } else {
        T::zero()
    };
    let breaks: Vec<T> = if peak > T::zero() {
        vec![T::zero(), peak]
    } else {
        vec![T::zero()]
    };
    let two = T::lit(2.0);
    let est = Integrator::new(oracle_tol()).integrate_vec(
        2,
        |e, out| {
            let w = (two * e * ln_k - beta * e * e - shift).exp();
            out[0] = crate::scalar::c(w, T::zero());
            out[1] = crate::scalar::c(w * e, T::zero());
        },
        &breaks,
        Bound::Infinite {
            scale: T::one() / beta.sqrt(),
        },
    )?;
    Ok(([est.value[0].re, est.value[1].re], shift))
}

/// `N(K1)^2` three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousNorm<T> {
    /// `(1/2) sqrt(pi/beta) e^{(ln K)^2/beta} erfc(-ln K / sqrt beta)`.
    pub general: T,
    /// Same prefactor with `1 - erf(|ln K| / sqrt beta)`.
    pub abs_erf: T,
    /// Adaptive quadrature of `int_0^inf e^{2E ln K - beta E^2} dE`.
    pub oracle: T,
    pub general_matches: bool,
    pub abs_erf_matches: bool,
}

pub fn continuous_norm<T: Real>(k1: T, beta: T) -> Result<ContinuousNorm<T>> {
    check_k_beta(k1, beta)?;
    let ln_k = k1.ln();
    let sb = beta.sqrt();
    let pre = T::lit(0.5) * (T::pi() / beta).sqrt() * (ln_k * ln_k / beta).exp();
    let general = pre * erfc(-ln_k / sb)?;
    let abs_erf = pre * (T::one() - erf((ln_k / sb).abs()));
    let ([m0, _], shift) = weighted_moments(ln_k, beta)?;
    let oracle = m0 * shift.exp();
    if !general.finite() || !oracle.finite() {
        return Err(Error::numeric("normalization overflows for this K1 and beta"));
    }
    let agree = |v: T| (v - oracle).abs() <= T::lit(NORM_AGREEMENT) * oracle;
    Ok(ContinuousNorm {
        general,
        abs_erf,
        oracle,
        general_matches: agree(general),
        abs_erf_matches: agree(abs_erf),
    })
}

/// `(N(J)^2, N(J')^2) = (e^J, e^{J'})`.
pub fn discrete_norm<T: Real>(j: T, jp: T) -> Result<(T, T)> {
    for v in [j, jp] {
        if !(v >= T::zero()) || !v.finite() {
            return Err(Error::param("J and J' must be nonnegative and finite"));
        }
    }
    Ok((j.exp(), jp.exp()))
}

/// `sum_{n <= n_max} J^n / n!`.
pub fn truncated_exp_sum<T: Real>(j: T, n_max: usize) -> T {
    let mut term = T::one();
    let mut sum = T::one();
    for n in 1..=n_max {
        term *= j / T::nat(n);
        sum += term;
    }
    sum
}

/// Bound on `e^{-J} sum_{n > n_max} J^n / n!`; infinite when the geometric
/// majorant does not apply (`J >= n_max + 2`).
pub fn poisson_tail_bound<T: Real>(j: T, n_max: usize) -> T {
    let ratio = j / T::nat(n_max + 2);
    if ratio >= T::one() {
        return T::INFINITY;
    }
    if j == T::zero() {
        return T::zero();
    }
    let m = n_max + 1;
    let ln_term = -j + T::nat(m) * j.ln() - crate::numerics::ln_factorial::<T>(m);
    ln_term.exp() / (T::one() - ratio)
}

/// Smallest `n_max` whose tail bound is below `limit`.
pub fn required_n_max<T: Real>(j: T, limit: T) -> usize {
    let mut n = 0;
    while poisson_tail_bound(j, n) >= limit {
        n += 1;
    }
    n
}

/// `N(K1)^{-2} int_0^inf K1^{2E} e^{-beta E^2} E dE`.
pub fn action_continuous<T: Real>(k1: T, beta: T) -> Result<T> {
    check_k_beta(k1, beta)?;
    let ([m0, m1], _) = weighted_moments(k1.ln(), beta)?;
    Ok(m1 / m0)
}

/// `K1` with `action_continuous(K1, beta) = target`, by bisection in
/// `ln K1` over `[1e-8, 1e8]`.
pub fn invert_action<T: Real>(target: T, beta: T) -> Result<T> {
    if !(beta > T::zero()) || !beta.finite() {
        return Err(Error::param("beta must be positive and finite"));
    }
    if !target.finite() {
        return Err(Error::Inversion("target must be finite".into()));
    }
    let (mut lo, mut hi) = (T::lit(1e-8).ln(), T::lit(1e8).ln());
    let f = |s: T| action_continuous(s.exp(), beta);
    let probes = 16;
    let mut prev = f(lo)?;
    let f_lo = prev;
    for i in 1..=probes {
        let s = lo + (hi - lo) * T::nat(i) / T::nat(probes);
        let v = f(s)?;
        if !(v > prev) {
            return Err(Error::Inversion("action is not increasing on the bracket".into()));
        }
        prev = v;
    }
    let f_hi = prev;
    if !(f_lo < target && target < f_hi) {
        return Err(Error::Inversion(format!(
            "target {:e} outside the bracket values [{:e}, {:e}]",
            target.as_f64(),
            f_lo.as_f64(),
            f_hi.as_f64()
        )));
    }
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if hi - lo <= T::lit(4.0) * T::EPSILON * mid.abs().max(T::one()) {
            break;
        }
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(((lo + hi) * T::lit(0.5)).exp())
}

/// `sigma(K1) = e^{-(ln K1)^2 / beta} / (K1 sqrt(beta pi))`.
pub fn sigma<T: Real>(k1: T, beta: T) -> T {
    let l = k1.ln();
    (-(l * l) / beta).exp() / (k1 * (beta * T::pi()).sqrt())
}

/// `int_0^inf K1^{2E} sigma(K1) dK1`, integrated in `s = ln K1` on both sides
/// of the integrand's peak.
pub fn sigma_moment<T: Real>(energy: T, beta: T) -> Result<T> {
    if !(beta > T::zero()) || !energy.finite() {
        return Err(Error::param("sigma moment needs beta > 0 and finite E"));
    }
    let peak = beta * energy;
    let integ = Integrator::new(oracle_tol());
    let scale = Bound::Infinite { scale: beta.sqrt() };
    // integrand in s: K^{2E} sigma(K) dK = e^{2Es - s^2/beta} ds / sqrt(beta pi)
    let g = |s: T| (T::lit(2.0) * energy * s - s * s / beta).exp();
    let right = integ.integrate_real(|d| g(peak + d), T::zero(), scale)?;
    let left = integ.integrate_real(|d| g(peak - d), T::zero(), scale)?;
    Ok((right.value + left.value) / (beta * T::pi()).sqrt())
}

/// Orders used by [`resolution_of_identity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolutionOrders {
    pub laguerre: usize,
    pub energy_samples: usize,
}

impl Default for ResolutionOrders {
    fn default() -> Self {
        Self {
            laguerre: 60,
            energy_samples: 21,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionDefects<T> {
    /// `max_{n <= n_max} |int J^n dnu / n! - 1|`, also over the `l` moment.
    pub discrete: T,
    /// `max_E |e^{-beta E^2} int K^{2E} sigma dK - 1|`.
    pub continuous: T,
}

/// Coefficient-wise check of the resolution of the identity.
pub fn resolution_of_identity_check<T: Real>(
    n_max: usize,
    l: usize,
    e_max: T,
    beta: T,
    orders: ResolutionOrders,
) -> Result<ResolutionDefects<T>> {
    if !(beta > T::zero()) || !(e_max >= T::zero()) || !e_max.finite() {
        return Err(Error::param("need beta > 0 and finite E_max >= 0"));
    }
    let top = n_max.max(l);
    if 2 * orders.laguerre < top + 1 {
        return Err(Error::param(format!(
            "Gauss-Laguerre order {} is not exact for degree {top}",
            orders.laguerre
        )));
    }
    let rule = QuadratureRule::<T>::gauss_laguerre(orders.laguerre)?;
    let moment = |n: usize| -> T {
        let lnf = crate::numerics::ln_factorial::<T>(n);
        rule.nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &w)| w * (T::nat(n) * x.ln() - lnf).exp())
            .fold(T::zero(), |a, b| a + b)
    };
    let mut discrete = T::zero();
    for n in (0..=n_max).chain(std::iter::once(l)) {
        discrete = discrete.max((moment(n) - T::one()).abs());
    }
    let samples = orders.energy_samples.max(1);
    let mut continuous = T::zero();
    for i in 0..samples {
        let e = if samples == 1 {
            e_max
        } else {
            e_max * T::nat(i) / T::nat(samples - 1)
        };
        let m = sigma_moment(e, beta)?;
        continuous = continuous.max((m * (-beta * e * e).exp() - T::one()).abs());
    }
    Ok(ResolutionDefects { discrete, continuous })
}
