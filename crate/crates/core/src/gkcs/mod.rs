//! Gazeau-Klauder coherent states `|J, gamma; J', gamma'; l; K1, theta1>` for
//! the shifted Hamiltonian with discrete levels `omega_c n` and a continuous
//! part normalized in the energy variable `E`.

mod moments;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fock::{matrix_exponential, ModelParams, OperatorMatrix};
use crate::hamiltonians::tensor_decompose_h;
use crate::numerics::{gaussian_half_line, sqrt_power_over_factorial, QuadratureRule, Tolerance};
use crate::scalar::{cis, Real, C};

pub use moments::{
    action_continuous, continuous_norm, discrete_norm, invert_action, poisson_tail_bound, required_n_max,
    resolution_of_identity_check, sigma, sigma_moment, truncated_exp_sum, ContinuousNorm, ResolutionDefects,
    ResolutionOrders, NORM_AGREEMENT,
};

/// Largest truncation tail accepted when building a state.
pub const TAIL_LIMIT: f64 = 1e-12;

fn canonical_angle<T: Real>(a: T) -> T {
    let tau = T::two_pi();
    let r = a - tau * (a / tau).floor();
    if r >= tau {
        r - tau
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GkCsLabel<T> {
    pub j: T,
    pub gamma: T,
    pub jp: T,
    pub gammap: T,
    pub l: usize,
    pub k1: T,
    pub theta1: T,
    pub beta: T,
}

impl<T: Real> GkCsLabel<T> {
    pub fn validate(&self) -> Result<()> {
        let fin = [
            self.j,
            self.gamma,
            self.jp,
            self.gammap,
            self.k1,
            self.theta1,
            self.beta,
        ];
        if fin.iter().any(|v| !v.finite()) {
            return Err(Error::param("label entries must be finite"));
        }
        if self.j < T::zero() || self.jp < T::zero() {
            return Err(Error::param("J and J' must be nonnegative"));
        }
        if !(self.k1 > T::zero()) {
            return Err(Error::param("K1 must be positive"));
        }
        if !(self.beta > T::zero()) {
            return Err(Error::param("beta must be positive"));
        }
        Ok(())
    }

    /// Angles reduced to `[0, 2 pi)`.
    pub fn canonical(mut self) -> Self {
        self.gamma = canonical_angle(self.gamma);
        self.gammap = canonical_angle(self.gammap);
        self
    }

    pub fn with_l(mut self, l: usize) -> Self {
        self.l = l;
        self
    }
}

/// Discrete factor at fixed `l`: amplitudes of `|n, l>` for `n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCs<T> {
    pub l: usize,
    pub coeffs: Vec<C<T>>,
    /// `N(J) N(J')`.
    pub norm_const: T,
    /// Bound on the weight lost above `n_max`, relative to this `l`.
    pub tail_bound: T,
}

impl<T: Real> DiscreteCs<T> {
    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, c| a + c.norm_sqr())
    }

    pub fn to_vector(&self) -> DVector<C<T>> {
        DVector::from_column_slice(&self.coeffs)
    }
}

/// Continuous factor `E -> N(K1)^{-1} K1^E e^{-beta E^2 / 2} e^{-i theta1 E}`
/// together with a rule on `E >= 0` that resolves it.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousCs<T> {
    pub k1: T,
    pub theta1: T,
    pub beta: T,
    /// `N(K1)^2`.
    pub norm_sqr_const: T,
    pub rule: QuadratureRule<T>,
}

impl<T: Real> ContinuousCs<T> {
    pub fn new(k1: T, theta1: T, beta: T, rule: Option<QuadratureRule<T>>) -> Result<Self> {
        let norm = continuous_norm(k1, beta)?;
        let rule = match rule {
            Some(r) => r,
            None => QuadratureRule::half_line_gaussian(beta, k1.ln(), 12, 20)?,
        };
        Ok(Self {
            k1,
            theta1,
            beta,
            norm_sqr_const: norm.general,
            rule,
        })
    }

    pub fn amplitude(&self, e: T) -> C<T> {
        let mag = (e * self.k1.ln() - self.beta * e * e * T::lit(0.5)).exp() / self.norm_sqr_const.sqrt();
        cis(-self.theta1 * e) * mag
    }

    /// Amplitudes at the rule nodes.
    pub fn samples(&self) -> Vec<C<T>> {
        self.rule.nodes().iter().map(|&e| self.amplitude(e)).collect()
    }

    /// `int |amplitude|^2 dE` on the stored rule.
    pub fn norm_sqr(&self) -> T {
        self.rule.integrate(|e| self.amplitude(e).norm_sqr())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeCs<T> {
    pub label: GkCsLabel<T>,
    pub discrete: DiscreteCs<T>,
    pub continuous: ContinuousCs<T>,
}

impl<T: Real> CompositeCs<T> {
    /// Squared norm of this fixed-`l` component: discrete weight times the
    /// continuous norm.
    pub fn norm_sqr(&self) -> T {
        self.discrete.norm_sqr() * self.continuous.norm_sqr()
    }
}

pub fn build_cs<T: Real>(
    label: &GkCsLabel<T>,
    n_max: usize,
    rule: Option<QuadratureRule<T>>,
) -> Result<CompositeCs<T>> {
    label.validate()?;
    let limit = T::lit(TAIL_LIMIT);
    let tail = poisson_tail_bound(label.j, n_max);
    if !(tail < limit) {
        return Err(Error::Truncation {
            what: format!("discrete tail bound {:e} at n_max = {n_max}", tail.as_f64()),
            suggested: required_n_max(label.j, limit),
        });
    }
    let (nj, njp) = discrete_norm(label.j, label.jp)?;
    let norm_const = (nj * njp).sqrt();
    let l = label.l;
    let l_factor = cis(T::nat(l) * label.gammap) * (sqrt_power_over_factorial(label.jp, l) / norm_const);
    let coeffs = (0..=n_max)
        .map(|n| l_factor * cis(-T::nat(n) * label.gamma) * sqrt_power_over_factorial(label.j, n))
        .collect();
    Ok(CompositeCs {
        label: *label,
        discrete: DiscreteCs {
            l,
            coeffs,
            norm_const,
            tail_bound: tail,
        },
        continuous: ContinuousCs::new(label.k1, label.theta1, label.beta, rule)?,
    })
}

/// `int_0^inf conj(a(E)) b(E) dE` by adaptive quadrature.
pub fn continuous_overlap<T: Real>(a: &ContinuousCs<T>, b: &ContinuousCs<T>) -> Result<C<T>> {
    let beta = (a.beta + b.beta) * T::lit(0.5);
    let ln_k = (a.k1.ln() + b.k1.ln()) * T::lit(0.5);
    let dtheta = a.theta1 - b.theta1;
    let tol = Tolerance {
        abs: T::lit(1e-14).max(T::lit(16.0) * T::EPSILON),
        rel: T::lit(1e-12).max(T::lit(64.0) * T::EPSILON),
    };
    let est = gaussian_half_line(|e| cis(dtheta * e), beta, ln_k, tol)?;
    Ok(est.value / (a.norm_sqr_const * b.norm_sqr_const).sqrt())
}

/// Overlap of two fixed-`l` states; zero when the `l` values differ.
pub fn cs_overlap<T: Real>(a: &CompositeCs<T>, b: &CompositeCs<T>) -> Result<C<T>> {
    if a.discrete.l != b.discrete.l {
        return Ok(C::new(T::zero(), T::zero()));
    }
    let n = a.discrete.coeffs.len().min(b.discrete.coeffs.len());
    let disc = (0..n).fold(C::new(T::zero(), T::zero()), |acc, i| {
        acc + a.discrete.coeffs[i].conj() * b.discrete.coeffs[i]
    });
    Ok(disc * continuous_overlap(&a.continuous, &b.continuous)?)
}

/// `sum_l <a; l | b; l>` over `l <= l_max`, with `n_max` chosen from the
/// tail bound of each label.
pub fn family_overlap<T: Real>(a: &GkCsLabel<T>, b: &GkCsLabel<T>, l_max: usize) -> Result<C<T>> {
    let limit = T::lit(TAIL_LIMIT);
    let n_max = required_n_max(a.j.max(b.j), limit);
    let mut sum = C::new(T::zero(), T::zero());
    let mut cont = None;
    for l in 0..=l_max {
        let sa = build_cs(&a.with_l(l), n_max, None)?;
        let sb = build_cs(&b.with_l(l), n_max, None)?;
        let c = match cont {
            Some(c) => c,
            None => {
                let c = continuous_overlap(&sa.continuous, &sb.continuous)?;
                cont = Some(c);
                c
            }
        };
        let disc = sa
            .discrete
            .coeffs
            .iter()
            .zip(&sb.discrete.coeffs)
            .fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * *y);
        sum += disc * c;
    }
    Ok(sum)
}

/// `l_max` whose `J'` tail is below the build limit.
pub fn family_l_max<T: Real>(a: &GkCsLabel<T>, b: &GkCsLabel<T>) -> usize {
    required_n_max(a.jp.max(b.jp), T::lit(TAIL_LIMIT))
}

/// `sum_l <s; l|s; l>`, which the normalization makes 1.
pub fn family_norm<T: Real>(label: &GkCsLabel<T>) -> Result<T> {
    Ok(family_overlap(label, label, family_l_max(label, label))?.re)
}

/// Squared distance `|| |a> - |b> ||^2` between the `l`-summed families.
pub fn family_distance_sqr<T: Real>(a: &GkCsLabel<T>, b: &GkCsLabel<T>) -> Result<T> {
    let l_max = family_l_max(a, b);
    let aa = family_overlap(a, a, l_max)?.re;
    let bb = family_overlap(b, b, l_max)?.re;
    let ab = family_overlap(a, b, l_max)?.re;
    Ok((aa + bb - T::lit(2.0) * ab).max(T::zero()))
}

/// Label map of the time evolution: `gamma += omega_c t`, `theta1 += t`.
pub fn evolve<T: Real>(label: &GkCsLabel<T>, t: T, params: &ModelParams<T>) -> GkCsLabel<T> {
    GkCsLabel {
        gamma: canonical_angle(label.gamma + params.omega_c * t),
        theta1: label.theta1 + t,
        ..*label
    }
}

/// Result of comparing operator evolution with the label map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport<T> {
    /// `1 - |<operator-evolved | label-evolved>|^2` over the combined state.
    pub fidelity_deficit: T,
    /// Largest amplitude difference over discrete levels and rule nodes.
    pub max_difference: T,
}

/// Evolves the discrete factor with `e^{-i (H_D - omega_c / 2) t}` from the
/// Hamiltonian builder and the continuous factor with `e^{-iEt}`, and
/// compares with the state built from [`evolve`].
pub fn temporal_stability<T: Real>(
    label: &GkCsLabel<T>,
    t: T,
    params: &ModelParams<T>,
    n_max: usize,
) -> Result<StabilityReport<T>> {
    let s = build_cs(label, n_max, None)?;
    let moved = build_cs(&evolve(label, t, params), n_max, Some(s.continuous.rule.clone()))?;
    let dim = n_max + 1;
    let h = tensor_decompose_h(params, dim.max(2))?.h_d;
    let shift = OperatorMatrix::identity(h.space().clone()).scale_real(params.omega_c * T::lit(0.5));
    let gen = (&h - &shift).scale(C::new(T::zero(), -t));
    let u = matrix_exponential(&gen)?;
    let mut v = s.discrete.to_vector();
    if v.len() < u.dim() {
        v = v.resize_vertically(u.dim(), C::new(T::zero(), T::zero()));
    }
    let op_disc = u.apply(&v)?;
    let lab_disc = moved.discrete.to_vector();

    let nodes = s.continuous.rule.nodes();
    let op_cont: Vec<C<T>> = nodes
        .iter()
        .zip(s.continuous.samples())
        .map(|(&e, a)| a * cis(-e * t))
        .collect();
    let lab_cont = moved.continuous.samples();

    let mut max_difference = T::zero();
    let mut disc_inner = C::new(T::zero(), T::zero());
    let (mut disc_a, mut disc_b) = (T::zero(), T::zero());
    for i in 0..lab_disc.len() {
        let (x, y) = (op_disc[i], lab_disc[i]);
        max_difference = max_difference.max((x - y).norm_sqr().sqrt());
        disc_inner += x.conj() * y;
        disc_a += x.norm_sqr();
        disc_b += y.norm_sqr();
    }
    let mut cont_inner = C::new(T::zero(), T::zero());
    let (mut cont_a, mut cont_b) = (T::zero(), T::zero());
    for ((w, x), y) in s.continuous.rule.weights().iter().zip(&op_cont).zip(&lab_cont) {
        max_difference = max_difference.max((*x - *y).norm_sqr().sqrt());
        cont_inner += x.conj() * *y * *w;
        cont_a += x.norm_sqr() * *w;
        cont_b += y.norm_sqr() * *w;
    }
    let fidelity = (disc_inner * cont_inner).norm_sqr() / (disc_a * disc_b * cont_a * cont_b);
    Ok(StabilityReport {
        fidelity_deficit: (T::one() - fidelity).abs(),
        max_difference,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionReport<T> {
    pub value: T,
    pub expected: T,
    /// Bound on the contribution dropped by truncating the `n` and `l` sums.
    pub tail_bound: T,
}

impl<T: Real> ActionReport<T> {
    pub fn defect(&self) -> T {
        (self.value - self.expected).abs()
    }
}

/// `sum_l <s; l| H_D |s; l>` with `H_D = omega_c n`, summed over `n <= n_max`
/// and `l` up to the `J'` tail limit.
pub fn action_identity_discrete<T: Real>(
    label: &GkCsLabel<T>,
    params: &ModelParams<T>,
    n_max: usize,
) -> Result<ActionReport<T>> {
    params.validate()?;
    let l_max = required_n_max(label.jp, T::lit(TAIL_LIMIT));
    let mut value = T::zero();
    for l in 0..=l_max {
        let s = build_cs(&label.with_l(l), n_max, None)?;
        for (n, c) in s.discrete.coeffs.iter().enumerate() {
            value += params.omega_c * T::nat(n) * c.norm_sqr();
        }
    }
    let n_tail = if n_max == 0 {
        T::one()
    } else {
        poisson_tail_bound(label.j, n_max - 1)
    };
    let l_tail = poisson_tail_bound(label.jp, l_max);
    Ok(ActionReport {
        value,
        expected: params.omega_c * label.j,
        tail_bound: params.omega_c * label.j * (n_tail + l_tail),
    })
}
