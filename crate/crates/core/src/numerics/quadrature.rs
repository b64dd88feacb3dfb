//! Fixed quadrature rules.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

use super::adaptive::{kronrod_nodes, Panel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Weight `e^{-x}` on `(0, inf)`; weights already include it.
    GaussLaguerre,
    /// Plain rule on `[-1, 1]`.
    GaussLegendre,
    /// Composite Gauss-Legendre panels covering the bulk of
    /// `e^{-beta E^2 + 2 E ln K}` on `[0, inf)`; plain `dE` weights.
    HalfLineGaussian,
    /// Kronrod nodes of a frozen adaptive partition.
    AdaptivePanel,
    /// Equispaced rule on one period, exact for trigonometric polynomials of
    /// degree below the order.
    PeriodicTrapezoid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    kind: RuleKind,
    nodes: Vec<T>,
    weights: Vec<T>,
    order: usize,
}

impl<T: Real> QuadratureRule<T> {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    pub fn integrate_complex<F: FnMut(T) -> C<T>>(&self, mut f: F) -> C<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(C::new(T::zero(), T::zero()), |acc, (&x, &w)| acc + f(x) * w)
    }

    /// Gauss-Laguerre rule with `order` nodes, `1 <= order <= 200`.
    ///
    /// Nodes come from the eigenvalues of the Jacobi matrix and are then
    /// polished by Newton steps on `L_n`; weights use
    /// `w = x / ((n+1) L_{n+1}(x))^2` with the recurrence rescaled in log space.
    /// For orders above ~180 the weights of the last nodes fall below the
    /// smallest subnormal and flush to zero.
    pub fn gauss_laguerre(order: usize) -> Result<Self> {
        if !(1..=200).contains(&order) {
            return Err(Error::param(format!("Gauss-Laguerre order {order} outside 1..=200")));
        }
        let n = order;
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                T::nat(2 * i + 1)
            } else if i + 1 == j || j + 1 == i {
                T::nat(i.max(j))
            } else {
                T::zero()
            }
        });
        let mut nodes: Vec<T> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..4 {
                let (ln, lnm1, _) = laguerre_scaled(n, *x);
                // x L_n' = n (L_n - L_{n-1})
                let step = *x * ln / (T::nat(n) * (ln - lnm1));
                let next = *x - step;
                if next <= T::zero() {
                    break;
                }
                *x = next;
                if step.abs() <= T::EPSILON * *x {
                    break;
                }
            }
            let (lnp1, _, log_scale) = laguerre_scaled(n + 1, *x);
            let ln_w = x.ln() - T::lit(2.0) * (T::nat(n + 1).ln() + lnp1.abs().ln() + log_scale);
            weights.push(ln_w.exp());
        }
        Ok(Self {
            kind: RuleKind::GaussLaguerre,
            nodes,
            weights,
            order,
        })
    }

    /// Gauss-Legendre rule on `[-1, 1]` by Newton iteration from Chebyshev
    /// guesses.
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        if order == 0 || order > 512 {
            return Err(Error::param(format!("Gauss-Legendre order {order} outside 1..=512")));
        }
        let n = order;
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n.div_ceil(2) {
            let mut x = (T::pi() * (T::nat(i) + T::lit(0.75)) / (T::nat(n) + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= T::lit(4.0) * T::EPSILON {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != T::zero() { d } else { dp };
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Ok(Self {
            kind: RuleKind::GaussLegendre,
            nodes,
            weights,
            order,
        })
    }

    /// `order` equispaced nodes `k * period / order` on `[0, period)`.
    pub fn periodic_trapezoid(order: usize, period: T) -> Result<Self> {
        if order == 0 {
            return Err(Error::param("periodic rule needs at least one node"));
        }
        if !(period > T::zero()) || !period.finite() {
            return Err(Error::param("period must be positive and finite"));
        }
        let h = period / T::nat(order);
        Ok(Self {
            kind: RuleKind::PeriodicTrapezoid,
            nodes: (0..order).map(|k| T::nat(k) * h).collect(),
            weights: vec![h; order],
            order,
        })
    }

    /// Composite Gauss-Legendre rule for integrands dominated by
    /// `e^{-beta E^2 + 2 E ln K}` on `[0, inf)`.
    ///
    /// Works in `u = sqrt(beta) E`, where the weight is a unit Gaussian
    /// centred at `c = ln K / sqrt(beta)`, and covers the region where the
    /// weight exceeds `e^{-81}` of its maximum on the half line.
    pub fn half_line_gaussian(beta: T, ln_k: T, panels: usize, order: usize) -> Result<Self> {
        if !(beta > T::zero()) || !beta.finite() || !ln_k.finite() {
            return Err(Error::param("half-line Gaussian rule needs beta > 0 and finite ln K"));
        }
        if panels == 0 {
            return Err(Error::param("half-line Gaussian rule needs at least one panel"));
        }
        let sb = beta.sqrt();
        let c = ln_k / sb;
        let span = T::lit(9.0);
        let (lo, hi) = if c >= T::zero() {
            ((c - span).max(T::zero()), c + span)
        } else {
            // weight ~ exp(-u^2 - 2|c| u) on u >= 0
            let a = -c;
            (T::zero(), -a + (a * a + span * span).sqrt())
        };
        let base = Self::gauss_legendre(order)?;
        let width = (hi - lo) / T::nat(panels);
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = lo + T::nat(p) * width;
            let half = width * T::lit(0.5);
            let mid = a + half;
            for (&t, &w) in base.nodes.iter().zip(&base.weights) {
                nodes.push((mid + half * t) / sb);
                weights.push(w * half / sb);
            }
        }
        Ok(Self {
            kind: RuleKind::HalfLineGaussian,
            nodes,
            weights,
            order,
        })
    }

    /// Freezes an adaptive partition into a reusable rule on the union of the
    /// panels (15 Kronrod nodes per panel). Panels on a mapped half-line
    /// carry their Jacobian in the weights.
    pub(crate) fn from_panels(panels: &[Panel<T>]) -> Self {
        let (xk, wk) = kronrod_nodes::<T>();
        let mut pairs: Vec<(T, T)> = Vec::with_capacity(panels.len() * 15);
        for p in panels {
            let half = (p.b - p.a) * T::lit(0.5);
            let mid = p.a + half;
            let mut push = |t: T, w: T| {
                let (x, jac) = p.domain.map(t);
                pairs.push((x, w * half * jac));
            };
            push(mid, wk[7]);
            for j in 0..7 {
                push(mid - half * xk[j], wk[j]);
                push(mid + half * xk[j], wk[j]);
            }
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
        let order = pairs.len();
        let (nodes, weights) = pairs.into_iter().unzip();
        Self {
            kind: RuleKind::AdaptivePanel,
            nodes,
            weights,
            order,
        }
    }
}

/// Laguerre `L_n(x)` and `L_{n-1}(x)` divided by `e^{log_scale}`.
fn laguerre_scaled<T: Real>(n: usize, x: T) -> (T, T, T) {
    let big = T::lit(1e100);
    let mut prev = T::zero();
    let mut cur = T::one();
    let mut log_scale = T::zero();
    for k in 0..n {
        let next = ((T::nat(2 * k + 1) - x) * cur - T::nat(k) * prev) / T::nat(k + 1);
        prev = cur;
        cur = next;
        if cur.abs() > big {
            cur /= big;
            prev /= big;
            log_scale += big.ln();
        }
    }
    (cur, prev, log_scale)
}

/// Legendre `P_n(x)` and its derivative.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kk = T::nat(k);
        let p2 = ((T::nat(2 * k - 1)) * x * p1 - (kk - T::one()) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    let d = T::nat(n) * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}
