//! Globally adaptive Gauss-Kronrod (7/15) integration of vector-valued
//! complex integrands.

use crate::error::{Error, Result};
use crate::scalar::{cabs, Real, C};

use super::quadrature::QuadratureRule;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

pub(crate) fn kronrod_nodes<T: Real>() -> ([T; 8], [T; 8]) {
    (XGK.map(T::lit), WGK.map(T::lit))
}

/// Absolute/relative error target. A result is accepted when
/// `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs: T, rel: T) -> Result<Self> {
        let ok = |v: T| v >= T::zero() && v.finite();
        if !ok(abs) || !ok(rel) || (abs == T::zero() && rel == T::zero()) {
            return Err(Error::param(
                "tolerance needs nonnegative abs and rel, at least one positive",
            ));
        }
        Ok(Self { abs, rel })
    }

    pub fn absolute(abs: T) -> Result<Self> {
        Self::new(abs, T::zero())
    }

    pub fn target(&self, magnitude: T) -> T {
        self.abs.max(self.rel * magnitude)
    }

    /// Tightens both components by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            abs: self.abs * factor,
            rel: self.rel * factor,
        }
    }
}

impl Default for Tolerance<f64> {
    fn default() -> Self {
        Self { abs: 1e-12, rel: 1e-12 }
    }
}

/// Upper end of the integration range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound<T> {
    Finite(T),
    /// `+inf`; `scale` is the length over which the integrand decays and sets
    /// the map `x = a + scale * t / (1 - t)`.
    Infinite {
        scale: T,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Domain<T> {
    Direct,
    Mapped { origin: T, scale: T },
}

impl<T: Real> Domain<T> {
    /// Physical abscissa and Jacobian for the panel coordinate `t`.
    #[inline]
    pub(crate) fn map(&self, t: T) -> (T, T) {
        match *self {
            Domain::Direct => (t, T::one()),
            Domain::Mapped { origin, scale } => {
                let s = T::one() - t;
                (origin + scale * t / s, scale / (s * s))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Panel<T> {
    pub(crate) a: T,
    pub(crate) b: T,
    pub(crate) domain: Domain<T>,
    value: Vec<C<T>>,
    error: T,
    /// Rounding floor `50 eps int |f|` of the error estimate.
    floor: T,
    splittable: bool,
}

type VecEstimate<T> = Estimate<Vec<C<T>>, T>;

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<V, T> {
    pub value: V,
    pub error: T,
    pub panels: usize,
}

#[derive(Debug, Clone)]
pub struct Integrator<T> {
    pub tol: Tolerance<T>,
    pub max_panels: usize,
}

impl<T: Real> Integrator<T> {
    pub fn new(tol: Tolerance<T>) -> Self {
        Self { tol, max_panels: 2000 }
    }

    pub fn with_budget(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels.max(1);
        self
    }

    /// Integrates a scalar complex integrand over `[a, b]` or `[a, inf)`.
    pub fn integrate<F>(&self, mut f: F, a: T, b: Bound<T>) -> Result<Estimate<C<T>, T>>
    where
        F: FnMut(T) -> C<T>,
    {
        let est = self.integrate_vec(1, |x, out| out[0] = f(x), &[a], b)?;
        Ok(Estimate {
            value: est.value[0],
            error: est.error,
            panels: est.panels,
        })
    }

    /// Real-valued convenience wrapper.
    pub fn integrate_real<F>(&self, mut f: F, a: T, b: Bound<T>) -> Result<Estimate<T, T>>
    where
        F: FnMut(T) -> T,
    {
        let est = self.integrate(|x| C::new(f(x), T::zero()), a, b)?;
        Ok(Estimate {
            value: est.value.re,
            error: est.error,
            panels: est.panels,
        })
    }

    /// Integrates `width` components at once. `breaks` holds the lower limit
    /// followed by optional interior points, strictly increasing; the
    /// integrand writes its values into the output slice. Acceptance uses
    /// the largest component magnitude for the relative part.
    pub fn integrate_vec<F>(&self, width: usize, f: F, breaks: &[T], upper: Bound<T>) -> Result<Estimate<Vec<C<T>>, T>>
    where
        F: FnMut(T, &mut [C<T>]),
    {
        let (panels, est) = self.run(width, f, breaks, upper)?;
        drop(panels);
        Ok(est)
    }

    /// As [`Self::integrate_vec`] for a real integrand, and freezes the final
    /// partition into a reusable rule.
    pub fn adaptive_rule<F>(
        &self,
        mut f: F,
        breaks: &[T],
        upper: Bound<T>,
    ) -> Result<(QuadratureRule<T>, Estimate<T, T>)>
    where
        F: FnMut(T) -> T,
    {
        let (panels, est) = self.run(1, |x, out: &mut [C<T>]| out[0] = C::new(f(x), T::zero()), breaks, upper)?;
        Ok((
            QuadratureRule::from_panels(&panels),
            Estimate {
                value: est.value[0].re,
                error: est.error,
                panels: est.panels,
            },
        ))
    }

    fn run<F>(&self, width: usize, mut f: F, breaks: &[T], upper: Bound<T>) -> Result<(Vec<Panel<T>>, VecEstimate<T>)>
    where
        F: FnMut(T, &mut [C<T>]),
    {
        if width == 0 {
            return Err(Error::param("integrand width must be positive"));
        }
        let Some(&first) = breaks.first() else {
            return Err(Error::param("integration needs a lower limit"));
        };
        if breaks.iter().any(|b| !b.finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("break points must be finite and strictly increasing"));
        }
        let last = *breaks.last().expect("nonempty");
        let mut segments: Vec<(T, T, Domain<T>)> = breaks.windows(2).map(|w| (w[0], w[1], Domain::Direct)).collect();
        match upper {
            Bound::Finite(b) => {
                if !b.finite() {
                    return Err(Error::param("finite upper bound expected"));
                }
                if b < last || (b == last && breaks.len() > 1) {
                    return Err(Error::param("upper bound below break points"));
                }
                if b == first {
                    return Ok((
                        Vec::new(),
                        Estimate {
                            value: vec![C::new(T::zero(), T::zero()); width],
                            error: T::zero(),
                            panels: 0,
                        },
                    ));
                }
                segments.push((last, b, Domain::Direct));
            }
            Bound::Infinite { scale } => {
                if !(scale > T::zero()) || !scale.finite() {
                    return Err(Error::param("decay scale must be positive and finite"));
                }
                segments.push((T::zero(), T::one(), Domain::Mapped { origin: last, scale }));
            }
        }

        let mut work = Workspace::new(width);
        let mut panels: Vec<Panel<T>> = Vec::with_capacity(64);
        for (a, b, domain) in segments {
            panels.push(work.evaluate(&mut f, a, b, domain)?);
        }

        loop {
            let (value, error, floor) = totals(&panels, width);
            let magnitude = value.iter().fold(T::zero(), |m, z| m.max(cabs(*z)));
            // a tolerance below the rounding floor cannot be met by splitting
            let target = self.tol.target(magnitude).max(floor);
            if error <= target {
                return Ok((
                    panels.clone(),
                    Estimate {
                        value,
                        error,
                        panels: panels.len(),
                    },
                ));
            }
            let worst = panels
                .iter()
                .enumerate()
                .filter(|(_, p)| p.splittable)
                .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).expect("finite errors"))
                .map(|(i, _)| i);
            let Some(i) = worst.filter(|_| panels.len() < self.max_panels) else {
                let best = value[0];
                return Err(Error::Convergence {
                    re: best.re.as_f64(),
                    im: best.im.as_f64(),
                    error: error.as_f64(),
                    panels: panels.len(),
                });
            };
            let p = panels.swap_remove(i);
            let mid = (p.a + p.b) * T::lit(0.5);
            let left = work.evaluate(&mut f, p.a, mid, p.domain)?;
            let right = work.evaluate(&mut f, mid, p.b, p.domain)?;
            panels.push(left);
            panels.push(right);
        }
    }
}

fn totals<T: Real>(panels: &[Panel<T>], width: usize) -> (Vec<C<T>>, T, T) {
    let mut value = vec![C::new(T::zero(), T::zero()); width];
    let mut error = T::zero();
    let mut floor = T::zero();
    for p in panels {
        for (v, pv) in value.iter_mut().zip(&p.value) {
            *v += *pv;
        }
        error += p.error;
        floor += p.floor;
    }
    (value, error, floor)
}

struct Workspace<T> {
    width: usize,
    fc: Vec<C<T>>,
    f1: Vec<Vec<C<T>>>,
    f2: Vec<Vec<C<T>>>,
}

impl<T: Real> Workspace<T> {
    fn new(width: usize) -> Self {
        let zero = C::new(T::zero(), T::zero());
        Self {
            width,
            fc: vec![zero; width],
            f1: vec![vec![zero; width]; 7],
            f2: vec![vec![zero; width]; 7],
        }
    }

    fn sample<F: FnMut(T, &mut [C<T>])>(f: &mut F, domain: Domain<T>, t: T, out: &mut [C<T>]) -> Result<()> {
        let (x, jac) = domain.map(t);
        if jac == T::zero() || !jac.finite() {
            out.fill(C::new(T::zero(), T::zero()));
            return Ok(());
        }
        f(x, out);
        for v in out.iter_mut() {
            if !v.re.finite() || !v.im.finite() {
                return Err(Error::numeric(format!("integrand not finite at x = {:e}", x.as_f64())));
            }
            *v *= jac;
        }
        Ok(())
    }

    /// One G7/K15 panel with the QUADPACK error heuristic.
    fn evaluate<F: FnMut(T, &mut [C<T>])>(&mut self, f: &mut F, a: T, b: T, domain: Domain<T>) -> Result<Panel<T>> {
        let half = (b - a) * T::lit(0.5);
        let centre = a + half;
        let (xgk, wgk) = kronrod_nodes::<T>();
        let wg = WG.map(T::lit);
        Self::sample(f, domain, centre, &mut self.fc)?;
        for j in 0..7 {
            let dx = half * xgk[j];
            Self::sample(f, domain, centre - dx, &mut self.f1[j])?;
            Self::sample(f, domain, centre + dx, &mut self.f2[j])?;
        }

        let mut value = Vec::with_capacity(self.width);
        let mut error = T::zero();
        let mut floor = T::zero();
        let eps50 = T::lit(50.0) * T::EPSILON;
        for k in 0..self.width {
            let fc = self.fc[k];
            let mut kron = fc * wgk[7];
            let mut gauss = fc * wg[3];
            let mut resabs = cabs(fc) * wgk[7];
            for j in 0..7 {
                let (a1, a2) = (self.f1[j][k], self.f2[j][k]);
                kron += (a1 + a2) * wgk[j];
                resabs += (cabs(a1) + cabs(a2)) * wgk[j];
                if j % 2 == 1 {
                    gauss += (a1 + a2) * wg[j / 2];
                }
            }
            let mean = kron * T::lit(0.5);
            let mut resasc = cabs(fc - mean) * wgk[7];
            for j in 0..7 {
                resasc += (cabs(self.f1[j][k] - mean) + cabs(self.f2[j][k] - mean)) * wgk[j];
            }
            let h = half.abs();
            let (resabs, resasc) = (resabs * h, resasc * h);
            let mut err = cabs(kron - gauss) * h;
            if resasc != T::zero() && err != T::zero() {
                let ratio = T::lit(200.0) * err / resasc;
                err = resasc * T::one().min(ratio * ratio.sqrt());
            }
            if resabs > T::MIN_POSITIVE / eps50 {
                err = err.max(eps50 * resabs);
            }
            error = error.max(err);
            floor = floor.max(eps50 * resabs);
            value.push(kron * half);
        }
        let width = b - a;
        let splittable = width > T::lit(100.0) * T::EPSILON * (a.abs().max(b.abs()).max(T::one()));
        Ok(Panel {
            a,
            b,
            domain,
            value,
            error,
            floor,
            splittable: splittable && error > floor,
        })
    }
}

/// `int_0^inf g(E) e^{-beta E^2 + 2 E ln K} dE`.
///
/// With `u = sqrt(beta) E` and `c = ln K / sqrt(beta)` the weight becomes
/// `e^{c^2} e^{-(u - c)^2}`, so the adaptive panels see a unit Gaussian
/// whose peak is split out as a break point when it lies inside the range.
pub fn gaussian_half_line<T, G>(mut g: G, beta: T, ln_k: T, tol: Tolerance<T>) -> Result<Estimate<C<T>, T>>
where
    T: Real,
    G: FnMut(T) -> C<T>,
{
    if !(beta > T::zero()) || !beta.finite() || !ln_k.finite() {
        return Err(Error::param(
            "Gaussian half-line integral needs beta > 0 and finite ln K",
        ));
    }
    let sb = beta.sqrt();
    let c = ln_k / sb;
    let prefactor = (c * c).exp() / sb;
    if !prefactor.finite() {
        return Err(Error::numeric("Gaussian prefactor overflows; |ln K| too large"));
    }
    let inner = Tolerance {
        abs: tol.abs / prefactor,
        rel: tol.rel,
    };
    let breaks: Vec<T> = if c > T::lit(0.5) {
        vec![T::zero(), c]
    } else {
        vec![T::zero()]
    };
    let est = Integrator::new(inner).integrate_vec(
        1,
        |u, out| {
            let d = u - c;
            out[0] = g(u / sb) * (-(d * d)).exp();
        },
        &breaks,
        Bound::Infinite { scale: T::one() },
    )?;
    let value = est.value[0];
    Ok(Estimate {
        value: value * prefactor,
        error: est.error * prefactor,
        panels: est.panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::erf;
    use crate::scalar::cis;
    use std::f64::consts::{E, PI, TAU};

    fn tight() -> Integrator<f64> {
        Integrator::new(Tolerance::new(1e-13, 1e-13).unwrap())
    }

    #[test]
    fn kronrod_constants_integrate_polynomials() {
        // K15 is exact to degree 22, the embedded G7 to degree 13
        let (x, w) = kronrod_nodes::<f64>();
        for k in 0..=22i32 {
            let mut kron = w[7] * 0f64.powi(k);
            let mut gauss = WG[3] * 0f64.powi(k);
            for j in 0..7 {
                let s = x[j].powi(k) + (-x[j]).powi(k);
                kron += w[j] * s;
                if j % 2 == 1 {
                    gauss += WG[j / 2] * s;
                }
            }
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / f64::from(k + 1) };
            assert!((kron - want).abs() < 1e-15, "K15 degree {k}");
            if k <= 13 {
                assert!((gauss - want).abs() < 1e-15, "G7 degree {k}");
            }
        }
    }

    #[test]
    fn gaussian_half_integral() {
        let est = tight()
            .integrate_real(|e| (-e * e).exp(), 0.0, Bound::Infinite { scale: 1.0 })
            .unwrap();
        assert!((est.value - PI.sqrt() / 2.0).abs() < 1e-10);
        assert!(est.error <= 1e-12);
    }

    #[test]
    fn fourier_orthogonality() {
        for n in 0..5 {
            for m in 0..5 {
                let est = tight()
                    .integrate(|g| cis(f64::from(n - m) * g) / TAU, 0.0, Bound::Finite(TAU))
                    .unwrap();
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((est.value.re - want).abs() < 1e-12 && est.value.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn completed_square() {
        let want = 0.5 * PI.sqrt() * E * (1.0 + erf(1.0));
        let est = tight()
            .integrate_real(|e| (2.0 * e - e * e).exp(), 0.0, Bound::Infinite { scale: 1.0 })
            .unwrap();
        assert!((est.value - want).abs() < 1e-10);
        let via = gaussian_half_line(|_| C::new(1.0, 0.0), 1.0, 1.0, Tolerance::default()).unwrap();
        assert!((via.value.re - want).abs() < 1e-10);
    }

    #[test]
    fn reproduces_laguerre_moments() {
        let rule = QuadratureRule::<f64>::gauss_laguerre(30).unwrap();
        for k in 0..=12 {
            let exact = rule.integrate(|x| x.powi(k));
            let est = tight()
                .integrate_real(|x| x.powi(k) * (-x).exp(), 0.0, Bound::Infinite { scale: 4.0 })
                .unwrap();
            let tol = 1e-13 * exact.abs() + 1e-12 * exact.abs() + est.error;
            assert!((est.value - exact).abs() <= tol, "k={k}");
        }
    }

    #[test]
    fn vector_integrand_shares_partition() {
        let est = tight()
            .integrate_vec(
                3,
                |x, out| {
                    out[0] = C::new(1.0, 0.0);
                    out[1] = C::new(x, 0.0);
                    out[2] = C::new(0.0, x * x);
                },
                &[0.0, 0.5],
                Bound::Finite(2.0),
            )
            .unwrap();
        assert!((est.value[0].re - 2.0).abs() < 1e-14);
        assert!((est.value[1].re - 2.0).abs() < 1e-14);
        assert!((est.value[2].im - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let err = Integrator::new(Tolerance::absolute(1e-15).unwrap())
            .with_budget(3)
            .integrate_real(|x: f64| (50.0 * x).sin().abs(), 0.0, Bound::Finite(10.0))
            .unwrap_err();
        match err {
            Error::Convergence { re, panels, .. } => {
                assert!(panels <= 4);
                assert!(re.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_numeric_error() {
        let err = tight()
            .integrate_real(|_| f64::NAN, 0.0, Bound::Finite(1.0))
            .unwrap_err();
        assert!(matches!(err, Error::Numeric(_)));
    }

    #[test]
    fn frozen_partition_reuses_nodes() {
        let (rule, est) = tight()
            .adaptive_rule(|e| (-e * e).exp(), &[0.0], Bound::Infinite { scale: 1.0 })
            .unwrap();
        assert!(rule.weights().iter().all(|&w| w >= 0.0));
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        let again = rule.integrate(|e| (-e * e).exp());
        assert!((again - est.value).abs() < 1e-14);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 1e-3).is_err());
        assert!(Tolerance::new(0.0, 1e-3).is_ok());
    }

    #[test]
    fn gaussian_half_line_moments() {
        for (beta, ln_k) in [(1.0f64, 0.0f64), (0.5, 2.0), (2.0, -1.5), (1.0, 3.0)] {
            let sb: f64 = beta.sqrt();
            let c = ln_k / sb;
            let m0 = 0.5 * (PI / beta).sqrt() * (c * c).exp() * crate::numerics::erfc(-c).unwrap();
            let est =
                gaussian_half_line(|_| C::new(1.0, 0.0), beta, ln_k, Tolerance::new(0.0, 1e-12).unwrap()).unwrap();
            assert!(((est.value.re - m0) / m0).abs() < 1e-11, "beta={beta} lnK={ln_k}");
            // first moment: (1 + 2 lnK m0) / (2 beta)
            let m1 = (1.0 + 2.0 * ln_k * m0) / (2.0 * beta);
            let est = gaussian_half_line(|e| C::new(e, 0.0), beta, ln_k, Tolerance::new(0.0, 1e-12).unwrap()).unwrap();
            assert!(((est.value.re - m1) / m1).abs() < 1e-10, "m1 beta={beta} lnK={ln_k}");
        }
    }
}
