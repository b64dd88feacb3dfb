//! Wigner transform of Hermite dyads `|Phi_n><Phi_l|` onto phase space,
//! with `U(x, y) = e^{-i(xQ + yP)}` acting as
//! `(U Phi)(xi) = e^{-ix(xi - y/2)} Phi(xi - y)`.

mod grid;
mod hermite;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, OperatorMatrix};
use crate::numerics::{Bound, Integrator};
use crate::scalar::{cis, Real, C};

pub use grid::{GridSpec, PhaseSpaceGrid};
pub use hermite::{hermite_functions, HermiteBasisFn};

/// Largest basis index accepted by the dyad routines.
pub const MAX_INDEX: usize = 20;

/// Drift of a Gram diagonal beyond which the grid is reported as too coarse.
pub const GRAM_DRIFT_LIMIT: f64 = 1e-3;

fn check_index(n: usize) -> Result<()> {
    if n > MAX_INDEX {
        return Err(Error::param(format!("basis index {n} exceeds {MAX_INDEX}")));
    }
    Ok(())
}

fn check_coverage<T: Real>(spec: &GridSpec<T>, dim: usize) -> Result<()> {
    spec.validate()?;
    if !spec.covers(dim) {
        return Err(Error::Resolution(format!(
            "grid half-range must be at least {:.3} for indices below {dim}",
            GridSpec::<T>::required_half_range(dim).as_f64()
        )));
    }
    Ok(())
}

/// `(1/sqrt(2 pi)) int e^{ix(xi - y/2)} Phi_l(xi - y) Phi_n(xi) dxi` for every
/// `(n, l)` in `pairs`, at a single point.
fn dyad_values<T: Real>(pairs: &[(usize, usize)], x: T, y: T, integ: &Integrator<T>) -> Result<Vec<C<T>>> {
    let dim = pairs.iter().map(|&(n, l)| n.max(l)).max().unwrap_or(0) + 1;
    let half = T::nat(2 * dim + 1).sqrt() + T::lit(7.0);
    let centre = y * T::lit(0.5);
    let segments = 8;
    let step = T::lit(2.0) * half / T::nat(segments);
    let breaks: Vec<T> = (0..segments).map(|s| centre - half + T::nat(s) * step).collect();
    let mut at_xi = vec![T::zero(); dim];
    let mut shifted = vec![T::zero(); dim];
    let est = integ.integrate_vec(
        pairs.len(),
        |xi, out| {
            hermite_functions(xi, &mut at_xi);
            hermite_functions(xi - y, &mut shifted);
            let phase = cis(x * (xi - centre));
            for (o, &(n, l)) in out.iter_mut().zip(pairs) {
                *o = phase * (at_xi[n] * shifted[l]);
            }
        },
        &breaks,
        Bound::Finite(centre + half),
    );
    let norm = T::one() / T::two_pi().sqrt();
    match est {
        Ok(e) => Ok(e.value.into_iter().map(|v| v * norm).collect()),
        Err(Error::Convergence { error, panels, .. }) => Err(Error::numeric(format!(
            "inner integral at (x, y) = ({:e}, {:e}) did not converge: error {error:e} after {panels} panels",
            x.as_f64(),
            y.as_f64()
        ))),
        Err(e) => Err(e),
    }
}

/// Wigner transform of one dyad at one phase-space point.
pub fn wigner_point<T: Real>(n: usize, l: usize, x: T, y: T, spec: &GridSpec<T>) -> Result<C<T>> {
    check_index(n)?;
    check_index(l)?;
    Ok(dyad_values(&[(n, l)], x, y, &Integrator::new(spec.tol))?[0])
}

/// Samples of several dyads on a shared grid. Layout `data[p * len + s]` for
/// grid point `p` and pair slot `s`.
#[derive(Debug, Clone)]
pub struct DyadTable<T> {
    spec: GridSpec<T>,
    pairs: Vec<(usize, usize)>,
    data: Vec<C<T>>,
}

impl<T: Real> DyadTable<T> {
    pub fn compute(pairs: &[(usize, usize)], spec: &GridSpec<T>) -> Result<Self> {
        for &(n, l) in pairs {
            check_index(n)?;
            check_index(l)?;
        }
        let dim = pairs.iter().map(|&(n, l)| n.max(l) + 1).max().unwrap_or(1);
        check_coverage(spec, dim)?;
        let integ = Integrator::new(spec.tol);
        let data = if pairs.is_empty() {
            Vec::new()
        } else {
            let chunks: Vec<Vec<C<T>>> = (0..spec.len())
                .into_par_iter()
                .map(|p| {
                    let (x, y) = spec.point(p);
                    dyad_values(pairs, x, y, &integ)
                })
                .collect::<Result<_>>()?;
            chunks.into_iter().flatten().collect()
        };
        Ok(Self {
            spec: *spec,
            pairs: pairs.to_vec(),
            data,
        })
    }

    /// Every `(m, k)` with `m, k < dim`, row-major.
    pub fn full(dim: usize, spec: &GridSpec<T>) -> Result<Self> {
        let pairs: Vec<_> = (0..dim).flat_map(|m| (0..dim).map(move |k| (m, k))).collect();
        Self::compute(&pairs, spec)
    }

    pub fn spec(&self) -> &GridSpec<T> {
        &self.spec
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn slot(&self, n: usize, l: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (n, l))
    }

    pub fn dyad(&self, n: usize, l: usize) -> Option<PhaseSpaceGrid<T>> {
        let s = self.slot(n, l)?;
        let w = self.pairs.len();
        let values = (0..self.spec.len()).map(|p| self.data[p * w + s]).collect();
        Some(PhaseSpaceGrid::new(self.spec, values).expect("table matches its grid"))
    }

    /// Grid inner products between all stored dyads.
    pub fn gram(&self) -> DMatrix<C<T>> {
        let w = self.pairs.len();
        let mut g = DMatrix::zeros(w, w);
        for i in 0..w {
            for j in i..w {
                let d = &self.data;
                let v = grid::trapezoid(&self.spec, |p| d[p * w + i].conj() * d[p * w + j]);
                g[(i, j)] = v;
                g[(j, i)] = v.conj();
            }
        }
        g
    }

    /// `<Phi_n| W^{-1} f |Phi_l> = int conj(W_{nl}) f dx dy` for every stored
    /// pair; pairs absent from the table give zero.
    pub fn inverse(&self, f: &PhaseSpaceGrid<T>, dim: usize) -> Result<OperatorMatrix<T>> {
        if *f.spec() != self.spec {
            return Err(Error::param("sample grid differs from the table grid"));
        }
        let w = self.pairs.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (s, &(n, l)) in self.pairs.iter().enumerate() {
            if n < dim && l < dim {
                let (d, v) = (&self.data, f.values());
                m[(n, l)] = grid::trapezoid(&self.spec, |p| d[p * w + s].conj() * v[p]);
            }
        }
        OperatorMatrix::new(FockSpace::new(dim.max(2))?, resize(m, dim.max(2)))
    }
}

fn resize<T: Real>(m: DMatrix<C<T>>, dim: usize) -> DMatrix<C<T>> {
    if m.nrows() == dim {
        m
    } else {
        m.resize(dim, dim, C::new(T::zero(), T::zero()))
    }
}

/// Samples of the Wigner transform of `|Phi_n><Phi_l|`.
pub fn wigner_dyad<T: Real>(n: usize, l: usize, spec: &GridSpec<T>) -> Result<PhaseSpaceGrid<T>> {
    let table = DyadTable::compute(&[(n, l)], spec)?;
    Ok(table.dyad(n, l).expect("pair present"))
}

/// Matrix of `<Phi_m|U(x, y)|Phi_k>` for `m, k < dim`, from the kernel of `U`.
pub fn weyl_elements<T: Real>(x: T, y: T, dim: usize, spec: &GridSpec<T>) -> Result<DMatrix<C<T>>> {
    check_index(dim.saturating_sub(1))?;
    let pairs: Vec<_> = (0..dim).flat_map(|m| (0..dim).map(move |k| (m, k))).collect();
    let vals = dyad_values(&pairs, x, y, &Integrator::new(spec.tol))?;
    let s = T::two_pi().sqrt();
    Ok(DMatrix::from_row_iterator(
        dim,
        dim,
        vals.into_iter().map(|v| v.conj() * s),
    ))
}

/// Gram matrix of the transformed dyads, which should be the identity.
pub fn hs_gram<T: Real>(pairs: &[(usize, usize)], spec: &GridSpec<T>) -> Result<DMatrix<C<T>>> {
    for (i, p) in pairs.iter().enumerate() {
        if pairs[..i].contains(p) {
            return Err(Error::param(format!("pair {p:?} listed twice")));
        }
    }
    if pairs.is_empty() {
        return Ok(DMatrix::zeros(0, 0));
    }
    let g = DyadTable::compute(pairs, spec)?.gram();
    let limit = T::lit(GRAM_DRIFT_LIMIT);
    for (i, p) in pairs.iter().enumerate() {
        let drift = (g[(i, i)].re - T::one()).abs();
        if drift > limit {
            return Err(Error::Resolution(format!(
                "norm of dyad {p:?} drifts by {:e}",
                drift.as_f64()
            )));
        }
    }
    Ok(g)
}

/// Operator whose Wigner transform is `f`, restricted to indices below `dim`.
pub fn inverse_wigner<T: Real>(f: &PhaseSpaceGrid<T>, dim: usize) -> Result<OperatorMatrix<T>> {
    if dim == 0 {
        return Err(Error::param("dimension must be positive"));
    }
    if f.values().iter().all(|v| v.re == T::zero() && v.im == T::zero()) {
        return Ok(OperatorMatrix::zeros(FockSpace::new(dim.max(2))?));
    }
    DyadTable::full(dim, f.spec())?.inverse(f, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn small() -> GridSpec<f64> {
        GridSpec::square(10.0, 81).unwrap()
    }

    /// `<m|D(alpha)|n>` through associated Laguerre polynomials.
    fn displacement_element(m: usize, n: usize, alpha: C<f64>) -> C<f64> {
        let (lo, hi) = (m.min(n), m.max(n));
        let a = (hi - lo) as f64;
        let r2 = alpha.norm_sqr();
        let mut l = [1.0, 1.0 + a - r2];
        let lag = if lo == 0 {
            1.0
        } else {
            for k in 1..lo {
                let kf = k as f64;
                let next = ((2.0 * kf + 1.0 + a - r2) * l[1] - (kf + a) * l[0]) / (kf + 1.0);
                l = [l[1], next];
            }
            l[1]
        };
        let ratio: f64 = (lo + 1..=hi).map(|k| 1.0 / k as f64).product::<f64>().sqrt();
        let base = if m >= n { alpha } else { -alpha.conj() };
        base.powu((hi - lo) as u32) * (ratio * (-r2 / 2.0).exp() * lag)
    }

    #[test]
    fn ground_dyad_closed_form() {
        let spec = small();
        let v = wigner_point(0, 0, 0.0, 0.0, &spec).unwrap();
        assert!((v.re - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12 && v.im.abs() < 1e-12);
        for &(x, y) in &[(1.0, -0.5), (2.5, 1.5), (-3.0, 0.2)] {
            let v = wigner_point(0, 0, x, y, &spec).unwrap();
            let want = (-(x * x + y * y) / 4.0f64).exp() / (2.0 * PI).sqrt();
            assert!((v - C::new(want, 0.0)).norm() < 1e-11, "({x},{y})");
        }
    }

    #[test]
    fn odd_dyad_vanishes_at_origin() {
        let v = wigner_point(1, 0, 0.0, 0.0, &small()).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn weyl_elements_match_laguerre_oracle() {
        let spec = small();
        for &(x, y) in &[(0.3, -0.8), (1.7, 0.4), (-2.2, -1.1)] {
            let u = weyl_elements(x, y, 6, &spec).unwrap();
            let alpha = C::new(y, -x) / 2f64.sqrt();
            for m in 0..6 {
                for k in 0..6 {
                    let d = (u[(m, k)] - displacement_element(m, k, alpha)).norm();
                    assert!(d < 1e-9, "({x},{y}) m={m} k={k} d={d:e}");
                }
            }
        }
    }

    #[test]
    fn weyl_elements_are_unitary_on_low_block() {
        let u = weyl_elements(0.2, 0.1, 12, &small()).unwrap();
        let p = u.adjoint() * &u;
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((p[(i, j)] - C::new(want, 0.0)).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn ground_dyad_grid_norm() {
        let g = wigner_dyad(0, 0, &small()).unwrap();
        assert!((g.norm_sqr() - 1.0).abs() < 1e-6);
        assert!((g.nearest(0.0, 0.0).re - 0.3989423).abs() < 1e-7);
    }

    #[test]
    fn gram_of_two_dyads() {
        let g = hs_gram(&[(0, 0), (1, 0)], &small()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - C::new(want, 0.0)).norm() < 1e-5);
            }
        }
        assert_eq!(hs_gram::<f64>(&[], &small()).unwrap().nrows(), 0);
        assert!(matches!(hs_gram(&[(0, 0), (0, 0)], &small()), Err(Error::Parameter(_))));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let spec = GridSpec::square(8.0, 81).unwrap();
        assert!(matches!(hs_gram(&[(6, 6)], &spec), Err(Error::Resolution(_))));
    }

    #[test]
    fn round_trip_recovers_unit_dyads() {
        let spec = small();
        let table = DyadTable::full(3, &spec).unwrap();
        for &(n, l) in &[(0, 0), (1, 2), (2, 1)] {
            let f = table.dyad(n, l).unwrap();
            let op = table.inverse(&f, 3).unwrap();
            for m in 0..3 {
                for k in 0..3 {
                    let want = if (m, k) == (n, l) { 1.0 } else { 0.0 };
                    assert!(
                        (op.get(m, k) - C::new(want, 0.0)).norm() < 1e-5,
                        "({n},{l}) at ({m},{k})"
                    );
                }
            }
        }
    }

    #[test]
    fn zero_samples_invert_to_zero() {
        let op = inverse_wigner(&PhaseSpaceGrid::zeros(small()), 4).unwrap();
        assert_eq!(op.max_abs(), 0.0);
    }

    #[test]
    fn transposed_dyad_is_conjugate_reflection() {
        let spec = small();
        let table = DyadTable::compute(&[(2, 1), (1, 2)], &spec).unwrap();
        let (a, b) = (table.dyad(2, 1).unwrap(), table.dyad(1, 2).unwrap());
        let n = spec.nx;
        for i in (0..n).step_by(7) {
            for j in (0..n).step_by(5) {
                let d = (a.at(i, j) - b.at(n - 1 - i, n - 1 - j).conj()).norm();
                assert!(d < 1e-10);
            }
        }
    }

    #[test]
    fn index_limit() {
        assert!(matches!(
            wigner_point(21, 0, 0.0, 0.0, &small()),
            Err(Error::Parameter(_))
        ));
    }
}
