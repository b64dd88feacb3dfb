use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::scalar::{Real, C};

/// Uniform grid on `[-x_half, x_half] x [-y_half, y_half]` plus the
/// tolerance of the inner `xi` integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x_half: T,
    pub y_half: T,
    pub nx: usize,
    pub ny: usize,
    pub tol: Tolerance<T>,
}

impl<T: Real> GridSpec<T> {
    pub fn square(half: T, points: usize) -> Result<Self> {
        let spec = Self {
            x_half: half,
            y_half: half,
            nx: points,
            ny: points,
            tol: Tolerance {
                abs: T::lit(1e-10),
                rel: T::zero(),
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tol(mut self, tol: Tolerance<T>) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_half > T::zero() && self.y_half > T::zero()) || !self.x_half.finite() || !self.y_half.finite() {
            return Err(Error::param("grid half-ranges must be positive and finite"));
        }
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::param("grid needs at least 3 points per axis"));
        }
        Ok(())
    }

    pub fn dx(&self) -> T {
        T::lit(2.0) * self.x_half / T::nat(self.nx - 1)
    }

    pub fn dy(&self) -> T {
        T::lit(2.0) * self.y_half / T::nat(self.ny - 1)
    }

    pub fn x(&self, i: usize) -> T {
        -self.x_half + T::nat(i) * self.dx()
    }

    pub fn y(&self, j: usize) -> T {
        -self.y_half + T::nat(j) * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(x, y)` of the flat index `i * ny + j`.
    pub fn point(&self, index: usize) -> (T, T) {
        (self.x(index / self.ny), self.y(index % self.ny))
    }

    /// Half-range needed for dyads with indices below `dim`: the radius
    /// `sqrt(2(2n+1))` where the transform stops oscillating, plus six unit
    /// Gaussian widths.
    pub fn required_half_range(dim: usize) -> T {
        let n = dim.saturating_sub(1);
        (T::nat(2 * (2 * n + 1))).sqrt() + T::lit(6.0)
    }

    pub fn covers(&self, dim: usize) -> bool {
        let r = Self::required_half_range(dim);
        self.x_half >= r && self.y_half >= r
    }
}

impl Default for GridSpec<f64> {
    /// `+-12` with 241 points per axis (step 0.1).
    fn default() -> Self {
        Self::square(12.0, 241).expect("valid default grid")
    }
}

/// Samples on a [`GridSpec`], flat index `i * ny + j` for `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid<T> {
    spec: GridSpec<T>,
    values: Vec<C<T>>,
}

impl<T: Real> PhaseSpaceGrid<T> {
    pub fn new(spec: GridSpec<T>, values: Vec<C<T>>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::param("sample count differs from grid size"));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec<T>) -> Self {
        Self {
            values: vec![C::new(T::zero(), T::zero()); spec.len()],
            spec,
        }
    }

    pub fn spec(&self) -> &GridSpec<T> {
        &self.spec
    }

    pub fn values(&self) -> &[C<T>] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> C<T> {
        self.values[i * self.spec.ny + j]
    }

    /// Sample at the grid point closest to `(x, y)`.
    pub fn nearest(&self, x: T, y: T) -> C<T> {
        let idx = |v: T, half: T, step: T, n: usize| -> usize {
            let k = ((v + half) / step).round().to_f64().unwrap_or(0.0);
            (k.max(0.0) as usize).min(n - 1)
        };
        let i = idx(x, self.spec.x_half, self.spec.dx(), self.spec.nx);
        let j = idx(y, self.spec.y_half, self.spec.dy(), self.spec.ny);
        self.at(i, j)
    }

    /// `int conj(self) other dx dy` by the trapezoid rule (end weights are
    /// irrelevant for samples that vanish at the border, and kept anyway).
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if self.spec != other.spec {
            return Err(Error::param("grids differ"));
        }
        Ok(trapezoid(&self.spec, |p| self.values[p].conj() * other.values[p]))
    }

    pub fn norm_sqr(&self) -> T {
        self.inner(self).expect("same grid").re
    }

    pub fn linear_combination(terms: &[(C<T>, &PhaseSpaceGrid<T>)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::param("empty combination"));
        };
        let mut out = Self::zeros(first.spec);
        for (c, g) in terms {
            if g.spec != first.spec {
                return Err(Error::param("grids differ"));
            }
            for (o, v) in out.values.iter_mut().zip(&g.values) {
                *o += *v * *c;
            }
        }
        Ok(out)
    }

    /// CSV with header `x,y,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,y,re,im")?;
        for (k, v) in self.values.iter().enumerate() {
            let (x, y) = self.spec.point(k);
            writeln!(
                w,
                "{:e},{:e},{:e},{:e}",
                x.as_f64(),
                y.as_f64(),
                v.re.as_f64(),
                v.im.as_f64()
            )?;
        }
        Ok(())
    }
}

fn trapezoid_weight<T: Real>(k: usize, n: usize) -> T {
    if k == 0 || k + 1 == n {
        T::lit(0.5)
    } else {
        T::one()
    }
}

/// Trapezoid rule for `int g dx dy` where `g(p)` is the integrand at flat
/// grid index `p`.
pub(crate) fn trapezoid<T: Real>(spec: &GridSpec<T>, mut g: impl FnMut(usize) -> C<T>) -> C<T> {
    let mut acc = C::new(T::zero(), T::zero());
    for i in 0..spec.nx {
        let wi: T = trapezoid_weight(i, spec.nx);
        let mut row = C::new(T::zero(), T::zero());
        for j in 0..spec.ny {
            let wj: T = trapezoid_weight(j, spec.ny);
            row += g(i * spec.ny + j) * wj;
        }
        acc += row * wi;
    }
    acc * (spec.dx() * spec.dy())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_are_symmetric() {
        let g = GridSpec::<f64>::square(8.0, 161).unwrap();
        assert!((g.dx() - 0.1).abs() < 1e-15);
        assert_eq!(g.x(80), 0.0);
        assert!((g.x(0) + 8.0).abs() < 1e-15 && (g.x(160) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_norm_by_trapezoid() {
        let spec = GridSpec::<f64>::square(9.0, 91).unwrap();
        let vals: Vec<C<f64>> = (0..spec.len())
            .map(|k| {
                let (x, y) = spec.point(k);
                C::new(
                    (-(x * x + y * y) / 4.0).exp() / (2.0 * std::f64::consts::PI).sqrt(),
                    0.0,
                )
            })
            .collect();
        let g = PhaseSpaceGrid::new(spec, vals).unwrap();
        assert!((g.norm_sqr() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn default_grid_covers_six_levels() {
        let g = GridSpec::<f64>::default();
        assert!(g.covers(7));
        assert!(!GridSpec::<f64>::square(8.0, 161).unwrap().covers(7));
        assert!(GridSpec::<f64>::square(8.0, 161).unwrap().covers(1));
    }

    #[test]
    fn csv_header_and_rows() {
        let spec = GridSpec::<f64>::square(1.0, 3).unwrap();
        let g = PhaseSpaceGrid::zeros(spec);
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 10);
        assert!(text.starts_with("x,y,re,im\n"));
    }
}
