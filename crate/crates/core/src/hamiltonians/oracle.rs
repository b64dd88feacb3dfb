//! Finite-difference oscillator levels, independent of the ladder algebra.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `d` and constant off-diagonal `e` (Sturm sequence count).
fn count_below<T: Real>(d: &[T], e: T, x: T) -> usize {
    let tiny = T::MIN_POSITIVE.sqrt();
    let mut q = T::one();
    let mut count = 0;
    for (i, &di) in d.iter().enumerate() {
        q = if i == 0 { di - x } else { di - x - e * e / q };
        if q.abs() < tiny {
            q = -tiny;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

fn levels_on_grid<T: Real>(count: usize, half_width: T, points: usize) -> Vec<T> {
    let h = T::lit(2.0) * half_width / T::nat(points + 1);
    let inv = T::one() / (h * h);
    let d: Vec<T> = (1..=points)
        .map(|i| {
            let xi = -half_width + T::nat(i) * h;
            inv + xi * xi * T::lit(0.5)
        })
        .collect();
    let e = -inv * T::lit(0.5);
    let upper = T::nat(2 * count + 4);
    (0..count)
        .map(|k| {
            let (mut lo, mut hi) = (T::zero(), upper);
            for _ in 0..200 {
                let mid = (lo + hi) * T::lit(0.5);
                if count_below(&d, e, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= T::EPSILON * T::lit(4.0) * hi {
                    break;
                }
            }
            (lo + hi) * T::lit(0.5)
        })
        .collect()
}

/// Lowest `count` eigenvalues of `(-d^2/dxi^2 + xi^2)/2` on `[-L, L]` with
/// Dirichlet ends, second-order stencil on `points` interior nodes, then one
/// Richardson step against the grid with half as many intervals.
pub fn fd_oscillator_levels<T: Real>(count: usize, half_width: T, points: usize) -> Result<Vec<T>> {
    if count == 0 || points < 4 * count + 8 || !(half_width > T::zero()) {
        return Err(Error::param("finite-difference grid too small for requested levels"));
    }
    let fine = levels_on_grid(count, half_width, points);
    let coarse = levels_on_grid(count, half_width, points.div_ceil(2) - 1);
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(&f, &c)| (T::lit(4.0) * f - c) / T::lit(3.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_count_on_diagonal() {
        let d = [1.0, 2.0, 3.0];
        assert_eq!(count_below(&d, 0.0, 2.5), 2);
        assert_eq!(count_below(&d, 0.0, 0.5), 0);
    }

    #[test]
    fn oscillator_levels_approach_half_integers() {
        let lv = fd_oscillator_levels::<f64>(4, 10.0, 2001).unwrap();
        for (n, e) in lv.iter().enumerate() {
            assert!((e - (n as f64 + 0.5)).abs() < 1e-6, "n={n}: {e}");
        }
    }
}
