use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// `(D_eps phi)(x) = phi(x - eps)` on a periodic uniform grid with spacing
/// `step`, as an exact cyclic index shift.
pub fn infinitesimal_displacement<T: Real>(samples: &[C<T>], step: T, epsilon: T) -> Result<Vec<C<T>>> {
    if !(step > T::zero()) || !step.finite() || !epsilon.finite() {
        return Err(Error::param("grid step must be positive and epsilon finite"));
    }
    let ratio = epsilon / step;
    let k = ratio.round();
    if (ratio - k).abs() > T::lit(1e-9).max(T::lit(8.0) * T::EPSILON) * ratio.abs().max(T::one()) {
        return Err(Error::param("epsilon is not a multiple of the grid step"));
    }
    let n = samples.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let k = k.as_f64() as i64;
    let shift = k.rem_euclid(n as i64) as usize;
    Ok((0..n).map(|i| samples[(i + n - shift) % n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cis;

    #[test]
    fn zero_shift_is_identity() {
        let v: Vec<C<f64>> = (0..7).map(|i| C::new(i as f64, -(i as f64))).collect();
        assert_eq!(infinitesimal_displacement(&v, 0.1, 0.0).unwrap(), v);
    }

    #[test]
    fn shift_and_back() {
        let v: Vec<C<f64>> = (0..11).map(|i| C::new((i * i) as f64, 1.0)).collect();
        let s = infinitesimal_displacement(&v, 0.25, 0.75).unwrap();
        assert_eq!(s[3], v[0]);
        assert_eq!(infinitesimal_displacement(&s, 0.25, -0.75).unwrap(), v);
    }

    #[test]
    fn plane_wave_picks_up_phase() {
        let (n, h) = (64usize, 0.125f64);
        let alpha = 2.0 * std::f64::consts::PI * 3.0 / (n as f64 * h);
        let v: Vec<C<f64>> = (0..n).map(|i| cis(alpha * i as f64 * h)).collect();
        let eps = 5.0 * h;
        let s = infinitesimal_displacement(&v, h, eps).unwrap();
        let phase = cis(-alpha * eps);
        for (a, b) in s.iter().zip(&v) {
            assert!((a - b * phase).norm() < 1e-12);
        }
    }

    #[test]
    fn incommensurate_shift_rejected() {
        let v = vec![C::new(1.0f64, 0.0); 4];
        assert!(infinitesimal_displacement(&v, 0.1, 0.15).is_err());
    }
}
