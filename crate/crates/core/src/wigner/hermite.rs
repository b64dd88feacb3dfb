use crate::scalar::Real;

/// Normalized Hermite function `pi^{-1/4} (2^n n!)^{-1/2} H_n(xi) e^{-xi^2/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteBasisFn {
    pub index: usize,
}

impl HermiteBasisFn {
    pub fn eval<T: Real>(&self, xi: T) -> T {
        let mut buf = vec![T::zero(); self.index + 1];
        hermite_functions(xi, &mut buf);
        buf[self.index]
    }
}

/// Fills `out[n]` with the first `out.len()` Hermite functions at `xi` using
/// the stable three-term recurrence
/// `psi_{n+1} = sqrt(2/(n+1)) xi psi_n - sqrt(n/(n+1)) psi_{n-1}`.
pub fn hermite_functions<T: Real>(xi: T, out: &mut [T]) {
    if out.is_empty() {
        return;
    }
    let quarter_pi = T::pi().sqrt().sqrt();
    out[0] = (-xi * xi * T::lit(0.5)).exp() / quarter_pi;
    if out.len() > 1 {
        out[1] = T::lit(2.0).sqrt() * xi * out[0];
    }
    for n in 1..out.len().saturating_sub(1) {
        let np1 = T::nat(n + 1);
        out[n + 1] = (T::lit(2.0) / np1).sqrt() * xi * out[n] - (T::nat(n) / np1).sqrt() * out[n - 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Bound, Integrator, Tolerance};

    #[test]
    fn unit_norms_up_to_twenty() {
        let integ = Integrator::new(Tolerance::new(1e-13, 1e-13).unwrap());
        for n in 0..=20 {
            let f = HermiteBasisFn { index: n };
            let est = integ
                .integrate_real(|x: f64| f.eval(x) * f.eval(x), -15.0, Bound::Finite(15.0))
                .unwrap();
            assert!((est.value - 1.0).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn matches_explicit_polynomials() {
        // H_2 = 4x^2 - 2, H_3 = 8x^3 - 12x
        let x: f64 = 0.7;
        let g = (-x * x / 2.0).exp() / std::f64::consts::PI.powf(0.25);
        let mut out = [0.0; 4];
        hermite_functions(x, &mut out);
        assert!((out[2] - (4.0 * x * x - 2.0) * g / 8f64.sqrt()).abs() < 1e-15);
        assert!((out[3] - (8.0 * x.powi(3) - 12.0 * x) * g / 48f64.sqrt()).abs() < 1e-15);
    }
}
