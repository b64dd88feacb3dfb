//! Matrix exponential by Padé-13 scaling and squaring (Higham 2005).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{cabs, Real, C};

use super::OperatorMatrix;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn one_norm<T: Real>(m: &DMatrix<C<T>>) -> T {
    m.column_iter()
        .map(|c| c.iter().fold(T::zero(), |s, z| s + cabs(*z)))
        .fold(T::zero(), |a, b| a.max(b))
}

/// `e^A` for a dense complex matrix.
pub(crate) fn expm<T: Real>(a: &DMatrix<C<T>>) -> Result<DMatrix<C<T>>> {
    if a.iter().any(|z| !z.re.finite() || !z.im.finite()) {
        return Err(Error::numeric("matrix exponential of non-finite matrix"));
    }
    let n = a.nrows();
    let norm = one_norm(a);
    let theta = T::lit(THETA13);
    let mut s = 0i32;
    if norm > theta {
        s = (norm / theta).log2().ceil().to_i32().unwrap_or(i32::MAX);
        if s > 1000 {
            return Err(Error::numeric("matrix exponential overflows: norm too large"));
        }
    }
    let scaled = a * C::new(T::lit(0.5).powi(s), T::zero());
    let b: Vec<C<T>> = PADE13.iter().map(|&v| C::new(T::lit(v), T::zero())).collect();
    let id = DMatrix::<C<T>>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::numeric("singular Padé denominator"))?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|z| !z.re.finite() || !z.im.finite()) {
        return Err(Error::numeric("matrix exponential overflowed"));
    }
    Ok(r)
}

/// `e^A`. A skew-Hermitian argument yields a result flagged unitary after
/// the unitarity check passes.
pub fn matrix_exponential<T: Real>(a: &OperatorMatrix<T>) -> Result<OperatorMatrix<T>> {
    let e = OperatorMatrix::new(a.space().clone(), expm(a.entries())?)?;
    let skew =
        max_skew_defect(a.entries()) <= T::lit(1e-12).max(T::lit(100.0) * T::EPSILON) * a.max_abs().max(T::one());
    if skew {
        e.checked_unitary()
    } else {
        Ok(e)
    }
}

fn max_skew_defect<T: Real>(m: &DMatrix<C<T>>) -> T {
    let s = m + m.adjoint();
    s.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ladder, FockSpace};
    use crate::scalar::cis;

    #[test]
    fn exp_zero_is_identity() {
        let z = OperatorMatrix::<f64>::zeros(FockSpace::new(5).unwrap());
        let e = matrix_exponential(&z).unwrap();
        assert!((e.entries() - DMatrix::identity(5, 5)).iter().all(|v| cabs(*v) == 0.0));
    }

    #[test]
    fn diagonal_phases() {
        let theta = 0.3;
        let d: Vec<C<f64>> = (0..3).map(|k| C::new(0.0, theta * k as f64)).collect();
        let a = OperatorMatrix::diagonal(FockSpace::new(3).unwrap(), &d).unwrap();
        let e = matrix_exponential(&a).unwrap();
        for k in 0..3 {
            assert!(cabs(e.get(k, k) - cis(theta * k as f64)) < 1e-15);
        }
        assert!(e.is_unitary());
    }

    #[test]
    fn coherent_state_series() {
        let n = 40;
        let z = 0.5_f64;
        let (l, r) = ladder(FockSpace::new(n).unwrap(), 1.0).unwrap();
        let gen = &r.scale_real(z) - &l.scale_real(z);
        let u = matrix_exponential(&gen).unwrap();
        let mut coeff = (-z * z / 2.0).exp();
        for k in 0..=20 {
            assert!(
                (u.get(k, 0).re - coeff).abs() < 1e-10 && u.get(k, 0).im.abs() < 1e-10,
                "n={k}"
            );
            coeff *= z / ((k + 1) as f64).sqrt();
        }
    }

    #[test]
    fn large_norm_uses_squaring() {
        // e^{diag(-20, 3)} exercises s > 0
        let d = [C::new(-20.0, 0.0), C::new(3.0, 0.0)];
        let a = OperatorMatrix::diagonal(FockSpace::new(2).unwrap(), &d).unwrap();
        let e = matrix_exponential(&a).unwrap();
        assert!(((e.get(0, 0).re - (-20f64).exp()) / (-20f64).exp()).abs() < 1e-13);
        assert!(((e.get(1, 1).re - 3f64.exp()) / 3f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        // e^{[[0,1],[0,0]]} = [[1,1],[0,1]]
        let mut m = DMatrix::<C<f64>>::zeros(2, 2);
        m[(0, 1)] = C::new(1.0, 0.0);
        let e = expm(&m).unwrap();
        assert!(cabs(e[(0, 1)] - C::new(1.0, 0.0)) < 1e-15);
        assert!(cabs(e[(0, 0)] - C::new(1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn overflow_is_numeric_error() {
        let d = [C::new(1e6, 0.0), C::new(0.0, 0.0)];
        let a = OperatorMatrix::diagonal(FockSpace::new(2).unwrap(), &d).unwrap();
        assert!(matches!(matrix_exponential(&a), Err(Error::Numeric(_))));
    }
}
