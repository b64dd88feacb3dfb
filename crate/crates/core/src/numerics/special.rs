//! Error functions and factorial helpers.
//!
//! `erf`/`erfc` follow the FreeBSD `s_erf.c` scheme (Sun Microsystems, 1993;
//! freely redistributable with notice preserved). The real line is split into
//! four ranges, each with its own rational approximation:
//!
//! * `|x| < 0.84375`: `erf(x) = x + x R(x^2)`, `R = P/Q` odd polynomials of
//!   degree 8/10, `|R - (erf(x) - x)/x| <= 2^-57.90`.
//! * `0.84375 <= |x| < 1.25`: expansion about 1, `erf(1 + s) = c + P1(s)/Q1(s)`
//!   with `c = 0.84506291151` rounded to single precision.
//! * `1.25 <= |x| < 1/0.35`: `erfc(x) = exp(-x^2 - 0.5625 + R1(z)/S1(z)) / x`,
//!   `z = 1/x^2`, error `< 2^-62.57`.
//! * `1/0.35 <= |x| < 28`: same form with `R2/S2`, error `< 2^-61.52`.
//!
//! In the last two ranges `exp(-x^2)` is evaluated as
//! `exp(-s^2 - 0.5625) exp((s - x)(s + x) + R/S)` with `s` the single
//! precision rounding of `x`, so that `s^2` is exact.

use crate::error::{Error, Result};
use crate::scalar::Real;

const ERX: f64 = 8.45062911510467529297e-01;

const EFX: f64 = 1.28379167095512586316e-01;
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 6] = [
    1.0,
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];

const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 7] = [
    1.0,
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];

const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 9] = [
    1.0,
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];

const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 8] = [
    1.0,
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

/// Horner evaluation with coefficients in ascending order.
#[inline]
fn poly<T: Real>(coeffs: &[f64], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + T::lit(c))
}

/// `erf(x) - x` scaled form on `|x| < 0.84375`: returns `x R(x^2)`.
#[inline]
fn small_range<T: Real>(x: T) -> T {
    let z = x * x;
    x * (poly(&PP, z) / poly(&QQ, z))
}

/// `erf(1 + s) - c` on `0.84375 <= |x| < 1.25`.
#[inline]
fn unit_range<T: Real>(ax: T) -> T {
    let s = ax - T::one();
    poly(&PA, s) / poly(&QA, s)
}

/// `erfc(ax)` for `1.25 <= ax < 28`.
fn tail_range<T: Real>(ax: T) -> T {
    let z = T::one() / (ax * ax);
    let ratio = if ax < T::lit(1.0 / 0.35) {
        poly(&RA, z) / poly(&SA, z)
    } else {
        poly(&RB, z) / poly(&SB, z)
    };
    let s = ax.truncate_single();
    let r = (-s * s - T::lit(0.5625)).exp() * ((s - ax) * (s + ax) + ratio).exp();
    r / ax
}

/// Error function `2/sqrt(pi) * int_0^x exp(-t^2) dt`.
pub fn erf<T: Real>(x: T) -> T {
    let ax = x.abs();
    let mag = if ax < T::lit(0.84375) {
        if ax < T::lit(3.7252902984619140625e-9) {
            ax + T::lit(EFX) * ax
        } else {
            ax + small_range(ax)
        }
    } else if ax < T::lit(1.25) {
        T::lit(ERX) + unit_range(ax)
    } else if ax < T::lit(6.0) {
        T::one() - tail_range(ax)
    } else {
        T::one()
    };
    if x < T::zero() {
        -mag
    } else {
        mag
    }
}

/// Complementary error function `1 - erf(x)`, accurate in the far tail.
///
/// Non-finite input is rejected.
pub fn erfc<T: Real>(x: T) -> Result<T> {
    if !x.finite() {
        return Err(Error::param(format!("erfc of non-finite argument {x:e}")));
    }
    Ok(erfc_unchecked(x))
}

pub(crate) fn erfc_unchecked<T: Real>(x: T) -> T {
    let neg = x < T::zero();
    let ax = x.abs();
    let two = T::lit(2.0);
    if ax < T::lit(0.84375) {
        if ax < T::lit(1.3877787807814457e-17) {
            return T::one() - x;
        }
        let y = small_range(ax);
        // erf(ax) = ax + y
        let e = if ax < T::lit(0.25) {
            ax + y
        } else {
            T::lit(0.5) + (y + (ax - T::lit(0.5)))
        };
        return if neg { T::one() + e } else { T::one() - e };
    }
    if ax < T::lit(1.25) {
        let e = T::lit(ERX) + unit_range(ax);
        return if neg { T::one() + e } else { T::one() - e };
    }
    if ax < T::lit(28.0) {
        if neg && ax > T::lit(6.0) {
            return two;
        }
        let t = tail_range(ax);
        return if neg { two - t } else { t };
    }
    if neg {
        two
    } else {
        T::zero()
    }
}

/// `ln(n!)` by direct summation; exact enough for the `n <= 200` used here.
pub fn ln_factorial<T: Real>(n: usize) -> T {
    (2..=n).fold(T::zero(), |acc, k| acc + T::nat(k).ln())
}

/// `x^{n/2} / sqrt(n!)` computed in log space, with `0^0 = 1`.
pub fn sqrt_power_over_factorial<T: Real>(x: T, n: usize) -> T {
    if n == 0 {
        return T::one();
    }
    if x == T::zero() {
        return T::zero();
    }
    (T::nat(n) * T::lit(0.5) * x.ln() - T::lit(0.5) * ln_factorial::<T>(n)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: Maclaurin series of erf for small |x| and the
    /// Lentz continued fraction of erfc for large x.
    fn erfc_oracle(x: f64) -> f64 {
        if x.abs() < 2.0 {
            let mut term = x;
            let mut sum = x;
            let mut k = 0.0;
            while term.abs() > 1e-18 * sum.abs() {
                k += 1.0;
                term *= -x * x / k;
                sum += term / (2.0 * k + 1.0);
            }
            1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
        } else if x > 0.0 {
            // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
            let tiny = 1e-300;
            let mut f = x;
            let mut cc = x;
            let mut d = 0.0;
            for k in 1..500 {
                let a = k as f64 / 2.0;
                d = x + a * d;
                d = if d.abs() < tiny { tiny } else { d };
                cc = x + a / cc;
                cc = if cc.abs() < tiny { tiny } else { cc };
                d = 1.0 / d;
                let delta = cc * d;
                f *= delta;
                if (delta - 1.0).abs() < 1e-17 {
                    break;
                }
            }
            (-x * x).exp() / std::f64::consts::PI.sqrt() / f
        } else {
            2.0 - erfc_oracle(-x)
        }
    }

    #[test]
    fn erfc_at_zero_is_one() {
        assert_eq!(erfc(0.0_f64).unwrap(), 1.0);
    }

    #[test]
    fn erfc_far_tail_is_tiny() {
        let v = erfc(10.0_f64).unwrap();
        assert!(v > 0.0 && v < 1e-44, "{v:e}");
        // leading asymptotic term exp(-x^2)/(x sqrt(pi)) (1 - 1/(2x^2))
        let asym = (-100.0_f64).exp() / (10.0 * std::f64::consts::PI.sqrt()) * (1.0 - 0.005 + 0.75e-4);
        assert!(((v - asym) / asym).abs() < 1e-5);
    }

    #[test]
    fn erfc_reflection() {
        let x = 0.7_f64;
        let lhs = erfc(-x).unwrap();
        let rhs = 2.0 - erfc(x).unwrap();
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn erfc_matches_oracle_to_1e12_relative() {
        let mut x = -10.0_f64;
        while x <= 10.0 {
            let got = erfc(x).unwrap();
            let want = erfc_oracle(x);
            let rel = ((got - want) / want).abs();
            assert!(rel <= 1e-12, "x={x}: got {got:e} want {want:e} rel {rel:e}");
            x += 0.0625;
        }
    }

    #[test]
    fn erfc_frozen_reference_values() {
        // mpmath, 30 digits
        let cases: [(f64, f64); _] = [
            (0.5, 0.479500122186953462317253346108),
            (1.0, 0.157299207050285130658779364917),
            (2.0, 0.00467773498104726583793074363275),
            (5.0, 1.53745979442803485018834348538e-12),
            (-1.5, 1.96610514647531072706697626165),
        ];
        for (x, want) in cases {
            let got = erfc(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn erfc_rejects_non_finite() {
        assert!(erfc(f64::NAN).is_err());
        assert!(erfc(f64::INFINITY).is_err());
    }

    #[test]
    fn erf_erfc_consistent_and_monotone() {
        let mut prev = f64::INFINITY;
        for i in -400..=400 {
            let x = i as f64 * 0.01;
            let e = erfc(x).unwrap();
            assert!(e < prev);
            assert!(e > 0.0 && e < 2.0);
            assert!((erf(x) - (1.0 - e)).abs() <= 1e-14, "x={x}");
            prev = e;
        }
    }

    #[test]
    fn single_precision_erfc() {
        let v: f32 = erfc(1.0_f32).unwrap();
        assert!((v - 0.157_299_2).abs() < 1e-6);
    }

    #[test]
    fn sqrt_power_over_factorial_small_cases() {
        assert_eq!(sqrt_power_over_factorial(0.0_f64, 0), 1.0);
        assert_eq!(sqrt_power_over_factorial(0.0_f64, 3), 0.0);
        let v = sqrt_power_over_factorial(4.0_f64, 3); // 8/sqrt(6)
        assert!((v - 8.0 / 6.0_f64.sqrt()).abs() < 1e-14);
    }
}
