//! Split Landau Hamiltonians, helicity Hamiltonians and their spectra.

mod oracle;

pub use oracle::fd_oscillator_levels;

use crate::error::Result;
use crate::fock::{helicity_ops, ladder, FockSpace, HelicityOp, Ladder, ModelParams, OperatorMatrix, ProductSpace};
use crate::scalar::{Real, C};

/// `total = oscillator_part - linear_part` on the two-mode space
/// `(oscillator mode, linear mode)`.
#[derive(Debug, Clone)]
pub struct HamiltonianBundle<T: Real> {
    pub total: OperatorMatrix<T>,
    pub oscillator_part: OperatorMatrix<T>,
    pub linear_part: OperatorMatrix<T>,
}

fn split_hamiltonian<T: Real>(params: &ModelParams<T>, dims: (usize, usize)) -> Result<HamiltonianBundle<T>> {
    params.validate()?;
    let space = ProductSpace::two_mode(dims.0, dims.1)?;
    let s = params.ladder_scale();
    let two_m = T::lit(2.0) * params.mass;

    let (b, b_dag) = ladder(FockSpace::new(dims.0)?, s)?;
    let osc = (&(&b_dag * &b) + &(&b * &b_dag)).scale_real(T::one() / (T::lit(2.0) * two_m));
    let oscillator_part = osc.embed(&space, 0)?.checked_hermitian()?;

    // [d^dagger, d] = 2 M hbar omega_c: d raises, d^dagger lowers
    let (d_dag, d) = ladder(FockSpace::new(dims.1)?, s)?;
    let sum = (&d_dag + &d).scale_real(params.lambda / two_m).embed(&space, 1)?;
    let constant = OperatorMatrix::identity(space.clone()).scale_real(params.lambda * params.lambda / two_m);
    let linear_part = (&sum + &constant).checked_hermitian()?;

    let total = (&oscillator_part - &linear_part).checked_hermitian()?;
    Ok(HamiltonianBundle {
        total,
        oscillator_part,
        linear_part,
    })
}

/// `H1 = (1/4M)(b^dagger b + b b^dagger) (x) I - (lambda/2M) I (x) (d^dagger + d) - lambda^2/2M`
/// on the `(N_b, N_d)` space.
pub fn build_h1<T: Real>(params: &ModelParams<T>, dims: (usize, usize)) -> Result<HamiltonianBundle<T>> {
    split_hamiltonian(params, dims)
}

/// Mirror of [`build_h1`] for the `frak b`, `frak d` modes.
pub fn build_h2<T: Real>(params: &ModelParams<T>, dims: (usize, usize)) -> Result<HamiltonianBundle<T>> {
    split_hamiltonian(params, dims)
}

/// `H1_OSC (x) I` and `I (x) H2_OSC` on the shared `|n, l>` space.
pub fn oscillator_pair<T: Real>(
    params: &ModelParams<T>,
    dims: (usize, usize),
) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
    let space = ProductSpace::two_mode(dims.0, dims.1)?;
    let s = params.ladder_scale();
    let k = T::one() / (T::lit(4.0) * params.mass);
    let single = |n: usize| -> Result<OperatorMatrix<T>> {
        let (a, a_dag) = ladder(FockSpace::new(n)?, s)?;
        Ok((&(&a_dag * &a) + &(&a * &a_dag)).scale_real(k))
    };
    Ok((single(dims.0)?.embed(&space, 0)?, single(dims.1)?.embed(&space, 1)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry<T> {
    pub n: usize,
    pub alpha: T,
    pub energy: T,
}

/// `(hbar omega_c / 2)(2n + 1) - (hbar lambda / M) alpha - lambda^2 / 2M`.
/// Also the `H2` spectrum with `n` read as `l`.
pub fn spectrum_h1<T: Real>(n: usize, alpha: T, params: &ModelParams<T>) -> SpectrumEntry<T> {
    let p = params;
    let energy = p.hbar * p.omega_c * (T::nat(2 * n + 1)) / T::lit(2.0)
        - p.hbar * p.lambda / p.mass * alpha
        - p.lambda * p.lambda / (T::lit(2.0) * p.mass);
    SpectrumEntry { n, alpha, energy }
}

/// Same level from the finite-difference oscillator plus the `alpha` shift.
pub fn spectrum_h1_fd<T: Real>(n: usize, alpha: T, params: &ModelParams<T>) -> Result<SpectrumEntry<T>> {
    let p = params;
    let levels = fd_oscillator_levels(n + 1, T::lit(10.0), 4001)?;
    let energy = p.hbar * p.omega_c * levels[n]
        - p.hbar * p.lambda / p.mass * alpha
        - p.lambda * p.lambda / (T::lit(2.0) * p.mass);
    Ok(SpectrumEntry { n, alpha, energy })
}

/// Branches of the shifted Hamiltonian: `E_n = omega_c n`,
/// `E_alpha = -(lambda_bar / sqrt 2) alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedSpectrum<T> {
    pub e_n: T,
    pub e_alpha: T,
}

impl<T: Real> ShiftedSpectrum<T> {
    pub fn total(&self) -> T {
        self.e_n + self.e_alpha
    }

    pub fn is_nonnegative(&self) -> bool {
        self.total() >= T::zero()
    }
}

pub fn shifted_spectrum<T: Real>(n: usize, alpha: T, params: &ModelParams<T>) -> ShiftedSpectrum<T> {
    ShiftedSpectrum {
        e_n: params.omega_c * T::nat(n),
        e_alpha: -params.lambda_bar() * alpha * T::FRAC_1_SQRT_2(),
    }
}

/// A helicity Hamiltonian on `(oscillator ladder, linear ladder)`.
#[derive(Debug, Clone)]
pub struct HelicityHamiltonian<T: Real> {
    pub oscillator: Ladder,
    pub linear: Ladder,
    pub matrix: OperatorMatrix<T>,
}

/// `H+`, `H-`, `H~+`, `H~-`, each on the two modes it touches.
///
/// Under the identification of the helicity pairs with a single
/// `(discrete, continuous)` pair of modes, all four act on the same
/// two-mode space, so they can be compared directly.
#[derive(Debug, Clone)]
pub struct HelicityHamiltonians<T: Real> {
    pub h_plus: HelicityHamiltonian<T>,
    pub h_minus: HelicityHamiltonian<T>,
    pub h_tilde_plus: HelicityHamiltonian<T>,
    pub h_tilde_minus: HelicityHamiltonian<T>,
}

pub fn helicity_hamiltonians<T: Real>(params: &ModelParams<T>, space: FockSpace) -> Result<HelicityHamiltonians<T>> {
    params.validate()?;
    let ops = helicity_ops(space, params)?;
    let two = ProductSpace::new(vec![space, space])?;
    let w = params.omega_c / T::lit(4.0);
    let lb = params.lambda_bar() / T::lit(2.0);
    let constant =
        OperatorMatrix::identity(two.clone()).scale_real(params.lambda * params.lambda / (T::lit(2.0) * params.mass));
    let i = C::new(T::zero(), T::one());

    let build = |osc: Ladder, linear: OperatorMatrix<T>, lin_ladder: Ladder| -> Result<HelicityHamiltonian<T>> {
        let q = ops.q(osc);
        let p = ops.p(osc);
        let kinetic = (&(q * q) + &(p * p)).scale_real(w).embed(&two, 0)?;
        let matrix = (&(&kinetic - &linear.embed(&two, 1)?) - &constant).checked_hermitian()?;
        Ok(HelicityHamiltonian {
            oscillator: osc,
            linear: lin_ladder,
            matrix,
        })
    };
    let sum = |a: HelicityOp, b: HelicityOp| ops.get(a) + ops.get(b);
    let diff = |a: HelicityOp, b: HelicityOp| ops.get(a) - ops.get(b);

    let h_plus = build(
        Ladder::B,
        sum(HelicityOp::TildeAMinus, HelicityOp::TildeAMinusStar).scale_real(lb),
        Ladder::K,
    )?;
    let h_minus = build(
        Ladder::FrakD,
        sum(HelicityOp::TildeAPlus, HelicityOp::TildeAPlusStar).scale_real(lb),
        Ladder::FrakL,
    )?;
    let h_tilde_plus = build(
        Ladder::FrakL,
        diff(HelicityOp::AMinusStar, HelicityOp::AMinus).scale(i * lb),
        Ladder::FrakD,
    )?;
    let h_tilde_minus = build(
        Ladder::K,
        diff(HelicityOp::APlusStar, HelicityOp::APlus).scale(i * lb),
        Ladder::B,
    )?;
    Ok(HelicityHamiltonians {
        h_plus,
        h_minus,
        h_tilde_plus,
        h_tilde_minus,
    })
}

/// Multiplicative action of the continuous factor in the position
/// eigenbasis: `E(alpha) = slope * alpha + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineSpectrum<T> {
    pub slope: T,
    pub offset: T,
}

impl<T: Real> AffineSpectrum<T> {
    pub fn eval(&self, alpha: T) -> T {
        self.slope * alpha + self.offset
    }
}

#[derive(Debug, Clone)]
pub struct TensorDecomposition<T: Real> {
    /// `(omega_c/2)(A+* A+ + 1)` on the discrete factor.
    pub h_d: OperatorMatrix<T>,
    /// `-(lambda_bar / sqrt 2) alpha - lambda^2 / 2`.
    pub h_c: AffineSpectrum<T>,
}

pub fn tensor_decompose_h<T: Real>(params: &ModelParams<T>, dim: usize) -> Result<TensorDecomposition<T>> {
    params.validate()?;
    let space = FockSpace::new(dim)?;
    let ops = helicity_ops(space, params)?;
    let number = ops.get(HelicityOp::APlusStar) * ops.get(HelicityOp::APlus);
    let h_d = (&number + &OperatorMatrix::identity(space))
        .scale_real(params.omega_c / T::lit(2.0))
        .checked_hermitian()?;
    let h_c = AffineSpectrum {
        slope: -params.lambda_bar() * T::FRAC_1_SQRT_2(),
        offset: -params.lambda * params.lambda / T::lit(2.0),
    };
    Ok(TensorDecomposition { h_d, h_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::commutator;
    use crate::scalar::cabs;

    fn p(m: f64, w: f64, lambda: f64, hbar: f64) -> ModelParams<f64> {
        ModelParams::new(m, w, lambda, hbar, 1.0).unwrap()
    }

    #[test]
    fn bundle_identity_is_exact() {
        for bundle in [
            build_h1(&p(1.3, 0.8, 0.4, 1.1), (6, 5)).unwrap(),
            build_h2(&p(0.7, 1.2, -0.2, 0.9), (4, 7)).unwrap(),
        ] {
            let d = &bundle.total - &(&bundle.oscillator_part - &bundle.linear_part);
            assert_eq!(d.max_abs(), 0.0);
            assert_eq!(bundle.total.hermiticity_defect(), 0.0);
        }
    }

    #[test]
    fn landau_degeneracy() {
        let params = p(1.0, 1.3, 0.0, 0.8);
        let (nb, nd) = (7, 4);
        let ev = build_h1(&params, (nb, nd))
            .unwrap()
            .total
            .hermitian_eigenvalues()
            .unwrap();
        for n in 0..nb - 1 {
            let e = params.hbar * params.omega_c * (n as f64 + 0.5);
            let count = ev.iter().filter(|&&x| (x - e).abs() < 1e-9).count();
            assert_eq!(count, nd, "n={n}");
        }
    }

    #[test]
    fn ground_energy_and_vacuum_expectation() {
        let ev = build_h1(&p(1.0, 1.0, 0.0, 1.0), (5, 3))
            .unwrap()
            .total
            .hermitian_eigenvalues()
            .unwrap();
        assert!((ev[0] - 0.5).abs() < 1e-14);
        let h = build_h1(&p(1.0, 1.0, 0.3, 1.0), (5, 3)).unwrap();
        assert!((h.total.get(0, 0).re - 0.455).abs() < 1e-14);
        let h2 = build_h2(&p(2.0, 1.5, 0.3, 0.7), (5, 3)).unwrap();
        assert!((h2.total.get(0, 0).re - (0.7 * 1.5 / 2.0 - 0.09 / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn split_oscillators_commute() {
        let (a, b) = oscillator_pair(&p(1.0, 2.0, 0.0, 1.0), (6, 6)).unwrap();
        assert!(commutator(&a, &b).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn spectrum_formula() {
        assert_eq!(spectrum_h1(0, 0.0, &p(1.0, 1.0, 0.0, 1.0)).energy, 0.5);
        let e = spectrum_h1(2, 1.0, &p(1.0, 1.0, 0.4, 1.0)).energy;
        assert!((e - 2.02).abs() < 1e-14);
    }

    #[test]
    fn finite_difference_agrees() {
        let params = p(1.2, 0.9, 0.35, 1.0);
        for n in 0..=3 {
            for alpha in [-1.0, 0.0, 1.0] {
                let exact = spectrum_h1(n, alpha, &params).energy;
                let fd = spectrum_h1_fd(n, alpha, &params).unwrap().energy;
                assert!((exact - fd).abs() < 1e-4, "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn shifted_branches() {
        let s = shifted_spectrum(0, 0.0, &p(1.0, 1.0, 0.0, 1.0));
        assert_eq!((s.e_n, s.e_alpha), (0.0, 0.0));
        assert_eq!(shifted_spectrum(3, 0.0, &p(1.0, 1.0, 0.0, 1.0)).e_n, 3.0);
        let s = shifted_spectrum(0, -1.0, &p(1.0, 1.0, 0.5, 1.0));
        assert!((s.e_alpha - 0.5 / 2f64.sqrt()).abs() < 1e-15);
        assert!(s.is_nonnegative());
    }

    #[test]
    fn helicity_oscillator_levels() {
        let params = p(1.4, 0.9, 0.0, 1.0);
        let n = 6;
        let hh = helicity_hamiltonians(&params, FockSpace::new(n).unwrap()).unwrap();
        for h in [&hh.h_plus, &hh.h_minus, &hh.h_tilde_plus, &hh.h_tilde_minus] {
            let ev = h.matrix.interior_block().symmetric_eigenvalues();
            for k in 0..n - 1 {
                let e = params.omega_c * (k as f64 + 0.5);
                let count = ev.iter().filter(|&&x| (x - e).abs() < 1e-10).count();
                assert_eq!(count, n - 1, "level {k}");
            }
        }
    }

    #[test]
    fn helicity_vacuum_expectation() {
        let params = p(1.5, 1.1, 0.6, 1.0);
        let hh = helicity_hamiltonians(&params, FockSpace::new(5).unwrap()).unwrap();
        let want = 1.1 / 2.0 - 0.36 / 3.0;
        for h in [&hh.h_plus, &hh.h_minus, &hh.h_tilde_plus, &hh.h_tilde_minus] {
            assert!(cabs(h.matrix.get(0, 0) - C::new(want, 0.0)) < 1e-14);
        }
    }

    #[test]
    fn tilde_plus_differs_by_linear_terms() {
        let params = p(1.0, 1.3, 0.45, 1.0);
        let space = FockSpace::new(6).unwrap();
        let hh = helicity_hamiltonians(&params, space).unwrap();
        let ops = helicity_ops(space, &params).unwrap();
        let two = ProductSpace::new(vec![space, space]).unwrap();
        let lb = params.lambda_bar() / 2.0;
        let sym = (ops.get(HelicityOp::TildeAMinus) + ops.get(HelicityOp::TildeAMinusStar))
            .scale_real(lb)
            .embed(&two, 1)
            .unwrap();
        let anti = (ops.get(HelicityOp::AMinusStar) - ops.get(HelicityOp::AMinus))
            .scale(C::new(0.0, lb))
            .embed(&two, 1)
            .unwrap();
        let diff = &hh.h_tilde_plus.matrix - &hh.h_plus.matrix;
        let residual = &(&diff - &sym) + &anti;
        assert!(residual.max_abs() < 1e-13);
        // the opposite signs leave twice the linear terms behind
        let flipped = &(&diff + &sym) - &anti;
        assert!(flipped.max_abs() > 0.1);
    }

    #[test]
    fn split_and_helicity_oscillators_coincide() {
        let params = p(0.8, 1.7, 0.0, 1.0);
        let split = build_h1(&params, (5, 5)).unwrap();
        let hh = helicity_hamiltonians(&params, FockSpace::new(5).unwrap()).unwrap();
        assert!((&split.oscillator_part - &hh.h_plus.matrix).max_abs() < 1e-13);
    }

    #[test]
    fn decomposition_spectra() {
        let params = p(1.0, 1.3, 0.5, 1.0);
        let t = tensor_decompose_h(&params, 8).unwrap();
        let ev = t.h_d.hermitian_eigenvalues().unwrap();
        for (n, e) in ev.iter().take(7).enumerate() {
            assert!((e - 1.3 * (n as f64 + 0.5)).abs() < 1e-12);
            assert!((e - 0.65 - 1.3 * n as f64).abs() < 1e-12);
        }
        assert!((t.h_c.eval(0.0) + 0.125).abs() < 1e-15);
        let (a1, a2) = (0.3, -1.7);
        assert!((t.h_c.eval(a1) + t.h_c.eval(a2) - 2.0 * t.h_c.eval((a1 + a2) / 2.0)).abs() < 1e-14);
    }
}
