use gklandau::displacement::{
    displacement_u, infinitesimal_displacement, two_mode_amplitude, two_mode_cs, weyl_relation_defect,
    DisplacementParams, Mode,
};
use gklandau::fock::{commutator, ladder, FockSpace, ModelParams, OperatorMatrix, ProductSpace};
use gklandau::gkcs::{
    action_continuous, action_identity_discrete, continuous_norm, evolve, family_norm, invert_action, GkCsLabel,
};
use gklandau::numerics::{erf, erfc, Bound, Integrator, Tolerance};
use gklandau::wigner::{wigner_point, GridSpec};
use gklandau::C;
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn label_strategy() -> impl Strategy<Value = GkCsLabel<f64>> {
    (
        0.0..4.0f64,
        -7.0..7.0f64,
        0.0..2.0f64,
        -7.0..7.0f64,
        0usize..5,
        0.3..3.0f64,
        -5.0..5.0f64,
        0.5..2.0f64,
    )
        .prop_map(|(j, gamma, jp, gammap, l, k1, theta1, beta)| GkCsLabel {
            j,
            gamma,
            jp,
            gammap,
            l,
            k1,
            theta1,
            beta,
        })
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn erf_is_odd_and_complements(x in -6.0..6.0f64) {
        prop_assert!((erf(x) + erf(-x)).abs() < 1e-16);
        prop_assert!((erf(x) + erfc(x).unwrap() - 1.0).abs() < 2e-16);
    }

    #[test]
    fn adaptive_integrates_cubics(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64, w in 0.1..3.0f64) {
        let integ = Integrator::new(Tolerance::new(1e-14, 1e-13).unwrap());
        let est = integ.integrate_real(|x| a + b * x + c * x * x * x, 0.0, Bound::Finite(w)).unwrap();
        let want = a * w + b * w * w / 2.0 + c * w.powi(4) / 4.0;
        prop_assert!((est.value - want).abs() < 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn ladder_commutator_on_interior(mass in 0.2..3.0f64, omega in 0.2..3.0f64, hbar in 0.5..2.0f64, dim in 3usize..25) {
        let params = ModelParams::new(mass, omega, 0.0, hbar, 1.0).unwrap();
        let (lower, raise) = ladder(FockSpace::new(dim).unwrap(), params.ladder_scale()).unwrap();
        let comm = commutator(&lower, &raise).unwrap();
        let target = OperatorMatrix::identity(FockSpace::new(dim).unwrap()).scale_real(2.0 * mass * omega * hbar);
        let d = (&comm - &target).interior_max_abs();
        prop_assert!(d <= 1e-10 * (2.0 * mass * omega * hbar * dim as f64));
    }

    #[test]
    fn family_norm_is_one(label in label_strategy()) {
        let n = family_norm(&label).unwrap();
        prop_assert!((n - 1.0).abs() < 1e-8, "norm {}", n);
    }

    #[test]
    fn evolution_is_additive(label in label_strategy(), t1 in -5.0..5.0f64, t2 in -5.0..5.0f64, omega in 0.2..3.0f64) {
        let p = ModelParams::new(1.0, omega, 0.3, 1.0, 1.0).unwrap();
        let a = evolve(&evolve(&label, t1, &p), t2, &p);
        let b = evolve(&label, t1 + t2, &p);
        let dg = (a.gamma - b.gamma).rem_euclid(std::f64::consts::TAU);
        prop_assert!(dg.min(std::f64::consts::TAU - dg) < 1e-10);
        prop_assert!((a.theta1 - b.theta1).abs() < 1e-12);
        prop_assert!(a.gamma >= 0.0 && a.gamma < std::f64::consts::TAU);
    }

    #[test]
    fn action_identity_ignores_phases(label in label_strategy(), omega in 0.2..3.0f64) {
        let p = ModelParams::new(1.0, omega, 0.3, 1.0, 1.0).unwrap();
        let r = action_identity_discrete(&label, &p, 60).unwrap();
        prop_assert!(r.defect() <= 1e-8 + r.tail_bound);
    }

    #[test]
    fn general_norm_matches_oracle(k1 in 0.05..20.0f64, beta in 0.3..3.0f64) {
        let n = continuous_norm(k1, beta).unwrap();
        prop_assert!(n.general_matches);
        if k1 <= 1.0 {
            prop_assert!(n.abs_erf_matches);
        }
    }

    #[test]
    fn two_mode_amplitudes_match(zr in -1.0..1.0f64, zi in -1.0..1.0f64, wr in -1.0..1.0f64, wi in -1.0..1.0f64) {
        let s = ProductSpace::two_mode(36, 36).unwrap();
        let (z, w) = (C::new(zr, zi), C::new(wr, wi));
        let v = two_mode_cs(z, w, &s).unwrap();
        for n in 0..=12 {
            for l in 0..=12 - n {
                prop_assert!((v[n * 36 + l] - two_mode_amplitude(z, w, n, l)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn qp_label_round_trip(q in -5.0..5.0f64, p in -5.0..5.0f64) {
        let d = DisplacementParams::from_qp(q, p, Mode::B);
        let (q2, p2) = d.qp();
        prop_assert!((q - q2).abs() <= 1e-15 * (1.0 + q.abs()));
        prop_assert!((p - p2).abs() <= 1e-15 * (1.0 + p.abs()));
    }

    #[test]
    fn grid_shift_preserves_norm(values in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..40), k in -50i32..50) {
        let v: Vec<C<f64>> = values.iter().map(|&(a, b)| C::new(a, b)).collect();
        let s = infinitesimal_displacement(&v, 0.5, 0.5 * k as f64).unwrap();
        let mut n0: Vec<f64> = v.iter().map(|x| x.norm_sqr()).collect();
        let mut n1: Vec<f64> = s.iter().map(|x| x.norm_sqr()).collect();
        n0.sort_by(f64::total_cmp);
        n1.sort_by(f64::total_cmp);
        prop_assert_eq!(n0, n1);
        let back = infinitesimal_displacement(&s, 0.5, -0.5 * k as f64).unwrap();
        prop_assert_eq!(back, v);
    }
}

proptest! {
    #![proptest_config(cfg(12))]

    #[test]
    fn displacement_is_unitary(r in 0.0..1.5f64, phi in 0.0..6.3f64) {
        let u = displacement_u(C::from_polar(r, phi), FockSpace::new(40).unwrap()).unwrap();
        prop_assert!(u.unitarity_defect() < 1e-9);
    }

    #[test]
    fn weyl_relation(a in (-0.6..0.6f64, -0.6..0.6f64), b in (-0.6..0.6f64, -0.6..0.6f64)) {
        let d = weyl_relation_defect(C::new(a.0, a.1), C::new(b.0, b.1), FockSpace::new(40).unwrap()).unwrap();
        prop_assert!(d < 1e-8);
    }

    #[test]
    fn invert_action_round_trip(k1 in 0.2..5.0f64, beta in 0.5..2.0f64) {
        let t = action_continuous(k1, beta).unwrap();
        let k = invert_action(t, beta).unwrap();
        prop_assert!((k - k1).abs() < 1e-6 * k1.max(1.0));
    }

    #[test]
    fn wigner_transpose_symmetry(n in 0usize..5, l in 0usize..5, x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let spec = GridSpec::square(12.0, 3).unwrap();
        let a = wigner_point(n, l, x, y, &spec).unwrap();
        let b = wigner_point(l, n, -x, -y, &spec).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-10);
    }

    #[test]
    fn ground_dyad_is_gaussian(x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let spec = GridSpec::square(12.0, 3).unwrap();
        let v = wigner_point(0, 0, x, y, &spec).unwrap();
        let want = (-(x * x + y * y) / 4.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        prop_assert!((v - C::new(want, 0.0)).norm() < 1e-11);
    }
}

#[test]
fn single_precision_paths() {
    let p = ModelParams::<f32>::new(1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
    let (lower, raise) = ladder(FockSpace::new(8).unwrap(), p.ladder_scale()).unwrap();
    let comm = commutator(&lower, &raise).unwrap();
    let d = (&comm - &OperatorMatrix::identity(FockSpace::new(8).unwrap()).scale_real(2.0)).interior_max_abs();
    assert!(d < 1e-5);
    let u = displacement_u(C::new(0.3f32, 0.2), FockSpace::new(20).unwrap()).unwrap();
    assert!(u.unitarity_defect() < 1e-5);
    let n = continuous_norm(0.7f32, 1.0).unwrap();
    assert!((n.general - n.oracle).abs() < 1e-5);
}
