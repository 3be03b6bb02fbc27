mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wavestring::presets;
use wavestring::stability::{
    disturbance_gain, hinf_estimate, local_string_verdict, FrequencyGrid, Verdict, WaveCurve,
};
use wavestring::wave::{awtf_dc, awtf_eval_continued};
use wavestring::{AgentDynamics, Complex64, Polynomial, RationalTF, Tolerances};

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normalization_is_idempotent(num in coeffs(), den in coeffs(), shift in 0usize..3) {
        let mut d = vec![0.0; shift];
        d.extend(den.iter().copied());
        if let Ok(tf) = RationalTF::from_coeffs(&num, &d) {
            let again = RationalTF::normalize(tf.num(), &tf.full_den()).unwrap();
            prop_assert_eq!(&again, &tf);
            prop_assert_eq!(tf.den().coeff(0), 1.0);
            prop_assert!(tf.num().coeff(0) != 0.0);
        }
    }

    #[test]
    fn evaluation_matches_polynomial_ratio(
        num in coeffs(), den in coeffs(), re in -2.0..2.0f64, im in 0.1..10.0f64,
    ) {
        if let Ok(tf) = RationalTF::from_coeffs(&num, &den) {
            let s = Complex64::new(re, im);
            let direct = Polynomial::new(num.clone()).eval(s) / Polynomial::new(den.clone()).eval(s);
            if let Ok(v) = tf.eval(s) {
                prop_assert!((v - direct).norm() <= 1e-9 * direct.norm().max(1.0));
            }
        }
    }

    #[test]
    fn awtf_invariants(seed in any::<u64>(), re in -0.3..2.0f64, im in 0.05..30.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_dynamics(&mut rng);
        let tol = Tolerances::default();
        let s = Complex64::new(re, im);
        let w = awtf_eval_continued(&d, s, &tol).unwrap();
        let scale = 1.0 + w.beta.norm() * w.g_plus.norm() + w.ratio.norm();
        prop_assert!(w.residual_plus() <= 1e-9 * scale);
        let scale_m = 1.0 + w.alpha.norm() * w.g_minus.norm() + 1.0 / w.ratio.norm();
        prop_assert!(w.residual_minus() <= 1e-9 * scale_m);
        // The two roots of each quadratic multiply to its constant term.
        let other = w.beta - w.g_plus;
        prop_assert!((w.g_plus * other - w.ratio).norm() <= 1e-9 * w.ratio.norm().max(1.0));
        // Proper root: never the larger one.
        prop_assert!(w.g_plus.norm() <= other.norm() * (1.0 + 1e-6));
        let wc = awtf_eval_continued(&d, s.conj(), &tol).unwrap();
        prop_assert!((wc.g_plus - w.g_plus.conj()).norm() <= 1e-12 * (1.0 + w.g_plus.norm()));
        prop_assert!((wc.g_minus - w.g_minus.conj()).norm() <= 1e-12 * (1.0 + w.g_minus.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn refinement_never_lowers_norm(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_dynamics(&mut rng);
        let tol = Tolerances::default();
        let mut grid = FrequencyGrid::new(1e-3, 1e2, 64).unwrap();
        let mut last = 0.0;
        for _ in 0..3 {
            let omegas = grid.omegas();
            let curve = WaveCurve::sweep(&d, &omegas, &tol).unwrap();
            let est = hinf_estimate(|w| Ok(curve.at(w)?.g_plus), &grid, tol.tol_omega).unwrap();
            // Golden-section search stops at a tol_omega bracket, which bounds
            // how far two refinements of the same peak may disagree.
            prop_assert!(est.value >= last * (1.0 - tol.tol_omega), "{} < {}", est.value, last);
            last = est.value;
            grid = grid.doubled();
        }
    }

    #[test]
    fn stable_verdict_implies_bounded_norms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_dynamics(&mut rng);
        let tol = Tolerances::default();
        let grid = FrequencyGrid::new(1e-4, 1e3, 400).unwrap();
        if let Ok(v) = local_string_verdict(&d, &grid, &tol) {
            if v.locally_string_stable == Verdict::Stable {
                prop_assert!(v.norm_gp.value <= 1.0 + tol.tol_norm);
                prop_assert!(v.norm_gm.value <= 1.0 + tol.tol_norm);
            }
        }
    }

    #[test]
    fn low_frequency_limit_is_dc_gain(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_pi_pair(&mut rng);
        let tol = Tolerances::default();
        let (gp0, gm0) = awtf_dc(&d).unwrap();
        let w = awtf_eval_continued(&d, Complex64::new(1e-8, 1e-8), &tol).unwrap();
        prop_assert!((w.g_plus - gp0).norm() <= 1e-3);
        prop_assert!((w.g_minus - gm0).norm() <= 1e-3);
    }
}

fn growth_holds(d: &AgentDynamics) -> bool {
    let tol = Tolerances::default();
    let v = local_string_verdict(d, &FrequencyGrid::default(), &tol).unwrap();
    if v.norm_gp.value <= 1.0 {
        return true;
    }
    let w = v.norm_gp.argmax_omega;
    let gains: Vec<f64> = [5, 10, 20, 40]
        .iter()
        .map(|&n| disturbance_gain(d, n, w, &tol).unwrap().to_last.norm())
        .collect();
    gains.windows(2).all(|p| p[1] > p[0])
}

#[test]
fn disturbance_gain_grows_with_size_when_forward_norm_exceeds_one() {
    assert!(growth_holds(&presets::scaled_asymmetric()));
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..10 {
        let d = common::random_pi_pair(&mut rng);
        assert!(growth_holds(&d));
    }
}

#[test]
fn bounded_disturbance_gain_for_symmetric() {
    let tol = Tolerances::default();
    let d = presets::symmetric();
    let base = disturbance_gain(&d, 5, 0.05, &tol).unwrap().to_last.norm();
    for n in [10, 20, 40] {
        let g = disturbance_gain(&d, n, 0.05, &tol).unwrap().to_last.norm();
        assert!(g <= 10.0 * base, "N = {n}: {g} vs {base}");
    }
}
