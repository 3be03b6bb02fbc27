//! Random agent models shared by the acceptance and property tests.

#![allow(dead_code)]

use rand::Rng;
use wavestring::stability::{nyquist_axis_test, FrequencyGrid};
use wavestring::{check_assumptions, AgentDynamics, Polynomial, RationalTF, Tolerances};

/// Product of `(s/a + 1)` factors and damped quadratics with random stable
/// roots; constant term 1.
pub fn stable_poly<R: Rng>(rng: &mut R, degree: usize) -> Polynomial {
    let mut p = Polynomial::constant(1.0);
    let mut left = degree;
    while left > 0 {
        if left >= 2 && rng.gen_bool(0.5) {
            let wn: f64 = rng.gen_range(0.5..5.0);
            let zeta: f64 = rng.gen_range(0.2..1.5);
            p = p.mul(&Polynomial::new(vec![1.0, 2.0 * zeta / wn, 1.0 / (wn * wn)]));
            left -= 2;
        } else {
            let a: f64 = rng.gen_range(0.3..6.0);
            p = p.mul(&Polynomial::new(vec![1.0, 1.0 / a]));
            left -= 1;
        }
    }
    p
}

/// Strictly proper loop `k n(s) / (s^p d(s))` of total order at most 4 with
/// stable `n`, `d` and positive gain.
pub fn random_loop<R: Rng>(rng: &mut R, p: usize) -> RationalTF {
    let den_deg = rng.gen_range(0..=(4 - p));
    let order = p + den_deg;
    let num_deg = rng.gen_range(0..order);
    let gain: f64 = rng.gen_range(0.2..3.0);
    let num = stable_poly(rng, num_deg).scale(gain);
    let mut den = vec![0.0; p];
    den.extend_from_slice(stable_poly(rng, den_deg).coeffs());
    RationalTF::normalize(&num, &Polynomial::new(den)).expect("random loop is well formed")
}

/// Random pair of loops with a common integrator count of 1 or 2.
pub fn random_dynamics<R: Rng>(rng: &mut R) -> AgentDynamics {
    let p = rng.gen_range(1..=2);
    AgentDynamics::new(random_loop(rng, p), random_loop(rng, p))
}

/// PI control of `1 / (s (tau s + 1))` from both neighbours with different
/// integral gains: `M = (kp s + ki) / (s^2 (tau s + 1))`. Resampled until the
/// structural checks pass, the AWTFs are certified stable and
/// `|kappa - 1| >= 0.05`.
pub fn random_pi_pair<R: Rng>(rng: &mut R) -> AgentDynamics {
    let tol = Tolerances::default();
    let grid = FrequencyGrid::default();
    loop {
        let tau: f64 = rng.gen_range(0.1..1.0);
        let den = [0.0, 0.0, 1.0, tau];
        let (kpf, kif): (f64, f64) = (rng.gen_range(0.5..4.0), rng.gen_range(0.2..3.0));
        let (kpr, kir): (f64, f64) = (rng.gen_range(0.5..4.0), rng.gen_range(0.2..3.0));
        if (kif / kir - 1.0).abs() < 0.05 {
            continue;
        }
        let mf = RationalTF::from_coeffs(&[kif, kpf], &den).unwrap();
        let mr = RationalTF::from_coeffs(&[kir, kpr], &den).unwrap();
        let d = AgentDynamics::new(mf, mr);
        if !check_assumptions(&d, tol.tol_crhp).passes() {
            continue;
        }
        match nyquist_axis_test(&d, &grid, &tol) {
            Ok(r) if r.pass => return d,
            _ => continue,
        }
    }
}
