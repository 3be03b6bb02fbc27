//! Asymptotic stability of the AWTFs (Nyquist test on `T_G`), H-infinity norm
//! estimates on the imaginary axis, local string stability verdicts, the
//! time-headway dominant term and disturbance gains of a finite path.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tf::{check_assumptions, low_order_coeffs, positional_symmetry, AgentDynamics};
use crate::tolerances::Tolerances;
use crate::wave::{awtf_eval, awtf_eval_continued, path_wave_gains, reflection_from, t_g_eval, WaveSample};

/// Logarithmically spaced frequencies `omega_min..=omega_max` (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrequencyGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        Self {
            omega_min: 1e-4,
            omega_max: 1e3,
            points: 2000,
        }
    }
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, points: usize) -> Result<Self> {
        let g = Self {
            omega_min,
            omega_max,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_min > 0.0 && self.omega_min.is_finite()) {
            return Err(Error::InvalidGrid(format!("omega_min = {} must be > 0", self.omega_min)));
        }
        if !(self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "omega_max = {} must exceed omega_min = {}",
                self.omega_max, self.omega_min
            )));
        }
        if self.points < 16 {
            return Err(Error::InvalidGrid(format!("points = {} must be >= 16", self.points)));
        }
        Ok(())
    }

    /// Grid with `2 (points - 1) + 1` points containing every current point.
    pub fn doubled(&self) -> Self {
        Self {
            points: 2 * (self.points - 1) + 1,
            ..*self
        }
    }

    pub fn omegas(&self) -> Vec<f64> {
        let (a, b) = (self.omega_min.ln(), self.omega_max.ln());
        let n = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == n {
                    self.omega_max
                } else {
                    (a + (b - a) * i as f64 / n as f64).exp()
                }
            })
            .collect()
    }
}

/// AWTF samples on `jω` for a whole grid, evaluated from high to low frequency
/// so that each sample continues the previous one.
#[derive(Debug, Clone)]
pub struct WaveCurve<'a> {
    dynamics: &'a AgentDynamics,
    tol: Tolerances,
    omegas: Vec<f64>,
    samples: Vec<WaveSample>,
}

impl<'a> WaveCurve<'a> {
    pub fn sweep(d: &'a AgentDynamics, omegas: &[f64], tol: &Tolerances) -> Result<Self> {
        let mut samples: Vec<WaveSample> = Vec::with_capacity(omegas.len());
        for &w in omegas.iter().rev() {
            let s = Complex64::new(0.0, w);
            let sample = match samples.last() {
                Some(prev) => awtf_eval(d, s, Some(prev), tol)?,
                None => awtf_eval_continued(d, s, tol)?,
            };
            samples.push(sample);
        }
        samples.reverse();
        Ok(Self {
            dynamics: d,
            tol: *tol,
            omegas: omegas.to_vec(),
            samples,
        })
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn samples(&self) -> &[WaveSample] {
        &self.samples
    }

    /// Off-grid evaluation. Where the two roots tie in modulus the choice is
    /// made by walking down from the grid sample just above `omega`, the same
    /// direction as the sweep, so the answer does not depend on grid spacing.
    pub fn at(&self, omega: f64) -> Result<WaveSample> {
        let idx = match self.omegas.binary_search_by(|w| w.total_cmp(&omega)) {
            Ok(i) => return Ok(self.samples[i]),
            Err(i) => i,
        };
        let s = Complex64::new(0.0, omega);
        match awtf_eval(self.dynamics, s, None, &self.tol) {
            Err(Error::BranchAmbiguous(_)) => {}
            other => return other,
        }
        if idx >= self.omegas.len() {
            return awtf_eval_continued(self.dynamics, s, &self.tol);
        }
        let top = self.omegas[idx];
        let steps = ((top / omega).ln() / TIE_WALK_STEP).ceil().max(1.0) as usize;
        let mut prev = self.samples[idx];
        for k in 1..=steps {
            let w = top * (omega / top).powf(k as f64 / steps as f64);
            let w = if k == steps { omega } else { w };
            prev = awtf_eval(self.dynamics, Complex64::new(0.0, w), Some(&prev), &self.tol)?;
        }
        Ok(prev)
    }
}

/// Log-frequency step used when continuing through a modulus tie.
const TIE_WALK_STEP: f64 = 1e-3;

/// Result of the Nyquist test on `T_G(jω)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NyquistResult {
    pub pass: bool,
    /// Frequencies (rad/s) where the curve meets the non-positive real axis.
    pub crossings: Vec<f64>,
}

const MAX_REFINE_DEPTH: usize = 40;

struct NyquistScan<'a> {
    d: &'a AgentDynamics,
    tol: &'a Tolerances,
    crossings: Vec<f64>,
}

impl NyquistScan<'_> {
    fn tg(&self, omega: f64) -> Result<Complex64> {
        t_g_eval(self.d, Complex64::new(0.0, omega))
    }

    fn on_axis(&self, t: Complex64) -> bool {
        t.re <= self.tol.tol_axis && t.im.abs() <= self.tol.tol_axis * t.norm().max(1.0)
    }

    /// Locates the sign change of `Im T_G` in `[lo, hi]` and records it if the
    /// real part there is non-positive.
    fn refine_crossing(&mut self, mut lo: f64, mut hi: f64, mut im_lo: f64) -> Result<()> {
        while hi / lo - 1.0 > self.tol.tol_omega {
            let mid = (lo * hi).sqrt();
            let im_mid = self.tg(mid)?.im;
            if im_mid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (im_mid > 0.0) == (im_lo > 0.0) {
                lo = mid;
                im_lo = im_mid;
            } else {
                hi = mid;
            }
        }
        let omega = (lo * hi).sqrt();
        if self.tg(omega)?.re <= self.tol.tol_axis {
            self.crossings.push(omega);
        }
        Ok(())
    }

    fn scan_pair(&mut self, w0: f64, t0: Complex64, w1: f64, t1: Complex64, depth: usize) -> Result<()> {
        if t0.im * t1.im < 0.0 {
            self.refine_crossing(w0, w1, t0.im)?;
        }
        let jump = (t1 / t0).arg().abs();
        if jump > FRAC_PI_2 {
            if depth >= MAX_REFINE_DEPTH {
                return Err(Error::GridTooCoarse { omega: w0, jump });
            }
            let mid = (w0 * w1).sqrt();
            let tm = self.tg(mid)?;
            if self.on_axis(tm) {
                self.crossings.push(mid);
                return Ok(());
            }
            // Sign changes were handled above on the full interval; the halves
            // only need the phase check.
            let n_before = self.crossings.len();
            self.scan_pair_phase_only(w0, t0, mid, tm, depth + 1)?;
            if self.crossings.len() == n_before {
                self.scan_pair_phase_only(mid, tm, w1, t1, depth + 1)?;
            }
        }
        Ok(())
    }

    fn scan_pair_phase_only(
        &mut self,
        w0: f64,
        t0: Complex64,
        w1: f64,
        t1: Complex64,
        depth: usize,
    ) -> Result<()> {
        let jump = (t1 / t0).arg().abs();
        if jump <= FRAC_PI_2 {
            return Ok(());
        }
        if depth >= MAX_REFINE_DEPTH {
            return Err(Error::GridTooCoarse { omega: w0, jump });
        }
        let mid = (w0 * w1).sqrt();
        let tm = self.tg(mid)?;
        if self.on_axis(tm) {
            self.crossings.push(mid);
            return Ok(());
        }
        self.scan_pair_phase_only(w0, t0, mid, tm, depth + 1)?;
        self.scan_pair_phase_only(mid, tm, w1, t1, depth + 1)
    }
}

/// Sufficient test for asymptotic stability of the AWTFs: the Nyquist plot of
/// `T_G(jω)` must not meet the non-positive real axis.
///
/// Only `ω > 0` is scanned; negative frequencies mirror it. Near `ω = 0` the
/// integrators send `T_G` to infinity and at `ω -> ∞` it tends to 1, so
/// neither end contributes a crossing. Adjacent samples whose phase differs by
/// more than π/2 are subdivided; if that does not settle the phase the grid is
/// reported as too coarse.
pub fn nyquist_axis_test(
    d: &AgentDynamics,
    grid: &FrequencyGrid,
    tol: &Tolerances,
) -> Result<NyquistResult> {
    grid.validate()?;
    let omegas = grid.omegas();
    let values = omegas
        .iter()
        .map(|&w| t_g_eval(d, Complex64::new(0.0, w)))
        .collect::<Result<Vec<_>>>()?;

    let mut scan = NyquistScan {
        d,
        tol,
        crossings: Vec::new(),
    };

    let mut in_run = false;
    for (&w, &t) in omegas.iter().zip(&values) {
        let hit = scan.on_axis(t);
        if hit && !in_run {
            scan.crossings.push(w);
        }
        in_run = hit;
    }
    for i in 0..omegas.len() - 1 {
        let (t0, t1) = (values[i], values[i + 1]);
        if t0.im * t1.im < 0.0 {
            scan.refine_crossing(omegas[i], omegas[i + 1], t0.im)?;
        }
    }
    if scan.crossings.is_empty() {
        for i in 0..omegas.len() - 1 {
            scan.scan_pair(omegas[i], values[i], omegas[i + 1], values[i + 1], 0)?;
        }
    }

    let mut crossings = scan.crossings;
    crossings.sort_by(f64::total_cmp);
    crossings.dedup_by(|a, b| (*a / *b - 1.0).abs() <= 10.0 * tol.tol_omega);
    Ok(NyquistResult {
        pass: crossings.is_empty(),
        crossings,
    })
}

/// Estimated `sup |T(jω)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub argmax_omega: f64,
    /// Whether golden-section refinement ran around the grid maximum.
    pub refined: bool,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Grid maximum of `|eval(ω)|` followed by golden-section refinement (in
/// `ln ω`) on the two grid intervals around it.
pub fn hinf_estimate<F>(mut eval: F, grid: &FrequencyGrid, tol_omega: f64) -> Result<NormEstimate>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    grid.validate()?;
    let omegas = grid.omegas();
    let mut best = (f64::NEG_INFINITY, omegas[0]);
    let mut best_idx = 0;
    for (i, &w) in omegas.iter().enumerate() {
        let m = eval(w)?.norm();
        if m > best.0 {
            best = (m, w);
            best_idx = i;
        }
    }

    let lo = omegas[best_idx.saturating_sub(1)];
    let hi = omegas[(best_idx + 1).min(omegas.len() - 1)];
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut mag = |x: f64| -> Result<f64> { Ok(eval(x.exp())?.norm()) };

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = mag(x1)?;
    let mut f2 = mag(x2)?;
    while (b - a).exp() - 1.0 > tol_omega {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = mag(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = mag(x2)?;
        }
    }
    for (f, x) in [(f1, x1), (f2, x2)] {
        if f > best.0 {
            best = (f, x.exp());
        }
    }
    Ok(NormEstimate {
        value: best.0,
        argmax_omega: best.1,
        refined: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    /// Norm within `tol_norm` of 1 at a peak away from DC.
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    /// Outcome of the Nyquist test; `false` means stability was not certified.
    pub awtf_stable: bool,
    pub nyquist_crossings: Vec<f64>,
    pub locally_string_stable: Verdict,
    pub norm_gp: NormEstimate,
    pub norm_gm: NormEstimate,
    /// Two integrators with asymmetric positional coupling at constant spacing.
    pub theorem2_triggered: bool,
    pub notes: Vec<String>,
}

/// Local string stability: both AWTFs asymptotically stable with H-infinity
/// norm at most one.
pub fn local_string_verdict(
    d: &AgentDynamics,
    grid: &FrequencyGrid,
    tol: &Tolerances,
) -> Result<StabilityVerdict> {
    let report = check_assumptions(d, tol.tol_crhp);
    if !report.passes() {
        return Err(Error::AssumptionViolated(report.violations.join("; ")));
    }
    let nyquist = nyquist_axis_test(d, grid, tol)?;
    let omegas = grid.omegas();
    let curve = WaveCurve::sweep(d, &omegas, tol)?;
    let norm_gp = hinf_estimate(|w| Ok(curve.at(w)?.g_plus), grid, tol.tol_omega)?;
    let norm_gm = hinf_estimate(|w| Ok(curve.at(w)?.g_minus), grid, tol.tol_omega)?;
    let peak = if norm_gp.value >= norm_gm.value { norm_gp } else { norm_gm };

    let mut notes = Vec::new();
    if !nyquist.pass {
        notes.push(format!(
            "Nyquist plot of T_G meets the non-positive real axis at omega = {:?}; \
             asymptotic stability of the AWTFs is not certified",
            nyquist.crossings
        ));
    }

    let theorem2_triggered =
        d.integrators() == 2 && !positional_symmetry(d, tol.tol_dc) && d.h == 0.0;
    let verdict = if theorem2_triggered {
        notes.push(format!(
            "two integrators with asymmetric positional coupling (kappa = {}): locally string unstable",
            low_order_coeffs(d).kappa
        ));
        if peak.value > 1.0 {
            notes.push(format!(
                "confirmed numerically: peak AWTF gain {} at omega = {}",
                peak.value, peak.argmax_omega
            ));
        } else {
            notes.push(format!(
                "norm estimates did not show a gain above one on the grid (peak {}); widen the grid towards omega = 0",
                peak.value
            ));
        }
        Verdict::Unstable
    } else if !nyquist.pass || peak.value > 1.0 + tol.tol_norm {
        Verdict::Unstable
    } else if peak.value > 1.0 {
        notes.push(format!(
            "peak AWTF gain {} lies within tol_norm above one",
            peak.value
        ));
        Verdict::Marginal
    } else if peak.value >= 1.0 - tol.tol_norm && peak.argmax_omega > omegas[1] {
        notes.push(format!(
            "peak AWTF gain {} within tol_norm of one away from DC (omega = {})",
            peak.value, peak.argmax_omega
        ));
        Verdict::Marginal
    } else {
        Verdict::Stable
    };

    Ok(StabilityVerdict {
        awtf_stable: nyquist.pass,
        nyquist_crossings: nyquist.crossings,
        locally_string_stable: verdict,
        norm_gp,
        norm_gm,
        theorem2_triggered,
        notes,
    })
}

/// Coefficient of `ω^2` in the low-frequency expansion that decides whether
/// `Re G+,H(jω) > 1` under the time-headway policy:
/// `l_x1 (kappa - 1)^2 + h k_y1 (1 - kappa) - h^2 kappa^2`.
pub fn headway_dominant_term(d: &AgentDynamics) -> f64 {
    let c = low_order_coeffs(d);
    let h = d.h;
    c.l_x1 * (c.kappa - 1.0).powi(2) + h * c.k_y1 * (1.0 - c.kappa) - h * h * c.kappa * c.kappa
}

/// Smallest `h >= 0` beyond which the dominant term stays negative.
pub fn headway_threshold(d: &AgentDynamics) -> f64 {
    let c = low_order_coeffs(d);
    let a = -c.kappa * c.kappa;
    let b = c.k_y1 * (1.0 - c.kappa);
    let c0 = c.l_x1 * (c.kappa - 1.0).powi(2);
    let disc = b * b - 4.0 * a * c0;
    if a == 0.0 || disc < 0.0 {
        return 0.0;
    }
    // a < 0: the quadratic is negative beyond its larger root.
    let r1 = (-b + disc.sqrt()) / (2.0 * a);
    let r2 = (-b - disc.sqrt()) / (2.0 * a);
    r1.max(r2).max(0.0)
}

/// Disturbance transfer functions of a path with `n_agents` followers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisturbanceGain {
    /// `X_N / Δ_1 = (G+^N + T_N G+^N) / (1 - T_N G-^(N-1) T_1 G+^(N-1))`.
    pub to_last: Complex64,
    /// `G-^(N-1) (1 + T_1) / (1 - T_N G-^(N-1) T_1 G+^(N-1))`, the factor of
    /// `X_1 / Δ_N` multiplying the unresolved `B_N / Δ_N`.
    pub from_last_factor: Complex64,
}

pub fn disturbance_gain(
    d: &AgentDynamics,
    n_agents: usize,
    omega: f64,
    tol: &Tolerances,
) -> Result<DisturbanceGain> {
    if n_agents < 3 {
        return Err(Error::InvalidTopology(format!(
            "a path needs at least 3 followers, got {n_agents}"
        )));
    }
    let s = Complex64::new(0.0, omega);
    let sample = awtf_eval_continued(d, s, tol)?;
    let refl = reflection_from(&sample, tol)?;
    let (forward, _) = path_wave_gains(&sample, &refl, n_agents, n_agents);
    let n = n_agents as i32;
    let round_trip = 1.0
        - refl.t_n
            * sample.g_minus.powi(n - 1)
            * refl.t1
            * sample.g_plus.powi(n - 1);
    Ok(DisturbanceGain {
        to_last: forward * (1.0 + refl.t_n),
        from_last_factor: sample.g_minus.powi(n - 1) * (1.0 + refl.t1) / round_trip,
    })
}

/// Largest of `|G+(jω)|`, `|G-(jω)|` over the given frequencies.
pub fn max_awtf_gain(d: &AgentDynamics, omegas: &[f64], tol: &Tolerances) -> Result<f64> {
    let curve = WaveCurve::sweep(d, omegas, tol)?;
    Ok(curve
        .samples()
        .iter()
        .map(|w| w.g_plus.norm().max(w.g_minus.norm()))
        .fold(0.0, f64::max))
}

/// Phase of `T_G` wrapped to `(-π, π]`, used by the coarse-grid guard.
pub fn wrapped_phase_step(a: Complex64, b: Complex64) -> f64 {
    let d = b.arg() - a.arg();
    if d > PI {
        d - 2.0 * PI
    } else if d <= -PI {
        d + 2.0 * PI
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::tf::RationalTF;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn grid_validation() {
        assert!(FrequencyGrid::new(0.0, 1.0, 100).is_err());
        assert!(FrequencyGrid::new(1.0, 1.0, 100).is_err());
        assert!(FrequencyGrid::new(1e-3, 1.0, 15).is_err());
        let g = FrequencyGrid::new(1e-3, 1e2, 16).unwrap();
        let w = g.omegas();
        assert_eq!(w.len(), 16);
        assert!((w[0] - 1e-3).abs() < 1e-18);
        assert_eq!(w[15], 1e2);
    }

    #[test]
    fn doubled_grid_is_nested() {
        let g = FrequencyGrid::new(1e-2, 1e1, 33).unwrap();
        let coarse = g.omegas();
        let fine = g.doubled().omegas();
        for (i, w) in coarse.iter().enumerate() {
            assert!((fine[2 * i] / w - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn nyquist_passes_for_symmetric() {
        let g = FrequencyGrid::new(1e-4, 1e3, 4000).unwrap();
        let r = nyquist_axis_test(&presets::symmetric(), &g, &tol()).unwrap();
        assert!(r.pass, "{:?}", r.crossings);
    }

    #[test]
    fn nyquist_fails_for_undamped_double_integrator() {
        // M = 1/s^2: T_G(jω) = 1 - 4/ω^2 lies on the negative real axis for ω < 2.
        let m = RationalTF::from_coeffs(&[1.0], &[0.0, 0.0, 1.0]).unwrap();
        let d = AgentDynamics::new(m.clone(), m);
        let r = nyquist_axis_test(&d, &FrequencyGrid::default(), &tol()).unwrap();
        assert!(!r.pass);
        assert!(r.crossings[0] < 2.0);
    }

    #[test]
    fn nyquist_negative_gain_double_integrator_stays_positive() {
        // M = -1/s^2: T_G(jω) = 1 + 4/ω^2 > 0.
        let m = RationalTF::from_coeffs(&[-1.0], &[0.0, 0.0, 1.0]).unwrap();
        let d = AgentDynamics::new(m.clone(), m);
        let r = nyquist_axis_test(&d, &FrequencyGrid::default(), &tol()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn nyquist_detects_scaled_asymmetric_crossing() {
        // Crossing located with an independent dense scan near 0.344 rad/s.
        let r = nyquist_axis_test(&presets::scaled_asymmetric(), &FrequencyGrid::default(), &tol())
            .unwrap();
        assert!(!r.pass);
        assert_eq!(r.crossings.len(), 1);
        assert!((r.crossings[0] - 0.344).abs() < 1e-3, "{:?}", r.crossings);
    }

    #[test]
    fn hinf_of_constant() {
        let est = hinf_estimate(|_| Ok(Complex64::new(0.5, 0.0)), &FrequencyGrid::default(), 1e-9)
            .unwrap();
        assert_eq!(est.value, 0.5);
    }

    #[test]
    fn hinf_refines_resonance_peak() {
        // 1/(s^2 + 0.02 s + 1): peak 1/(2ζ sqrt(1-ζ^2)) at sqrt(1-2ζ^2), ζ = 0.01.
        let zeta: f64 = 0.01;
        let g = FrequencyGrid::new(0.1, 10.0, 64).unwrap();
        let est = hinf_estimate(
            |w| {
                let s = Complex64::new(0.0, w);
                Ok(1.0 / (s * s + 2.0 * zeta * s + 1.0))
            },
            &g,
            1e-10,
        )
        .unwrap();
        let exact = 1.0 / (2.0 * zeta * (1.0 - zeta * zeta).sqrt());
        assert!((est.value - exact).abs() < 1e-6 * exact, "{} vs {exact}", est.value);
        assert!((est.argmax_omega - (1.0 - 2.0 * zeta * zeta).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn verdicts_for_reference_pairs() {
        let g = FrequencyGrid::default();
        let a = local_string_verdict(&presets::symmetric(), &g, &tol()).unwrap();
        assert_eq!(a.locally_string_stable, Verdict::Stable);
        assert!(!a.theorem2_triggered);

        let b = local_string_verdict(&presets::scaled_asymmetric(), &g, &tol()).unwrap();
        assert_eq!(b.locally_string_stable, Verdict::Unstable);
        assert!(b.theorem2_triggered);
        assert!(b.norm_gp.value > 1.0);
        assert!(b.norm_gp.argmax_omega < 1.0);

        let c = local_string_verdict(&presets::velocity_asymmetric(), &g, &tol()).unwrap();
        assert!(matches!(c.locally_string_stable, Verdict::Stable | Verdict::Marginal));
        assert!(c.norm_gp.value <= 1.0 + 1e-3);
    }

    #[test]
    fn verdict_rejects_assumption_violation() {
        let mf = RationalTF::from_coeffs(&[1.0], &[0.0, 1.0]).unwrap();
        let mr = RationalTF::from_coeffs(&[1.0], &[0.0, 0.0, 1.0]).unwrap();
        let err = local_string_verdict(&AgentDynamics::new(mf, mr), &FrequencyGrid::default(), &tol());
        assert!(matches!(err, Err(Error::AssumptionViolated(_))));
    }

    #[test]
    fn headway_term_examples() {
        let c = low_order_coeffs(&presets::scaled_asymmetric());
        let d0 = presets::scaled_asymmetric();
        assert_eq!(headway_dominant_term(&d0), c.l_x1 * (c.kappa - 1.0).powi(2));
        assert!(headway_dominant_term(&d0) > 0.0);

        let sym = presets::symmetric().with_headway(0.7);
        assert!((headway_dominant_term(&sym) + 0.49).abs() < 1e-15);

        let h_star = headway_threshold(&d0);
        assert!(h_star > 0.0);
        assert!(headway_dominant_term(&d0.clone().with_headway(h_star * 0.99)) > 0.0);
        assert!(headway_dominant_term(&d0.with_headway(h_star * 1.01)) < 0.0);
    }

    #[test]
    fn disturbance_gain_growth_for_unstable_pair() {
        let d = presets::scaled_asymmetric();
        let g: Vec<f64> = [10, 20, 40]
            .iter()
            .map(|&n| disturbance_gain(&d, n, 0.01, &tol()).unwrap().to_last.norm())
            .collect();
        assert!(g[0] < g[1] && g[1] < g[2], "{g:?}");
    }

    #[test]
    fn disturbance_gain_rejects_short_paths() {
        assert!(disturbance_gain(&presets::symmetric(), 2, 0.1, &tol()).is_err());
    }

    #[test]
    fn phase_step_wraps() {
        let a = Complex64::from_polar(1.0, 3.0);
        let b = Complex64::from_polar(1.0, -3.0);
        assert!((wrapped_phase_step(a, b) - (2.0 * PI - 6.0)).abs() < 1e-12);
    }
}
