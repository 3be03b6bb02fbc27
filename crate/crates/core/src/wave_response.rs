//! Time-domain traces of the travelling waves by numerical inverse Laplace
//! transformation along a Bromwich line.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{build_network, default_dt, simulate, SimConfig, Topology};
use crate::tf::AgentDynamics;
use crate::tolerances::Tolerances;
use crate::wave::{awtf_eval, awtf_eval_continued, path_wave_gains, reflection_from, WaveSample};

/// Share of the spectrum (top end) whose energy is compared to the total.
const TAIL_FRACTION: f64 = 0.1;
/// Tail energy fraction above which the transform is rejected as non-decaying.
const TAIL_ENERGY_LIMIT: f64 = 1e-3;

/// Settings of the FFT-based inversion.
///
/// The transform is sampled at `s_k = sigma + j k 2π / T_p`, `k < samples`,
/// where the period `T_p = period_factor * t_final` keeps the wrap-around
/// error (of order `exp(-sigma T_p)`) far below the output interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseLaplaceConfig {
    pub t_final: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Bromwich abscissa; `2 / t_final` when absent.
    #[serde(default)]
    pub sigma: Option<f64>,
    /// Fraction of the spectrum, at the high end, under a cosine taper.
    #[serde(default = "default_window")]
    pub window: f64,
    #[serde(default = "default_period_factor")]
    pub period_factor: f64,
}

fn default_samples() -> usize {
    65536
}

fn default_window() -> f64 {
    0.1
}

fn default_period_factor() -> f64 {
    8.0
}

impl InverseLaplaceConfig {
    pub fn new(t_final: f64) -> Self {
        Self {
            t_final,
            samples: default_samples(),
            sigma: None,
            window: default_window(),
            period_factor: default_period_factor(),
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn sigma(&self) -> f64 {
        self.sigma.unwrap_or(2.0 / self.t_final)
    }

    pub fn period(&self) -> f64 {
        self.period_factor * self.t_final
    }

    /// Frequency spacing of the samples along the Bromwich line.
    pub fn d_omega(&self) -> f64 {
        2.0 * PI / self.period()
    }

    /// Sampling points in the order they are evaluated: highest frequency
    /// first, so a continuation hint chain starts far from the origin.
    pub fn points(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let (sigma, dw) = (self.sigma(), self.d_omega());
        (0..self.samples)
            .rev()
            .map(move |k| (k, Complex64::new(sigma, k as f64 * dw)))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInverseConfig(msg));
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("t_final = {} must be > 0", self.t_final));
        }
        if self.samples < 1024 || !self.samples.is_power_of_two() {
            return bad(format!("samples = {} must be a power of two >= 1024", self.samples));
        }
        if !(self.sigma() > 0.0 && self.sigma().is_finite()) {
            return bad(format!("sigma = {} must be > 0", self.sigma()));
        }
        if !(0.0..1.0).contains(&self.window) {
            return bad(format!("window = {} must lie in [0, 1)", self.window));
        }
        if !(self.period_factor >= 2.0) {
            return bad(format!("period_factor = {} must be >= 2", self.period_factor));
        }
        Ok(())
    }
}

/// Uniformly sampled real signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

fn taper(k: usize, cfg: &InverseLaplaceConfig) -> f64 {
    let k0 = ((1.0 - cfg.window) * cfg.samples as f64).floor() as usize;
    if k < k0 || cfg.window == 0.0 {
        1.0
    } else {
        let x = (k - k0) as f64 / (cfg.samples - k0) as f64;
        0.5 * (1.0 + (PI * x).cos())
    }
}

/// Inverts spectrum samples `values[k] = F(sigma + j k Δω)`.
fn invert(values: &[Complex64], cfg: &InverseLaplaceConfig) -> Result<TimeSeries> {
    let total: f64 = values.iter().map(|v| v.norm_sqr()).sum();
    let k0 = ((1.0 - TAIL_FRACTION) * cfg.samples as f64).floor() as usize;
    let tail: f64 = values[k0..].iter().map(|v| v.norm_sqr()).sum();
    if !total.is_finite() {
        return Err(Error::NonDecaying(f64::INFINITY));
    }
    if total > 0.0 && tail / total > TAIL_ENERGY_LIMIT {
        return Err(Error::NonDecaying(tail / total));
    }

    let mut buf: Vec<Complex64> = values
        .iter()
        .enumerate()
        .map(|(k, v)| v * taper(k, cfg))
        .collect();
    buf[0] *= 0.5;
    FftPlanner::new().plan_fft_inverse(cfg.samples).process(&mut buf);

    let dt = cfg.period() / cfg.samples as f64;
    let sigma = cfg.sigma();
    let scale = 2.0 / cfg.period();
    let n_out = (cfg.t_final / dt).floor() as usize + 1;
    let times: Vec<f64> = (0..n_out).map(|m| m as f64 * dt).collect();
    let values = times
        .iter()
        .zip(&buf)
        .map(|(t, c)| (sigma * t).exp() * scale * c.re)
        .collect();
    Ok(TimeSeries { times, values })
}

/// `f(t)` on `[0, t_final]` from an evaluator of its Laplace transform `F`,
/// which must be analytic for `Re s >= sigma`. `F` is called once per sample,
/// highest frequency first.
pub fn inverse_laplace<F>(mut f: F, cfg: &InverseLaplaceConfig) -> Result<TimeSeries>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    cfg.validate()?;
    let mut values = vec![Complex64::new(0.0, 0.0); cfg.samples];
    for (k, s) in cfg.points() {
        values[k] = f(s)?;
    }
    invert(&values, cfg)
}

/// AWTF samples on the Bromwich line, index `k` at `sigma + j k Δω`.
pub fn awtf_samples(
    d: &AgentDynamics,
    cfg: &InverseLaplaceConfig,
    tol: &Tolerances,
) -> Result<Vec<WaveSample>> {
    cfg.validate()?;
    let mut out: Vec<WaveSample> = Vec::with_capacity(cfg.samples);
    for (_, s) in cfg.points() {
        let sample = match out.last() {
            Some(prev) => awtf_eval(d, s, Some(prev), tol)?,
            None => awtf_eval_continued(d, s, tol)?,
        };
        out.push(sample);
    }
    out.reverse();
    Ok(out)
}

/// Step responses of the two waves at agent `n` of a path with `n_agents`
/// followers and their sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveComponents {
    pub times: Vec<f64>,
    /// Forward wave `a_n(t)`.
    pub a: Vec<f64>,
    /// Backward (reflected) wave `b_n(t)`.
    pub b: Vec<f64>,
    /// `x_n = a_n + b_n`.
    pub x: Vec<f64>,
}

/// Wave decomposition of the response of agent `n` to a unit leader step.
pub fn wave_components(
    d: &AgentDynamics,
    n_agents: usize,
    n: usize,
    cfg: &InverseLaplaceConfig,
    tol: &Tolerances,
) -> Result<WaveComponents> {
    if n == 0 || n > n_agents {
        return Err(Error::AgentIndex {
            index: n,
            max: n_agents,
        });
    }
    let samples = awtf_samples(d, cfg, tol)?;
    let mut a_spec = Vec::with_capacity(samples.len());
    let mut b_spec = Vec::with_capacity(samples.len());
    for sample in &samples {
        let refl = reflection_from(sample, tol)?;
        let (a, b) = path_wave_gains(sample, &refl, n_agents, n);
        a_spec.push(a / sample.s);
        b_spec.push(b / sample.s);
    }
    let a = invert(&a_spec, cfg)?;
    let b = invert(&b_spec, cfg)?;
    let x = a.values.iter().zip(&b.values).map(|(p, q)| p + q).collect();
    Ok(WaveComponents {
        times: a.times,
        a: a.values,
        b: b.values,
        x,
    })
}

/// Linear interpolation of `(xs, ys)` at `t` (clamped to the ends).
pub fn interpolate(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    match xs.binary_search_by(|x| x.total_cmp(&t)) {
        Ok(i) => ys[i],
        Err(0) => ys[0],
        Err(i) if i >= xs.len() => ys[xs.len() - 1],
        Err(i) => {
            let w = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
            ys[i - 1] + w * (ys[i] - ys[i - 1])
        }
    }
}

/// Largest gap over `[0, horizon]` between the simulated step response of
/// agent `n` in a path of `n_agents` followers and the pure forward wave
/// `G+^n / s`.
pub fn early_time_check(
    d: &AgentDynamics,
    n_agents: usize,
    n: usize,
    horizon: f64,
    tol: &Tolerances,
) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    if n > n_agents {
        return Err(Error::AgentIndex {
            index: n,
            max: n_agents,
        });
    }
    let cfg = InverseLaplaceConfig::new(horizon);
    let samples = awtf_samples(d, &cfg, tol)?;
    let spec: Vec<Complex64> = samples
        .iter()
        .map(|w| w.g_plus.powi(n as i32) / w.s)
        .collect();
    let forward = invert(&spec, &cfg)?;

    let net = build_network(&Topology::path(n_agents)?, d)?;
    let dt = default_dt(d);
    let traj = simulate(&net, &SimConfig::new(dt, horizon.max(10.0 * dt)))?;
    Ok(forward
        .times
        .iter()
        .zip(&forward.values)
        .map(|(&t, &v)| (interpolate(&traj.times, &traj.positions[n], t) - v).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_err_on(ts: &TimeSeries, lo: f64, hi: f64, exact: impl Fn(f64) -> f64) -> f64 {
        ts.times
            .iter()
            .zip(&ts.values)
            .filter(|(t, _)| **t >= lo && **t <= hi)
            .map(|(t, v)| (v - exact(*t)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn unit_step() {
        let cfg = InverseLaplaceConfig::new(40.0);
        let ts = inverse_laplace(|s| Ok(1.0 / s), &cfg).unwrap();
        assert!(max_err_on(&ts, 0.1, 36.0, |_| 1.0) <= 1e-3);
    }

    #[test]
    fn decaying_exponential() {
        let cfg = InverseLaplaceConfig::new(40.0);
        let ts = inverse_laplace(|s| Ok(1.0 / (s + 1.0)), &cfg).unwrap();
        assert!(max_err_on(&ts, 0.1, 36.0, |t| (-t).exp()) <= 1e-3);
    }

    #[test]
    fn delayed_ramp() {
        // e^{-2s}/s^2 is the ramp starting at t = 2.
        let cfg = InverseLaplaceConfig::new(20.0);
        let ts = inverse_laplace(|s| Ok((-2.0 * s).exp() / (s * s)), &cfg).unwrap();
        assert!(max_err_on(&ts, 0.0, 18.0, |t| (t - 2.0).max(0.0)) <= 1e-3);
    }

    #[test]
    fn non_decaying_rejected() {
        let cfg = InverseLaplaceConfig::new(10.0);
        let r = inverse_laplace(|_| Ok(Complex64::new(1.0, 0.0)), &cfg);
        assert!(matches!(r, Err(Error::NonDecaying(_))));
    }

    #[test]
    fn config_validation() {
        assert!(InverseLaplaceConfig::new(10.0).with_samples(1000).validate().is_err());
        assert!(InverseLaplaceConfig::new(10.0).with_samples(512).validate().is_err());
        assert!(InverseLaplaceConfig::new(0.0).validate().is_err());
        let mut c = InverseLaplaceConfig::new(10.0);
        c.sigma = Some(-1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn interpolation() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 10.0, 20.0];
        assert_eq!(interpolate(&xs, &ys, 0.25), 2.5);
        assert_eq!(interpolate(&xs, &ys, 5.0), 20.0);
        assert_eq!(interpolate(&xs, &ys, 1.0), 10.0);
    }
}
