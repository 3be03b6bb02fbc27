//! Asymmetric wave transfer functions (AWTFs) `G+`, `G-`, their DC gains and
//! the boundary reflections of a finite path graph.
//!
//! `G+` solves `G^2 - beta G + M_f/M_r = 0` and `G-` solves
//! `G^2 - alpha G + M_r/M_f = 0`. The discriminant of both quadratics is
//! `T_G / M_r^2` (resp. `T_G / M_f^2`), so a single principal square root of
//! `T_G` serves both. Of the two roots the proper one is taken: the candidate
//! of smaller modulus, with ties resolved by continuity against a hint.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tf::{low_order_coeffs, AgentDynamics};
use crate::tolerances::Tolerances;

/// One evaluation of the AWTFs at complex frequency `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSample {
    pub s: Complex64,
    pub g_plus: Complex64,
    pub g_minus: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    /// `M_f(s) / M_r(s)`, the constant term of the `G+` quadratic.
    pub ratio: Complex64,
    /// Headway factor `1 + h s` (1 at constant spacing).
    pub c: Complex64,
    /// Set when continuity with the hint overrode the smaller-modulus choice.
    pub branch_flipped: bool,
}

impl WaveSample {
    /// `|G+^2 - beta G+ + M_f/M_r|`.
    pub fn residual_plus(&self) -> f64 {
        (self.g_plus * self.g_plus - self.beta * self.g_plus + self.ratio).norm()
    }

    /// `|G-^2 - alpha G- + M_r/M_f|`.
    pub fn residual_minus(&self) -> f64 {
        (self.g_minus * self.g_minus - self.alpha * self.g_minus + 1.0 / self.ratio).norm()
    }
}

/// Reflection transfer functions at the leader (`t1 = A_1/B_1`) and at the
/// rear end (`t_n = B_N/A_N`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSample {
    pub s: Complex64,
    pub t1: Complex64,
    pub t_n: Complex64,
}

fn loops(d: &AgentDynamics, s: Complex64) -> Result<(Complex64, Complex64)> {
    let (mf, mr) = d.eval(s).map_err(|_| Error::SingularSample(s))?;
    let zero = Complex64::new(0.0, 0.0);
    if mf == zero || mr == zero {
        return Err(Error::SingularSample(s));
    }
    Ok((mf, mr))
}

fn headway_factor(d: &AgentDynamics, s: Complex64) -> Complex64 {
    1.0 + d.h * s
}

/// `(alpha, beta)`; with `h > 0` the time-headway forms, where every coupling
/// term carries the factor `1 + h s`.
pub fn alpha_beta(d: &AgentDynamics, s: Complex64) -> Result<(Complex64, Complex64)> {
    let (mf, mr) = loops(d, s)?;
    let num = 1.0 + headway_factor(d, s) * (mf + mr);
    Ok((num / mf, num / mr))
}

fn discriminant(d: &AgentDynamics, mf: Complex64, mr: Complex64, s: Complex64) -> Complex64 {
    // (1 + c(mf+mr))^2 - 4 mf mr, expanded so that nothing cancels when
    // mf ~ mr near the origin poles.
    let c = headway_factor(d, s);
    let diff = mf - mr;
    1.0 + 2.0 * c * (mf + mr) + c * c * diff * diff + 4.0 * (c * c - 1.0) * mf * mr
}

/// `T_G(s) = (M_f - M_r)^2 + 2 M_f + 2 M_r + 1`.
///
/// For `h > 0` this returns the corresponding headway discriminant
/// `(1 + (1+hs)(M_f+M_r))^2 - 4 M_f M_r`, which reduces to `T_G` at `h = 0`.
pub fn t_g_eval(d: &AgentDynamics, s: Complex64) -> Result<Complex64> {
    let (mf, mr) = loops(d, s)?;
    Ok(discriminant(d, mf, mr, s))
}

/// Picks the proper root of `G^2 - b G + c = 0` given `root_diff = sqrt(b^2 - 4c)`.
fn proper_root(
    b: Complex64,
    root_diff: Complex64,
    c: Complex64,
    hint: Option<Complex64>,
    tol_tie: f64,
    s: Complex64,
) -> Result<(Complex64, bool)> {
    let r1 = 0.5 * (b + root_diff);
    let r2 = 0.5 * (b - root_diff);
    // The larger root comes without cancellation; the smaller one from the
    // product of the roots.
    let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
    if big.norm() == 0.0 {
        return Ok((big, false));
    }
    let small = c / big;
    let gap = (big.norm() - small.norm()).abs() / big.norm();
    if gap > tol_tie {
        return Ok((small, false));
    }
    match hint {
        Some(h) if (big - h).norm() < (small - h).norm() => Ok((big, true)),
        Some(_) => Ok((small, false)),
        None => Err(Error::BranchAmbiguous(s)),
    }
}

/// Evaluates `G+` and `G-` at `s`. `hint` is the previous sample along a
/// sweep and only matters when the two roots tie in modulus.
pub fn awtf_eval(
    d: &AgentDynamics,
    s: Complex64,
    hint: Option<&WaveSample>,
    tol: &Tolerances,
) -> Result<WaveSample> {
    let (mf, mr) = loops(d, s)?;
    let c = headway_factor(d, s);
    let num = 1.0 + c * (mf + mr);
    let alpha = num / mf;
    let beta = num / mr;
    let q = discriminant(d, mf, mr, s).sqrt();
    let ratio = mf / mr;

    let (g_plus, flip_p) = proper_root(beta, q / mr, ratio, hint.map(|h| h.g_plus), tol.tol_tie, s)?;
    let (g_minus, flip_m) =
        proper_root(alpha, q / mf, 1.0 / ratio, hint.map(|h| h.g_minus), tol.tol_tie, s)?;

    Ok(WaveSample {
        s,
        g_plus,
        g_minus,
        alpha,
        beta,
        ratio,
        c,
        branch_flipped: flip_p || flip_m,
    })
}

/// Evaluates the AWTFs along `points` in the given order, each sample serving
/// as the hint for the next. Start where the roots are well separated (large
/// `|s|`).
pub fn awtf_path(
    d: &AgentDynamics,
    points: impl IntoIterator<Item = Complex64>,
    tol: &Tolerances,
) -> Result<Vec<WaveSample>> {
    let mut out: Vec<WaveSample> = Vec::new();
    for s in points {
        let sample = awtf_eval(d, s, out.last(), tol)?;
        out.push(sample);
    }
    Ok(out)
}

/// Like [`awtf_eval`] without a hint, but when the roots tie it continues
/// along the ray from `|s| = 1e3 max(1, |s|)` down to `s`.
pub fn awtf_eval_continued(d: &AgentDynamics, s: Complex64, tol: &Tolerances) -> Result<WaveSample> {
    match awtf_eval(d, s, None, tol) {
        Err(Error::BranchAmbiguous(_)) => {}
        other => return other,
    }
    let radius = s.norm();
    let start = 1e3 * radius.max(1.0);
    let ratio: f64 = 1.02;
    let steps = ((start / radius).ln() / ratio.ln()).ceil() as usize;
    let dir = s / radius;
    let path = (0..steps)
        .map(|k| dir * (start / ratio.powi(k as i32)))
        .chain(std::iter::once(s));
    awtf_path(d, path, tol)?
        .pop()
        .ok_or(Error::BranchAmbiguous(s))
}

/// DC gains `(G+(0), G-(0))`: `(kappa, 1)` for `0 < kappa < 1` and
/// `(1, 1/kappa)` for `kappa >= 1`.
///
/// For `kappa < 0` the same smaller-modulus rule gives `(kappa, 1)` when
/// `kappa > -1` and `(1, 1/kappa)` otherwise.
pub fn awtf_dc(d: &AgentDynamics) -> Result<(f64, f64)> {
    if d.mf.p() == 0 || d.mr.p() == 0 {
        return Err(Error::NoIntegrator);
    }
    let kappa = low_order_coeffs(d).kappa;
    if kappa.abs() < 1.0 {
        Ok((kappa, 1.0))
    } else {
        Ok((1.0, 1.0 / kappa))
    }
}

/// `T_1 = -G+ G-` and `T_N = G- (G+ - 1) / (G- - 1)` from an AWTF sample.
///
/// Under a time headway the rear-end relation becomes
/// `T_N = G- (G+ - c) / (c G- - 1)` with `c = 1 + h s`.
pub fn reflection_from(sample: &WaveSample, tol: &Tolerances) -> Result<ReflectionSample> {
    let c = sample.c;
    let denom = c * sample.g_minus - 1.0;
    if denom.norm() < tol.tol_sing {
        return Err(Error::ReflectionSingular(sample.s));
    }
    Ok(ReflectionSample {
        s: sample.s,
        t1: -sample.g_plus * sample.g_minus,
        t_n: sample.g_minus * (sample.g_plus - c) / denom,
    })
}

pub fn reflection_eval(
    d: &AgentDynamics,
    s: Complex64,
    hint: Option<&WaveSample>,
    tol: &Tolerances,
) -> Result<ReflectionSample> {
    let sample = match hint {
        Some(_) => awtf_eval(d, s, hint, tol)?,
        None => awtf_eval_continued(d, s, tol)?,
    };
    reflection_from(&sample, tol)
}

/// Forward and backward wave components at agent `n` of a path with `n_agents`
/// followers, per unit leader input: `(A_n/X_0, B_n/X_0)`.
///
/// Both waves share the round-trip factor
/// `1 / (1 - T_N G-^(N-1) T_1 G+^(N-1))`; `A_n` carries `G+^n` and `B_n`
/// carries `G-^(N-n) T_N G+^N`.
pub fn path_wave_gains(
    sample: &WaveSample,
    refl: &ReflectionSample,
    n_agents: usize,
    n: usize,
) -> (Complex64, Complex64) {
    let gp = sample.g_plus;
    let gm = sample.g_minus;
    let big_n = n_agents as i32;
    let round_trip = 1.0 - refl.t_n * gm.powi(big_n - 1) * refl.t1 * gp.powi(big_n - 1);
    let forward = gp.powi(n as i32) / round_trip;
    let backward = gm.powi(big_n - n as i32) * refl.t_n * gp.powi(big_n) / round_trip;
    (forward, backward)
}
