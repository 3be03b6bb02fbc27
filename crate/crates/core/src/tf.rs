//! Rational transfer functions in the normalized form
//! `M(s) = n(s) / (s^p d(s))` with `d(0) = 1` and `n(0) != 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Rational transfer function with its origin poles held in `p`.
///
/// Only [`RationalTF::normalize`] constructs one, so the invariants
/// `den(0) == 1`, `num(0) != 0` always hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalTF {
    num: Polynomial,
    den: Polynomial,
    p: usize,
}

impl RationalTF {
    /// Moves the exact origin roots of `den` into the integrator count, cancels
    /// common origin roots and scales so that the denominator constant is 1.
    pub fn normalize(num: &Polynomial, den: &Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Err(Error::NumeratorOriginZero);
        }
        let zn = num.origin_multiplicity();
        let zd = den.origin_multiplicity();
        if zn > zd {
            return Err(Error::NumeratorOriginZero);
        }
        let num = num.shift_down(zn);
        let den = den.shift_down(zd);
        let d0 = den.coeff(0);
        let div = |p: &Polynomial| Polynomial::new(p.coeffs().iter().map(|c| c / d0).collect());
        Ok(Self {
            num: div(&num).trimmed(),
            den: div(&den).trimmed(),
            p: zd - zn,
        })
    }

    /// Shorthand for `normalize` on plain coefficient slices (ascending powers).
    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::normalize(&Polynomial::from(num), &Polynomial::from(den))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Number of integrators (poles at the origin).
    pub fn p(&self) -> usize {
        self.p
    }

    /// `s^p d(s)` as a single polynomial.
    pub fn full_den(&self) -> Polynomial {
        let mut c = vec![0.0; self.p];
        c.extend_from_slice(self.den.coeffs());
        Polynomial::new(c)
    }

    /// Order of the realization: `p + deg d`.
    pub fn order(&self) -> usize {
        self.p + self.den.degree()
    }

    pub fn is_proper(&self) -> bool {
        self.order() >= self.num.degree()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.order() > self.num.degree()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            num: self.num.scale(factor),
            den: self.den.clone(),
            p: self.p,
        }
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        if self.p > 0 && s == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleAtSample(s));
        }
        let d = self.den.eval(s);
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleAtSample(s));
        }
        let v = self.num.eval(s) / d / s.powi(self.p as i32);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::PoleAtSample(s));
        }
        Ok(v)
    }
}

/// Identical agent model: the front and rear open loops `M_f = C_f P`,
/// `M_r = C_r P`, plus the time headway `h` (0 for constant spacing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentDynamics {
    pub mf: RationalTF,
    pub mr: RationalTF,
    pub h: f64,
}

impl AgentDynamics {
    pub fn new(mf: RationalTF, mr: RationalTF) -> Self {
        Self { mf, mr, h: 0.0 }
    }

    pub fn with_headway(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    /// Builds `M_f = C_f P` and `M_r = C_r P` from (numerator, denominator)
    /// pairs of the plant and the two controllers.
    pub fn from_factors(
        plant: (&Polynomial, &Polynomial),
        cf: (&Polynomial, &Polynomial),
        cr: (&Polynomial, &Polynomial),
    ) -> Result<Self> {
        let mf = RationalTF::normalize(&cf.0.mul(plant.0), &cf.1.mul(plant.1))?;
        let mr = RationalTF::normalize(&cr.0.mul(plant.0), &cr.1.mul(plant.1))?;
        Ok(Self::new(mf, mr))
    }

    /// `M_f(s)` and `M_r(s)`.
    pub fn eval(&self, s: Complex64) -> Result<(Complex64, Complex64)> {
        Ok((self.mf.eval(s)?, self.mr.eval(s)?))
    }

    pub fn integrators(&self) -> usize {
        self.mf.p()
    }

    /// Largest pole magnitude of either loop, origin poles excluded.
    pub fn fastest_pole(&self) -> f64 {
        [&self.mf, &self.mr]
            .iter()
            .filter_map(|tf| tf.den().roots().ok())
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Outcome of the structural checks on `(M_f, M_r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub equal_integrators: bool,
    pub proper: bool,
    pub no_crhp_roots: bool,
    pub violations: Vec<String>,
}

impl AssumptionReport {
    pub fn passes(&self) -> bool {
        self.equal_integrators && self.proper && self.no_crhp_roots
    }
}

/// Same integrator count, both proper, and no zeros or poles in the closed
/// right half plane apart from the `p` origin poles.
pub fn check_assumptions(d: &AgentDynamics, tol_crhp: f64) -> AssumptionReport {
    let mut violations = Vec::new();

    let equal_integrators = d.mf.p() == d.mr.p();
    if !equal_integrators {
        violations.push(format!(
            "integrator count differs: M_f has {}, M_r has {}",
            d.mf.p(),
            d.mr.p()
        ));
    }

    let mut proper = true;
    for (name, tf) in [("M_f", &d.mf), ("M_r", &d.mr)] {
        if !tf.is_proper() {
            proper = false;
            violations.push(format!(
                "{name} is improper: numerator degree {} exceeds {}",
                tf.num().degree(),
                tf.order()
            ));
        }
    }

    let mut no_crhp_roots = true;
    for (name, tf) in [("M_f", &d.mf), ("M_r", &d.mr)] {
        for (what, poly) in [("zero", tf.num()), ("pole", tf.den())] {
            if poly.degree() == 0 {
                continue;
            }
            match poly.roots() {
                Ok(roots) => {
                    for r in roots.iter().filter(|r| r.re > -tol_crhp) {
                        no_crhp_roots = false;
                        violations.push(format!("{name} has a closed-RHP {what} at {r}"));
                    }
                }
                Err(e) => {
                    no_crhp_roots = false;
                    violations.push(format!("{name} {what}s could not be computed: {e}"));
                }
            }
        }
    }

    AssumptionReport {
        equal_integrators,
        proper,
        no_crhp_roots,
        violations,
    }
}

/// Low-frequency Taylor coefficients of `M_f/M_r` and `1/M_r` used by the
/// two-integrator results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowOrderCoeffs {
    /// DC gain of `M_f/M_r`, i.e. `n_f0 / n_r0` (`k_{x,1}`).
    pub kappa: f64,
    /// First-order imaginary coefficient of `M_f/M_r` at `s = jω` (`k_{y,1}`).
    pub k_y1: f64,
    /// `1 / n_r0` (`l_{x,1}`).
    pub l_x1: f64,
}

pub fn low_order_coeffs(d: &AgentDynamics) -> LowOrderCoeffs {
    let nf0 = d.mf.num().coeff(0);
    let nf1 = d.mf.num().coeff(1);
    let df1 = d.mf.den().coeff(1);
    let nr0 = d.mr.num().coeff(0);
    let nr1 = d.mr.num().coeff(1);
    let dr1 = d.mr.den().coeff(1);
    LowOrderCoeffs {
        kappa: nf0 / nr0,
        k_y1: (nf1 * nr0 - nf0 * nr1 - df1 * nf0 * nr0 + dr1 * nf0 * nr0) / (nr0 * nr0),
        l_x1: 1.0 / nr0,
    }
}

/// Symmetric positional coupling: `n_f0 == n_r0` up to `tol_dc` relative.
pub fn positional_symmetry(d: &AgentDynamics, tol_dc: f64) -> bool {
    (low_order_coeffs(d).kappa - 1.0).abs() <= tol_dc
}
