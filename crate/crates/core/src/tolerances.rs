use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the analysis routines.
///
/// Every field has a default sized for double precision on low-order agent
/// models; callers may override any of them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute margin on real parts: a root with `re > -tol_crhp` counts as
    /// closed-right-half-plane.
    pub tol_crhp: f64,
    /// Relative tolerance on `kappa == 1` for symmetric positional coupling.
    pub tol_dc: f64,
    /// Relative modulus gap under which the two quadratic roots are a tie.
    pub tol_tie: f64,
    /// Residual bound for the AWTF quadratics and reflection identities.
    pub tol_quad: f64,
    /// Minimum `|G- - 1|` before the rear-end reflection is declared singular.
    pub tol_sing: f64,
    /// Width of the stable/marginal band around a unit H-infinity norm.
    pub tol_norm: f64,
    /// Relative frequency bracket at which bisection/golden search stop.
    pub tol_omega: f64,
    /// A refined Nyquist crossing with `Re <= tol_axis` hits the non-positive axis.
    pub tol_axis: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_crhp: 1e-9,
            tol_dc: 1e-9,
            tol_tie: 1e-6,
            tol_quad: 1e-9,
            tol_sing: 1e-8,
            tol_norm: 1e-3,
            tol_omega: 1e-9,
            tol_axis: 1e-9,
        }
    }
}
