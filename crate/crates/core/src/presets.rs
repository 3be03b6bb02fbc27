//! Reference agent models: a friction-damped double integrator under PI
//! control, coupled symmetrically, with scaled asymmetry, and with symmetric
//! positional but asymmetric velocity coupling.

use crate::tf::{AgentDynamics, RationalTF};

/// Denominator `s^2 (s/3 + 1)` shared by all presets.
const DEN: [f64; 4] = [0.0, 0.0, 1.0, 1.0 / 3.0];

/// `M_f(s) = (1/3)(4s + 4) / (s^2 (s/3 + 1))`.
pub fn front_loop() -> RationalTF {
    RationalTF::from_coeffs(&[4.0 / 3.0, 4.0 / 3.0], &DEN).expect("valid preset")
}

/// `M_r = M_f`.
pub fn symmetric() -> AgentDynamics {
    AgentDynamics::new(front_loop(), front_loop())
}

/// `M_r = (2.5/4) M_f`: both positional and velocity couplings asymmetric,
/// `kappa = 1.6`.
pub fn scaled_asymmetric() -> AgentDynamics {
    AgentDynamics::new(front_loop(), front_loop().scaled(2.5 / 4.0))
}

/// `M_r(s) = (1/3)(2.5s + 4) / (s^2 (s/3 + 1))`: equal positional gains,
/// different velocity gains.
pub fn velocity_asymmetric() -> AgentDynamics {
    let mr = RationalTF::from_coeffs(&[4.0 / 3.0, 2.5 / 3.0], &DEN).expect("valid preset");
    AgentDynamics::new(front_loop(), mr)
}

/// Front and rear loops swapped relative to [`scaled_asymmetric`], so
/// `kappa = 0.625`.
pub fn scaled_asymmetric_mirrored() -> AgentDynamics {
    AgentDynamics::new(front_loop().scaled(2.5 / 4.0), front_loop())
}

/// Looks a preset up by name (`symmetric`, `scaled_asymmetric`,
/// `velocity_asymmetric`, `scaled_asymmetric_mirrored`).
pub fn by_name(name: &str) -> Option<AgentDynamics> {
    match name {
        "symmetric" => Some(symmetric()),
        "scaled_asymmetric" => Some(scaled_asymmetric()),
        "velocity_asymmetric" => Some(velocity_asymmetric()),
        "scaled_asymmetric_mirrored" => Some(scaled_asymmetric_mirrored()),
        _ => None,
    }
}
