//! Wave transfer function analysis of path-graph platoons with asymmetric
//! bidirectional coupling.
//!
//! The crate evaluates the irrational wave transfer functions `G+`/`G-` of an
//! identical-agent chain, decides local string stability from them, and
//! cross-checks the wave description against a state-space simulator of the
//! whole platoon.

pub mod error;
pub mod poly;
pub mod presets;
pub mod sim;
pub mod stability;
pub mod tf;
pub mod tolerances;
pub mod wave;
pub mod wave_response;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::Polynomial;
pub use tf::{
    check_assumptions, low_order_coeffs, positional_symmetry, AgentDynamics, AssumptionReport,
    LowOrderCoeffs, RationalTF,
};
pub use stability::{
    disturbance_gain, headway_dominant_term, headway_threshold, hinf_estimate, local_string_verdict,
    nyquist_axis_test, FrequencyGrid, NormEstimate, StabilityVerdict, Verdict, WaveCurve,
};
pub use tolerances::Tolerances;
pub use wave::{awtf_dc, awtf_eval, awtf_eval_continued, reflection_eval, WaveSample};
