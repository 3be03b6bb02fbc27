use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transfer function has a pole at the sample point s = {0}")]
    PoleAtSample(Complex64),

    #[error("denominator polynomial is identically zero")]
    ZeroDenominator,

    #[error("numerator has a zero at the origin after normalization (n_0 must be nonzero)")]
    NumeratorOriginZero,

    #[error("polynomial has degree zero, it has no roots")]
    DegreeZero,

    #[error("root finding did not converge")]
    RootsDidNotConverge,

    #[error("M_f or M_r is zero or infinite at s = {0}")]
    SingularSample(Complex64),

    #[error("both quadratic roots have equal modulus at s = {0} and no continuation hint was given")]
    BranchAmbiguous(Complex64),

    #[error("DC gains need at least one integrator in the agent model")]
    NoIntegrator,

    #[error("reflection T_N is singular at s = {0} (G- is too close to 1)")]
    ReflectionSingular(Complex64),

    #[error("frequency grid is invalid: {0}")]
    InvalidGrid(String),

    #[error("frequency grid too coarse: phase of T_G jumps by {jump:.3} rad near omega = {omega}")]
    GridTooCoarse { omega: f64, jump: f64 },

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("transfer function is improper (numerator degree {num} > denominator degree {den})")]
    ImproperTF { num: usize, den: usize },

    #[error("time-headway coupling needs strictly proper M_f and M_r")]
    HeadwayRequiresStrictlyProper,

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("topology is disconnected: node {0} is unreachable from the leader")]
    DisconnectedTopology(usize),

    #[error("topology contains a cycle")]
    CyclicTopology,

    #[error("singular linear solve: {0}")]
    SingularSolve(String),

    #[error("state became non-finite at t = {time}")]
    NonFiniteState { time: f64 },

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),

    #[error("agent index {index} out of range 1..={max}")]
    AgentIndex { index: usize, max: usize },

    #[error("inverse Laplace: spectrum does not decay (tail energy fraction {0:.3e})")]
    NonDecaying(f64),

    #[error("invalid inverse Laplace config: {0}")]
    InvalidInverseConfig(String),
}
