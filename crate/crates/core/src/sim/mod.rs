//! State-space simulation of the platoon: realization of the agent loops,
//! network assembly on path and tree topologies, Runge-Kutta integration and
//! response metrics.

mod metrics;
mod network;
mod realize;
mod simulate;
mod topology;

pub use metrics::{overshoot_metrics, AgentOvershoot};
pub use network::{build_network, BlockInfo, BlockRole, InputId, NetworkSystem};
pub use realize::{realize, StateSpaceBlock};
pub use simulate::{default_dt, simulate, Disturbance, SimConfig, Signal, StepInput, Trajectory};
pub use topology::{Topology, TopologySpec};
