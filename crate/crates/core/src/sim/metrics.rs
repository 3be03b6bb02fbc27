use serde::{Deserialize, Serialize};

use super::simulate::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentOvershoot {
    pub agent: usize,
    pub peak: f64,
    pub peak_time: f64,
    /// `(peak - amplitude) / amplitude`.
    pub overshoot: f64,
}

/// Peak position of every agent (leader included) relative to a step of the
/// given amplitude.
pub fn overshoot_metrics(traj: &Trajectory, step_amplitude: f64) -> Vec<AgentOvershoot> {
    traj.positions
        .iter()
        .enumerate()
        .map(|(agent, xs)| {
            let (idx, peak) = xs
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
            AgentOvershoot {
                agent,
                peak,
                peak_time: traj.times[idx],
                overshoot: (peak - step_amplitude) / step_amplitude,
            }
        })
        .collect()
}
