use nalgebra::DVector;
use nalgebra_sparse::ops::serial::spmm_csr_dense;
use nalgebra_sparse::ops::Op;
use serde::{Deserialize, Serialize};

use super::network::NetworkSystem;
use crate::error::{Error, Result};
use crate::tf::AgentDynamics;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepInput {
    pub amplitude: f64,
    pub start: f64,
}

impl Default for StepInput {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            start: 0.0,
        }
    }
}

impl StepInput {
    pub fn value(&self, t: f64) -> f64 {
        if t >= self.start {
            self.amplitude
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Signal {
    Step,
    /// Rectangular pulse of the given width (s).
    Pulse { width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Disturbance {
    pub agent: usize,
    pub signal: Signal,
    pub amplitude: f64,
    #[serde(default)]
    pub start: f64,
}

impl Disturbance {
    pub fn value(&self, t: f64) -> f64 {
        let on = match self.signal {
            Signal::Step => t >= self.start,
            Signal::Pulse { width } => t >= self.start && t < self.start + width,
        };
        if on {
            self.amplitude
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub leader: StepInput,
    #[serde(default)]
    pub disturbances: Vec<Disturbance>,
    /// Keep every k-th integration step in the trajectory (the final step is
    /// always kept).
    #[serde(default = "one")]
    pub record_every: usize,
}

fn one() -> usize {
    1
}

/// `min(1e-3, 0.05 / |fastest pole|)`.
pub fn default_dt(d: &AgentDynamics) -> f64 {
    let fastest = d.fastest_pole();
    if fastest > 0.0 {
        (0.05 / fastest).min(1e-3)
    } else {
        1e-3
    }
}

impl SimConfig {
    /// Unit leader step at `t = 0`, no disturbances.
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self {
            dt,
            t_final,
            leader: StepInput::default(),
            disturbances: Vec::new(),
            record_every: 1,
        }
    }

    pub fn with_leader(mut self, leader: StepInput) -> Self {
        self.leader = leader;
        self
    }

    pub fn with_disturbance(mut self, dist: Disturbance) -> Self {
        self.disturbances.push(dist);
        self
    }

    pub fn with_record_every(mut self, k: usize) -> Self {
        self.record_every = k;
        self
    }

    pub fn validate(&self, n_agents: usize) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidSimConfig(format!("dt = {} must be > 0", self.dt)));
        }
        if !(self.t_final >= 10.0 * self.dt && self.t_final.is_finite()) {
            return Err(Error::InvalidSimConfig(format!(
                "t_final = {} must be at least 10 dt",
                self.t_final
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidSimConfig("record_every must be >= 1".into()));
        }
        for dist in &self.disturbances {
            if !(1..=n_agents).contains(&dist.agent) {
                return Err(Error::AgentIndex {
                    index: dist.agent,
                    max: n_agents,
                });
            }
            if let Signal::Pulse { width } = dist.signal {
                if !(width > 0.0) {
                    return Err(Error::InvalidSimConfig(format!("pulse width {width} must be > 0")));
                }
            }
        }
        Ok(())
    }
}

/// Sampled positions; `positions[n]` is the time series of agent `n`, with
/// the leader at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn n_agents(&self) -> usize {
        self.positions.len() - 1
    }

    pub fn last(&self, agent: usize) -> f64 {
        *self.positions[agent].last().expect("trajectories are never empty")
    }
}

struct Forcing<'a> {
    cfg: &'a SimConfig,
    leader_b: DVector<f64>,
    dist_b: Vec<DVector<f64>>,
}

impl Forcing<'_> {
    fn add_bw(&self, t: f64, out: &mut DVector<f64>) {
        let x0 = self.cfg.leader.value(t);
        if x0 != 0.0 {
            out.axpy(x0, &self.leader_b, 1.0);
        }
        for (k, col) in self.dist_b.iter().enumerate() {
            let v = self.cfg.disturbances[k].value(t);
            if v != 0.0 {
                out.axpy(v, col, 1.0);
            }
        }
    }
}

/// Fixed-step classical Runge-Kutta integration from rest.
pub fn simulate(net: &NetworkSystem, cfg: &SimConfig) -> Result<Trajectory> {
    let n_agents = net.n_agents();
    cfg.validate(n_agents)?;
    let forcing = Forcing {
        cfg,
        leader_b: net.b().column(0).into_owned(),
        dist_b: cfg
            .disturbances
            .iter()
            .map(|d| net.b().column(d.agent).into_owned())
            .collect(),
    };

    let n = net.n_states();
    let a = net.a();
    let deriv = |z: &DVector<f64>, t: f64, out: &mut DVector<f64>| {
        out.fill(0.0);
        forcing.add_bw(t, out);
        spmm_csr_dense(1.0, &mut *out, 1.0, Op::NoOp(a), Op::NoOp(z));
    };

    let n_steps = (cfg.t_final / cfg.dt).round() as usize;
    let n_records = n_steps / cfg.record_every + 2;
    let mut times = Vec::with_capacity(n_records);
    let mut positions = vec![Vec::with_capacity(n_records); n_agents + 1];
    let mut x = DVector::zeros(n_agents);
    let mut record = |t: f64, z: &DVector<f64>, times: &mut Vec<f64>, positions: &mut Vec<Vec<f64>>| {
        spmm_csr_dense(0.0, &mut x, 1.0, Op::NoOp(net.c()), Op::NoOp(z));
        let x0 = cfg.leader.value(t);
        if x0 != 0.0 {
            x.axpy(x0, &net.d().column(0), 1.0);
        }
        for dist in &cfg.disturbances {
            let v = dist.value(t);
            if v != 0.0 {
                x.axpy(v, &net.d().column(dist.agent), 1.0);
            }
        }
        times.push(t);
        positions[0].push(x0);
        for (k, v) in x.iter().enumerate() {
            positions[k + 1].push(*v);
        }
    };

    let mut z = DVector::zeros(n);
    let (mut k1, mut k2, mut k3, mut k4) = (
        DVector::zeros(n),
        DVector::zeros(n),
        DVector::zeros(n),
        DVector::zeros(n),
    );
    let mut tmp = DVector::zeros(n);
    let dt = cfg.dt;
    record(0.0, &z, &mut times, &mut positions);
    for step in 0..n_steps {
        let t = step as f64 * dt;
        deriv(&z, t, &mut k1);
        tmp.copy_from(&z);
        tmp.axpy(0.5 * dt, &k1, 1.0);
        deriv(&tmp, t + 0.5 * dt, &mut k2);
        tmp.copy_from(&z);
        tmp.axpy(0.5 * dt, &k2, 1.0);
        deriv(&tmp, t + 0.5 * dt, &mut k3);
        tmp.copy_from(&z);
        tmp.axpy(dt, &k3, 1.0);
        deriv(&tmp, t + dt, &mut k4);
        for i in 0..n {
            z[i] += dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        let t_next = (step + 1) as f64 * dt;
        if !z.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteState { time: t_next });
        }
        if (step + 1) % cfg.record_every == 0 || step + 1 == n_steps {
            record(t_next, &z, &mut times, &mut positions);
        }
    }
    Ok(Trajectory { times, positions })
}
