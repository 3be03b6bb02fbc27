//! Scenario files.
//!
//! A scenario is parsed strictly (unknown keys are rejected), then resolved:
//! every optional setting gets its concrete value and the result is what all
//! output files embed. Resolving an already resolved scenario is the identity,
//! which is what makes a rerun on an embedded config reproduce its outputs.

use std::path::Path;

use serde::{Deserialize, Serialize};
use wavestring::sim::{default_dt, Disturbance, SimConfig, StepInput, Topology};
use wavestring::wave_response::InverseLaplaceConfig;
use wavestring::{presets, AgentDynamics, FrequencyGrid, Polynomial, RationalTF, Tolerances};

use crate::error::{CliError, CliResult};

/// Rational function as ascending-power coefficient lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfSpec {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl TfSpec {
    fn polys(&self) -> (Polynomial, Polynomial) {
        (Polynomial::new(self.num.clone()), Polynomial::new(self.den.clone()))
    }
}

/// Agent model in one of three forms: a named preset, the two open loops
/// directly, or plant and controllers to be multiplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mf: Option<TfSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mr: Option<TfSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plant: Option<TfSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cf: Option<TfSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cr: Option<TfSpec>,
    /// Time headway (s); 0 is constant spacing.
    #[serde(default)]
    pub h: f64,
}

impl DynamicsSpec {
    pub fn build(&self) -> CliResult<AgentDynamics> {
        if !(self.h >= 0.0 && self.h.is_finite()) {
            return Err(CliError::Config(format!("dynamics.h = {} must be finite and >= 0", self.h)));
        }
        let loops = self.mf.is_some() || self.mr.is_some();
        let factors = self.plant.is_some() || self.cf.is_some() || self.cr.is_some();
        let forms = [self.preset.is_some(), loops, factors].iter().filter(|b| **b).count();
        if forms != 1 {
            return Err(CliError::Config(
                "dynamics needs exactly one of: preset, mf + mr, or plant + cf + cr".into(),
            ));
        }
        let d = if let Some(name) = &self.preset {
            presets::by_name(name)
                .ok_or_else(|| CliError::Config(format!("unknown dynamics preset '{name}'")))?
        } else if loops {
            let (Some(mf), Some(mr)) = (&self.mf, &self.mr) else {
                return Err(CliError::Config("dynamics needs both mf and mr".into()));
            };
            AgentDynamics::new(
                RationalTF::from_coeffs(&mf.num, &mf.den)?,
                RationalTF::from_coeffs(&mr.num, &mr.den)?,
            )
        } else {
            let (Some(p), Some(cf), Some(cr)) = (&self.plant, &self.cf, &self.cr) else {
                return Err(CliError::Config("dynamics needs plant, cf and cr together".into()));
            };
            let (pn, pd) = p.polys();
            let (fnum, fden) = cf.polys();
            let (rnum, rden) = cr.polys();
            AgentDynamics::from_factors((&pn, &pd), (&fnum, &fden), (&rnum, &rden))?
        };
        Ok(d.with_headway(self.h))
    }
}

/// Interconnection: a path of `n` followers, or a tree on the leader `0` and
/// agents `1..=n` given by its edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    Path { n: usize },
    Tree { n: usize, edges: Vec<(usize, usize)> },
}

impl TopologySpec {
    pub fn build(&self) -> CliResult<Topology> {
        let topology = match self {
            TopologySpec::Path { n } => Topology::path(*n)?,
            TopologySpec::Tree { n, edges } => Topology::from_edges(n + 1, edges.clone())?,
        };
        if topology.n_agents() < 3 {
            return Err(CliError::Config(format!(
                "topology has {} followers, at least 3 are needed",
                topology.n_agents()
            )));
        }
        Ok(topology)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSpec {
    /// Integration step (s); derived from the fastest pole when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default)]
    pub leader: StepInput,
    #[serde(default)]
    pub disturbances: Vec<Disturbance>,
    /// Keep every k-th step; by default about one row per 10 ms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_every: Option<usize>,
}

fn default_t_final() -> f64 {
    60.0
}

impl Default for SimSpec {
    fn default() -> Self {
        Self {
            dt: None,
            t_final: default_t_final(),
            leader: StepInput::default(),
            disturbances: Vec::new(),
            record_every: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavesSpec {
    /// Agent whose response is decomposed; the middle of the path by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<usize>,
    /// Horizon of the inversion; the simulation horizon by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    /// FFT length of the inversion (power of two).
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    65536
}

impl Default for WavesSpec {
    fn default() -> Self {
        Self {
            agent: None,
            t_final: None,
            samples: default_samples(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    #[serde(default)]
    pub grid: FrequencyGrid,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub dynamics: DynamicsSpec,
    pub topology: TopologySpec,
    #[serde(default)]
    pub sim: SimSpec,
    #[serde(default)]
    pub waves: WavesSpec,
    #[serde(default)]
    pub analysis: AnalysisSpec,
}

/// Command line settings that take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub grid_points: Option<usize>,
    pub dt: Option<f64>,
}

/// A resolved scenario together with the objects built from it.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub dynamics: AgentDynamics,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Applies overrides, validates everything that can be checked without
    /// running an analysis, and fills in every default.
    pub fn resolve(mut self, ov: Overrides) -> CliResult<Scenario> {
        let dynamics = self.dynamics.build()?;
        let topology = self.topology.build()?;

        if let Some(k) = ov.grid_points {
            self.analysis.grid.points = k;
        }
        self.analysis.grid.validate()?;
        check_tolerances(&self.analysis.tolerances)?;

        if let Some(dt) = ov.dt {
            self.sim.dt = Some(dt);
        }
        let dt = *self.sim.dt.get_or_insert_with(|| default_dt(&dynamics));
        let every = *self
            .sim
            .record_every
            .get_or_insert_with(|| ((0.01 / dt).round() as usize).max(1));
        SimConfig {
            dt,
            t_final: self.sim.t_final,
            leader: self.sim.leader,
            disturbances: self.sim.disturbances.clone(),
            record_every: every,
        }
        .validate(topology.n_agents())?;

        let n = topology.n_agents();
        self.waves.agent.get_or_insert((n / 2).max(1));
        self.waves.t_final.get_or_insert(self.sim.t_final);
        self.inverse_laplace().validate()?;

        Ok(Scenario {
            config: self,
            dynamics,
        })
    }

    /// Simulation settings; call on a resolved config.
    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            dt: self.sim.dt.expect("resolved config"),
            t_final: self.sim.t_final,
            leader: self.sim.leader,
            disturbances: self.sim.disturbances.clone(),
            record_every: self.sim.record_every.expect("resolved config"),
        }
    }

    /// Inversion settings; call on a resolved config.
    pub fn inverse_laplace(&self) -> InverseLaplaceConfig {
        InverseLaplaceConfig::new(self.waves.t_final.unwrap_or(self.sim.t_final))
            .with_samples(self.waves.samples)
    }
}

fn check_tolerances(tol: &Tolerances) -> CliResult<()> {
    let fields = [
        ("tol_crhp", tol.tol_crhp),
        ("tol_dc", tol.tol_dc),
        ("tol_tie", tol.tol_tie),
        ("tol_quad", tol.tol_quad),
        ("tol_sing", tol.tol_sing),
        ("tol_norm", tol.tol_norm),
        ("tol_omega", tol.tol_omega),
        ("tol_axis", tol.tol_axis),
    ];
    for (name, v) in fields {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Config(format!("analysis.tolerances.{name} = {v} must be > 0")));
        }
    }
    Ok(())
}
