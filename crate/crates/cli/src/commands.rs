use serde::Serialize;
use wavestring::sim::{build_network, overshoot_metrics, simulate, AgentOvershoot, Trajectory};
use wavestring::stability::NyquistResult;
use wavestring::wave_response::{interpolate, wave_components};
use wavestring::{
    awtf_dc, check_assumptions, headway_dominant_term, headway_threshold, local_string_verdict,
    low_order_coeffs, positional_symmetry, AgentDynamics, AssumptionReport, LowOrderCoeffs,
    NormEstimate, RationalTF, Verdict,
};

use crate::config::{AnalysisSpec, Scenario, ScenarioConfig, TfSpec, TopologySpec};
use crate::error::{CliError, CliResult};
use crate::output::{num, Csv, OutDir};

#[derive(Debug, Clone, Serialize)]
pub struct Loops {
    pub mf: TfSpec,
    pub mr: TfSpec,
    pub h: f64,
}

impl Loops {
    fn of(d: &AgentDynamics) -> Self {
        let spec = |tf: &RationalTF| TfSpec {
            num: tf.num().coeffs().to_vec(),
            den: tf.full_den().coeffs().to_vec(),
        };
        Self {
            mf: spec(&d.mf),
            mr: spec(&d.mr),
            h: d.h,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DcGains {
    pub g_plus: f64,
    pub g_minus: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Headway {
    pub h: f64,
    pub dominant_term: f64,
    /// Headway beyond which the dominant term stays negative.
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
}

impl From<&CliError> for ErrorReport {
    fn from(e: &CliError) -> Self {
        Self {
            kind: e.kind(),
            message: e.message().to_string(),
        }
    }
}

/// Everything `analyze` reports about one agent model.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub loops: Loops,
    pub assumptions: AssumptionReport,
    pub low_order: LowOrderCoeffs,
    pub positional_symmetry: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dc_gains: Option<DcGains>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nyquist: Option<NyquistResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_gp: Option<NormEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_gm: Option<NormEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem2_triggered: Option<bool>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub headway: Option<Headway>,
}

/// Runs the structural checks and, when they pass, the stability analysis.
/// The returned error (if any) is the one the command should exit with; the
/// partial report is still worth writing.
pub fn analyze_dynamics(d: &AgentDynamics, spec: &AnalysisSpec) -> (Analysis, Option<CliError>) {
    let tol = &spec.tolerances;
    let mut out = Analysis {
        loops: Loops::of(d),
        assumptions: check_assumptions(d, tol.tol_crhp),
        low_order: low_order_coeffs(d),
        positional_symmetry: positional_symmetry(d, tol.tol_dc),
        dc_gains: None,
        nyquist: None,
        norm_gp: None,
        norm_gm: None,
        verdict: None,
        theorem2_triggered: None,
        notes: Vec::new(),
        headway: (d.h > 0.0).then(|| Headway {
            h: d.h,
            dominant_term: headway_dominant_term(d),
            threshold: headway_threshold(d),
        }),
    };
    if !out.assumptions.passes() {
        let msg = out.assumptions.violations.join("; ");
        return (out, Some(CliError::Assumption(msg)));
    }
    match awtf_dc(d) {
        Ok((g_plus, g_minus)) => out.dc_gains = Some(DcGains { g_plus, g_minus }),
        Err(e) => return (out, Some(e.into())),
    }
    match local_string_verdict(d, &spec.grid, tol) {
        Ok(v) => {
            out.nyquist = Some(NyquistResult {
                pass: v.awtf_stable,
                crossings: v.nyquist_crossings,
            });
            out.norm_gp = Some(v.norm_gp);
            out.norm_gm = Some(v.norm_gm);
            out.verdict = Some(v.locally_string_stable);
            out.theorem2_triggered = Some(v.theorem2_triggered);
            out.notes = v.notes;
            (out, None)
        }
        Err(e) => (out, Some(e.into())),
    }
}

#[derive(Serialize)]
struct AnalysisFile<'a> {
    config: &'a ScenarioConfig,
    #[serde(flatten)]
    analysis: &'a Analysis,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorReport>,
}

pub fn analyze(sc: &Scenario, out: &OutDir) -> CliResult<()> {
    let (analysis, err) = analyze_dynamics(&sc.dynamics, &sc.config.analysis);
    out.write_json(
        "analysis.json",
        &AnalysisFile {
            config: &sc.config,
            analysis: &analysis,
            error: err.as_ref().map(ErrorReport::from),
        },
    )?;
    err.map_or(Ok(()), Err)
}

fn run_simulation(sc: &Scenario, config: &ScenarioConfig) -> CliResult<Trajectory> {
    let topology = config.topology.build()?;
    let net = build_network(&topology, &sc.dynamics)?;
    Ok(simulate(&net, &config.sim_config())?)
}

#[derive(Serialize)]
struct MetricsFile<'a> {
    config: &'a ScenarioConfig,
    step_amplitude: f64,
    final_positions: Vec<f64>,
    agents: Vec<AgentOvershoot>,
}

pub fn simulate_cmd(sc: &Scenario, out: &OutDir) -> CliResult<()> {
    let traj = run_simulation(sc, &sc.config)?;
    let n_agents = traj.positions.len();

    let mut header = vec!["t".to_string()];
    header.extend((0..n_agents).map(|n| format!("x_{n}")));
    let mut csv = Csv::new(&header);
    for (k, t) in traj.times.iter().enumerate() {
        csv.row(std::iter::once(*t).chain(traj.positions.iter().map(|xs| xs[k])).map(num));
    }

    let amplitude = sc.config.sim.leader.amplitude;
    let metrics = MetricsFile {
        config: &sc.config,
        step_amplitude: amplitude,
        final_positions: (0..n_agents).map(|n| traj.last(n)).collect(),
        agents: overshoot_metrics(&traj, amplitude),
    };
    out.write("trajectory.csv", &csv.into_bytes())?;
    out.write_json("metrics.json", &metrics)
}

#[derive(Serialize)]
struct WavesFile<'a> {
    config: &'a ScenarioConfig,
    agent: usize,
    /// `max |x_sim - x_wave|` over the wave time samples.
    max_deviation: f64,
    max_abs_b: f64,
}

pub fn waves(sc: &Scenario, out: &OutDir) -> CliResult<()> {
    let cfg = &sc.config;
    let TopologySpec::Path { n: n_agents } = cfg.topology else {
        return Err(CliError::Config("waves needs a path topology".into()));
    };
    let agent = cfg.waves.agent.expect("resolved config");
    if agent == 0 || agent > n_agents {
        return Err(CliError::Config(format!("waves.agent = {agent} is outside 1..={n_agents}")));
    }
    let sim = &cfg.sim;
    if !sim.disturbances.is_empty() || sim.leader.start != 0.0 {
        return Err(CliError::Config(
            "waves compares against a leader step at t = 0 without disturbances".into(),
        ));
    }
    let inv = cfg.inverse_laplace();
    if inv.t_final > sim.t_final {
        return Err(CliError::Config(format!(
            "waves.t_final = {} exceeds sim.t_final = {}",
            inv.t_final, sim.t_final
        )));
    }

    let amplitude = sim.leader.amplitude;
    let wc = wave_components(&sc.dynamics, n_agents, agent, &inv, &cfg.analysis.tolerances)?;
    let traj = run_simulation(sc, cfg)?;

    let mut csv = Csv::new(&["t", "x_n_sim", "x_n_wave", "a_n", "b_n"]);
    let mut max_dev: f64 = 0.0;
    let mut max_b: f64 = 0.0;
    for (k, &t) in wc.times.iter().enumerate() {
        let x_sim = interpolate(&traj.times, &traj.positions[agent], t);
        let (a, b) = (amplitude * wc.a[k], amplitude * wc.b[k]);
        let x_wave = amplitude * wc.x[k];
        max_dev = max_dev.max((x_sim - x_wave).abs());
        max_b = max_b.max(b.abs());
        csv.row([t, x_sim, x_wave, a, b].map(num));
    }
    out.write("waves.csv", &csv.into_bytes())?;
    out.write_json(
        "waves.json",
        &WavesFile {
            config: cfg,
            agent,
            max_deviation: max_dev,
            max_abs_b: max_b,
        },
    )
}
