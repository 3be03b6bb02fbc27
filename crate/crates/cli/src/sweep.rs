//! One analysis (and, for platoon size, one simulation) per parameter value.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use wavestring::sim::overshoot_metrics;
use wavestring::{headway_dominant_term, AgentDynamics, Verdict};

use crate::commands::{analyze_dynamics, Analysis, ErrorReport};
use crate::config::{Scenario, ScenarioConfig, TopologySpec};
use crate::error::{CliError, CliResult};
use crate::output::{num, Csv, OutDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SweepParam {
    /// Time headway.
    #[value(name = "h")]
    #[serde(rename = "h")]
    H,
    /// Gain factor applied to the rear loop.
    #[value(name = "mu")]
    #[serde(rename = "mu")]
    Mu,
    /// Number of followers on a path.
    #[value(name = "N", alias = "n")]
    #[serde(rename = "N")]
    N,
}

/// Parses `a:b:n`, `n >= 2` evenly spaced values from `a` to `b` inclusive.
pub fn parse_range(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Config(format!("--range '{text}' must look like a:b:n with n >= 2"));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n < 2 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / last })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    /// Low-frequency sign test of the headway policy at this point.
    pub dominant_term: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_overshoot: Option<f64>,
    #[serde(flatten)]
    pub analysis: Analysis,
}

#[derive(Serialize)]
struct SweepFile<'a> {
    config: &'a ScenarioConfig,
    param: SweepParam,
    values: &'a [f64],
    rows: &'a [SweepRow],
}

fn check_values(param: SweepParam, values: &[f64], base: &ScenarioConfig) -> CliResult<()> {
    if values.is_empty() {
        return Err(CliError::Config("sweep needs at least one value".into()));
    }
    for &v in values {
        let ok = match param {
            SweepParam::H => v >= 0.0 && v.is_finite(),
            SweepParam::Mu => v > 0.0 && v.is_finite(),
            SweepParam::N => v.fract() == 0.0 && (3.0..=1e6).contains(&v),
        };
        if !ok {
            return Err(CliError::Config(format!("invalid sweep value {v} for {param:?}")));
        }
    }
    if param == SweepParam::N && !matches!(base.topology, TopologySpec::Path { .. }) {
        return Err(CliError::Config("an N sweep needs a path topology".into()));
    }
    Ok(())
}

fn dynamics_at(base: &AgentDynamics, param: SweepParam, v: f64) -> AgentDynamics {
    match param {
        SweepParam::H => base.clone().with_headway(v),
        SweepParam::Mu => AgentDynamics {
            mr: base.mr.scaled(v),
            ..base.clone()
        },
        SweepParam::N => base.clone(),
    }
}

fn row(sc: &Scenario, param: SweepParam, v: f64) -> SweepRow {
    let d = dynamics_at(&sc.dynamics, param, v);
    let (analysis, mut err) = analyze_dynamics(&d, &sc.config.analysis);
    let mut last_overshoot = None;
    if param == SweepParam::N && err.is_none() {
        let n = v as usize;
        let mut cfg = sc.config.clone();
        cfg.topology = TopologySpec::Path { n };
        let sim = cfg.topology.build().and_then(|topo| {
            let net = wavestring::sim::build_network(&topo, &d)?;
            Ok(wavestring::sim::simulate(&net, &cfg.sim_config())?)
        });
        match sim {
            Ok(traj) => {
                let m = overshoot_metrics(&traj, cfg.sim.leader.amplitude);
                last_overshoot = Some(m[n].overshoot);
            }
            Err(e) => err = Some(e),
        }
    }
    SweepRow {
        value: v,
        status: err.as_ref().map_or("ok", |e| e.kind()),
        error: err.as_ref().map(ErrorReport::from),
        dominant_term: headway_dominant_term(&d),
        last_overshoot,
        analysis,
    }
}

fn exit_of(rows: &[SweepRow]) -> CliResult<()> {
    match rows.iter().find_map(|r| r.error.as_ref()) {
        None => Ok(()),
        Some(e) => Err(match e.kind {
            "config" => CliError::Config(e.message.clone()),
            "assumption" => CliError::Assumption(e.message.clone()),
            _ => CliError::Numeric(e.message.clone()),
        }),
    }
}

/// Thread count from `WAVESTRING_THREADS`, if set.
fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var("WAVESTRING_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("WAVESTRING_THREADS = '{s}' must be a positive integer"))),
        },
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn flag(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

fn verdict_name(v: Option<Verdict>) -> String {
    match v {
        Some(Verdict::Stable) => "stable".into(),
        Some(Verdict::Unstable) => "unstable".into(),
        Some(Verdict::Marginal) => "marginal".into(),
        None => String::new(),
    }
}

pub fn sweep(sc: &Scenario, param: SweepParam, values: &[f64], out: &OutDir) -> CliResult<()> {
    check_values(param, values, &sc.config)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| values.par_iter().map(|&v| row(sc, param, v)).collect());

    let mut csv = Csv::new(&[
        "value",
        "status",
        "verdict",
        "theorem2_triggered",
        "awtf_stable",
        "norm_gp",
        "norm_gm",
        "kappa",
        "dominant_term",
        "last_overshoot",
    ]);
    for r in &rows {
        let a = &r.analysis;
        csv.row([
            num(r.value),
            r.status.to_string(),
            verdict_name(a.verdict),
            flag(a.theorem2_triggered),
            flag(a.nyquist.as_ref().map(|n| n.pass)),
            cell(a.norm_gp.map(|n| n.value)),
            cell(a.norm_gm.map(|n| n.value)),
            num(a.low_order.kappa),
            num(r.dominant_term),
            cell(r.last_overshoot),
        ]);
    }
    out.write("sweep.csv", &csv.into_bytes())?;
    out.write_json(
        "sweep.json",
        &SweepFile {
            config: &sc.config,
            param,
            values,
            rows: &rows,
        },
    )?;
    exit_of(&rows)
}
