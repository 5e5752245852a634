//! Browser bindings: each function returns a JSON curve for the demo page.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use slocc_core::deform::Statistics;
use slocc_core::noise::{self, BathParams, ChannelKind};
use slocc_core::pipeline::{self, DeformationSpec, Scenario};

#[derive(Debug, Serialize)]
struct Curve {
    x: Vec<f64>,
    concurrence: Vec<f64>,
    fidelity: Vec<f64>,
    p_lr: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct Disturbance {
    t: Vec<f64>,
    p: Vec<f64>,
    markovian: bool,
}

fn axis(start: f64, stop: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 || stop <= start || !start.is_finite() || !stop.is_finite() {
        return Err(format!("need at least 2 points on an increasing range, got {start}..{stop} x {points}"));
    }
    Ok((0..points).map(|k| start + (stop - start) * k as f64 / (points - 1) as f64).collect())
}

/// `C`, `F` and `P_LR` at one point; before `td` the distinguishable state.
fn point(
    channel: ChannelKind,
    bath: BathParams,
    stats: Statistics,
    indist: f64,
    td: f64,
    t: f64,
) -> Result<[f64; 3], String> {
    if t < td {
        let m = pipeline::distinguishable_baseline(channel, &bath, t).map_err(|e| e.to_string())?;
        return Ok([m.concurrence, m.fidelity_singlet, 1.0]);
    }
    let r = pipeline::run(&Scenario {
        channel,
        bath,
        deformation: DeformationSpec::target(indist, stats),
        t_deform: td,
        t_total: t,
    })
    .map_err(|e| e.to_string())?;
    Ok([r.concurrence, r.fidelity, r.p_lr])
}

fn curve(xs: Vec<f64>, f: impl Fn(f64) -> Result<[f64; 3], String>) -> Result<String, String> {
    let mut c = Curve { x: Vec::new(), concurrence: Vec::new(), fidelity: Vec::new(), p_lr: Vec::new() };
    for x in xs {
        let [conc, fid, p] = f(x)?;
        c.x.push(x);
        c.concurrence.push(conc);
        c.fidelity.push(fid);
        c.p_lr.push(p);
    }
    serde_json::to_string(&c).map_err(|e| e.to_string())
}

fn setup(channel: &str, statistics: &str, lambda: f64) -> Result<(ChannelKind, Statistics, BathParams), String> {
    let channel = channel.parse::<ChannelKind>()?;
    let stats = statistics.parse::<Statistics>()?;
    let bath = BathParams::new(1.0, lambda).map_err(|e| e.to_string())?;
    Ok((channel, stats, bath))
}

/// Metrics against `γ₀t ∈ [0, t_max]` for a deformation at `td`.
#[wasm_bindgen]
pub fn time_curve(
    channel: &str,
    statistics: &str,
    indist: f64,
    td: f64,
    t_max: f64,
    lambda: f64,
    points: usize,
) -> Result<String, String> {
    let (channel, stats, bath) = setup(channel, statistics, lambda)?;
    curve(axis(0.0, t_max, points)?, |t| point(channel, bath, stats, indist, td, t))
}

/// Metrics against `𝓘 ∈ [0, 1]` at fixed `td` and `t`.
#[wasm_bindgen]
pub fn indist_curve(
    channel: &str,
    statistics: &str,
    td: f64,
    t: f64,
    lambda: f64,
    points: usize,
) -> Result<String, String> {
    let (channel, stats, bath) = setup(channel, statistics, lambda)?;
    if t < td {
        return Err(format!("observation time {t} precedes deformation time {td}"));
    }
    curve(axis(0.0, 1.0, points)?, |i| point(channel, bath, stats, i, td, t))
}

/// Disturbance probability `p(t)` of the bath with `γ₀ = 1`.
#[wasm_bindgen]
pub fn decoherence_curve(lambda: f64, t_max: f64, points: usize) -> Result<String, String> {
    let bath = BathParams::new(1.0, lambda).map_err(|e| e.to_string())?;
    let t = axis(0.0, t_max, points)?;
    let p = t
        .iter()
        .map(|&t| noise::disturbance_probability(&bath, t))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&Disturbance { t, p, markovian: bath.is_markovian() }).map_err(|e| e.to_string())
}
