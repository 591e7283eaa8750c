//! Browser bindings: JSON-speaking wrappers around the core engines for the
//! static demo page in `www/`.

use std::str::FromStr;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use greymap::{
    builtin, classify, full_report, run, supported_engines, Engine, ScenarioId,
};

#[derive(Serialize)]
struct ScenarioInfo {
    id: &'static str,
    engines: Vec<String>,
    lambdas: &'static [f64],
    nodes: usize,
    activation: String,
}

#[derive(Serialize)]
struct TrajectoryDto {
    scenario: String,
    engine: String,
    lambda: f64,
    /// kernels[t][node]
    kernels: Vec<Vec<f64>>,
    /// greyness[t][node]
    greyness: Vec<Vec<f64>>,
    behavior: String,
    settle_step: Option<usize>,
    period: Option<usize>,
}

#[derive(Serialize)]
struct ReportDto {
    scenario: String,
    engine: String,
    lambda: f64,
    norm_kernel: f64,
    norm_wstar: Option<f64>,
    kernel_threshold: f64,
    kernel_lhs_times_lambda: f64,
    kernel_verdict: String,
    mtilde_norm: Option<f64>,
    greyness_verdict: String,
    behavior: String,
    notes: Vec<String>,
}

fn scenarios_impl() -> String {
    let list: Vec<ScenarioInfo> = ScenarioId::ALL
        .iter()
        .map(|id| {
            let model = builtin(*id);
            ScenarioInfo {
                id: id.name(),
                engines: supported_engines(&model)
                    .iter()
                    .map(Engine::to_string)
                    .collect(),
                lambdas: id.lambdas(),
                nodes: model.node_count(),
                activation: model.activation.kind.to_string(),
            }
        })
        .collect();
    serde_json::to_string(&list).expect("static data serialises")
}

fn simulate_impl(
    scenario: &str,
    engine: &str,
    lambda: f64,
    max_steps: usize,
) -> Result<String, String> {
    let id = ScenarioId::from_str(scenario).map_err(|e| e.to_string())?;
    let engine = Engine::from_str(engine).map_err(|e| e.to_string())?;
    let mut model = builtin(id);
    if max_steps >= 2 {
        model.max_steps = max_steps;
    }
    let traj = run(&model, lambda, engine).map_err(|e| e.to_string())?;
    let behavior =
        classify(&traj, model.fp_tolerance, model.cycle_tolerance).map_err(|e| e.to_string())?;
    let dto = TrajectoryDto {
        scenario: scenario.to_string(),
        engine: engine.to_string(),
        lambda,
        kernels: traj
            .states
            .iter()
            .map(|s| s.iter().map(|g| g.kernel()).collect())
            .collect(),
        greyness: traj
            .states
            .iter()
            .map(|s| s.iter().map(|g| g.greyness()).collect())
            .collect(),
        behavior: behavior.kind.to_string(),
        settle_step: behavior.settle_step,
        period: behavior.period,
    };
    serde_json::to_string(&dto).map_err(|e| e.to_string())
}

fn analyze_impl(scenario: &str, engine: &str, lambda: f64) -> Result<String, String> {
    let id = ScenarioId::from_str(scenario).map_err(|e| e.to_string())?;
    let engine = Engine::from_str(engine).map_err(|e| e.to_string())?;
    let model = builtin(id);
    let act = model.activation_at(lambda).map_err(|e| e.to_string())?;
    let report = full_report(&model, lambda, engine).map_err(|e| e.to_string())?;
    let dto = ReportDto {
        scenario: scenario.to_string(),
        engine: engine.to_string(),
        lambda,
        norm_kernel: report.frobenius_kernel,
        norm_wstar: report.w_star_frobenius,
        kernel_threshold: act.kernel_threshold(),
        kernel_lhs_times_lambda: report.kernel_verdict.lhs * lambda,
        kernel_verdict: report.kernel_verdict.kind.to_string(),
        mtilde_norm: report.m_tilde_frobenius,
        greyness_verdict: report.greyness_verdict.kind.to_string(),
        behavior: report.behavior.kind.to_string(),
        notes: report.notes,
    };
    serde_json::to_string(&dto).map_err(|e| e.to_string())
}

/// JSON list of the built-in scenarios with their engines and λ sweeps.
#[wasm_bindgen]
pub fn scenarios_json() -> String {
    scenarios_impl()
}

/// Run one engine at one λ; returns the full trajectory and classification
/// as JSON. `max_steps` below 2 keeps the model default.
#[wasm_bindgen]
pub fn simulate_json(
    scenario: &str,
    engine: &str,
    lambda: f64,
    max_steps: usize,
) -> Result<String, JsValue> {
    simulate_impl(scenario, engine, lambda, max_steps).map_err(|e| JsValue::from_str(&e))
}

/// Convergence report for one (scenario, engine, λ) as JSON.
#[wasm_bindgen]
pub fn analyze_json(scenario: &str, engine: &str, lambda: f64) -> Result<String, JsValue> {
    analyze_impl(scenario, engine, lambda).map_err(|e| JsValue::from_str(&e))
}
