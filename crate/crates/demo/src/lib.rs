//! Browser bindings for the simulator. Three operations back the demo page
//! in `www/`:
//!
//! * list the bundled scenarios,
//! * evaluate one end to end (before/after comparison, indicator scores,
//!   effect checks),
//! * render a queue-length chart for a single run, and sweep control
//!   strictness where the scenario has control blocks.
//!
//! Each operation exists as a plain Rust function (unit-tested on the host)
//! plus a thin `#[wasm_bindgen]` wrapper. Build the browser package with
//! `wasm-pack build crates/demo --target web` and serve `www/`.

use fsbp::{
    evaluate_scenario, load_scenario, optimize_control, render_queue_chart, simulate, RunConfig,
    ScenarioOptions, SweepConfig,
};
use wasm_bindgen::prelude::*;

/// JSON catalog of the bundled scenarios: `[{ "id", "description" }, ...]`.
pub fn catalog_json() -> String {
    let entries: Vec<serde_json::Value> = fsbp::list_scenarios()
        .into_iter()
        .map(|(id, description)| serde_json::json!({ "id": id, "description": description }))
        .collect();
    serde_json::to_string(&entries).expect("catalog serializes")
}

/// Evaluates one bundled scenario over `replications` paired seeds and
/// returns the full report (aggregates, comparison, assessments, effect
/// checks) as JSON.
pub fn evaluate_json(id: &str, replications: u32) -> Result<String, String> {
    let scenario = load_scenario(id).map_err(|e| e.to_string())?;
    let seeds: Vec<u64> = (0..replications.max(1) as u64)
        .map(|i| scenario.default_seed + i)
        .collect();
    let options = ScenarioOptions {
        seeds,
        disable_failures: false,
    };
    let report = evaluate_scenario(&scenario, &options).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Simulates one run of a scenario variant (`"as-is"` or `"as-will-be"`)
/// and returns the daily queue-length chart as an SVG document.
pub fn queue_chart_svg(id: &str, variant: &str, seed: u64) -> Result<String, String> {
    let scenario = load_scenario(id).map_err(|e| e.to_string())?;
    let model = match variant {
        "as-is" => &scenario.as_is,
        "as-will-be" => scenario
            .as_will_be
            .as_ref()
            .ok_or_else(|| format!("scenario `{id}` has no re-engineered variant"))?,
        other => {
            return Err(format!(
                "unknown variant `{other}` (expected `as-is` or `as-will-be`)"
            ))
        }
    };
    let config = RunConfig {
        seed,
        ..RunConfig::default()
    };
    let result = simulate(model, &config).map_err(|e| e.to_string())?;
    let title = format!("{} — daily queue length (seed {seed})", model.name);
    Ok(render_queue_chart(
        &result.queue_length_series,
        &title,
        model.warmup_days + 1,
    ))
}

/// Sweeps the strictness of every control block of a scenario's as-is model
/// over `grid` (comma-separated values in (0,1)) and returns the sweep table
/// plus per-block and overall best points as JSON.
pub fn strictness_sweep_json(id: &str, grid: &str, replications: u32) -> Result<String, String> {
    let scenario = load_scenario(id).map_err(|e| e.to_string())?;
    let points: Vec<f64> = grid
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| format!("bad grid value `{s}`: {e}"))
        })
        .collect::<Result<_, _>>()?;
    let config = SweepConfig {
        seed: scenario.default_seed,
        replications: replications.max(1),
        ..SweepConfig::default()
    };
    let sweep =
        optimize_control(&scenario.as_is, &[], &points, &config).map_err(|e| e.to_string())?;
    serde_json::to_string(&sweep).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// wasm exports
// ---------------------------------------------------------------------------

#[wasm_bindgen(js_name = scenarioCatalog)]
pub fn scenario_catalog() -> String {
    catalog_json()
}

#[wasm_bindgen(js_name = evaluateScenario)]
pub fn evaluate_scenario_js(id: &str, replications: u32) -> Result<String, JsValue> {
    evaluate_json(id, replications).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = queueChartSvg)]
pub fn queue_chart_svg_js(id: &str, variant: &str, seed: u64) -> Result<String, JsValue> {
    queue_chart_svg(id, variant, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = strictnessSweep)]
pub fn strictness_sweep_js(id: &str, grid: &str, replications: u32) -> Result<String, JsValue> {
    strictness_sweep_json(id, grid, replications).map_err(|e| JsValue::from_str(&e))
}
