//! Discrete-event simulation and stability assessment for business processes
//! modeled as queueing networks.
//!
//! A process is a directed graph of service [`model::Block`]s fed by Poisson
//! or periodic [`model::Source`]s. The [`engine`] replays it event by event
//! under a seeded, stream-split RNG, so paired experiments can reuse the same
//! random inputs. On top of the runs sit:
//!
//! - [`metrics`]: per-block counters, replication aggregates with confidence
//!   intervals, before/after comparison tables, CSV and SVG series export;
//! - [`indicators`]: structural and operational stability scores
//!   (inputs per block, block count, execution order, control strictness,
//!   failure recovery) combined into an S/O/L assessment;
//! - [`scenarios`]: bundled reference processes with an as-is model, an edit
//!   script producing the re-engineered variant, and machine-checked expected
//!   effects.
//!
//! ```
//! use fsbp::{parse_model, simulate, RunConfig};
//!
//! let model = parse_model(
//!     r#"{
//!         "name": "single-desk",
//!         "horizon_days": 100,
//!         "warmup_days": 10,
//!         "blocks": [{ "id": "desk", "service_time_days": 0.5 }],
//!         "sources": [{ "id": "walk-ins", "intensity": 1.2, "target": "desk" }]
//!     }"#,
//! )?;
//! let result = simulate(&model, &RunConfig { seed: 7, ..RunConfig::default() })?;
//! assert!(result.blocks["desk"].served > 0);
//! # Ok::<(), fsbp::ModelError>(())
//! ```

pub mod engine;
pub mod indicators;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod scenarios;

pub use engine::{run_replications, run_seeds, simulate, simulate_traced, RunConfig, TraceEvent};
pub use indicators::{
    assess, optimize_control, score_block_count, score_control, score_inputs, score_recovery,
    score_sequence, sequence_violations, AssessOptions, BlockCountPolicy, ControlSweep,
    FSAssessment, IndicatorError, IndicatorScore, NamedIndicator, ObjectiveWeights, SweepConfig,
    SweepRow,
};
pub use metrics::{
    aggregate, compare, export_series, render_comparison, render_queue_chart, verdict_phrase,
    AggregateResult, BlockStats, CompareOptions, ComparisonReport, ComparisonRow, ConfigEcho,
    MetricsError, RunResult, RunSummary, SourceStats, Summary, Verdict,
};
pub use model::{
    apply_edit, count_inputs, parse_model, serialize_model, validate, Block, ControlParams,
    Diagnostic, EditOp, EditScript, FailureProfile, ModelError, ProcessModel, Route, Severity,
    Source,
};
pub use scenarios::{
    evaluate_scenario, list_scenarios, load_scenario, run_scenario, EffectCheck, ExpectedEffect,
    Scenario, ScenarioError, ScenarioOptions, ScenarioReport,
};
