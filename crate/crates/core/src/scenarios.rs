//! Bundled reference processes: each ships an as-is model, optionally an
//! edit script that derives the re-engineered variant, and a manifest of
//! directional claims that every run re-checks.
//!
//! The bundles are compiled into the library from the `scenarios/` directory
//! at the workspace root, so the binary stays self-contained; the files
//! remain the canonical, editable form.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::engine::run_seeds;
use crate::indicators::{
    assess, optimize_control, AssessOptions, ControlSweep, FSAssessment, IndicatorError,
    SweepConfig,
};
use crate::metrics::{
    aggregate, compare, AggregateResult, BlockStats, CompareOptions, ComparisonReport,
    MetricsError, RunResult,
};
use crate::model::{apply_edit, parse_model, EditScript, ModelError, ProcessModel};

/// Errors from loading or running a bundled scenario.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("scenario bundle is malformed: {0}")]
    BadBundle(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
}

/// Which way a metric is expected to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increase,
    Decrease,
}

impl Direction {
    fn holds(self, before: f64, after: f64) -> bool {
        match self {
            Direction::Increase => after > before,
            Direction::Decrease => after < before,
        }
    }

    fn verb(self) -> &'static str {
        match self {
            Direction::Increase => "increases",
            Direction::Decrease => "decreases",
        }
    }
}

/// Where a metric is read from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EffectScope {
    Block { block: String },
    Keyword(ScopeKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScopeKeyword {
    /// A system-level metric of the whole run.
    System,
    /// The unweighted mean over blocks present in both variants.
    BlocksMean,
}

/// One directional claim a scenario makes about its own runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpectedEffect {
    /// Before/after comparison between the as-is and re-engineered models
    /// over paired seeds.
    Delta {
        metric: String,
        scope: EffectScope,
        direction: Direction,
    },
    /// Strictness sweep on the as-is model: per-block monotonicity for
    /// utilization-like metrics, pooled for counts and fractions.
    Sweep {
        blocks: Vec<String>,
        grid: Vec<f64>,
        metric: String,
        direction: Direction,
    },
    /// Paired comparison of the as-is model against itself with all failure
    /// profiles stripped.
    FailureDelta {
        metric: String,
        scope: EffectScope,
        direction: Direction,
    },
}

#[derive(Debug, Deserialize)]
struct Manifest {
    id: String,
    description: String,
    seed: u64,
    replications: u32,
    expected_effects: Vec<ExpectedEffect>,
}

/// A loaded scenario: models, default run plan, and the claims to check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub id: String,
    pub description: String,
    pub as_is: ProcessModel,
    pub as_will_be: Option<ProcessModel>,
    pub default_seed: u64,
    pub default_replications: u32,
    pub expected_effects: Vec<ExpectedEffect>,
}

/// Seed list and toggles for a scenario run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioOptions {
    /// Paired seeds; empty means `default_seed .. default_seed + replications`.
    pub seeds: Vec<u64>,
    /// Strip all failure profiles; failure claims are then skipped.
    pub disable_failures: bool,
}

/// One evaluated claim. `passed` is `None` when the claim could not apply
/// (for example, failure effects with failures disabled).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectCheck {
    pub description: String,
    pub before: Option<f64>,
    pub after: Option<f64>,
    /// Fraction of seed pairs moving in the claimed direction (paired
    /// claims only).
    pub pair_fraction: Option<f64>,
    pub passed: Option<bool>,
}

/// Everything a scenario run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub description: String,
    pub seeds: Vec<u64>,
    pub as_is: AggregateResult,
    pub as_will_be: Option<AggregateResult>,
    pub comparison: Option<ComparisonReport>,
    pub assessment_as_is: FSAssessment,
    pub assessment_as_will_be: Option<FSAssessment>,
    pub checks: Vec<EffectCheck>,
}

macro_rules! bundle {
    ($id:literal, edit) => {
        (
            $id,
            include_str!(concat!("../../../scenarios/", $id, "/manifest.json")),
            include_str!(concat!("../../../scenarios/", $id, "/as-is.json")),
            Some(include_str!(concat!(
                "../../../scenarios/",
                $id,
                "/edit.json"
            ))),
        )
    };
    ($id:literal) => {
        (
            $id,
            include_str!(concat!("../../../scenarios/", $id, "/manifest.json")),
            include_str!(concat!("../../../scenarios/", $id, "/as-is.json")),
            None,
        )
    };
}

const BUNDLES: &[(&str, &str, &str, Option<&str>)] = &[
    bundle!("product-concept", edit),
    bundle!("production-support"),
    bundle!("delivery-of-goods", edit),
    bundle!("product-order"),
];

/// Lists the bundled scenarios as `(id, description)` pairs.
pub fn list_scenarios() -> Vec<(String, String)> {
    BUNDLES
        .iter()
        .map(|(id, manifest, _, _)| {
            let description = serde_json::from_str::<Manifest>(manifest)
                .map(|m| m.description)
                .unwrap_or_default();
            ((*id).to_owned(), description)
        })
        .collect()
}

/// Loads one bundled scenario, deriving the re-engineered variant from the
/// edit script when the bundle has one.
pub fn load_scenario(id: &str) -> Result<Scenario, ScenarioError> {
    let (_, manifest_text, model_text, edit_text) = BUNDLES
        .iter()
        .find(|(bundle_id, ..)| *bundle_id == id)
        .ok_or_else(|| ScenarioError::Unknown(id.to_owned()))?;
    let manifest: Manifest = serde_json::from_str(manifest_text)
        .map_err(|e| ScenarioError::BadBundle(format!("manifest of `{id}`: {e}")))?;
    if manifest.id != id {
        return Err(ScenarioError::BadBundle(format!(
            "manifest id `{}` does not match bundle `{id}`",
            manifest.id
        )));
    }
    let as_is = parse_model(model_text)?;
    let as_will_be = match edit_text {
        Some(text) => {
            let script: EditScript = serde_json::from_str(text)
                .map_err(|e| ScenarioError::BadBundle(format!("edit script of `{id}`: {e}")))?;
            let mut derived = apply_edit(&as_is, &script)?;
            derived.name = format!("{id}-as-will-be");
            Some(derived)
        }
        None => None,
    };
    let scenario = Scenario {
        id: manifest.id,
        description: manifest.description,
        as_is,
        as_will_be,
        default_seed: manifest.seed,
        default_replications: manifest.replications,
        expected_effects: manifest.expected_effects,
    };
    check_effect_references(&scenario)?;
    Ok(scenario)
}

fn check_effect_references(scenario: &Scenario) -> Result<(), ScenarioError> {
    let block_exists = |id: &str| {
        scenario.as_is.block(id).is_some()
            || scenario
                .as_will_be
                .as_ref()
                .is_some_and(|m| m.block(id).is_some())
    };
    for effect in &scenario.expected_effects {
        match effect {
            ExpectedEffect::Delta { scope, .. } | ExpectedEffect::FailureDelta { scope, .. } => {
                if let EffectScope::Block { block } = scope {
                    if !block_exists(block) {
                        return Err(ScenarioError::BadBundle(format!(
                            "expected effect references unknown block `{block}`"
                        )));
                    }
                }
            }
            ExpectedEffect::Sweep { blocks, .. } => {
                for block in blocks {
                    let is_control = scenario
                        .as_is
                        .block(block)
                        .is_some_and(|b| b.control.is_some());
                    if !is_control {
                        return Err(ScenarioError::BadBundle(format!(
                            "sweep effect references `{block}`, which is not a control block"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Loads and evaluates a scenario in one call.
pub fn run_scenario(id: &str, options: &ScenarioOptions) -> Result<ScenarioReport, ScenarioError> {
    let scenario = load_scenario(id)?;
    evaluate_scenario(&scenario, options)
}

fn strip_failures(model: &ProcessModel) -> ProcessModel {
    let mut stripped = model.clone();
    for block in &mut stripped.blocks {
        block.failure = None;
    }
    stripped
}

fn block_metric(stats: &BlockStats, metric: &str) -> Option<f64> {
    Some(match metric {
        "utilization" => stats.utilization,
        "avg_queue_length" => stats.avg_queue_length,
        "arrivals" => stats.arrivals as f64,
        "served" => stats.served as f64,
        "served_defective" => stats.served_defective as f64,
        "dropped_timeout" => stats.dropped_timeout as f64,
        "dropped_capacity" => stats.dropped_capacity as f64,
        "rejected_by_control" => stats.rejected_by_control as f64,
        "failures" => stats.failures as f64,
        "in_system_end" => stats.in_system_end as f64,
        _ => return None,
    })
}

fn scope_value(
    run: &RunResult,
    scope: &EffectScope,
    metric: &str,
    shared_blocks: &BTreeSet<String>,
) -> Option<f64> {
    match scope {
        EffectScope::Keyword(ScopeKeyword::System) => Some(match metric {
            "avg_time_in_system_days" => run.avg_time_in_system_days,
            "completed" => run.completed as f64,
            "completed_defective" => run.completed_defective as f64,
            _ => return None,
        }),
        EffectScope::Keyword(ScopeKeyword::BlocksMean) => {
            let values: Vec<f64> = run
                .blocks
                .iter()
                .filter(|(id, _)| shared_blocks.contains(*id))
                .filter_map(|(_, b)| block_metric(b, metric))
                .collect();
            if values.is_empty() {
                None
            } else {
                Some(values.iter().sum::<f64>() / values.len() as f64)
            }
        }
        EffectScope::Block { block } => run.blocks.get(block).and_then(|b| block_metric(b, metric)),
    }
}

fn scope_text(scope: &EffectScope) -> String {
    match scope {
        EffectScope::Keyword(ScopeKeyword::System) => "(system)".to_owned(),
        EffectScope::Keyword(ScopeKeyword::BlocksMean) => "(mean over shared blocks)".to_owned(),
        EffectScope::Block { block } => format!("at `{block}`"),
    }
}

fn paired_check(
    description: String,
    direction: Direction,
    before_runs: &[RunResult],
    after_runs: &[RunResult],
    scope: &EffectScope,
    metric: &str,
    shared_blocks: &BTreeSet<String>,
) -> EffectCheck {
    let pairs: Vec<(f64, f64)> = before_runs
        .iter()
        .zip(after_runs.iter())
        .filter_map(|(b, a)| {
            Some((
                scope_value(b, scope, metric, shared_blocks)?,
                scope_value(a, scope, metric, shared_blocks)?,
            ))
        })
        .collect();
    if pairs.is_empty() {
        return EffectCheck {
            description,
            before: None,
            after: None,
            pair_fraction: None,
            passed: None,
        };
    }
    let n = pairs.len() as f64;
    let before = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let after = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let moved = pairs
        .iter()
        .filter(|(b, a)| direction.holds(*b, *a))
        .count();
    EffectCheck {
        description,
        before: Some(before),
        after: Some(after),
        pair_fraction: Some(moved as f64 / n),
        passed: Some(direction.holds(before, after)),
    }
}

fn sweep_check(
    description: String,
    sweep: &ControlSweep,
    blocks: &[String],
    metric: &str,
    direction: Direction,
) -> EffectCheck {
    let per_block =
        |block: &str, strictness: f64, pick: &dyn Fn(&crate::indicators::SweepRow) -> f64| {
            sweep
                .rows
                .iter()
                .find(|r| r.block == block && r.strictness == strictness)
                .map(pick)
                .unwrap_or(0.0)
        };
    let monotone = |values: &[f64]| values.windows(2).all(|w| direction.holds(w[0], w[1]));
    match metric {
        "utilization" | "avg_queue_length" => {
            let pick: &dyn Fn(&crate::indicators::SweepRow) -> f64 = match metric {
                "utilization" => &|r| r.utilization,
                _ => &|r| r.avg_queue_length,
            };
            let mut all_monotone = true;
            for block in blocks {
                let values: Vec<f64> = sweep
                    .grid
                    .iter()
                    .map(|&g| per_block(block, g, pick))
                    .collect();
                all_monotone &= monotone(&values);
            }
            let mean_at = |strictness: f64| {
                blocks
                    .iter()
                    .map(|b| per_block(b, strictness, pick))
                    .sum::<f64>()
                    / blocks.len() as f64
            };
            EffectCheck {
                description,
                before: Some(mean_at(sweep.grid[0])),
                after: Some(mean_at(*sweep.grid.last().expect("non-empty grid"))),
                pair_fraction: None,
                passed: Some(all_monotone),
            }
        }
        "defective_forward_fraction" => {
            let fraction_at = |strictness: f64| {
                let defective: f64 = blocks
                    .iter()
                    .map(|b| per_block(b, strictness, &|r| r.forwarded_defective))
                    .sum();
                let valid: f64 = blocks
                    .iter()
                    .map(|b| per_block(b, strictness, &|r| r.forwarded_valid))
                    .sum();
                if defective + valid > 0.0 {
                    defective / (defective + valid)
                } else {
                    0.0
                }
            };
            let values: Vec<f64> = sweep.grid.iter().map(|&g| fraction_at(g)).collect();
            EffectCheck {
                description,
                before: values.first().copied(),
                after: values.last().copied(),
                pair_fraction: None,
                passed: Some(monotone(&values)),
            }
        }
        _ => {
            // Pooled count (timeout drops and similar): compare the grid
            // endpoints only, mid-grid wobble is expected.
            let pooled_at = |strictness: f64| {
                blocks
                    .iter()
                    .map(|b| {
                        per_block(b, strictness, &|r| match metric {
                            "dropped_timeout" => r.dropped_timeout,
                            "rejected_by_control" => r.rejected_by_control,
                            _ => 0.0,
                        })
                    })
                    .sum::<f64>()
            };
            let first = pooled_at(sweep.grid[0]);
            let last = pooled_at(*sweep.grid.last().expect("non-empty grid"));
            EffectCheck {
                description,
                before: Some(first),
                after: Some(last),
                pair_fraction: None,
                passed: Some(direction.holds(first, last)),
            }
        }
    }
}

/// Runs a scenario over paired seeds and evaluates every declared claim.
/// Fixed seeds give an identical report.
pub fn evaluate_scenario(
    scenario: &Scenario,
    options: &ScenarioOptions,
) -> Result<ScenarioReport, ScenarioError> {
    let seeds: Vec<u64> = if options.seeds.is_empty() {
        (0..u64::from(scenario.default_replications.max(1)))
            .map(|i| scenario.default_seed + i)
            .collect()
    } else {
        options.seeds.clone()
    };

    let as_is_model = if options.disable_failures {
        strip_failures(&scenario.as_is)
    } else {
        scenario.as_is.clone()
    };
    let will_model = scenario.as_will_be.as_ref().map(|m| {
        if options.disable_failures {
            strip_failures(m)
        } else {
            m.clone()
        }
    });

    let as_is_runs = run_seeds(&as_is_model, &seeds)?;
    let as_is_agg = aggregate(&as_is_runs)?;
    let will_runs = will_model
        .as_ref()
        .map(|m| run_seeds(m, &seeds))
        .transpose()?;
    let will_agg = will_runs.as_deref().map(aggregate).transpose()?;

    let comparison = will_agg
        .as_ref()
        .map(|after| compare(&as_is_agg, after, &CompareOptions::default()))
        .transpose()?;

    let assess_options = AssessOptions {
        seed: scenario.default_seed,
        replications: seeds.len().max(1) as u32,
        ..AssessOptions::default()
    };
    let assessment_as_is = assess(&as_is_model, &assess_options, &[])?;
    let assessment_as_will_be = will_model
        .as_ref()
        .map(|m| assess(m, &assess_options, &[]))
        .transpose()?;

    let shared_blocks: BTreeSet<String> = match &will_model {
        Some(will) => scenario
            .as_is
            .blocks
            .iter()
            .filter(|b| will.block(&b.id).is_some())
            .map(|b| b.id.clone())
            .collect(),
        None => as_is_model.blocks.iter().map(|b| b.id.clone()).collect(),
    };

    let mut sweep_cache: BTreeMap<String, ControlSweep> = BTreeMap::new();
    let mut failure_baseline: Option<Vec<RunResult>> = None;
    let mut checks = Vec::new();
    for effect in &scenario.expected_effects {
        let check = match effect {
            ExpectedEffect::Delta {
                metric,
                scope,
                direction,
            } => {
                let description = format!(
                    "{metric} {} {} after re-engineering",
                    scope_text(scope),
                    direction.verb()
                );
                match &will_runs {
                    Some(after) => paired_check(
                        description,
                        *direction,
                        &as_is_runs,
                        after,
                        scope,
                        metric,
                        &shared_blocks,
                    ),
                    None => EffectCheck {
                        description,
                        before: None,
                        after: None,
                        pair_fraction: None,
                        passed: None,
                    },
                }
            }
            ExpectedEffect::Sweep {
                blocks,
                grid,
                metric,
                direction,
            } => {
                let description = format!(
                    "{metric} {} with strictness over {:?} at {}",
                    direction.verb(),
                    grid,
                    blocks.join(", ")
                );
                let key = format!("{blocks:?}|{grid:?}");
                if !sweep_cache.contains_key(&key) {
                    let config = SweepConfig {
                        seed: scenario.default_seed,
                        replications: seeds.len().max(1) as u32,
                        ..SweepConfig::default()
                    };
                    let sweep = optimize_control(&as_is_model, blocks, grid, &config)?;
                    sweep_cache.insert(key.clone(), sweep);
                }
                sweep_check(description, &sweep_cache[&key], blocks, metric, *direction)
            }
            ExpectedEffect::FailureDelta {
                metric,
                scope,
                direction,
            } => {
                let description = format!(
                    "{metric} {} {} when failures strike",
                    scope_text(scope),
                    direction.verb()
                );
                let has_failures = scenario.as_is.blocks.iter().any(|b| b.failure.is_some());
                if options.disable_failures || !has_failures {
                    EffectCheck {
                        description,
                        before: None,
                        after: None,
                        pair_fraction: None,
                        passed: None,
                    }
                } else {
                    if failure_baseline.is_none() {
                        failure_baseline =
                            Some(run_seeds(&strip_failures(&scenario.as_is), &seeds)?);
                    }
                    paired_check(
                        description,
                        *direction,
                        failure_baseline.as_ref().expect("baseline just computed"),
                        &as_is_runs,
                        scope,
                        metric,
                        &shared_blocks,
                    )
                }
            }
        };
        checks.push(check);
    }

    Ok(ScenarioReport {
        scenario: scenario.id.clone(),
        description: scenario.description.clone(),
        seeds,
        as_is: as_is_agg,
        as_will_be: will_agg,
        comparison,
        assessment_as_is,
        assessment_as_will_be,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicators::score_sequence;
    use crate::model::{count_inputs, serialize_model};

    #[test]
    fn all_bundles_list_load_and_round_trip() {
        let listed = list_scenarios();
        let ids: Vec<&str> = listed.iter().map(|(id, _)| id.as_str()).collect();
        for expected in [
            "product-concept",
            "production-support",
            "delivery-of-goods",
            "product-order",
        ] {
            assert!(ids.contains(&expected), "missing {expected}");
        }
        for (id, description) in &listed {
            assert!(!description.is_empty(), "{id} has no description");
            let scenario = load_scenario(id).unwrap();
            let text = serialize_model(&scenario.as_is);
            assert_eq!(parse_model(&text).unwrap(), scenario.as_is, "{id}");
        }
    }

    #[test]
    fn unknown_scenario_id_errors() {
        assert!(matches!(
            load_scenario("nope"),
            Err(ScenarioError::Unknown(id)) if id == "nope"
        ));
    }

    #[test]
    fn product_concept_has_exactly_two_overloaded_blocks() {
        let scenario = load_scenario("product-concept").unwrap();
        let as_is = &scenario.as_is;
        assert_eq!(as_is.blocks.len(), 6);
        let mut outside_optimum: Vec<(String, usize)> = as_is
            .blocks
            .iter()
            .map(|b| (b.id.clone(), count_inputs(as_is, &b.id).unwrap()))
            .filter(|(_, n)| !(3..5).contains(n))
            .collect();
        outside_optimum.sort();
        assert_eq!(
            outside_optimum,
            vec![
                ("harmonization-of-requirements".to_owned(), 6),
                ("prediction-of-valuation".to_owned(), 5)
            ]
        );

        let will = scenario.as_will_be.as_ref().unwrap();
        assert_eq!(will.blocks.len(), 5);
        assert!(will.block("choice-of-target-segment").is_none());
        let worst = will
            .blocks
            .iter()
            .map(|b| count_inputs(will, &b.id).unwrap())
            .max()
            .unwrap();
        assert!(
            worst < 5,
            "re-engineering should cut the worst fan-in, got {worst}"
        );
    }

    #[test]
    fn product_order_carries_the_published_intensities() {
        let scenario = load_scenario("product-order").unwrap();
        let mut intensities: Vec<f64> =
            scenario.as_is.sources.iter().map(|s| s.intensity).collect();
        intensities.sort_by(f64::total_cmp);
        assert_eq!(intensities, vec![2.0, 3.0]);
        assert!(scenario.as_will_be.is_none());
        assert!(scenario.as_is.blocks.iter().any(|b| b.failure.is_some()));
    }

    #[test]
    fn production_support_mixes_poisson_and_periodic_feeds() {
        let scenario = load_scenario("production-support").unwrap();
        let poisson = scenario
            .as_is
            .sources
            .iter()
            .filter(|s| s.intensity > 0.0)
            .count();
        let periodic: Vec<_> = scenario
            .as_is
            .sources
            .iter()
            .filter(|s| s.intensity == 0.0)
            .collect();
        assert_eq!(poisson, 4);
        assert_eq!(periodic.len(), 5);
        assert!(periodic.iter().all(|s| s.period_days.is_some()));
        let controls = scenario
            .as_is
            .blocks
            .iter()
            .filter(|b| b.control.is_some())
            .count();
        assert_eq!(controls, 3);
    }

    #[test]
    fn delivery_sequence_is_broken_before_and_correct_after() {
        let scenario = load_scenario("delivery-of-goods").unwrap();
        let before = score_sequence(&scenario.as_is).unwrap();
        assert_eq!(before.value, 0.2);
        assert!(
            before.evidence.contains("Forming the request"),
            "{}",
            before.evidence
        );
        assert!(
            before.evidence.contains("Quality control of delivery"),
            "{}",
            before.evidence
        );
        let after = score_sequence(scenario.as_will_be.as_ref().unwrap()).unwrap();
        assert_eq!(after.value, 1.0);
    }

    #[test]
    fn disabled_failures_skip_failure_claims() {
        let report = run_scenario(
            "product-order",
            &ScenarioOptions {
                seeds: vec![5, 6],
                disable_failures: true,
            },
        )
        .unwrap();
        assert_eq!(report.checks.len(), 2);
        assert!(report.checks.iter().all(|c| c.passed.is_none()));
        assert!(report
            .assessment_as_is
            .organizational
            .iter()
            .all(|i| i.name != "recovery"));
    }

    #[test]
    fn scenario_reports_are_reproducible() {
        let options = ScenarioOptions {
            seeds: vec![41, 42],
            disable_failures: false,
        };
        let one = run_scenario("product-order", &options).unwrap();
        let two = run_scenario("product-order", &options).unwrap();
        assert_eq!(one, two);
        assert_eq!(one.seeds, vec![41, 42]);
        assert!(one.comparison.is_none());
        assert!(one
            .checks
            .iter()
            .all(|c| c.passed.is_some() && c.before.is_some()));
    }
}
