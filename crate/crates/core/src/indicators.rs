//! Stability indicators: table-driven structural scores (inputs per block,
//! block count, execution order) and run-based organizational scores
//! (control strictness sweep, failure recovery), assembled into the
//! structural/organizational/legal assessment triple.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::run_replications;
use crate::metrics::RunResult;
use crate::model::{count_inputs, ControlParams, ModelError, ProcessModel};

/// Errors from scoring and sweeping.
#[derive(Debug, thiserror::Error)]
pub enum IndicatorError {
    #[error("indicator requires a count of at least 1 (got {0})")]
    CountOutOfRange(usize),
    #[error("model declares no precedence constraints to score")]
    NoPrecedence,
    #[error("no block carries a failure profile")]
    NoFailureProfiles,
    #[error("model has no control blocks")]
    NoControlBlocks,
    #[error("strictness grid is empty")]
    EmptyGrid,
    #[error("strictness {0} is outside (0, 1)")]
    GridValueOutOfRange(f64),
    #[error("unknown block `{0}`")]
    UnknownBlock(String),
    #[error("block `{0}` has no control parameters to sweep")]
    NotAControlBlock(String),
    #[error(transparent)]
    Simulation(#[from] ModelError),
}

/// One scored indicator: a value from the scoring table, its linguistic
/// label, and a note on what was measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorScore {
    pub value: f64,
    pub label: String,
    pub evidence: String,
}

impl IndicatorScore {
    fn new(value: f64, label: &str, evidence: String) -> Self {
        IndicatorScore {
            value,
            label: label.to_owned(),
            evidence,
        }
    }
}

/// An indicator score tagged with the indicator's name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedIndicator {
    pub name: String,
    #[serde(flatten)]
    pub score: IndicatorScore,
}

/// The assessment triple: structural, organizational, and externally
/// supplied legal indicator vectors. Kept as vectors on purpose — there is
/// no defensible way to collapse them into one number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FSAssessment {
    #[serde(rename = "S")]
    pub structural: Vec<NamedIndicator>,
    #[serde(rename = "O")]
    pub organizational: Vec<NamedIndicator>,
    #[serde(rename = "L")]
    pub legal: Vec<NamedIndicator>,
}

/// Scores the number of input flows of a block. Boundary counts land on the
/// higher-stability side: 3 and 5 open the next band upward, 8 still counts
/// as redundant rather than unacceptable.
pub fn score_inputs(n: usize) -> Result<IndicatorScore, IndicatorError> {
    let (value, label) = match n {
        0 => return Err(IndicatorError::CountOutOfRange(n)),
        1..=2 => (0.5, "Not appropriate"),
        3..=4 => (1.0, "Optimal"),
        5..=8 => (0.7, "Redundant"),
        _ => (0.2, "Unacceptable"),
    };
    Ok(IndicatorScore::new(
        value,
        label,
        format!("{n} input flow(s)"),
    ))
}

/// Configurable band for the block-count score; the defaults follow the
/// 3-to-6 short-term-memory rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCountPolicy {
    pub optimal_min: usize,
    pub optimal_max: usize,
}

impl Default for BlockCountPolicy {
    fn default() -> Self {
        BlockCountPolicy {
            optimal_min: 3,
            optimal_max: 6,
        }
    }
}

/// Scores the number of blocks in the process against a configurable
/// optimal band.
pub fn score_block_count(
    n: usize,
    policy: &BlockCountPolicy,
) -> Result<IndicatorScore, IndicatorError> {
    if n < 1 {
        return Err(IndicatorError::CountOutOfRange(n));
    }
    let (value, label) = if n >= policy.optimal_min && n <= policy.optimal_max {
        (1.0, "Optimal")
    } else if n < policy.optimal_min {
        (0.5, "Too coarse")
    } else {
        (0.2, "Overloaded")
    };
    Ok(IndicatorScore::new(
        value,
        label,
        format!(
            "{n} block(s); policy band {}..={} counts as optimal",
            policy.optimal_min, policy.optimal_max
        ),
    ))
}

/// Which declared ordering constraints the route graph violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceViolations {
    /// Total declared constraints.
    pub total: usize,
    pub satisfied: usize,
    /// `(earlier, later)` pairs where some path runs `later` first.
    pub violated_precede: Vec<(String, String)>,
    /// `(a, b)` pairs where one block is an ancestor of the other.
    pub violated_parallel: Vec<(String, String)>,
}

/// Checks every declared precedence constraint against the route graph.
///
/// A `must_precede (earlier, later)` pair holds iff no path runs `later`
/// before `earlier` — that is, `later` is not an ancestor of `earlier`.
/// A `must_parallel (a, b)` pair holds iff neither block is an ancestor of
/// the other.
pub fn sequence_violations(model: &ProcessModel) -> Result<SequenceViolations, IndicatorError> {
    let precedence = model
        .precedence
        .as_ref()
        .filter(|p| !p.is_empty())
        .ok_or(IndicatorError::NoPrecedence)?;
    let mut violated_precede = Vec::new();
    let mut violated_parallel = Vec::new();
    for c in &precedence.must_precede {
        if model.is_ancestor(&c.later, &c.earlier) {
            violated_precede.push((c.earlier.clone(), c.later.clone()));
        }
    }
    for c in &precedence.must_parallel {
        if model.is_ancestor(&c.a, &c.b) || model.is_ancestor(&c.b, &c.a) {
            violated_parallel.push((c.a.clone(), c.b.clone()));
        }
    }
    let total = precedence.must_precede.len() + precedence.must_parallel.len();
    let satisfied = total - violated_precede.len() - violated_parallel.len();
    Ok(SequenceViolations {
        total,
        satisfied,
        violated_precede,
        violated_parallel,
    })
}

/// Scores how well the route graph respects the declared execution order.
/// The thresholds (all / ≥ 75% / ≥ 50% satisfied) are artifact policy.
pub fn score_sequence(model: &ProcessModel) -> Result<IndicatorScore, IndicatorError> {
    let v = sequence_violations(model)?;
    let ratio = v.satisfied as f64 / v.total as f64;
    let (value, label) = if v.satisfied == v.total {
        (1.0, "Correct sequence")
    } else if ratio >= 0.75 {
        (0.7, "Minor violations")
    } else if ratio >= 0.5 {
        (0.5, "Significant violations")
    } else {
        (0.2, "Broken sequence")
    };
    let name_of = |id: &str| {
        model
            .block(id)
            .map(|b| b.name.clone())
            .unwrap_or_else(|| id.to_owned())
    };
    let evidence = if v.satisfied == v.total {
        format!("all {} ordering constraint(s) satisfied", v.total)
    } else {
        let mut notes: Vec<String> = v
            .violated_precede
            .iter()
            .map(|(e, l)| format!("`{}` must precede `{}`", name_of(e), name_of(l)))
            .collect();
        notes.extend(
            v.violated_parallel
                .iter()
                .map(|(a, b)| format!("`{}` must run parallel to `{}`", name_of(a), name_of(b))),
        );
        format!(
            "{} of {} constraint(s) violated: {}",
            v.total - v.satisfied,
            v.total,
            notes.join("; ")
        )
    };
    Ok(IndicatorScore::new(value, label, evidence))
}

// ---------------------------------------------------------------------------
// Control sweep
// ---------------------------------------------------------------------------

/// Weights of the sweep objective
/// `J = forwarded_valid x w_valid - forwarded_defective x w_defective -
/// dropped_timeout x w_drop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub forwarded_valid: f64,
    pub forwarded_defective: f64,
    pub dropped_timeout: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights {
            forwarded_valid: 1.0,
            forwarded_defective: 1.0,
            dropped_timeout: 0.5,
        }
    }
}

/// Replication plan and objective weights for [`optimize_control`] and
/// [`score_recovery`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub replications: u32,
    pub weights: ObjectiveWeights,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 1,
            replications: 30,
            weights: ObjectiveWeights::default(),
        }
    }
}

/// Replication means for one control block at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub strictness: f64,
    pub block: String,
    pub utilization: f64,
    pub avg_queue_length: f64,
    /// Non-defective requests that passed the control.
    pub forwarded_valid: f64,
    /// Defective requests that escaped the control.
    pub forwarded_defective: f64,
    pub rejected_by_control: f64,
    pub dropped_timeout: f64,
    pub objective: f64,
}

/// Full sweep table plus the per-block and overall argmax.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSweep {
    /// Evaluated strictness values, ascending.
    pub grid: Vec<f64>,
    pub rows: Vec<SweepRow>,
    /// Best strictness per block (ties resolved toward the laxer value).
    pub best: BTreeMap<String, f64>,
    /// Strictness maximizing the summed objective over all swept blocks.
    pub global_best: f64,
}

/// Evaluates every grid point by replicated simulation, setting all swept
/// control blocks to the same strictness per point, and reports the
/// objective-maximizing strictness. An empty `block_ids` list sweeps every
/// control block.
pub fn optimize_control(
    model: &ProcessModel,
    block_ids: &[String],
    grid: &[f64],
    config: &SweepConfig,
) -> Result<ControlSweep, IndicatorError> {
    if grid.is_empty() {
        return Err(IndicatorError::EmptyGrid);
    }
    for &g in grid {
        if !(g > 0.0 && g < 1.0) || !g.is_finite() {
            return Err(IndicatorError::GridValueOutOfRange(g));
        }
    }
    let targets: Vec<String> = if block_ids.is_empty() {
        model
            .blocks
            .iter()
            .filter(|b| b.control.is_some())
            .map(|b| b.id.clone())
            .collect()
    } else {
        for id in block_ids {
            let block = model
                .block(id)
                .ok_or_else(|| IndicatorError::UnknownBlock(id.clone()))?;
            if block.control.is_none() {
                return Err(IndicatorError::NotAControlBlock(id.clone()));
            }
        }
        block_ids.to_vec()
    };
    if targets.is_empty() {
        return Err(IndicatorError::NoControlBlocks);
    }

    let mut grid: Vec<f64> = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let replications = config.replications.max(1);
    let w = config.weights;

    let mut rows = Vec::new();
    let mut best: BTreeMap<String, f64> = BTreeMap::new();
    let mut best_objective: BTreeMap<String, f64> = BTreeMap::new();
    let mut global_best = grid[0];
    let mut global_best_objective = f64::NEG_INFINITY;
    for &strictness in &grid {
        let mut variant = model.clone();
        for block in &mut variant.blocks {
            if targets.contains(&block.id) {
                block.control = Some(ControlParams { strictness });
            }
        }
        let results = run_replications(&variant, config.seed, replications)?;
        let mean = |f: &dyn Fn(&RunResult) -> f64| {
            results.iter().map(f).sum::<f64>() / results.len() as f64
        };
        let mut point_total = 0.0;
        for id in &targets {
            let forwarded_valid =
                mean(&|r| (r.blocks[id].served - r.blocks[id].served_defective) as f64);
            let forwarded_defective = mean(&|r| r.blocks[id].served_defective as f64);
            let dropped_timeout = mean(&|r| r.blocks[id].dropped_timeout as f64);
            let objective = w.forwarded_valid * forwarded_valid
                - w.forwarded_defective * forwarded_defective
                - w.dropped_timeout * dropped_timeout;
            point_total += objective;
            rows.push(SweepRow {
                strictness,
                block: id.clone(),
                utilization: mean(&|r| r.blocks[id].utilization),
                avg_queue_length: mean(&|r| r.blocks[id].avg_queue_length),
                forwarded_valid,
                forwarded_defective,
                rejected_by_control: mean(&|r| r.blocks[id].rejected_by_control as f64),
                dropped_timeout,
                objective,
            });
            // Strictly-greater keeps the laxer strictness on ties.
            if best_objective.get(id).is_none_or(|&b| objective > b) {
                best_objective.insert(id.clone(), objective);
                best.insert(id.clone(), strictness);
            }
        }
        if point_total > global_best_objective {
            global_best_objective = point_total;
            global_best = strictness;
        }
    }
    Ok(ControlSweep {
        grid,
        rows,
        best,
        global_best,
    })
}

/// Scores how balanced the configured control strictness values are. This
/// mapping is artifact policy: the middle band keeps rejection power without
/// starving throughput.
pub fn score_control(model: &ProcessModel) -> Result<IndicatorScore, IndicatorError> {
    let values: Vec<f64> = model
        .blocks
        .iter()
        .filter_map(|b| b.control.as_ref().map(|c| c.strictness))
        .collect();
    if values.is_empty() {
        return Err(IndicatorError::NoControlBlocks);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let (value, label) = if (0.3..=0.7).contains(&mean) {
        (1.0, "Balanced")
    } else if mean < 0.3 {
        (0.5, "Too lax")
    } else {
        (0.5, "Too strict")
    };
    Ok(IndicatorScore::new(
        value,
        label,
        format!(
            "mean strictness {mean:.2} over {} control block(s); policy band 0.30..=0.70 counts as balanced",
            values.len()
        ),
    ))
}

/// Scores resilience to failures by pairing runs with and without the
/// failure profiles under common random numbers and measuring the relative
/// degradation of time in system. The band edges (5%, 25%, 75%) are
/// artifact policy.
pub fn score_recovery(
    model: &ProcessModel,
    seed: u64,
    replications: u32,
) -> Result<IndicatorScore, IndicatorError> {
    if model.blocks.iter().all(|b| b.failure.is_none()) {
        return Err(IndicatorError::NoFailureProfiles);
    }
    let mut baseline = model.clone();
    for block in &mut baseline.blocks {
        block.failure = None;
    }
    let replications = replications.max(1);
    let with_failures = run_replications(model, seed, replications)?;
    let without = run_replications(&baseline, seed, replications)?;
    let mean = |runs: &[RunResult]| {
        runs.iter().map(|r| r.avg_time_in_system_days).sum::<f64>() / runs.len() as f64
    };
    let degraded = mean(&with_failures);
    let base = mean(&without);
    let d = if base > 0.0 {
        (degraded - base) / base
    } else {
        0.0
    };
    let (value, label) = if d <= 0.05 {
        (1.0, "Stable")
    } else if d <= 0.25 {
        (0.7, "Degraded")
    } else if d <= 0.75 {
        (0.5, "Fragile")
    } else {
        (0.2, "Unstable")
    };
    Ok(IndicatorScore::new(
        value,
        label,
        format!(
            "time in system {base:.3} -> {degraded:.3} days under failures over {replications} \
             paired run(s); relative degradation {:.1}% (policy bands 5%/25%/75%)",
            d * 100.0
        ),
    ))
}

// ---------------------------------------------------------------------------
// Assembled assessment
// ---------------------------------------------------------------------------

/// Replication plan and scoring policy for [`assess`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssessOptions {
    pub seed: u64,
    pub replications: u32,
    pub block_count_policy: BlockCountPolicy,
}

impl Default for AssessOptions {
    fn default() -> Self {
        AssessOptions {
            seed: 1,
            replications: 30,
            block_count_policy: BlockCountPolicy::default(),
        }
    }
}

/// Assembles the full assessment. Structural scores always include the worst
/// inputs-per-block score and the block count; the sequence score joins them
/// when the model declares precedence constraints. Organizational scores are
/// produced only for models that configure controls or failure profiles —
/// absent components are omitted, never defaulted. Legal indicators pass
/// through with their evidence marked external.
pub fn assess(
    model: &ProcessModel,
    options: &AssessOptions,
    legal: &[NamedIndicator],
) -> Result<FSAssessment, IndicatorError> {
    let mut structural = Vec::new();
    let mut worst: Option<(String, usize, IndicatorScore)> = None;
    for block in &model.blocks {
        let n = count_inputs(model, &block.id)?;
        // A block nothing feeds scores like a single-input one.
        let score = score_inputs(n.max(1))?;
        let is_worse = match &worst {
            None => true,
            Some((_, worst_n, worst_score)) => {
                score.value < worst_score.value
                    || (score.value == worst_score.value && n > *worst_n)
            }
        };
        if is_worse {
            worst = Some((block.name.clone(), n, score));
        }
    }
    if let Some((name, n, score)) = worst {
        structural.push(NamedIndicator {
            name: "inputs-per-block".to_owned(),
            score: IndicatorScore {
                evidence: format!("worst block `{name}` has {n} input flow(s)"),
                ..score
            },
        });
        structural.push(NamedIndicator {
            name: "block-count".to_owned(),
            score: score_block_count(model.blocks.len(), &options.block_count_policy)?,
        });
    }
    if model.precedence.as_ref().is_some_and(|p| !p.is_empty()) {
        structural.push(NamedIndicator {
            name: "sequence".to_owned(),
            score: score_sequence(model)?,
        });
    }

    let mut organizational = Vec::new();
    if model.blocks.iter().any(|b| b.control.is_some()) {
        organizational.push(NamedIndicator {
            name: "control-balance".to_owned(),
            score: score_control(model)?,
        });
    }
    if model.blocks.iter().any(|b| b.failure.is_some()) {
        organizational.push(NamedIndicator {
            name: "recovery".to_owned(),
            score: score_recovery(model, options.seed, options.replications)?,
        });
    }

    let legal = legal
        .iter()
        .map(|ni| NamedIndicator {
            name: ni.name.clone(),
            score: IndicatorScore {
                value: ni.score.value,
                label: ni.score.label.clone(),
                evidence: if ni.score.evidence.is_empty() {
                    "external".to_owned()
                } else {
                    format!("external: {}", ni.score.evidence)
                },
            },
        })
        .collect();

    Ok(FSAssessment {
        structural,
        organizational,
        legal,
    })
}
