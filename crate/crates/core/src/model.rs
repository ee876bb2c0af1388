//! Domain types for process models: the model-file format, validation,
//! structural queries, and re-engineering edits.
//!
//! A business process is a queueing network: requests emitted by [`Source`]s
//! flow along [`Route`]s through [`Block`]s (service channels with a FIFO
//! queue and one or more parallel servers) until they leave the network at a
//! block with no outgoing routes. Model time is measured in business days.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

/// Errors raised while parsing or editing a model.
#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    /// The document is not well-formed JSON.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The document parsed but violates the model invariants.
    #[error("invalid model: {}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    /// An operation referenced an id that does not exist in the model.
    #[error("unknown id `{0}`")]
    UnknownId(String),
    /// An edit script could not be applied.
    #[error("invalid edit: {0}")]
    InvalidEdit(String),
    /// An edit removed a source's only delivery target without rerouting it.
    #[error("edit leaves source `{0}` without a target")]
    SourceWithoutTarget(String),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| format!("[{}] {}", d.subject, d.message))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Severity of a validation finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

/// One validation finding: what is wrong, how bad, and on which entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Id of the entity the finding is about (block, source, route endpoint…).
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    fn error(subject: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            subject: subject.into(),
            message: message.into(),
        }
    }

    fn warning(subject: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            subject: subject.into(),
            message: message.into(),
        }
    }
}

/// Quality-control behavior of a block.
///
/// `strictness` trades speed against detection quality: a defective request
/// is rejected with probability `strictness`, and the block's mean service
/// time scales by `strictness / 0.5` (0.5 is the neutral midpoint — fast and
/// permissive below it, slow and thorough above it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    pub strictness: f64,
}

/// Failure/recovery behavior of a block.
///
/// Failures arrive with exponential inter-failure times (rate
/// `failure_rate_per_day`, clock paused while the block is down). During a
/// failure the effective capacity drops to `ceil(capacity * (1 - severity))`;
/// full capacity returns `recovery_time_days` later. Failures never overlap
/// on one block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureProfile {
    pub failure_rate_per_day: f64,
    /// Fraction of capacity lost while down; 1.0 is a full stop.
    pub severity: f64,
    pub recovery_time_days: f64,
}

/// A subprocess: one service channel with a FIFO queue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub id: String,
    /// Human-readable name; defaults to the id.
    #[serde(default)]
    pub name: String,
    /// Mean processing time of one request, in business days.
    pub service_time_days: f64,
    /// Number of requests the block can process simultaneously.
    #[serde(default = "default_capacity")]
    pub capacity: u32,
    /// Maximum queue length; absent means unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub queue_limit: Option<u32>,
    /// Maximum wait before a queued request is dropped as irrelevant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeout_days: Option<f64>,
    /// When true, service takes exactly `service_time_days` (no randomness);
    /// useful for sensitivity runs.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub deterministic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<ControlParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureProfile>,
    /// Free-form documentation (e.g. why a parameter value was chosen).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

fn default_capacity() -> u32 {
    1
}

/// Cap on how many requests a source may emit per rolling window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionLimit {
    pub max_count: u32,
    /// Window length in days; absent means the whole run horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_days: Option<f64>,
}

/// An external generator of requests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Source {
    pub id: String,
    /// Human-readable name; defaults to the id.
    #[serde(default)]
    pub name: String,
    /// Mean arrivals per business day (Poisson process). An intensity of 0
    /// means the source is either silent or deterministic-periodic, depending
    /// on `period_days`.
    pub intensity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emission_limit: Option<EmissionLimit>,
    /// Block receiving this source's requests.
    pub target: String,
    /// Fraction of emitted requests that are defective.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub defect_rate: f64,
    /// Emission period for intensity-0 sources (one request every
    /// `period_days`, starting at `period_days`). Ignored when intensity > 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_days: Option<f64>,
    /// Free-form documentation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// A directed edge of the process graph: `from` (source or block) to a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub from: String,
    pub to: String,
}

/// An ordering constraint: `earlier` must come before `later` on every path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderConstraint {
    pub earlier: String,
    pub later: String,
}

/// A parallelism constraint: neither block may precede the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelConstraint {
    pub a: String,
    pub b: String,
}

/// Declared ordering/parallelism requirements, checked by the sequence score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct PrecedenceSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub must_precede: Vec<OrderConstraint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub must_parallel: Vec<ParallelConstraint>,
}

impl PrecedenceSpec {
    pub fn is_empty(&self) -> bool {
        self.must_precede.is_empty() && self.must_parallel.is_empty()
    }
}

/// A complete business-process model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessModel {
    #[serde(default = "default_name")]
    pub name: String,
    /// Length of one run in business days.
    #[serde(default = "default_horizon")]
    pub horizon_days: u32,
    /// Initial interval excluded from time-weighted statistics.
    #[serde(default = "default_warmup")]
    pub warmup_days: u32,
    pub blocks: Vec<Block>,
    pub sources: Vec<Source>,
    #[serde(default)]
    pub routes: Vec<Route>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precedence: Option<PrecedenceSpec>,
}

fn default_name() -> String {
    "untitled".to_owned()
}

fn default_horizon() -> u32 {
    250
}

fn default_warmup() -> u32 {
    20
}

impl ProcessModel {
    /// Looks up a block by id.
    pub fn block(&self, id: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.id == id)
    }

    /// Looks up a source by id.
    pub fn source(&self, id: &str) -> Option<&Source> {
        self.sources.iter().find(|s| s.id == id)
    }

    /// Routes leaving `id` (a source or block), in declaration order.
    pub fn outgoing<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Route> + 'a {
        self.routes.iter().filter(move |r| r.from == id)
    }

    /// Routes entering block `id`, in declaration order.
    pub fn incoming<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Route> + 'a {
        self.routes.iter().filter(move |r| r.to == id)
    }

    /// Block-to-block adjacency (source edges excluded), id -> successor ids.
    pub fn block_graph(&self) -> BTreeMap<&str, Vec<&str>> {
        let block_ids: BTreeSet<&str> = self.blocks.iter().map(|b| b.id.as_str()).collect();
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for b in &self.blocks {
            adj.insert(b.id.as_str(), Vec::new());
        }
        for r in &self.routes {
            if block_ids.contains(r.from.as_str()) && block_ids.contains(r.to.as_str()) {
                adj.get_mut(r.from.as_str()).unwrap().push(r.to.as_str());
            }
        }
        adj
    }

    /// True if some route path leads from block `a` to block `b` (a strictly
    /// precedes b somewhere in the process).
    pub fn is_ancestor(&self, a: &str, b: &str) -> bool {
        if a == b {
            return false;
        }
        let adj = self.block_graph();
        let mut seen: HashSet<&str> = HashSet::new();
        let mut frontier: VecDeque<&str> = VecDeque::new();
        frontier.push_back(a);
        while let Some(cur) = frontier.pop_front() {
            for &next in adj.get(cur).map(Vec::as_slice).unwrap_or(&[]) {
                if next == b {
                    return true;
                }
                if seen.insert(next) {
                    frontier.push_back(next);
                }
            }
        }
        false
    }
}

/// Parses and validates a model file.
///
/// Fills in defaulted names, synthesizes a route for any source that declares
/// only a `target`, and rejects the document if any invariant fails.
pub fn parse_model(text: &str) -> Result<ProcessModel, ModelError> {
    let mut model: ProcessModel = serde_json::from_str(text).map_err(|e| ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    normalize(&mut model);
    let diagnostics = validate(&model);
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(ModelError::Invalid(diagnostics));
    }
    Ok(model)
}

/// Serializes a model to the model-file format (pretty JSON, trailing newline).
pub fn serialize_model(model: &ProcessModel) -> String {
    let mut out = serde_json::to_string_pretty(model).expect("model serialization cannot fail");
    out.push('\n');
    out
}

/// Default-name fill-in plus source-route synthesis.
fn normalize(model: &mut ProcessModel) {
    for b in &mut model.blocks {
        if b.name.is_empty() {
            b.name = b.id.clone();
        }
    }
    for s in &mut model.sources {
        if s.name.is_empty() {
            s.name = s.id.clone();
        }
    }
    // A source's `target` implies one route; tolerate files that omit it.
    let mut synthesized = Vec::new();
    for s in &model.sources {
        if !model.routes.iter().any(|r| r.from == s.id) {
            synthesized.push(Route {
                from: s.id.clone(),
                to: s.target.clone(),
            });
        }
    }
    model.routes.extend(synthesized);
}

/// Checks every model invariant and returns the findings (empty = valid).
///
/// Errors make the model unusable; warnings flag questionable structure
/// (e.g. an unreachable block).
pub fn validate(model: &ProcessModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    // --- id uniqueness across blocks and sources ---
    let mut seen: HashMap<&str, &str> = HashMap::new();
    for b in &model.blocks {
        if let Some(prev) = seen.insert(b.id.as_str(), "block") {
            diags.push(Diagnostic::error(
                &b.id,
                format!("duplicate id `{}` (already used by a {prev})", b.id),
            ));
        }
    }
    for s in &model.sources {
        if let Some(prev) = seen.insert(s.id.as_str(), "source") {
            diags.push(Diagnostic::error(
                &s.id,
                format!("duplicate id `{}` (already used by a {prev})", s.id),
            ));
        }
    }
    let block_ids: HashSet<&str> = model.blocks.iter().map(|b| b.id.as_str()).collect();
    let source_ids: HashSet<&str> = model.sources.iter().map(|s| s.id.as_str()).collect();

    // --- horizon/warmup ---
    if model.horizon_days <= model.warmup_days {
        diags.push(Diagnostic::error(
            &model.name,
            format!(
                "horizon_days ({}) must exceed warmup_days ({})",
                model.horizon_days, model.warmup_days
            ),
        ));
    }

    // --- per-block parameter ranges ---
    for b in &model.blocks {
        if !(b.service_time_days > 0.0 && b.service_time_days.is_finite()) {
            diags.push(Diagnostic::error(
                &b.id,
                "service_time_days must be a positive, finite number of days",
            ));
        }
        if b.capacity == 0 {
            diags.push(Diagnostic::error(&b.id, "capacity must be at least 1"));
        }
        if let Some(limit) = b.queue_limit {
            if limit == 0 {
                diags.push(Diagnostic::error(&b.id, "queue_limit must be at least 1"));
            }
        }
        if let Some(t) = b.timeout_days {
            if !(t > 0.0 && t.is_finite()) {
                diags.push(Diagnostic::error(&b.id, "timeout_days must be positive"));
            }
        }
        if let Some(c) = &b.control {
            if !(c.strictness > 0.0 && c.strictness < 1.0) {
                diags.push(Diagnostic::error(
                    &b.id,
                    format!(
                        "control strictness must lie strictly between 0 and 1 (got {})",
                        c.strictness
                    ),
                ));
            }
        }
        if let Some(f) = &b.failure {
            if !(f.failure_rate_per_day >= 0.0 && f.failure_rate_per_day.is_finite()) {
                diags.push(Diagnostic::error(
                    &b.id,
                    "failure_rate_per_day must be non-negative and finite",
                ));
            }
            if !(0.0..=1.0).contains(&f.severity) {
                diags.push(Diagnostic::error(
                    &b.id,
                    "failure severity must lie in [0, 1]",
                ));
            }
            if !(f.recovery_time_days > 0.0 && f.recovery_time_days.is_finite()) {
                diags.push(Diagnostic::error(
                    &b.id,
                    "recovery_time_days must be positive",
                ));
            }
        }
    }

    // --- per-source parameter ranges ---
    for s in &model.sources {
        if !(s.intensity >= 0.0 && s.intensity.is_finite()) {
            diags.push(Diagnostic::error(
                &s.id,
                "intensity must be non-negative and finite",
            ));
        }
        if !(0.0..=1.0).contains(&s.defect_rate) {
            diags.push(Diagnostic::error(&s.id, "defect_rate must lie in [0, 1]"));
        }
        if let Some(limit) = &s.emission_limit {
            if limit.max_count == 0 {
                diags.push(Diagnostic::error(
                    &s.id,
                    "emission_limit.max_count must be at least 1",
                ));
            }
            if let Some(p) = limit.period_days {
                if !(p > 0.0 && p.is_finite()) {
                    diags.push(Diagnostic::error(
                        &s.id,
                        "emission_limit.period_days must be positive",
                    ));
                }
            }
        }
        if let Some(p) = s.period_days {
            if !(p > 0.0 && p.is_finite()) {
                diags.push(Diagnostic::error(&s.id, "period_days must be positive"));
            }
            if s.intensity > 0.0 {
                diags.push(Diagnostic::warning(
                    &s.id,
                    "period_days is ignored because intensity > 0",
                ));
            }
        }
        if s.intensity == 0.0 && s.period_days.is_none() {
            diags.push(Diagnostic::warning(
                &s.id,
                "source never emits (intensity 0 and no period_days)",
            ));
        }
        if !block_ids.contains(s.target.as_str()) {
            diags.push(Diagnostic::error(
                &s.id,
                format!("target references unknown block `{}`", s.target),
            ));
        }
    }

    // --- routes ---
    let mut route_set: HashSet<(&str, &str)> = HashSet::new();
    for r in &model.routes {
        if !block_ids.contains(r.from.as_str()) && !source_ids.contains(r.from.as_str()) {
            diags.push(Diagnostic::error(
                &r.from,
                format!("route starts at unknown id `{}`", r.from),
            ));
        }
        if !block_ids.contains(r.to.as_str()) {
            diags.push(Diagnostic::error(
                &r.to,
                format!("route ends at unknown block `{}`", r.to),
            ));
        }
        if r.from == r.to {
            diags.push(Diagnostic::error(
                &r.from,
                format!("route `{}` -> `{}` is a self-loop", r.from, r.to),
            ));
        }
        if !route_set.insert((r.from.as_str(), r.to.as_str())) {
            diags.push(Diagnostic::error(
                &r.from,
                format!("duplicate route `{}` -> `{}`", r.from, r.to),
            ));
        }
    }

    // --- source/route consistency: exactly one outgoing route, toward target ---
    for s in &model.sources {
        let outs: Vec<&Route> = model.outgoing(&s.id).collect();
        match outs.as_slice() {
            [] => diags.push(Diagnostic::error(
                &s.id,
                "source has no outgoing route (no target)",
            )),
            [one] => {
                if one.to != s.target {
                    diags.push(Diagnostic::error(
                        &s.id,
                        format!(
                            "source route goes to `{}` but target declares `{}`",
                            one.to, s.target
                        ),
                    ));
                }
            }
            many => diags.push(Diagnostic::error(
                &s.id,
                format!(
                    "source has {} outgoing routes; exactly one allowed",
                    many.len()
                ),
            )),
        }
    }

    // --- reachability: every block fed by some source (warning) ---
    let mut reachable: HashSet<&str> = HashSet::new();
    let mut frontier: VecDeque<&str> = VecDeque::new();
    for s in &model.sources {
        if block_ids.contains(s.target.as_str()) && reachable.insert(s.target.as_str()) {
            frontier.push_back(s.target.as_str());
        }
    }
    let adj = model.block_graph();
    while let Some(cur) = frontier.pop_front() {
        for &next in adj.get(cur).map(Vec::as_slice).unwrap_or(&[]) {
            if reachable.insert(next) {
                frontier.push_back(next);
            }
        }
    }
    for b in &model.blocks {
        if !reachable.contains(b.id.as_str()) {
            diags.push(Diagnostic::warning(
                &b.id,
                "block is not reachable from any source",
            ));
        }
    }

    // --- precedence ---
    if let Some(p) = &model.precedence {
        let check_id = |id: &str, diags: &mut Vec<Diagnostic>| {
            if !block_ids.contains(id) {
                diags.push(Diagnostic::error(
                    id,
                    format!("precedence references unknown block `{id}`"),
                ));
            }
        };
        for c in &p.must_precede {
            check_id(&c.earlier, &mut diags);
            check_id(&c.later, &mut diags);
            if c.earlier == c.later {
                diags.push(Diagnostic::error(
                    &c.earlier,
                    "must_precede pair names the same block twice",
                ));
            }
        }
        for c in &p.must_parallel {
            check_id(&c.a, &mut diags);
            check_id(&c.b, &mut diags);
            if c.a == c.b {
                diags.push(Diagnostic::error(
                    &c.a,
                    "must_parallel pair names the same block twice",
                ));
            }
        }
        if let Some(cycle_node) = precedence_cycle(p) {
            diags.push(Diagnostic::error(
                cycle_node,
                "must_precede constraints form a cycle",
            ));
        }
    }

    diags
}

/// Returns a node on a cycle of the must_precede graph, if any.
fn precedence_cycle(p: &PrecedenceSpec) -> Option<String> {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut indegree: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &p.must_precede {
        adj.entry(c.earlier.as_str())
            .or_default()
            .push(c.later.as_str());
        indegree.entry(c.earlier.as_str()).or_default();
        *indegree.entry(c.later.as_str()).or_default() += 1;
    }
    let mut ready: VecDeque<&str> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&n, _)| n)
        .collect();
    let mut removed = 0usize;
    while let Some(n) = ready.pop_front() {
        removed += 1;
        for &next in adj.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            let d = indegree.get_mut(next).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.push_back(next);
            }
        }
    }
    if removed < indegree.len() {
        indegree
            .iter()
            .find(|(_, &d)| d > 0)
            .map(|(&n, _)| n.to_owned())
    } else {
        None
    }
}

/// Number of routes entering the given block.
pub fn count_inputs(model: &ProcessModel, block_id: &str) -> Result<usize, ModelError> {
    if model.block(block_id).is_none() {
        return Err(ModelError::UnknownId(block_id.to_owned()));
    }
    Ok(model.incoming(block_id).count())
}

/// One re-engineering step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditOp {
    /// Removes a block. Routes touching it disappear; predecessors listed in
    /// `reroute` are pointed at the given replacement block instead (sources
    /// feeding the removed block MUST appear in `reroute` — there is no
    /// implicit rerouting). Precedence constraints naming the block are
    /// dropped.
    RemoveBlock {
        block: String,
        #[serde(default)]
        reroute: BTreeMap<String, String>,
    },
    /// Adds one route. Adding a route from a source retargets that source
    /// (a source may have only one route, so its old route must be removed
    /// first).
    AddRoute { from: String, to: String },
    /// Removes one existing route.
    RemoveRoute { from: String, to: String },
    /// Splices `block` out of its current position and re-inserts it
    /// immediately after `after`: the block's predecessors are connected to
    /// its successors, then `after`'s outgoing routes move to `block` and a
    /// single `after -> block` route is added.
    Reorder { block: String, after: String },
}

/// An ordered list of re-engineering steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct EditScript {
    /// What the edit is meant to achieve.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub ops: Vec<EditOp>,
}

/// Applies a re-engineering edit, returning a new model.
///
/// The input is untouched. The result is fully re-validated; an edit that
/// leaves the model broken (dangling source, invalid routes…) is an error.
pub fn apply_edit(model: &ProcessModel, edit: &EditScript) -> Result<ProcessModel, ModelError> {
    let mut m = model.clone();
    for op in &edit.ops {
        match op {
            EditOp::RemoveBlock { block, reroute } => remove_block(&mut m, block, reroute)?,
            EditOp::AddRoute { from, to } => add_route(&mut m, from, to)?,
            EditOp::RemoveRoute { from, to } => remove_route(&mut m, from, to)?,
            EditOp::Reorder { block, after } => reorder(&mut m, block, after)?,
        }
    }
    let diags = validate(&m);
    if let Some(no_target) = diags
        .iter()
        .find(|d| d.severity == Severity::Error && d.message.contains("no outgoing route"))
    {
        return Err(ModelError::SourceWithoutTarget(no_target.subject.clone()));
    }
    if diags.iter().any(|d| d.severity == Severity::Error) {
        return Err(ModelError::Invalid(diags));
    }
    Ok(m)
}

fn remove_block(
    m: &mut ProcessModel,
    block: &str,
    reroute: &BTreeMap<String, String>,
) -> Result<(), ModelError> {
    if m.block(block).is_none() {
        return Err(ModelError::UnknownId(block.to_owned()));
    }
    for (from, to) in reroute {
        if m.block(from).is_none() && m.source(from).is_none() {
            return Err(ModelError::UnknownId(from.clone()));
        }
        if m.block(to).is_none() {
            return Err(ModelError::UnknownId(to.clone()));
        }
    }
    let preds: Vec<String> = m.incoming(block).map(|r| r.from.clone()).collect();
    // Sources feeding the removed block must be rerouted explicitly.
    for p in &preds {
        if m.source(p).is_some() && !reroute.contains_key(p) {
            return Err(ModelError::SourceWithoutTarget(p.clone()));
        }
    }
    m.routes.retain(|r| r.from != block && r.to != block);
    m.blocks.retain(|b| b.id != block);
    for p in &preds {
        if let Some(new_to) = reroute.get(p) {
            if new_to == p {
                return Err(ModelError::InvalidEdit(format!(
                    "rerouting `{p}` to itself would create a self-loop"
                )));
            }
            if !m.routes.iter().any(|r| &r.from == p && r.to == *new_to) {
                m.routes.push(Route {
                    from: p.clone(),
                    to: new_to.clone(),
                });
            }
            if let Some(s) = m.sources.iter_mut().find(|s| &s.id == p) {
                s.target = new_to.clone();
            }
        }
    }
    if let Some(p) = &mut m.precedence {
        p.must_precede
            .retain(|c| c.earlier != block && c.later != block);
        p.must_parallel.retain(|c| c.a != block && c.b != block);
    }
    Ok(())
}

fn add_route(m: &mut ProcessModel, from: &str, to: &str) -> Result<(), ModelError> {
    let from_is_source = m.source(from).is_some();
    if m.block(from).is_none() && !from_is_source {
        return Err(ModelError::UnknownId(from.to_owned()));
    }
    if m.block(to).is_none() {
        return Err(ModelError::UnknownId(to.to_owned()));
    }
    if from == to {
        return Err(ModelError::InvalidEdit(format!(
            "route `{from}` -> `{to}` would be a self-loop"
        )));
    }
    if m.routes.iter().any(|r| r.from == from && r.to == to) {
        return Err(ModelError::InvalidEdit(format!(
            "route `{from}` -> `{to}` already exists"
        )));
    }
    if from_is_source && m.outgoing(from).next().is_some() {
        return Err(ModelError::InvalidEdit(format!(
            "source `{from}` already has a route; remove it before adding another"
        )));
    }
    m.routes.push(Route {
        from: from.to_owned(),
        to: to.to_owned(),
    });
    if let Some(s) = m.sources.iter_mut().find(|s| s.id == from) {
        s.target = to.to_owned();
    }
    Ok(())
}

fn remove_route(m: &mut ProcessModel, from: &str, to: &str) -> Result<(), ModelError> {
    let before = m.routes.len();
    m.routes.retain(|r| !(r.from == from && r.to == to));
    if m.routes.len() == before {
        return Err(ModelError::InvalidEdit(format!(
            "route `{from}` -> `{to}` does not exist"
        )));
    }
    Ok(())
}

fn reorder(m: &mut ProcessModel, block: &str, after: &str) -> Result<(), ModelError> {
    if m.block(block).is_none() {
        return Err(ModelError::UnknownId(block.to_owned()));
    }
    if m.block(after).is_none() {
        return Err(ModelError::UnknownId(after.to_owned()));
    }
    if block == after {
        return Err(ModelError::InvalidEdit(
            "cannot reorder a block after itself".to_owned(),
        ));
    }
    let preds: Vec<String> = m.incoming(block).map(|r| r.from.clone()).collect();
    let succs: Vec<String> = m.outgoing(block).map(|r| r.to.clone()).collect();
    // Detach: connect predecessors to successors. A source predecessor needs
    // a unique successor to retarget to.
    for p in &preds {
        if m.source(p).is_some() && succs.len() != 1 {
            return Err(ModelError::InvalidEdit(format!(
                "cannot detach `{block}`: source `{p}` feeds it and it has {} successors",
                succs.len()
            )));
        }
    }
    m.routes.retain(|r| r.from != block && r.to != block);
    for p in &preds {
        for s in &succs {
            if p == s {
                continue;
            }
            if !m.routes.iter().any(|r| &r.from == p && &r.to == s) {
                m.routes.push(Route {
                    from: p.clone(),
                    to: s.clone(),
                });
            }
        }
        if let Some(src) = m.sources.iter_mut().find(|s| &s.id == p) {
            src.target = succs[0].clone();
        }
    }
    // Insert after `after`: its outgoing routes move to `block`.
    let after_succs: Vec<String> = m.outgoing(after).map(|r| r.to.clone()).collect();
    m.routes.retain(|r| r.from != after);
    for s in &after_succs {
        if s != block && !m.routes.iter().any(|r| r.from == block && &r.to == s) {
            m.routes.push(Route {
                from: block.to_owned(),
                to: s.clone(),
            });
        }
    }
    m.routes.push(Route {
        from: after.to_owned(),
        to: block.to_owned(),
    });
    Ok(())
}
