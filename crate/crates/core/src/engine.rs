//! Seeded, deterministic discrete-event simulation of a process model.
//!
//! One run walks an event calendar over the model horizon: sources emit
//! requests, blocks serve them from FIFO queues, timeouts drop stale work,
//! control blocks reject detected defects, and failures knock out capacity
//! until repair. Every random decision draws from a named sub-stream derived
//! from the run seed (see [`crate::rng`]), so a run is a pure function of
//! `(model, config)` and paired model variants share randomness wherever
//! their structure agrees.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashMap, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::metrics::{BlockStats, ConfigEcho, RunResult, SourceStats};
use crate::model::{
    self, ControlParams, Diagnostic, FailureProfile, ModelError, ProcessModel, Severity,
};
use crate::rng;

/// Run parameters that are not part of the model file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Base seed; all sub-streams derive from it.
    pub seed: u64,
    /// Overrides the model's `horizon_days` when present.
    #[serde(default)]
    pub horizon_days: Option<u32>,
    /// Index of this run within a replication batch; each index gets
    /// independent randomness under the same seed.
    #[serde(default)]
    pub replication_index: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            horizon_days: None,
            replication_index: 0,
        }
    }
}

/// Draws the next interarrival gap for a Poisson source: an exponential
/// variate with mean `1/intensity` days, strictly positive.
pub fn next_interarrival<R: Rng>(rng: &mut R, intensity: f64) -> f64 {
    debug_assert!(intensity > 0.0, "interarrival needs a positive intensity");
    loop {
        let e: f64 = Exp1.sample(rng);
        let gap = e / intensity;
        if gap > 0.0 {
            return gap;
        }
    }
}

/// What a control block decides about a request that finished service.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlDecision {
    Forward,
    Reject,
}

/// Applies the control rule: a defective request is rejected with
/// probability `strictness`; a clean request always goes forward (and
/// consumes no randomness).
pub fn control_check<R: Rng>(
    defective: bool,
    params: &ControlParams,
    rng: &mut R,
) -> ControlDecision {
    if defective && rng.gen::<f64>() < params.strictness {
        ControlDecision::Reject
    } else {
        ControlDecision::Forward
    }
}

/// One request's full history, returned by [`simulate_traced`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Request {
    /// Emission sequence number, unique within a run.
    pub id: u64,
    pub source_id: String,
    pub created_day: f64,
    pub defective: bool,
    /// Everything that happened to the request, in time order.
    pub steps: Vec<TraceStep>,
}

/// One step of a request trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub time: f64,
    /// Block where the step happened.
    pub block: String,
    pub event: TraceEvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEvent {
    /// Joined the block (queue or an idle server).
    Enqueued,
    ServiceStarted,
    /// Finished service and was forwarded (or completed, at a terminal block).
    Served,
    RejectedByControl,
    /// Left the network at a terminal block.
    Completed,
    TimedOut,
    DroppedAtCapacity,
    /// Pushed out of service by a failure; re-queued at the head.
    Preempted,
}

// ---------------------------------------------------------------------------
// Event calendar
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    ServiceEnd { block: usize, se: u64 },
    Repair { block: usize },
    Failure { block: usize },
    Timeout { block: usize, qe: u64 },
    Arrival { source: usize },
    PeriodicEmit { source: usize },
}

impl EventKind {
    /// Tie-break class for simultaneous events: finish service first (frees
    /// servers for waiting work), then repair, fail, time out, and only then
    /// admit new arrivals.
    fn class(self) -> u8 {
        match self {
            EventKind::ServiceEnd { .. } => 0,
            EventKind::Repair { .. } => 1,
            EventKind::Failure { .. } => 2,
            EventKind::Timeout { .. } => 3,
            EventKind::Arrival { .. } => 4,
            EventKind::PeriodicEmit { .. } => 5,
        }
    }
}

#[derive(Debug)]
struct Ev {
    time: f64,
    class: u8,
    /// Insertion sequence; the final tie-breaker keeps ordering total.
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Ev {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ev {}
impl PartialOrd for Ev {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ev {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then_with(|| self.class.cmp(&other.class))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

// ---------------------------------------------------------------------------
// Runtime state
// ---------------------------------------------------------------------------

/// A request in flight. Trace details live outside the hot path.
#[derive(Debug, Clone, Copy)]
struct Req {
    id: u64,
    created: f64,
    defective: bool,
}

#[derive(Debug)]
struct QueueEntry {
    req: Req,
    /// Queue epoch: a pending timeout event fires only if the entry with its
    /// epoch is still queued, which makes cancellation free.
    qe: u64,
}

#[derive(Debug)]
struct ServiceEntry {
    req: Req,
    /// Service epoch, same lazy-cancellation trick for service-end events.
    se: u64,
}

struct BlockRt {
    id: String,
    name: String,
    svc_mean: f64,
    /// Control blocks trade speed for quality: mean service scales by
    /// `strictness / 0.5`.
    svc_factor: f64,
    deterministic: bool,
    capacity: u32,
    queue_limit: Option<u32>,
    timeout: Option<f64>,
    strictness: Option<f64>,
    failure: Option<FailureProfile>,
    /// Successor block indices; a served request forwards along exactly one,
    /// chosen uniformly.
    succ: Vec<usize>,
    service_rng: ChaCha8Rng,
    control_rng: ChaCha8Rng,
    routing_rng: ChaCha8Rng,
    failure_rng: ChaCha8Rng,
    queue: VecDeque<QueueEntry>,
    in_service: Vec<ServiceEntry>,
    eff_capacity: u32,
    qe_next: u64,
    se_next: u64,
    arrivals: u64,
    served: u64,
    served_defective: u64,
    dropped_timeout: u64,
    dropped_capacity: u64,
    rejected_by_control: u64,
    failures: u64,
    /// Time of the last state change; the statistics below integrate the
    /// piecewise-constant queue/busy levels between changes.
    last_t: f64,
    q_area: f64,
    busy_area: f64,
    series: Vec<f64>,
    next_sample: u32,
}

struct SourceRt {
    id: String,
    name: String,
    intensity: f64,
    period: Option<f64>,
    defect_rate: f64,
    target: usize,
    /// (max_count, window length); emissions beyond the cap inside a rolling
    /// window are suppressed.
    limit: Option<(u32, f64)>,
    arrival_rng: ChaCha8Rng,
    defect_rng: ChaCha8Rng,
    window: VecDeque<f64>,
    emitted: u64,
    emitted_defective: u64,
    suppressed: u64,
}

struct Sim {
    horizon: f64,
    horizon_u: u32,
    warmup: f64,
    heap: BinaryHeap<Reverse<Ev>>,
    seq: u64,
    blocks: Vec<BlockRt>,
    sources: Vec<SourceRt>,
    req_next: u64,
    completed: u64,
    completed_defective: u64,
    /// Time-in-system sums over completed requests created after warmup.
    tis_sum: f64,
    tis_count: u64,
    traces: Option<Vec<Request>>,
}

enum ServeOutcome {
    Rejected,
    Completed,
    Forward(usize),
}

impl Sim {
    fn push(&mut self, time: f64, kind: EventKind) {
        self.seq += 1;
        self.heap.push(Reverse(Ev {
            time,
            class: kind.class(),
            seq: self.seq,
            kind,
        }));
    }

    fn trace(&mut self, req_id: u64, time: f64, bi: usize, event: TraceEvent) {
        if let Some(traces) = &mut self.traces {
            let block = self.blocks[bi].id.clone();
            traces[req_id as usize]
                .steps
                .push(TraceStep { time, block, event });
        }
    }

    /// Closes the statistics interval `[last_t, t)` with the block's current
    /// (pre-event) levels: integrates queue/busy areas over the post-warmup
    /// part and samples the daily series for every whole day passed. Must
    /// run before the block's state changes at `t`.
    fn sync_block(&mut self, bi: usize, t: f64) {
        let b = &mut self.blocks[bi];
        let q = b.queue.len() as f64;
        let busy = b.in_service.len() as f64;
        while b.next_sample <= self.horizon_u && f64::from(b.next_sample) <= t {
            b.series.push(q);
            b.next_sample += 1;
        }
        let lo = b.last_t.max(self.warmup);
        let hi = t.min(self.horizon);
        if hi > lo {
            b.q_area += q * (hi - lo);
            b.busy_area += busy * (hi - lo);
        }
        b.last_t = t;
    }

    /// One request arrives at a block: start service if a server is idle,
    /// otherwise queue (dropping immediately when the queue is at its bound).
    fn enter_block(&mut self, bi: usize, req: Req, t: f64) {
        self.sync_block(bi, t);
        enum Admit {
            Start,
            Dropped,
            Queued(Option<f64>, u64),
        }
        let admit = {
            let b = &mut self.blocks[bi];
            b.arrivals += 1;
            if (b.in_service.len() as u32) < b.eff_capacity {
                Admit::Start
            } else if b.queue_limit.is_some_and(|l| b.queue.len() >= l as usize) {
                b.dropped_capacity += 1;
                Admit::Dropped
            } else {
                let qe = b.qe_next;
                b.qe_next += 1;
                b.queue.push_back(QueueEntry { req, qe });
                Admit::Queued(b.timeout, qe)
            }
        };
        match admit {
            Admit::Start => {
                self.trace(req.id, t, bi, TraceEvent::Enqueued);
                self.start_service(bi, req, t);
            }
            Admit::Dropped => self.trace(req.id, t, bi, TraceEvent::DroppedAtCapacity),
            Admit::Queued(timeout, qe) => {
                self.trace(req.id, t, bi, TraceEvent::Enqueued);
                if let Some(timeout) = timeout {
                    self.push(t + timeout, EventKind::Timeout { block: bi, qe });
                }
            }
        }
    }

    fn start_service(&mut self, bi: usize, req: Req, t: f64) {
        let (end, se) = {
            let b = &mut self.blocks[bi];
            let se = b.se_next;
            b.se_next += 1;
            b.in_service.push(ServiceEntry { req, se });
            let mean = b.svc_mean * b.svc_factor;
            let dur = if b.deterministic {
                mean
            } else {
                let e: f64 = Exp1.sample(&mut b.service_rng);
                (e * mean).max(f64::MIN_POSITIVE)
            };
            (t + dur, se)
        };
        self.trace(req.id, t, bi, TraceEvent::ServiceStarted);
        self.push(end, EventKind::ServiceEnd { block: bi, se });
    }

    /// Starts queued requests while servers are free.
    fn try_dispatch(&mut self, bi: usize, t: f64) {
        loop {
            let next = {
                let b = &mut self.blocks[bi];
                if (b.in_service.len() as u32) < b.eff_capacity {
                    b.queue.pop_front()
                } else {
                    None
                }
            };
            match next {
                Some(entry) => self.start_service(bi, entry.req, t),
                None => break,
            }
        }
    }

    fn on_service_end(&mut self, bi: usize, se: u64, t: f64) {
        self.sync_block(bi, t);
        let decided = {
            let b = &mut self.blocks[bi];
            let Some(pos) = b.in_service.iter().position(|e| e.se == se) else {
                return; // stale: the request was preempted by a failure
            };
            let req = b.in_service.swap_remove(pos).req;
            let reject = b
                .strictness
                .is_some_and(|s| req.defective && b.control_rng.gen::<f64>() < s);
            let outcome = if reject {
                b.rejected_by_control += 1;
                ServeOutcome::Rejected
            } else {
                b.served += 1;
                if req.defective {
                    b.served_defective += 1;
                }
                match b.succ.len() {
                    0 => ServeOutcome::Completed,
                    1 => ServeOutcome::Forward(b.succ[0]),
                    k => {
                        let u: f64 = b.routing_rng.gen();
                        let pick = (u * k as f64) as usize;
                        ServeOutcome::Forward(b.succ[pick.min(k - 1)])
                    }
                }
            };
            (req, outcome)
        };
        let (req, outcome) = decided;
        match outcome {
            ServeOutcome::Rejected => self.trace(req.id, t, bi, TraceEvent::RejectedByControl),
            ServeOutcome::Completed => {
                self.trace(req.id, t, bi, TraceEvent::Served);
                self.completed += 1;
                if req.defective {
                    self.completed_defective += 1;
                }
                if req.created >= self.warmup {
                    self.tis_sum += t - req.created;
                    self.tis_count += 1;
                }
                self.trace(req.id, t, bi, TraceEvent::Completed);
            }
            ServeOutcome::Forward(next) => {
                self.trace(req.id, t, bi, TraceEvent::Served);
                self.enter_block(next, req, t);
            }
        }
        self.try_dispatch(bi, t);
    }

    fn on_timeout(&mut self, bi: usize, qe: u64, t: f64) {
        self.sync_block(bi, t);
        let dropped = {
            let b = &mut self.blocks[bi];
            match b.queue.iter().position(|e| e.qe == qe) {
                Some(pos) => {
                    let entry = b.queue.remove(pos).expect("position is in bounds");
                    b.dropped_timeout += 1;
                    Some(entry.req.id)
                }
                // Stale: the request started service (or was re-queued with a
                // fresh epoch) before its deadline.
                None => None,
            }
        };
        if let Some(req_id) = dropped {
            self.trace(req_id, t, bi, TraceEvent::TimedOut);
        }
    }

    fn on_failure(&mut self, bi: usize, t: f64) {
        self.sync_block(bi, t);
        let profile = self.blocks[bi]
            .failure
            .expect("failure events exist only for blocks with a profile");
        let mut preempted = Vec::new();
        {
            let b = &mut self.blocks[bi];
            b.failures += 1;
            let eff = (f64::from(b.capacity) * (1.0 - profile.severity)).ceil() as u32;
            b.eff_capacity = eff;
            // Push out the most recently started work first; no partial
            // credit — preempted requests restart service after repair.
            while b.in_service.len() > eff as usize {
                let pos = b
                    .in_service
                    .iter()
                    .enumerate()
                    .max_by_key(|(_, e)| e.se)
                    .map(|(i, _)| i)
                    .expect("in_service is non-empty here");
                let entry = b.in_service.swap_remove(pos);
                let qe = b.qe_next;
                b.qe_next += 1;
                b.queue.push_front(QueueEntry { req: entry.req, qe });
                preempted.push((entry.req.id, b.timeout, qe));
            }
        }
        for (req_id, timeout, qe) in preempted {
            self.trace(req_id, t, bi, TraceEvent::Preempted);
            self.trace(req_id, t, bi, TraceEvent::Enqueued);
            // The relevance clock restarts: a fresh deadline from re-queueing.
            if let Some(timeout) = timeout {
                self.push(t + timeout, EventKind::Timeout { block: bi, qe });
            }
        }
        self.push(
            t + profile.recovery_time_days,
            EventKind::Repair { block: bi },
        );
    }

    fn on_repair(&mut self, bi: usize, t: f64) {
        self.sync_block(bi, t);
        let next_failure = {
            let b = &mut self.blocks[bi];
            b.eff_capacity = b.capacity;
            let profile = b.failure.expect("repair events imply a profile");
            // The failure clock pauses during downtime: the next
            // time-to-failure is drawn from the repair instant.
            (profile.failure_rate_per_day > 0.0).then(|| {
                let e: f64 = Exp1.sample(&mut b.failure_rng);
                t + e / profile.failure_rate_per_day
            })
        };
        if let Some(ft) = next_failure {
            self.push(ft, EventKind::Failure { block: bi });
        }
        self.try_dispatch(bi, t);
    }

    fn on_arrival(&mut self, si: usize, t: f64) {
        let next = {
            let s = &mut self.sources[si];
            t + next_interarrival(&mut s.arrival_rng, s.intensity)
        };
        if next <= self.horizon {
            self.push(next, EventKind::Arrival { source: si });
        }
        self.emit(si, t);
    }

    fn on_periodic(&mut self, si: usize, t: f64) {
        let next = t + self.sources[si]
            .period
            .expect("periodic events imply a period");
        if next <= self.horizon {
            self.push(next, EventKind::PeriodicEmit { source: si });
        }
        self.emit(si, t);
    }

    /// One emission attempt: draw the defect flag, apply the emission limit,
    /// and deliver to the target block. Suppressed attempts never enter the
    /// network, but the defect draw still happens so the stream position
    /// depends only on the attempt count.
    fn emit(&mut self, si: usize, t: f64) {
        let delivery = {
            let s = &mut self.sources[si];
            let defective = s.defect_rng.gen::<f64>() < s.defect_rate;
            let suppress = match s.limit {
                Some((max_count, window)) => {
                    while s.window.front().is_some_and(|&w| w <= t - window) {
                        s.window.pop_front();
                    }
                    s.window.len() >= max_count as usize
                }
                None => false,
            };
            if suppress {
                s.suppressed += 1;
                None
            } else {
                if s.limit.is_some() {
                    s.window.push_back(t);
                }
                s.emitted += 1;
                if defective {
                    s.emitted_defective += 1;
                }
                let id = self.req_next;
                self.req_next += 1;
                Some((
                    s.target,
                    Req {
                        id,
                        created: t,
                        defective,
                    },
                ))
            }
        };
        if let Some((target, req)) = delivery {
            if let Some(traces) = &mut self.traces {
                traces.push(Request {
                    id: req.id,
                    source_id: self.sources[si].id.clone(),
                    created_day: t,
                    defective: req.defective,
                    steps: Vec::new(),
                });
            }
            self.enter_block(target, req, t);
        }
    }

    fn run_to_horizon(&mut self) {
        while let Some(Reverse(ev)) = self.heap.pop() {
            if ev.time > self.horizon {
                break;
            }
            match ev.kind {
                EventKind::ServiceEnd { block, se } => self.on_service_end(block, se, ev.time),
                EventKind::Repair { block } => self.on_repair(block, ev.time),
                EventKind::Failure { block } => self.on_failure(block, ev.time),
                EventKind::Timeout { block, qe } => self.on_timeout(block, qe, ev.time),
                EventKind::Arrival { source } => self.on_arrival(source, ev.time),
                EventKind::PeriodicEmit { source } => self.on_periodic(source, ev.time),
            }
        }
    }

    fn finish(
        mut self,
        model_name: &str,
        config: &RunConfig,
        warmup_u: u32,
    ) -> (RunResult, Option<Vec<Request>>) {
        for bi in 0..self.blocks.len() {
            self.sync_block(bi, self.horizon);
        }
        let measured = self.horizon - self.warmup;
        let mut blocks = BTreeMap::new();
        let mut series = BTreeMap::new();
        for b in &self.blocks {
            debug_assert_eq!(b.series.len() as u32, self.horizon_u - warmup_u);
            blocks.insert(
                b.id.clone(),
                BlockStats {
                    name: b.name.clone(),
                    arrivals: b.arrivals,
                    served: b.served,
                    served_defective: b.served_defective,
                    dropped_timeout: b.dropped_timeout,
                    dropped_capacity: b.dropped_capacity,
                    rejected_by_control: b.rejected_by_control,
                    failures: b.failures,
                    in_system_end: (b.queue.len() + b.in_service.len()) as u64,
                    utilization: b.busy_area / (f64::from(b.capacity) * measured),
                    avg_queue_length: b.q_area / measured,
                },
            );
            series.insert(b.id.clone(), b.series.clone());
        }
        let mut sources = BTreeMap::new();
        for s in &self.sources {
            sources.insert(
                s.id.clone(),
                SourceStats {
                    name: s.name.clone(),
                    emitted: s.emitted,
                    emitted_defective: s.emitted_defective,
                    suppressed: s.suppressed,
                },
            );
        }
        let result = RunResult {
            config: ConfigEcho {
                model_name: model_name.to_owned(),
                seed: config.seed,
                replication_index: config.replication_index,
                horizon_days: self.horizon_u,
                warmup_days: warmup_u,
            },
            blocks,
            sources,
            completed: self.completed,
            completed_defective: self.completed_defective,
            avg_time_in_system_days: if self.tis_count > 0 {
                self.tis_sum / self.tis_count as f64
            } else {
                0.0
            },
            queue_length_series: series,
        };
        (result, self.traces)
    }
}

fn build(model: &ProcessModel, config: &RunConfig, traced: bool) -> Result<Sim, ModelError> {
    let diagnostics = model::validate(model);
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(ModelError::Invalid(diagnostics));
    }
    let horizon_u = config.horizon_days.unwrap_or(model.horizon_days);
    if horizon_u <= model.warmup_days {
        return Err(ModelError::Invalid(vec![Diagnostic {
            severity: Severity::Error,
            subject: model.name.clone(),
            message: format!(
                "effective horizon ({horizon_u}) must exceed warmup ({})",
                model.warmup_days
            ),
        }]));
    }
    let horizon = f64::from(horizon_u);
    let warmup = f64::from(model.warmup_days);
    let index: HashMap<&str, usize> = model
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.id.as_str(), i))
        .collect();
    let (seed, rep) = (config.seed, config.replication_index);

    let blocks: Vec<BlockRt> = model
        .blocks
        .iter()
        .map(|b| BlockRt {
            id: b.id.clone(),
            name: b.name.clone(),
            svc_mean: b.service_time_days,
            svc_factor: b.control.map_or(1.0, |c| c.strictness / 0.5),
            deterministic: b.deterministic,
            capacity: b.capacity,
            queue_limit: b.queue_limit,
            timeout: b.timeout_days,
            strictness: b.control.map(|c| c.strictness),
            failure: b.failure,
            succ: model
                .outgoing(&b.id)
                .map(|r| index[r.to.as_str()])
                .collect(),
            service_rng: rng::stream(seed, rep, &b.id, "service"),
            control_rng: rng::stream(seed, rep, &b.id, "control"),
            routing_rng: rng::stream(seed, rep, &b.id, "routing"),
            failure_rng: rng::stream(seed, rep, &b.id, "failure"),
            queue: VecDeque::new(),
            in_service: Vec::new(),
            eff_capacity: b.capacity,
            qe_next: 0,
            se_next: 0,
            arrivals: 0,
            served: 0,
            served_defective: 0,
            dropped_timeout: 0,
            dropped_capacity: 0,
            rejected_by_control: 0,
            failures: 0,
            last_t: 0.0,
            q_area: 0.0,
            busy_area: 0.0,
            series: Vec::with_capacity((horizon_u - model.warmup_days) as usize),
            next_sample: model.warmup_days + 1,
        })
        .collect();

    let sources: Vec<SourceRt> = model
        .sources
        .iter()
        .map(|s| SourceRt {
            id: s.id.clone(),
            name: s.name.clone(),
            intensity: s.intensity,
            period: s.period_days,
            defect_rate: s.defect_rate,
            target: index[s.target.as_str()],
            limit: s
                .emission_limit
                .map(|l| (l.max_count, l.period_days.unwrap_or(horizon))),
            arrival_rng: rng::stream(seed, rep, &s.id, "interarrival"),
            defect_rng: rng::stream(seed, rep, &s.id, "defect"),
            window: VecDeque::new(),
            emitted: 0,
            emitted_defective: 0,
            suppressed: 0,
        })
        .collect();

    let mut sim = Sim {
        horizon,
        horizon_u,
        warmup,
        heap: BinaryHeap::new(),
        seq: 0,
        blocks,
        sources,
        req_next: 0,
        completed: 0,
        completed_defective: 0,
        tis_sum: 0.0,
        tis_count: 0,
        traces: traced.then(Vec::new),
    };

    for si in 0..sim.sources.len() {
        let s = &mut sim.sources[si];
        if s.intensity > 0.0 {
            let t0 = next_interarrival(&mut s.arrival_rng, s.intensity);
            if t0 <= horizon {
                sim.push(t0, EventKind::Arrival { source: si });
            }
        } else if let Some(period) = s.period {
            // A zero-intensity source with a period emits at p, 2p, 3p, …
            if period <= horizon {
                sim.push(period, EventKind::PeriodicEmit { source: si });
            }
        }
        // Zero intensity without a period: the source stays silent.
    }
    for bi in 0..sim.blocks.len() {
        let b = &mut sim.blocks[bi];
        if let Some(f) = b.failure {
            if f.failure_rate_per_day > 0.0 {
                let e: f64 = Exp1.sample(&mut b.failure_rng);
                let t0 = e / f.failure_rate_per_day;
                sim.push(t0, EventKind::Failure { block: bi });
            }
        }
    }
    Ok(sim)
}

/// Runs one simulation. Deterministic: identical `(model, config)` give an
/// identical [`RunResult`].
pub fn simulate(model: &ProcessModel, config: &RunConfig) -> Result<RunResult, ModelError> {
    let mut sim = build(model, config, false)?;
    sim.run_to_horizon();
    Ok(sim.finish(&model.name, config, model.warmup_days).0)
}

/// Like [`simulate`], additionally returning every request's trace. The
/// traced run produces the exact same [`RunResult`] as the untraced one.
pub fn simulate_traced(
    model: &ProcessModel,
    config: &RunConfig,
) -> Result<(RunResult, Vec<Request>), ModelError> {
    let mut sim = build(model, config, true)?;
    sim.run_to_horizon();
    let (result, traces) = sim.finish(&model.name, config, model.warmup_days);
    Ok((result, traces.expect("traced run collects traces")))
}

/// Runs `replications` independent runs under one seed (replication indices
/// `0..replications`), in parallel when the `parallel` feature is on.
pub fn run_replications(
    model: &ProcessModel,
    seed: u64,
    replications: u32,
) -> Result<Vec<RunResult>, ModelError> {
    let configs: Vec<RunConfig> = (0..replications)
        .map(|i| RunConfig {
            seed,
            horizon_days: None,
            replication_index: i,
        })
        .collect();
    run_many(model, &configs)
}

/// Runs one replication per seed; useful for paired before/after experiments
/// where both models see the same seed list.
pub fn run_seeds(model: &ProcessModel, seeds: &[u64]) -> Result<Vec<RunResult>, ModelError> {
    let configs: Vec<RunConfig> = seeds
        .iter()
        .map(|&seed| RunConfig {
            seed,
            horizon_days: None,
            replication_index: 0,
        })
        .collect();
    run_many(model, &configs)
}

#[cfg(feature = "parallel")]
fn run_many(model: &ProcessModel, configs: &[RunConfig]) -> Result<Vec<RunResult>, ModelError> {
    use rayon::prelude::*;
    configs.par_iter().map(|c| simulate(model, c)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_many(model: &ProcessModel, configs: &[RunConfig]) -> Result<Vec<RunResult>, ModelError> {
    configs.iter().map(|c| simulate(model, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    fn model(text: &str) -> ProcessModel {
        parse_model(text).expect("test model parses")
    }

    fn conservation_holds(result: &RunResult) -> bool {
        result.blocks.values().all(|b| {
            b.arrivals
                == b.served
                    + b.dropped_timeout
                    + b.dropped_capacity
                    + b.rejected_by_control
                    + b.in_system_end
        })
    }

    #[test]
    fn identical_config_gives_identical_results() {
        let m = model(
            r#"{
            "horizon_days": 100, "warmup_days": 10,
            "blocks": [ {"id": "b1", "service_time_days": 0.8, "capacity": 2, "timeout_days": 3.0} ],
            "sources": [ {"id": "s1", "intensity": 2.0, "target": "b1", "defect_rate": 0.2} ]
        }"#,
        );
        let cfg = RunConfig::default();
        let a = simulate(&m, &cfg).unwrap();
        let b = simulate(&m, &cfg).unwrap();
        assert_eq!(a, b);
        let other = simulate(
            &m,
            &RunConfig {
                replication_index: 1,
                ..cfg
            },
        )
        .unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn silent_source_produces_empty_run() {
        let m = model(
            r#"{
            "horizon_days": 50, "warmup_days": 5,
            "blocks": [ {"id": "b1", "service_time_days": 1.0} ],
            "sources": [ {"id": "s1", "intensity": 0.0, "target": "b1"} ]
        }"#,
        );
        let r = simulate(&m, &RunConfig::default()).unwrap();
        let b = &r.blocks["b1"];
        assert_eq!(b.arrivals, 0);
        assert_eq!(b.served, 0);
        assert_eq!(b.utilization, 0.0);
        assert_eq!(r.completed, 0);
        assert_eq!(r.avg_time_in_system_days, 0.0);
        assert!(r.queue_length_series["b1"].iter().all(|&q| q == 0.0));
    }

    #[test]
    fn series_has_one_sample_per_post_warmup_day() {
        let m = model(
            r#"{
            "horizon_days": 30, "warmup_days": 5,
            "blocks": [ {"id": "b1", "service_time_days": 1.0} ],
            "sources": [ {"id": "s1", "intensity": 1.0, "target": "b1"} ]
        }"#,
        );
        let r = simulate(&m, &RunConfig::default()).unwrap();
        assert_eq!(r.queue_length_series["b1"].len(), 25);
    }

    #[test]
    fn timeout_drops_follow_the_deadline_with_service_winning_ties() {
        // Deterministic single-server block: service 2 days, timeout 1 day,
        // one emission per day. Service ends and timeouts collide on whole
        // days; the freed server must claim the queued request first.
        let m = model(
            r#"{
            "horizon_days": 10, "warmup_days": 0,
            "blocks": [ {"id": "b1", "service_time_days": 2.0, "deterministic": true, "timeout_days": 1.0} ],
            "sources": [ {"id": "s1", "intensity": 0.0, "period_days": 1.0, "target": "b1"} ]
        }"#,
        );
        let r = simulate(&m, &RunConfig::default()).unwrap();
        let b = &r.blocks["b1"];
        assert_eq!(b.arrivals, 10);
        assert_eq!(b.served, 4);
        assert_eq!(b.dropped_timeout, 4);
        assert_eq!(b.in_system_end, 2);
        assert!(conservation_holds(&r));
    }

    #[test]
    fn full_stop_failure_blocks_all_service() {
        // Failure rate so high the block is down before the first arrival;
        // recovery outlasts the horizon.
        let m = model(
            r#"{
            "horizon_days": 10, "warmup_days": 0,
            "blocks": [ {"id": "b1", "service_time_days": 3.0, "deterministic": true, "timeout_days": 2.0,
                         "failure": {"failure_rate_per_day": 1e6, "severity": 1.0, "recovery_time_days": 100.0}} ],
            "sources": [ {"id": "s1", "intensity": 0.0, "period_days": 1.0, "target": "b1"} ]
        }"#,
        );
        let r = simulate(&m, &RunConfig::default()).unwrap();
        let b = &r.blocks["b1"];
        assert_eq!(b.failures, 1);
        assert_eq!(b.served, 0);
        assert_eq!(b.utilization, 0.0);
        assert_eq!(b.arrivals, 10);
        assert_eq!(b.dropped_timeout, 8); // deadlines 3..=10; 11 and 12 never fire
        assert_eq!(b.in_system_end, 2);
        assert!(conservation_holds(&r));
    }

    #[test]
    fn partial_failure_keeps_reduced_capacity() {
        // capacity 2, severity 0.5 -> one server keeps working.
        let m = model(
            r#"{
            "horizon_days": 40, "warmup_days": 0,
            "blocks": [ {"id": "b1", "service_time_days": 1.0, "capacity": 2, "deterministic": true,
                         "failure": {"failure_rate_per_day": 1e6, "severity": 0.5, "recovery_time_days": 1000.0}} ],
            "sources": [ {"id": "s1", "intensity": 0.0, "period_days": 2.0, "target": "b1"} ]
        }"#,
        );
        let r = simulate(&m, &RunConfig::default()).unwrap();
        let b = &r.blocks["b1"];
        assert_eq!(b.failures, 1);
        // One emission every 2 days, each served in 1 day by the surviving
        // server: everything is served, nothing queues up.
        assert_eq!(b.arrivals, 20);
        assert_eq!(b.served, 19);
        assert_eq!(b.in_system_end, 1);
        // 19 completed one-day services within the horizon, 2 nominal servers:
        // 19 / (2 * 40).
        assert!((b.utilization - 0.2375).abs() < 1e-9);
        assert!(conservation_holds(&r));
    }

    #[test]
    fn emission_limit_suppresses_beyond_window_cap() {
        // One emission per day, at most 3 per rolling 5-day window:
        // days 1,2,3 emit; 4,5 suppressed; 6,7,8 emit; 9,10 suppressed.
        let m = model(
            r#"{
            "horizon_days": 10, "warmup_days": 0,
            "blocks": [ {"id": "b1", "service_time_days": 0.1, "deterministic": true} ],
            "sources": [ {"id": "s1", "intensity": 0.0, "period_days": 1.0, "target": "b1",
                          "emission_limit": {"max_count": 3, "period_days": 5.0}} ]
        }"#,
        );
        let r = simulate(&m, &RunConfig::default()).unwrap();
        let s = &r.sources["s1"];
        assert_eq!(s.emitted, 6);
        assert_eq!(s.suppressed, 4);
        assert_eq!(r.blocks["b1"].arrivals, 6);
        assert!(conservation_holds(&r));
    }

    #[test]
    fn control_block_rejects_only_defective_requests() {
        let m = model(
            r#"{
            "horizon_days": 200, "warmup_days": 0,
            "blocks": [ {"id": "b1", "service_time_days": 0.2, "capacity": 3, "control": {"strictness": 0.5}} ],
            "sources": [ {"id": "s1", "intensity": 1.0, "target": "b1", "defect_rate": 1.0} ]
        }"#,
        );
        let r = simulate(&m, &RunConfig::default()).unwrap();
        let b = &r.blocks["b1"];
        assert!(b.rejected_by_control > 0);
        assert!(b.served > 0);
        // Every emitted request is defective, so every served one is too.
        assert_eq!(b.served, b.served_defective);
        assert!(conservation_holds(&r));

        // With defect_rate 0 the control never rejects.
        let mut clean = m.clone();
        clean.sources[0].defect_rate = 0.0;
        let rc = simulate(&clean, &RunConfig::default()).unwrap();
        assert_eq!(rc.blocks["b1"].rejected_by_control, 0);
    }

    #[test]
    fn requests_flow_through_a_chain_and_count_once_per_block() {
        let m = model(
            r#"{
            "horizon_days": 300, "warmup_days": 20,
            "blocks": [
                {"id": "a", "service_time_days": 0.3, "capacity": 2},
                {"id": "b", "service_time_days": 0.3, "capacity": 2}
            ],
            "sources": [ {"id": "s1", "intensity": 1.0, "target": "a"} ],
            "routes": [ {"from": "s1", "to": "a"}, {"from": "a", "to": "b"} ]
        }"#,
        );
        let r = simulate(&m, &RunConfig::default()).unwrap();
        assert_eq!(r.blocks["b"].arrivals, r.blocks["a"].served);
        assert_eq!(r.completed, r.blocks["b"].served);
        assert!(conservation_holds(&r));
        // Two service legs with mean 0.3 days each put the average well
        // above a single leg.
        assert!(r.avg_time_in_system_days > 0.45);
    }

    #[test]
    fn traced_run_matches_untraced_and_orders_steps() {
        let m = model(
            r#"{
            "horizon_days": 120, "warmup_days": 10,
            "blocks": [
                {"id": "a", "service_time_days": 0.5, "capacity": 1, "timeout_days": 2.0},
                {"id": "b", "service_time_days": 0.4, "capacity": 1, "timeout_days": 2.0}
            ],
            "sources": [ {"id": "s1", "intensity": 1.5, "target": "a", "defect_rate": 0.3} ],
            "routes": [ {"from": "s1", "to": "a"}, {"from": "a", "to": "b"} ]
        }"#,
        );
        let cfg = RunConfig::default();
        let plain = simulate(&m, &cfg).unwrap();
        let (traced, requests) = simulate_traced(&m, &cfg).unwrap();
        assert_eq!(plain, traced);
        assert!(!requests.is_empty());
        for req in &requests {
            let mut last = req.created_day;
            for step in &req.steps {
                assert!(
                    step.time >= last,
                    "request {} steps out of order: {:?}",
                    req.id,
                    req.steps
                );
                last = step.time;
            }
        }
    }

    #[test]
    fn horizon_override_and_invalid_override_are_handled() {
        let m = model(
            r#"{
            "horizon_days": 100, "warmup_days": 10,
            "blocks": [ {"id": "b1", "service_time_days": 1.0} ],
            "sources": [ {"id": "s1", "intensity": 1.0, "target": "b1"} ]
        }"#,
        );
        let r = simulate(
            &m,
            &RunConfig {
                horizon_days: Some(50),
                ..RunConfig::default()
            },
        )
        .unwrap();
        assert_eq!(r.config.horizon_days, 50);
        assert_eq!(r.queue_length_series["b1"].len(), 40);
        assert!(simulate(
            &m,
            &RunConfig {
                horizon_days: Some(10),
                ..RunConfig::default()
            }
        )
        .is_err());
    }

    #[test]
    fn replications_vary_and_are_ordered() {
        let m = model(
            r#"{
            "horizon_days": 60, "warmup_days": 5,
            "blocks": [ {"id": "b1", "service_time_days": 0.5} ],
            "sources": [ {"id": "s1", "intensity": 1.0, "target": "b1"} ]
        }"#,
        );
        let runs = run_replications(&m, 7, 4).unwrap();
        assert_eq!(runs.len(), 4);
        for (i, r) in runs.iter().enumerate() {
            assert_eq!(r.config.replication_index, i as u32);
            assert_eq!(r.config.seed, 7);
        }
        assert_ne!(runs[0], runs[1]);
        let again = run_replications(&m, 7, 4).unwrap();
        assert_eq!(runs, again);
    }

    #[test]
    fn interarrival_sample_mean_matches_intensity() {
        let mut r = rng::stream(9, 0, "s", "interarrival");
        let n = 200_000;
        let sum: f64 = (0..n).map(|_| next_interarrival(&mut r, 2.0)).sum();
        let mean = sum / f64::from(n);
        assert!((mean - 0.5).abs() < 0.01, "sample mean {mean}");
    }
}
