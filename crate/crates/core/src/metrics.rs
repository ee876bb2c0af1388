//! Run statistics: per-block counters, replication aggregation with
//! confidence intervals, before/after comparison, and series export
//! (CSV + SVG).

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

/// Errors from aggregation, comparison, and export.
#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("cannot aggregate an empty result list")]
    EmptyAggregate,
    #[error("cannot aggregate mixed runs: {0}")]
    MixedRuns(String),
    #[error("cannot compare runs with different horizons ({before} vs {after} days)")]
    HorizonMismatch { before: u32, after: u32 },
    #[error("failed writing `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed writing `{path}`: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

/// Which run produced a result: echoed into every report for provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub model_name: String,
    pub seed: u64,
    pub replication_index: u32,
    /// Effective horizon (after any override).
    pub horizon_days: u32,
    pub warmup_days: u32,
}

/// Per-block counters and time-weighted statistics for one run.
///
/// Counters cover the whole run so that the conservation identity
/// `arrivals = served + dropped_timeout + dropped_capacity +
/// rejected_by_control + in_system_end` holds exactly; the time-weighted
/// `utilization` and `avg_queue_length` exclude the warmup window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockStats {
    pub name: String,
    pub arrivals: u64,
    pub served: u64,
    /// Served requests that were defective (escaped or uncontrolled).
    pub served_defective: u64,
    pub dropped_timeout: u64,
    pub dropped_capacity: u64,
    pub rejected_by_control: u64,
    /// Failure events that hit the block.
    pub failures: u64,
    /// Requests still queued or in service at the horizon.
    pub in_system_end: u64,
    /// Busy-server-time / (capacity x post-warmup time), in [0, 1].
    pub utilization: f64,
    /// Time-weighted mean number of waiting requests (post-warmup).
    pub avg_queue_length: f64,
}

/// Per-source emission counters for one run (whole run, no warmup cut).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceStats {
    pub name: String,
    pub emitted: u64,
    pub emitted_defective: u64,
    /// Emission attempts blocked by the source's emission limit.
    pub suppressed: u64,
}

/// Everything measured in one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub config: ConfigEcho,
    pub blocks: BTreeMap<String, BlockStats>,
    pub sources: BTreeMap<String, SourceStats>,
    /// Requests that left the network through a terminal block.
    pub completed: u64,
    pub completed_defective: u64,
    /// Mean creation-to-completion time of completed requests created after
    /// warmup; 0 when nothing completed.
    pub avg_time_in_system_days: f64,
    /// Queue length per block, sampled at the end of each post-warmup day
    /// (`horizon_days - warmup_days` samples per block).
    pub queue_length_series: BTreeMap<String, Vec<f64>>,
}

/// Mean, spread, and 95% confidence interval of one metric over replications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (n-1); 0 for a singleton.
    pub stddev: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

/// Replication statistics: one [`Summary`] per metric per block/source plus
/// the system-level metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    /// Number of aggregated runs.
    pub n: usize,
    pub model_name: String,
    pub horizon_days: u32,
    pub warmup_days: u32,
    /// Display name per block id.
    pub block_names: BTreeMap<String, String>,
    pub blocks: BTreeMap<String, BTreeMap<String, Summary>>,
    pub sources: BTreeMap<String, BTreeMap<String, Summary>>,
    pub system: BTreeMap<String, Summary>,
}

/// Named accessor used to tabulate one metric across replications.
type MetricFn<T> = fn(&T) -> f64;

const BLOCK_METRICS: &[(&str, MetricFn<BlockStats>)] = &[
    ("arrivals", |b| b.arrivals as f64),
    ("served", |b| b.served as f64),
    ("served_defective", |b| b.served_defective as f64),
    ("dropped_timeout", |b| b.dropped_timeout as f64),
    ("dropped_capacity", |b| b.dropped_capacity as f64),
    ("rejected_by_control", |b| b.rejected_by_control as f64),
    ("failures", |b| b.failures as f64),
    ("in_system_end", |b| b.in_system_end as f64),
    ("utilization", |b| b.utilization),
    ("avg_queue_length", |b| b.avg_queue_length),
];

const SOURCE_METRICS: &[(&str, MetricFn<SourceStats>)] = &[
    ("emitted", |s| s.emitted as f64),
    ("emitted_defective", |s| s.emitted_defective as f64),
    ("suppressed", |s| s.suppressed as f64),
];

fn summarize(values: &[f64]) -> Summary {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Summary {
            mean,
            stddev: 0.0,
            ci95_low: mean,
            ci95_high: mean,
        };
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let stddev = var.sqrt();
    // Normal quantile for large batches, Student's t below 30 runs.
    let quantile = if n >= 30 {
        Normal::standard().inverse_cdf(0.975)
    } else {
        StudentsT::new(0.0, 1.0, (n - 1) as f64)
            .expect("valid t distribution for n >= 2")
            .inverse_cdf(0.975)
    };
    let half_width = quantile * stddev / (n as f64).sqrt();
    Summary {
        mean,
        stddev,
        ci95_low: mean - half_width,
        ci95_high: mean + half_width,
    }
}

/// Aggregates replications of one model into means, standard deviations, and
/// 95% confidence intervals. All runs must come from the same model and
/// horizon.
pub fn aggregate(results: &[RunResult]) -> Result<AggregateResult, MetricsError> {
    let first = results.first().ok_or(MetricsError::EmptyAggregate)?;
    for r in &results[1..] {
        if r.config.model_name != first.config.model_name {
            return Err(MetricsError::MixedRuns(format!(
                "model `{}` vs `{}`",
                first.config.model_name, r.config.model_name
            )));
        }
        if r.config.horizon_days != first.config.horizon_days
            || r.config.warmup_days != first.config.warmup_days
        {
            return Err(MetricsError::MixedRuns("horizons differ".to_owned()));
        }
        if r.blocks.len() != first.blocks.len()
            || !r.blocks.keys().eq(first.blocks.keys())
            || !r.sources.keys().eq(first.sources.keys())
        {
            return Err(MetricsError::MixedRuns(
                "block/source sets differ".to_owned(),
            ));
        }
    }

    let mut blocks = BTreeMap::new();
    let mut block_names = BTreeMap::new();
    for (id, stats) in &first.blocks {
        block_names.insert(id.clone(), stats.name.clone());
        let mut metrics = BTreeMap::new();
        for (metric, extract) in BLOCK_METRICS {
            let values: Vec<f64> = results.iter().map(|r| extract(&r.blocks[id])).collect();
            metrics.insert((*metric).to_owned(), summarize(&values));
        }
        blocks.insert(id.clone(), metrics);
    }
    let mut sources = BTreeMap::new();
    for id in first.sources.keys() {
        let mut metrics = BTreeMap::new();
        for (metric, extract) in SOURCE_METRICS {
            let values: Vec<f64> = results.iter().map(|r| extract(&r.sources[id])).collect();
            metrics.insert((*metric).to_owned(), summarize(&values));
        }
        sources.insert(id.clone(), metrics);
    }
    let mut system = BTreeMap::new();
    system.insert(
        "completed".to_owned(),
        summarize(
            &results
                .iter()
                .map(|r| r.completed as f64)
                .collect::<Vec<_>>(),
        ),
    );
    system.insert(
        "completed_defective".to_owned(),
        summarize(
            &results
                .iter()
                .map(|r| r.completed_defective as f64)
                .collect::<Vec<_>>(),
        ),
    );
    system.insert(
        "avg_time_in_system_days".to_owned(),
        summarize(
            &results
                .iter()
                .map(|r| r.avg_time_in_system_days)
                .collect::<Vec<_>>(),
        ),
    );

    Ok(AggregateResult {
        n: results.len(),
        model_name: first.config.model_name.clone(),
        horizon_days: first.config.horizon_days,
        warmup_days: first.config.warmup_days,
        block_names,
        blocks,
        sources,
        system,
    })
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

/// The values comparison works on, reduced from a single run or an aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub model_name: String,
    pub horizon_days: u32,
    pub blocks: BTreeMap<String, BlockNums>,
    pub avg_time_in_system_days: f64,
}

/// The three per-block comparison metrics of a before/after table.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNums {
    pub name: String,
    pub utilization: f64,
    pub avg_queue_length: f64,
    /// Timeout and capacity drops together (both count as lost work).
    pub dropped: f64,
}

impl From<&RunResult> for RunSummary {
    fn from(r: &RunResult) -> Self {
        RunSummary {
            model_name: r.config.model_name.clone(),
            horizon_days: r.config.horizon_days,
            blocks: r
                .blocks
                .iter()
                .map(|(id, b)| {
                    (
                        id.clone(),
                        BlockNums {
                            name: b.name.clone(),
                            utilization: b.utilization,
                            avg_queue_length: b.avg_queue_length,
                            dropped: (b.dropped_timeout + b.dropped_capacity) as f64,
                        },
                    )
                })
                .collect(),
            avg_time_in_system_days: r.avg_time_in_system_days,
        }
    }
}

impl From<&AggregateResult> for RunSummary {
    fn from(a: &AggregateResult) -> Self {
        RunSummary {
            model_name: a.model_name.clone(),
            horizon_days: a.horizon_days,
            blocks: a
                .blocks
                .iter()
                .map(|(id, metrics)| {
                    (
                        id.clone(),
                        BlockNums {
                            name: a.block_names[id].clone(),
                            utilization: metrics["utilization"].mean,
                            avg_queue_length: metrics["avg_queue_length"].mean,
                            dropped: metrics["dropped_timeout"].mean
                                + metrics["dropped_capacity"].mean,
                        },
                    )
                })
                .collect(),
            avg_time_in_system_days: a.system["avg_time_in_system_days"].mean,
        }
    }
}

/// Comparison tuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    /// Relative changes below this many percent count as "unchanged".
    pub threshold_percent: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            threshold_percent: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Increased,
    Decreased,
    Unchanged,
    /// Block only present in the "before" run.
    Removed,
    /// Block only present in the "after" run, or a metric that rose from 0.
    Added,
}

/// One line of the before/after table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    /// Block id, absent for the system-level row.
    pub block_id: Option<String>,
    pub block_name: Option<String>,
    pub metric: String,
    pub before: Option<f64>,
    pub after: Option<f64>,
    /// Raw percent change with the "before" value as base; absent when the
    /// base is 0 or the block is missing on one side.
    pub delta_percent: Option<f64>,
    pub verdict: Verdict,
}

/// Block-matched percent deltas between two runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub before_name: String,
    pub after_name: String,
    pub threshold_percent: f64,
    pub rows: Vec<ComparisonRow>,
}

fn judge(before: f64, after: f64, threshold: f64) -> (Option<f64>, Verdict) {
    if before == 0.0 {
        if after == 0.0 {
            return (Some(0.0), Verdict::Unchanged);
        }
        // No base to take a percent of.
        return (None, Verdict::Added);
    }
    let delta = (after - before) / before * 100.0;
    let verdict = if delta.abs() < threshold {
        Verdict::Unchanged
    } else if delta > 0.0 {
        Verdict::Increased
    } else {
        Verdict::Decreased
    };
    (Some(delta), verdict)
}

/// Compares two runs (or aggregates) block by block. The percent base is
/// always the first argument; blocks present on one side only are marked
/// removed/added.
pub fn compare<B, A>(
    before: B,
    after: A,
    options: &CompareOptions,
) -> Result<ComparisonReport, MetricsError>
where
    B: Into<RunSummary>,
    A: Into<RunSummary>,
{
    let before: RunSummary = before.into();
    let after: RunSummary = after.into();
    if before.horizon_days != after.horizon_days {
        return Err(MetricsError::HorizonMismatch {
            before: before.horizon_days,
            after: after.horizon_days,
        });
    }
    let threshold = options.threshold_percent;
    let metric_of = |nums: &BlockNums, metric: &str| match metric {
        "utilization" => nums.utilization,
        "avg_queue_length" => nums.avg_queue_length,
        _ => nums.dropped,
    };
    let ids: BTreeSet<&String> = before.blocks.keys().chain(after.blocks.keys()).collect();
    let mut rows = Vec::new();
    for id in ids {
        let b = before.blocks.get(id);
        let a = after.blocks.get(id);
        let name = b.or(a).map(|n| n.name.clone());
        for metric in ["utilization", "avg_queue_length", "dropped"] {
            let row = match (b, a) {
                (Some(b), Some(a)) => {
                    let (bv, av) = (metric_of(b, metric), metric_of(a, metric));
                    let (delta, verdict) = judge(bv, av, threshold);
                    ComparisonRow {
                        block_id: Some(id.clone()),
                        block_name: name.clone(),
                        metric: metric.to_owned(),
                        before: Some(bv),
                        after: Some(av),
                        delta_percent: delta,
                        verdict,
                    }
                }
                (Some(b), None) => ComparisonRow {
                    block_id: Some(id.clone()),
                    block_name: name.clone(),
                    metric: metric.to_owned(),
                    before: Some(metric_of(b, metric)),
                    after: None,
                    delta_percent: None,
                    verdict: Verdict::Removed,
                },
                (None, Some(a)) => ComparisonRow {
                    block_id: Some(id.clone()),
                    block_name: name.clone(),
                    metric: metric.to_owned(),
                    before: None,
                    after: Some(metric_of(a, metric)),
                    delta_percent: None,
                    verdict: Verdict::Added,
                },
                (None, None) => unreachable!("id came from one of the maps"),
            };
            rows.push(row);
        }
    }
    let (delta, verdict) = judge(
        before.avg_time_in_system_days,
        after.avg_time_in_system_days,
        threshold,
    );
    rows.push(ComparisonRow {
        block_id: None,
        block_name: None,
        metric: "avg_time_in_system_days".to_owned(),
        before: Some(before.avg_time_in_system_days),
        after: Some(after.avg_time_in_system_days),
        delta_percent: delta,
        verdict,
    });
    Ok(ComparisonReport {
        before_name: before.model_name,
        after_name: after.model_name,
        threshold_percent: threshold,
        rows,
    })
}

/// The verdict phrase of one row, in the vocabulary of the report tables:
/// "Increased by N%", "Decreased by N%", "Unchanged", "Added load" for a
/// metric with no base, "Added"/"-----" for one-sided blocks.
pub fn verdict_phrase(row: &ComparisonRow) -> String {
    match row.verdict {
        Verdict::Unchanged => "Unchanged".to_owned(),
        Verdict::Removed => "-----".to_owned(),
        Verdict::Added => {
            if row.before.is_none() {
                "Added".to_owned()
            } else {
                "Added load".to_owned()
            }
        }
        Verdict::Increased | Verdict::Decreased => {
            let delta = row.delta_percent.expect("in/decreased rows carry a delta");
            let pct = delta.abs().round();
            if delta > 0.0 {
                format!("Increased by {pct:.0}%")
            } else {
                format!("Decreased by {pct:.0}%")
            }
        }
    }
}

fn fmt_value(v: Option<f64>) -> String {
    match v {
        None => "-----".to_owned(),
        Some(v) if v.fract().abs() < 1e-9 && v.abs() < 1e15 => format!("{v:.0}"),
        Some(v) => format!("{v:.4}"),
    }
}

fn metric_label(metric: &str) -> &'static str {
    match metric {
        "utilization" => "Utilization",
        "avg_queue_length" => "Avg queue length",
        "dropped" => "Dropped requests",
        "avg_time_in_system_days" => "Avg time in system (days)",
        _ => "Metric",
    }
}

/// Renders the comparison as a plain-text table.
pub fn render_comparison(report: &ComparisonReport) -> String {
    let mut cells: Vec<[String; 5]> = vec![[
        "Block".to_owned(),
        "Metric".to_owned(),
        "Before".to_owned(),
        "After".to_owned(),
        "Change".to_owned(),
    ]];
    for row in &report.rows {
        cells.push([
            row.block_name
                .clone()
                .unwrap_or_else(|| "(system)".to_owned()),
            metric_label(&row.metric).to_owned(),
            fmt_value(row.before),
            fmt_value(row.after),
            verdict_phrase(row),
        ]);
    }
    let mut widths = [0usize; 5];
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, row) in cells.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(widths.iter())
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("  "));
            out.push('\n');
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Series export
// ---------------------------------------------------------------------------

fn file_slug(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect()
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Writes one `queue_<block>.csv` per block plus a combined `queues.svg`
/// line chart into `dir`; returns the written paths.
pub fn export_series(result: &RunResult, dir: &Path) -> Result<Vec<PathBuf>, MetricsError> {
    std::fs::create_dir_all(dir).map_err(|source| MetricsError::Io {
        path: dir.to_owned(),
        source,
    })?;
    let mut written = Vec::new();
    let first_day = result.config.warmup_days + 1;
    for (id, series) in &result.queue_length_series {
        let path = dir.join(format!("queue_{}.csv", file_slug(id)));
        let mut writer = csv::Writer::from_path(&path).map_err(|source| MetricsError::Csv {
            path: path.clone(),
            source,
        })?;
        let write = |writer: &mut csv::Writer<std::fs::File>| -> csv::Result<()> {
            writer.write_record(["day", "queue_length"])?;
            for (i, value) in series.iter().enumerate() {
                writer.write_record([(first_day + i as u32).to_string(), format!("{value}")])?;
            }
            writer.flush().map_err(csv::Error::from)
        };
        write(&mut writer).map_err(|source| MetricsError::Csv {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    let chart = render_queue_chart(
        &result.queue_length_series,
        &format!("Queue length by day — {}", result.config.model_name),
        first_day,
    );
    let path = dir.join("queues.svg");
    std::fs::File::create(&path)
        .and_then(|mut f| f.write_all(chart.as_bytes()))
        .map_err(|source| MetricsError::Io {
            path: path.clone(),
            source,
        })?;
    written.push(path);
    Ok(written)
}

const PALETTE: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Renders per-block daily queue series as a static SVG line chart. Output is
/// deterministic for fixed input.
pub fn render_queue_chart(
    series: &BTreeMap<String, Vec<f64>>,
    title: &str,
    first_day: u32,
) -> String {
    const W: f64 = 800.0;
    const H: f64 = 420.0;
    const ML: f64 = 62.0;
    const MR: f64 = 190.0;
    const MT: f64 = 40.0;
    const MB: f64 = 46.0;
    let pw = W - ML - MR;
    let ph = H - MT - MB;

    let len = series.values().map(Vec::len).max().unwrap_or(0);
    let max_y = series
        .values()
        .flat_map(|s| s.iter().copied())
        .fold(1.0f64, f64::max);
    let last_day = first_day as f64 + len.saturating_sub(1) as f64;
    let day_span = (last_day - f64::from(first_day)).max(1.0);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        ML + pw / 2.0,
        xml_escape(title)
    ));
    // Axes and grid.
    for i in 0..=5 {
        let frac = f64::from(i) / 5.0;
        let y = MT + ph - frac * ph;
        let value = max_y * frac;
        svg.push_str(&format!(
            "  <line x1=\"{ML:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>\n",
            ML + pw
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{value:.1}</text>\n",
            ML - 6.0,
            y + 4.0
        ));
        let day = f64::from(first_day) + frac * day_span;
        let x = ML + frac * pw;
        svg.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{day:.0}</text>\n",
            MT + ph + 18.0
        ));
    }
    svg.push_str(&format!(
        "  <line x1=\"{ML:.2}\" y1=\"{MT:.2}\" x2=\"{ML:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        MT + ph
    ));
    svg.push_str(&format!(
        "  <line x1=\"{ML:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        MT + ph,
        ML + pw,
        MT + ph
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">day</text>\n",
        ML + pw / 2.0,
        H - 10.0
    ));
    // One polyline and one legend entry per block.
    for (i, (id, values)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !values.is_empty() {
            let points: Vec<String> = values
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let x = ML + (j as f64 / day_span.max(values.len() as f64 - 1.0)) * pw;
                    let y = MT + ph - (v / max_y) * ph;
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            svg.push_str(&format!(
                "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                points.join(" ")
            ));
        }
        let ly = MT + 14.0 + i as f64 * 18.0;
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            ML + pw + 12.0,
            ML + pw + 34.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{}</text>\n",
            ML + pw + 40.0,
            ly + 4.0,
            xml_escape(id)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
