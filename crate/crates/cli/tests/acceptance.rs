//! The release gate: ten checks covering analytic oracles, scoring tables,
//! report formatting, directional reproduction of the shipped scenarios,
//! determinism, and conservation. Each test prints one `[PASS]` line with the
//! measured numbers (visible with `--nocapture`).
//!
//! ```text
//! cargo test -p fsbp-cli --test acceptance -- --nocapture
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use fsbp::metrics::BlockNums;
use fsbp::{
    compare, load_scenario, parse_model, run_seeds, score_inputs, score_sequence,
    sequence_violations, simulate_traced, verdict_phrase, CompareOptions, ProcessModel, RunConfig,
    RunResult, RunSummary, TraceEvent, Verdict,
};

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean and standard error of the mean.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, (var / xs.len() as f64).sqrt())
}

fn seeds(n: u64) -> Vec<u64> {
    (1..=n).collect()
}

// ---------------------------------------------------------------------------
// 1. Single-block M/M/1 against the closed forms
// ---------------------------------------------------------------------------

#[test]
fn c01_mm1_matches_the_closed_forms_quickly() {
    let model = parse_model(
        r#"{
            "name": "mm1-gate",
            "horizon_days": 10000,
            "warmup_days": 500,
            "blocks": [{ "id": "desk", "service_time_days": 1.0 }],
            "sources": [{ "id": "arrivals", "intensity": 0.5, "target": "desk" }]
        }"#,
    )
    .expect("gate model");

    let started = Instant::now();
    let runs = run_seeds(&model, &seeds(100)).expect("runs");
    let elapsed = started.elapsed();

    let util = mean(
        &runs
            .iter()
            .map(|r| r.blocks["desk"].utilization)
            .collect::<Vec<_>>(),
    );
    let lq = mean(
        &runs
            .iter()
            .map(|r| r.blocks["desk"].avg_queue_length)
            .collect::<Vec<_>>(),
    );
    let tis = mean(
        &runs
            .iter()
            .map(|r| r.avg_time_in_system_days)
            .collect::<Vec<_>>(),
    );

    // rho = 0.5; Lq = rho^2/(1-rho) = 0.5; W = 1/(mu-lambda) = 2 days.
    assert!((util - 0.5).abs() <= 0.03, "utilization {util}");
    assert!((lq / 0.5 - 1.0).abs() <= 0.10, "queue length {lq}");
    assert!((tis / 2.0 - 1.0).abs() <= 0.10, "time in system {tis}");
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");

    println!(
        "[PASS] criterion 1: M/M/1 100 seeds x 10000 days — utilization {util:.4} (target 0.5 ±0.03), \
         queue {lq:.4} (0.5 ±10%), time in system {tis:.4} (2.0 ±10%), runtime {elapsed:.2?}"
    );
}

// ---------------------------------------------------------------------------
// 2. M/M/3 against Erlang C
// ---------------------------------------------------------------------------

#[test]
fn c02_mmc_wait_statistics_match_erlang_c() {
    // Erlang C for c = 3, a = lambda/mu = 2.4, frozen from the iterative
    // recurrence in the engine oracle tests.
    const P_WAIT: f64 = 0.647191011235955;
    const MEAN_WAIT: f64 = P_WAIT / 0.6; // P / (c*mu - lambda)

    let model = parse_model(
        r#"{
            "name": "mm3-gate",
            "horizon_days": 1000,
            "warmup_days": 100,
            "blocks": [{ "id": "desk", "service_time_days": 1.0, "capacity": 3 }],
            "sources": [{ "id": "arrivals", "intensity": 2.4, "target": "desk" }]
        }"#,
    )
    .expect("gate model");

    let mut p_hat = Vec::new();
    let mut wq_hat = Vec::new();
    for rep in 0..100 {
        let config = RunConfig {
            seed: 11,
            horizon_days: None,
            replication_index: rep,
        };
        let (_, requests) = simulate_traced(&model, &config).expect("traced run");
        let mut waited = 0usize;
        let mut total = 0usize;
        let mut wait_sum = 0.0;
        for request in &requests {
            // Skip warmup arrivals and the tail, where a request could still
            // be queued at the horizon and censor the wait.
            if request.created_day < 100.0 || request.created_day > 950.0 {
                continue;
            }
            let enqueued = request
                .steps
                .iter()
                .find(|s| s.event == TraceEvent::Enqueued);
            let started = request
                .steps
                .iter()
                .find(|s| s.event == TraceEvent::ServiceStarted);
            if let (Some(e), Some(s)) = (enqueued, started) {
                total += 1;
                wait_sum += s.time - e.time;
                if s.time > e.time {
                    waited += 1;
                }
            }
        }
        p_hat.push(waited as f64 / total as f64);
        wq_hat.push(wait_sum / total as f64);
    }

    let (p, p_se) = mean_se(&p_hat);
    let (wq, wq_se) = mean_se(&wq_hat);
    assert!(
        (p - P_WAIT).abs() <= 3.0 * p_se,
        "wait probability {p} vs {P_WAIT} (se {p_se})"
    );
    assert!(
        (wq - MEAN_WAIT).abs() <= 3.0 * wq_se,
        "mean wait {wq} vs {MEAN_WAIT} (se {wq_se})"
    );

    println!(
        "[PASS] criterion 2: M/M/3 over 100 replications — wait probability {p:.4} \
         (Erlang C {P_WAIT:.4}, 3se {:.4}), mean wait {wq:.4} days ({MEAN_WAIT:.4}, 3se {:.4})",
        3.0 * p_se,
        3.0 * wq_se
    );
}

// ---------------------------------------------------------------------------
// 3. Input-count scoring plateaus
// ---------------------------------------------------------------------------

#[test]
fn c03_input_scoring_reproduces_the_four_plateaus() {
    let expected = [
        (1, 0.5, "Not appropriate"),
        (2, 0.5, "Not appropriate"),
        (3, 1.0, "Optimal"),
        (4, 1.0, "Optimal"),
        (5, 0.7, "Redundant"),
        (6, 0.7, "Redundant"),
        (7, 0.7, "Redundant"),
        (8, 0.7, "Redundant"),
        (9, 0.2, "Unacceptable"),
        (10, 0.2, "Unacceptable"),
        (11, 0.2, "Unacceptable"),
        (12, 0.2, "Unacceptable"),
    ];
    for (n, value, label) in expected {
        let score = score_inputs(n).expect("score");
        assert_eq!(score.value, value, "n = {n}");
        assert_eq!(score.label, label, "n = {n}");
    }
    println!(
        "[PASS] criterion 3: input counts 1..12 score exactly (0.5, 0.5, 1.0, 1.0, \
         0.7, 0.7, 0.7, 0.7, 0.2, 0.2, 0.2, 0.2)"
    );
}

// ---------------------------------------------------------------------------
// 4. Comparison verdict strings
// ---------------------------------------------------------------------------

#[test]
fn c04_comparison_renders_the_published_phrases() {
    let nums = |name: &str, dropped: f64| BlockNums {
        name: name.to_owned(),
        utilization: 0.5,
        avg_queue_length: 2.0,
        dropped,
    };
    let summary = |blocks: Vec<(&str, BlockNums)>| RunSummary {
        model_name: "gate".to_owned(),
        horizon_days: 250,
        blocks: blocks
            .into_iter()
            .map(|(id, b)| (id.to_owned(), b))
            .collect::<BTreeMap<_, _>>(),
        avg_time_in_system_days: 4.0,
    };

    let before = summary(vec![
        ("intake", nums("Intake", 117.0)),
        ("review", nums("Review", 3.0)),
    ]);
    let after = summary(vec![("intake", nums("Intake", 80.0))]);
    let report = compare(before, after, &CompareOptions::default()).expect("report");

    let row = |id: &str, metric: &str| {
        report
            .rows
            .iter()
            .find(|r| r.block_id.as_deref() == Some(id) && r.metric == metric)
            .unwrap_or_else(|| panic!("row {id}/{metric}"))
    };

    let dropped = row("intake", "dropped");
    assert_eq!(verdict_phrase(dropped), "Decreased by 32%");

    let unchanged = row("intake", "utilization");
    assert_eq!(unchanged.verdict, Verdict::Unchanged);
    assert_eq!(verdict_phrase(unchanged), "Unchanged");

    for metric in ["utilization", "avg_queue_length", "dropped"] {
        let removed = row("review", metric);
        assert_eq!(removed.verdict, Verdict::Removed);
        assert_eq!(verdict_phrase(removed), "-----");
    }

    println!(
        "[PASS] criterion 4: drops 117 -> 80 renders \"Decreased by 32%\", identical metrics \
         render \"Unchanged\", removed blocks render \"-----\""
    );
}

// ---------------------------------------------------------------------------
// 5. Product-concept re-engineering direction
// ---------------------------------------------------------------------------

#[test]
fn c05_product_concept_reengineering_moves_in_the_paper_direction() {
    let scenario = load_scenario("product-concept").expect("bundle");
    let will = scenario.as_will_be.as_ref().expect("re-engineered variant");
    let s = seeds(50);
    let before = run_seeds(&scenario.as_is, &s).expect("as-is runs");
    let after = run_seeds(will, &s).expect("as-will-be runs");

    // (a) time in system strictly decreases in at least 90% of seed pairs.
    let tis_down = before
        .iter()
        .zip(&after)
        .filter(|(b, a)| a.avg_time_in_system_days < b.avg_time_in_system_days)
        .count();
    assert!(
        tis_down >= 45,
        "time in system decreased in only {tis_down}/50 pairs"
    );

    // (b) mean queue length across the surviving blocks increases.
    let surviving: Vec<&str> = will.blocks.iter().map(|b| b.id.as_str()).collect();
    let mean_queue = |runs: &[RunResult]| {
        mean(
            &runs
                .iter()
                .map(|r| {
                    surviving
                        .iter()
                        .map(|id| r.blocks[*id].avg_queue_length)
                        .sum::<f64>()
                        / surviving.len() as f64
                })
                .collect::<Vec<_>>(),
        )
    };
    let (queue_before, queue_after) = (mean_queue(&before), mean_queue(&after));
    assert!(
        queue_after > queue_before,
        "surviving-block queue {queue_before} -> {queue_after}"
    );

    // (c) drops at the valuation desk decrease.
    let id = "prediction-of-valuation";
    assert_eq!(
        scenario.as_is.block(id).expect("block").name,
        "Prediction of valuation"
    );
    let drops = |runs: &[RunResult]| {
        mean(
            &runs
                .iter()
                .map(|r| (r.blocks[id].dropped_timeout + r.blocks[id].dropped_capacity) as f64)
                .collect::<Vec<_>>(),
        )
    };
    let (drops_before, drops_after) = (drops(&before), drops(&after));
    assert!(
        drops_after < drops_before,
        "valuation drops {drops_before} -> {drops_after}"
    );

    println!(
        "[PASS] criterion 5: product-concept re-engineering over 50 paired seeds — time in \
         system down in {tis_down}/50 pairs, surviving-block queue {queue_before:.3} -> \
         {queue_after:.3}, valuation drops {drops_before:.1} -> {drops_after:.1}"
    );
}

// ---------------------------------------------------------------------------
// 6. Production-support strictness grid
// ---------------------------------------------------------------------------

#[test]
fn c06_production_support_grid_reproduces_the_control_tradeoff() {
    let scenario = load_scenario("production-support").expect("bundle");
    let controls: Vec<String> = scenario
        .as_is
        .blocks
        .iter()
        .filter(|b| b.control.is_some())
        .map(|b| b.id.clone())
        .collect();
    assert!(!controls.is_empty());

    let s = seeds(30);
    let grid = [0.1, 0.5, 0.9];
    // Per grid point: per-control-block mean utilization, pooled
    // defective-forward fraction, pooled timeout drops at the checks.
    let mut utilization: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut forwarded_defective_fraction = Vec::new();
    let mut timeout_drops = Vec::new();
    for strictness in grid {
        let mut model = scenario.as_is.clone();
        for block in &mut model.blocks {
            if let Some(control) = &mut block.control {
                control.strictness = strictness;
            }
        }
        let runs = run_seeds(&model, &s).expect("grid runs");
        let (mut valid, mut defective, mut drops) = (0u64, 0u64, 0u64);
        for id in &controls {
            let util = mean(
                &runs
                    .iter()
                    .map(|r| r.blocks[id].utilization)
                    .collect::<Vec<_>>(),
            );
            utilization.entry(id).or_default().push(util);
            for run in &runs {
                let b = &run.blocks[id];
                valid += b.served - b.served_defective;
                defective += b.served_defective;
                drops += b.dropped_timeout;
            }
        }
        forwarded_defective_fraction.push(defective as f64 / (defective + valid) as f64);
        timeout_drops.push(drops as f64 / runs.len() as f64);
    }

    for (id, utils) in &utilization {
        assert!(
            utils[0] < utils[1] && utils[1] < utils[2],
            "utilization at `{id}` not strictly increasing: {utils:?}"
        );
    }
    let f = &forwarded_defective_fraction;
    assert!(
        f[0] > f[1] && f[1] > f[2],
        "defective forwarding not strictly decreasing: {f:?}"
    );
    assert!(
        timeout_drops[2] > timeout_drops[0],
        "timeout drops at 0.9 ({}) not above 0.1 ({})",
        timeout_drops[2],
        timeout_drops[0]
    );

    println!(
        "[PASS] criterion 6: production-support grid (0.1, 0.5, 0.9) over 30-seed means — \
         control utilization strictly rises for all {} checks, defective forwarding {:.3} -> \
         {:.3} -> {:.3}, timeout drops {:.1} vs {:.1}",
        controls.len(),
        f[0],
        f[1],
        f[2],
        timeout_drops[0],
        timeout_drops[2]
    );
}

// ---------------------------------------------------------------------------
// 7. Product-order failure injection
// ---------------------------------------------------------------------------

#[test]
fn c07_product_order_failures_degrade_the_process() {
    let scenario = load_scenario("product-order").expect("bundle");
    let mut quiet = scenario.as_is.clone();
    for block in &mut quiet.blocks {
        block.failure = None;
    }
    let mut half = scenario.as_is.clone();
    for block in &mut half.blocks {
        if let Some(f) = &mut block.failure {
            f.severity = 0.5;
        }
    }

    let s = seeds(50);
    let baseline = run_seeds(&quiet, &s).expect("baseline runs");
    let full = run_seeds(&scenario.as_is, &s).expect("failure runs");
    let halved = run_seeds(&half, &s).expect("half-severity runs");

    let drops = |r: &RunResult| r.blocks.values().map(|b| b.dropped_timeout).sum::<u64>();
    let tis_up = baseline
        .iter()
        .zip(&full)
        .filter(|(b, f)| f.avg_time_in_system_days > b.avg_time_in_system_days)
        .count();
    let drops_up = baseline
        .iter()
        .zip(&full)
        .filter(|(b, f)| drops(f) > drops(b))
        .count();
    assert!(
        tis_up >= 48,
        "time in system rose in only {tis_up}/50 pairs"
    );
    assert!(
        drops_up >= 48,
        "timeout drops rose in only {drops_up}/50 pairs"
    );

    // Paired degradation must be ordered by severity.
    let degradation = |runs: &[RunResult]| {
        mean(
            &runs
                .iter()
                .zip(&baseline)
                .map(|(r, b)| r.avg_time_in_system_days - b.avg_time_in_system_days)
                .collect::<Vec<_>>(),
        )
    };
    let (d_half, d_full) = (degradation(&halved), degradation(&full));
    assert!(
        d_half <= d_full,
        "severity 0.5 degradation {d_half} exceeds severity 1.0 degradation {d_full}"
    );

    println!(
        "[PASS] criterion 7: product-order failures over 50 paired seeds — time in system up \
         in {tis_up}/50 pairs, timeout drops up in {drops_up}/50, degradation {d_half:.3} days \
         at severity 0.5 vs {d_full:.3} at 1.0"
    );
}

// ---------------------------------------------------------------------------
// 8. Byte-identical reports under a fixed seed
// ---------------------------------------------------------------------------

#[test]
fn c08_simulate_is_byte_deterministic_across_invocations() {
    let model =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/product-concept/as-is.json");
    let scratch = std::env::temp_dir().join("fsbp-acceptance-determinism");
    let _ = std::fs::remove_dir_all(&scratch);

    let run = |dir: &PathBuf| {
        let status = Command::new(env!("CARGO_BIN_EXE_fsbp"))
            .args([
                "simulate",
                &model.display().to_string(),
                "--seed",
                "7",
                "--replications",
                "2",
                "--out",
                &dir.display().to_string(),
            ])
            .env_remove("FSBP_OUT_DIR")
            .status()
            .expect("binary should run");
        assert!(status.success());
    };
    let (first, second) = (scratch.join("first"), scratch.join("second"));
    run(&first);
    run(&second);

    for name in ["run.json", "aggregate.json"] {
        let a = std::fs::read(first.join(name)).expect("first report");
        let b = std::fs::read(second.join(name)).expect("second report");
        assert_eq!(a, b, "{name} differed between invocations");
    }
    println!(
        "[PASS] criterion 8: two `simulate --seed 7` invocations produced byte-identical \
         run.json and aggregate.json"
    );
}

// ---------------------------------------------------------------------------
// 9. Conservation identity
// ---------------------------------------------------------------------------

#[test]
fn c09_every_scenario_conserves_requests_exactly() {
    let ten_seeds: Vec<u64> = (101..=110).collect();
    let mut checked_runs = 0u32;
    for (id, _) in fsbp::list_scenarios() {
        let scenario = load_scenario(&id).expect("bundle");
        let mut models: Vec<(&str, &ProcessModel)> = vec![("as-is", &scenario.as_is)];
        if let Some(will) = &scenario.as_will_be {
            models.push(("as-will-be", will));
        }
        for (tag, model) in models {
            for run in run_seeds(model, &ten_seeds).expect("runs") {
                for (block, stats) in &run.blocks {
                    let absorbed = stats.served
                        + stats.dropped_timeout
                        + stats.dropped_capacity
                        + stats.rejected_by_control
                        + stats.in_system_end;
                    assert_eq!(
                        stats.arrivals, absorbed,
                        "{id} {tag} seed {} block {block}: {} arrived, {absorbed} accounted",
                        run.config.seed, stats.arrivals
                    );
                }
                checked_runs += 1;
            }
        }
    }
    println!(
        "[PASS] criterion 9: arrivals = served + dropped + rejected + in-system held exactly \
         for every block of {checked_runs} runs (all scenarios x 10 seeds)"
    );
}

// ---------------------------------------------------------------------------
// 10. Sequence scoring on delivery-of-goods
// ---------------------------------------------------------------------------

#[test]
fn c10_delivery_sequence_violations_are_named_and_fixed() {
    let scenario = load_scenario("delivery-of-goods").expect("bundle");

    let score = score_sequence(&scenario.as_is).expect("score");
    assert!(score.value < 1.0);
    assert!(
        score
            .evidence
            .contains("`Forming the request` must precede `Assortment planning`"),
        "ordering violation missing from: {}",
        score.evidence
    );
    assert!(
        score
            .evidence
            .contains("`Quality control of delivery` must run parallel to"),
        "parallelism violation missing from: {}",
        score.evidence
    );

    let will = scenario.as_will_be.as_ref().expect("re-engineered variant");
    let violations = sequence_violations(will).expect("recheck");
    assert_eq!(violations.satisfied, violations.total);
    let fixed = score_sequence(will).expect("score");
    assert_eq!(
        fixed.value, 1.0,
        "re-engineered model must score 1.0: {}",
        fixed.evidence
    );

    println!(
        "[PASS] criterion 10: delivery-of-goods as-is names the ordering and parallelism \
         violations (score {}), re-engineered variant scores 1.0",
        score.value
    );
}
