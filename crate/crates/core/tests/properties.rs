//! Invariants that must hold for *every* model and seed, checked over
//! randomized inputs: request conservation, bit-exact determinism,
//! serialization stability, self-comparison neutrality, and monotone
//! request traces.

use fsbp::model::{
    Block, ControlParams, EmissionLimit, FailureProfile, ProcessModel, Route, Source,
};
use fsbp::{
    compare, parse_model, serialize_model, simulate, simulate_traced, CompareOptions, RunConfig,
    Verdict,
};
use proptest::prelude::*;

type BlockParams = (
    f64,                     // service time
    u32,                     // capacity
    Option<u32>,             // queue limit
    Option<f64>,             // timeout
    Option<f64>,             // control strictness
    Option<(f64, f64, f64)>, // failure rate / severity / recovery
);

fn block_params() -> impl Strategy<Value = BlockParams> {
    (
        0.2f64..1.5,
        1u32..4,
        proptest::option::of(2u32..6),
        proptest::option::of(0.5f64..3.0),
        proptest::option::of(0.1f64..0.9),
        proptest::option::of((0.005f64..0.05, 0.25f64..1.0, 1.0f64..5.0)),
    )
}

type SourceParams = (f64, f64, Option<(u32, Option<f64>)>);

fn source_params() -> impl Strategy<Value = SourceParams> {
    (
        0.2f64..2.5,
        0.0f64..0.5,
        proptest::option::of((5u32..60, proptest::option::of(5.0f64..30.0))),
    )
}

/// A random acyclic network: a chain `b0 -> b1 -> ...` plus skip-ahead edges
/// chosen by `edge_bits`, fed by one to three Poisson sources.
fn arb_model() -> impl Strategy<Value = ProcessModel> {
    (
        proptest::collection::vec(block_params(), 2..=4),
        proptest::collection::vec(source_params(), 1..=3),
        any::<u64>(),
        50u32..=120,
        0u32..=10,
    )
        .prop_map(|(block_specs, source_specs, edge_bits, horizon, warmup)| {
            let n = block_specs.len();
            let blocks: Vec<Block> = block_specs
                .into_iter()
                .enumerate()
                .map(
                    |(i, (svc, cap, limit, timeout, strictness, failure))| Block {
                        id: format!("b{i}"),
                        name: String::new(),
                        service_time_days: svc,
                        capacity: cap,
                        queue_limit: limit,
                        timeout_days: timeout,
                        deterministic: false,
                        control: strictness.map(|s| ControlParams { strictness: s }),
                        failure: failure.map(|(rate, severity, recovery)| FailureProfile {
                            failure_rate_per_day: rate,
                            severity,
                            recovery_time_days: recovery,
                        }),
                        notes: None,
                    },
                )
                .collect();
            let sources: Vec<Source> = source_specs
                .into_iter()
                .enumerate()
                .map(|(k, (intensity, defect_rate, limit))| Source {
                    id: format!("s{k}"),
                    name: String::new(),
                    intensity,
                    emission_limit: limit.map(|(max_count, period_days)| EmissionLimit {
                        max_count,
                        period_days,
                    }),
                    target: format!("b{}", k % n),
                    defect_rate,
                    period_days: None,
                    notes: None,
                })
                .collect();
            let mut routes: Vec<Route> = (0..n - 1)
                .map(|i| Route {
                    from: format!("b{i}"),
                    to: format!("b{}", i + 1),
                })
                .collect();
            let mut bit = 0;
            for i in 0..n {
                for j in i + 2..n {
                    if edge_bits >> bit & 1 == 1 {
                        routes.push(Route {
                            from: format!("b{i}"),
                            to: format!("b{j}"),
                        });
                    }
                    bit += 1;
                }
            }
            ProcessModel {
                name: "generated".to_owned(),
                horizon_days: horizon,
                warmup_days: warmup,
                blocks,
                sources,
                routes,
                precedence: None,
            }
        })
}

fn reparse(model: &ProcessModel) -> ProcessModel {
    parse_model(&serialize_model(model)).expect("generated model validates")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Serialize -> parse is the identity on normalized models, and the
    /// serialized text itself is stable across a second pass.
    #[test]
    fn serialization_round_trips(raw in arb_model()) {
        let first = reparse(&raw);
        let text = serialize_model(&first);
        let second = parse_model(&text).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(text, serialize_model(&second));
    }

    /// Every request that enters a block leaves through exactly one counter,
    /// and every emitted request is accounted for somewhere in the network.
    #[test]
    fn requests_are_conserved(raw in arb_model(), seed in any::<u64>()) {
        let model = reparse(&raw);
        let cfg = RunConfig { seed, ..RunConfig::default() };
        let result = simulate(&model, &cfg).unwrap();
        for (id, b) in &result.blocks {
            let leavers = b.served
                + b.dropped_timeout
                + b.dropped_capacity
                + b.rejected_by_control
                + b.in_system_end;
            prop_assert_eq!(
                b.arrivals, leavers,
                "block {}: {} arrivals vs {} accounted", id, b.arrivals, leavers
            );
        }
        let emitted: u64 = result.sources.values().map(|s| s.emitted).sum();
        let absorbed: u64 = result
            .blocks
            .values()
            .map(|b| {
                b.dropped_timeout + b.dropped_capacity + b.rejected_by_control + b.in_system_end
            })
            .sum();
        prop_assert_eq!(emitted, absorbed + result.completed);
    }

    /// The same (model, seed, replication) always produces the same result,
    /// down to the serialized bytes.
    #[test]
    fn runs_are_deterministic(raw in arb_model(), seed in any::<u64>()) {
        let model = reparse(&raw);
        let cfg = RunConfig { seed, ..RunConfig::default() };
        let a = simulate(&model, &cfg).unwrap();
        let b = simulate(&model, &cfg).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(
            serde_json::to_vec(&a).unwrap(),
            serde_json::to_vec(&b).unwrap()
        );
    }

    /// Comparing a run against itself must report every metric unchanged.
    #[test]
    fn self_comparison_is_all_unchanged(raw in arb_model(), seed in any::<u64>()) {
        let model = reparse(&raw);
        let cfg = RunConfig { seed, ..RunConfig::default() };
        let result = simulate(&model, &cfg).unwrap();
        let report = compare(&result, &result, &CompareOptions::default()).unwrap();
        prop_assert!(!report.rows.is_empty());
        for row in &report.rows {
            prop_assert_eq!(row.verdict, Verdict::Unchanged, "row {:?}", row);
            prop_assert_eq!(row.delta_percent, Some(0.0));
        }
    }

    /// Timestamps along every request trace are non-decreasing, and the
    /// traced run reproduces the plain run exactly.
    #[test]
    fn traces_are_time_ordered(raw in arb_model(), seed in any::<u64>()) {
        let model = reparse(&raw);
        let cfg = RunConfig { seed, ..RunConfig::default() };
        let (traced_result, traces) = simulate_traced(&model, &cfg).unwrap();
        prop_assert_eq!(&traced_result, &simulate(&model, &cfg).unwrap());
        for request in &traces {
            prop_assert!(request.created_day >= 0.0);
            let mut last = request.created_day;
            for step in &request.steps {
                prop_assert!(
                    step.time >= last,
                    "request {} went back in time at {:?}", request.id, step
                );
                last = step.time;
            }
        }
    }
}
